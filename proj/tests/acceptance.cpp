// Copyright 2026 The metroscope Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance suite: one PASS/FAIL line per criterion. Every tolerance and seed
// is fixed here. Pass criterion numbers as arguments to run a subset.

#include "metroscope/circuits.hpp"
#include "metroscope/fisher.hpp"
#include "metroscope/haar.hpp"
#include "metroscope/interferometer.hpp"
#include "metroscope/linalg.hpp"
#include "metroscope/loss.hpp"
#include "support.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace metroscope;

namespace {

constexpr double kStdErrors = 3.0;

struct Outcome {
    bool passed = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what)
    {
        if (!ok) {
            passed = false;
            detail << " [FAILED: " << what << "]";
        }
    }
};

std::string num(double x)
{
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

LocalHamiltonian half_sigma_z()
{
    return LocalHamiltonian(0.5 * pauli(Axis::z));
}

// 1. Average pure symmetric QFI.
void average_pure_qfi(Outcome& o)
{
    constexpr double kRelTol = 0.02;
    for (int n : {10, 20, 40}) {
        const CollectiveHamiltonian h = collective_sym(half_sigma_z(), n);
        const McResult r = mc_estimate([&](const AnyState& s) { return qfi(s, h); }, EnsembleSpec::sym_pure(n, 2),
                                       2000, 101 + static_cast<std::uint64_t>(n));
        const double target = n * (n + 1.0) / 3.0;
        const double rel = std::abs(r.mean - target) / target;
        o.detail << " N=" << n << ": " << num(r.mean) << " vs " << num(target) << " (" << num(100 * rel) << "%)";
        o.require(std::abs(r.mean - target) <= kStdErrors * r.std_error, "N=" + std::to_string(n) + " 3 se");
        o.require(rel <= kRelTol, "N=" + std::to_string(n) + " 2%");
    }
}

// 2. Monte Carlo isospectral averages against the exact compact formula.
void exact_average(Outcome& o)
{
    Rng setup(202);
    for (Index dim = 2; dim <= 6; ++dim) {
        std::vector<double> weights(static_cast<std::size_t>(dim));
        std::exponential_distribution<double> expo;
        double total = 0.0;
        for (double& w : weights) {
            w = expo(setup);
            total += w;
        }
        for (double& w : weights) {
            w /= total;
        }
        const Spectrum p(weights);
        const CMatrix h = test::random_hermitian(dim, setup);
        const CMatrix diag = CMatrix(p.values().cast<Complex>().asDiagonal());
        const McResult r = mc_estimate(
            [&](Index, Rng& rng) {
                const CMatrix u = haar_unitary(dim, rng);
                return qfi_density(u * diag * u.adjoint(), h);
            },
            100000, 300 + static_cast<std::uint64_t>(dim));
        const double exact = compact_average_qfi(p, h);
        const double z = (r.mean - exact) / r.std_error;
        o.detail << " D=" << dim << ": z=" << num(z);
        o.require(std::abs(z) <= kStdErrors, "D=" + std::to_string(dim));
    }
}

// 3. Full-space Haar states cannot beat the shot-noise scaling.
void futility(Outcome& o)
{
    const int n = 10;
    const LocalHamiltonian h = half_sigma_z();
    const CollectiveHamiltonian big = collective_full(h, n);
    const McResult r =
        mc_estimate([&](const AnyState& s) { return qfi(s, big); }, EnsembleSpec::full_pure(n, 2), 2000, 303);
    const double dn = std::pow(2.0, n);
    const double exact = 4.0 * n * h.trace_square() * dn / (2.0 * (dn + 1.0));
    const double bound = lu_upper_bound(n, 2, h.operator_norm());
    o.detail << " mean " << num(r.mean) << " +- " << num(r.std_error) << " vs " << num(exact) << ", bound "
             << num(bound);
    o.require(std::abs(r.mean - exact) <= kStdErrors * r.std_error, "mean vs exact");
    o.require(r.mean < bound, "mean below bound");

    const int lu_n = 8;
    const double lu_bound = lu_upper_bound(lu_n, 2, h.operator_norm());
    Rng rng(304);
    double best = 0.0;
    for (int trial = 0; trial < 3; ++trial) {
        const FullState psi = FullState::pure(lu_n, 2, haar_state(full_dim(lu_n, 2), rng));
        const LuResult lu = lu_optimize_qfi(psi, h, 4, Rng(305 + static_cast<std::uint64_t>(trial)));
        for (double v : lu.history) {
            best = std::max(best, v);
        }
    }
    o.detail << "; LU max at N=8 " << num(best) << " <= " << num(lu_bound);
    o.require(best <= lu_bound, "LU optimum below bound");
}

// 4. Depolarised QFI identity and the depolarised spectrum functional.
void depolarized_identity(Outcome& o)
{
    constexpr double kQfiRelTol = 1e-9;
    constexpr double kLambdaTol = 1e-12;
    Rng rng(404);
    std::uniform_real_distribution<double> unit;
    double worst_qfi = 0.0;
    double worst_lambda = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const Index dim = 2 + trial % 30;
        const double p = unit(rng);
        const CVector psi = test::random_vector(dim, rng);
        const CMatrix h = test::random_hermitian(dim, rng);
        const CMatrix rho =
            (1.0 - p) * psi * psi.adjoint() + p * CMatrix::Identity(dim, dim) / static_cast<double>(dim);
        const double factor = (1.0 - p) * (1.0 - p) / (1.0 - p + 2.0 * p / dim);
        const double pure = qfi_pure(psi, h);
        worst_qfi = std::max(worst_qfi, std::abs(qfi_density(rho, h) - factor * pure) / pure);
        const double lambda = lambda_of_spectrum(Spectrum::depolarized(dim, p), dim).lambda;
        worst_lambda = std::max(worst_lambda, std::abs(lambda - factor));
    }
    o.detail << " max rel qfi dev " << num(worst_qfi) << ", max lambda dev " << num(worst_lambda);
    o.require(worst_qfi <= kQfiRelTol, "qfi identity");
    o.require(worst_lambda <= kLambdaTol, "lambda identity");
}

// 5. QFI after particle loss.
void loss_robustness(Outcome& o)
{
    const int n = 30;
    const DickeBasis basis(n, 2);
    for (int k : {1, 2, 3}) {
        const CollectiveHamiltonian h = angular_momentum(Axis::z, n - k);
        const McResult r = mc_estimate(
            [&](Index, Rng& rng) {
                return qfi(partial_trace_dicke(SymmetricState::pure(basis, haar_state(n + 1, rng)), k), h);
            },
            1000, 500 + static_cast<std::uint64_t>(k));
        const Bounds b = loss_avg_bounds(n, k, 1.0);
        o.detail << " k=" << k << ": " << num(r.mean) << " in [" << num(b.lower) << ", " << num(b.upper) << "]";
        o.require(r.mean >= b.lower - kStdErrors * r.std_error && r.mean <= b.upper + kStdErrors * r.std_error,
                  "k=" + std::to_string(k));
    }
    const SymmetricState ghz = SymmetricState::pure(basis, test::ghz_amplitudes(n));
    const double after = qfi(partial_trace_dicke(ghz, 1), angular_momentum(Axis::z, n - 1));
    o.detail << "; GHZ after one loss " << num(after);
    o.require(after <= 1e-10, "GHZ fragility");
}

// 6. Exact equivalences against explicit tensor-product constructions.
void oracle_equivalences(Outcome& o)
{
    constexpr double kTol = 1e-12;
    Rng rng(606);
    double trace_dev = 0.0;
    for (int n = 1; n <= 8; ++n) {
        const DickeBasis basis(n, 2);
        const CMatrix w = test::qubit_dicke_isometry(n);
        for (int trial = 0; trial < 50; ++trial) {
            const SymmetricState s = trial % 2 == 0
                                         ? SymmetricState::pure(basis, test::random_vector(n + 1, rng))
                                         : SymmetricState::density(basis, test::random_density(n + 1, rng));
            const CMatrix full = w * s.to_density() * w.adjoint();
            for (int k = 0; k <= n; ++k) {
                const CMatrix wk = test::qubit_dicke_isometry(n - k);
                const CMatrix sym = partial_trace_dicke(s, k).density_matrix();
                trace_dev = std::max(trace_dev, test::max_abs(wk * sym * wk.adjoint() -
                                                              test::trace_last_qubits(full, n, k)));
            }
        }
    }
    double lift_dev = 0.0;
    for (int n = 1; n <= 6; ++n) {
        const CMatrix w = test::qubit_dicke_isometry(n);
        for (int trial = 0; trial < 20; ++trial) {
            const CMatrix v = test::random_qubit_unitary(rng);
            lift_dev = std::max(lift_dev, test::max_abs(sym_power_lift(v, n) - w.adjoint() * test::kron_power(v, n) * w));
        }
    }
    double bs_dev = 0.0;
    for (int n = 1; n <= 12; ++n) {
        const SymmetricState s = SymmetricState::pure(DickeBasis(n, 2), test::random_vector(n + 1, rng));
        for (int e = 1; e <= 9; ++e) {
            bs_dev = std::max(bs_dev, verify_bs_trace_equivalence(s, 0.1 * e, kTol).max_deviation);
        }
    }
    o.detail << " partial trace " << num(trace_dev) << ", lift " << num(lift_dev) << ", beam splitter "
             << num(bs_dev);
    o.require(trace_dev <= kTol, "partial trace");
    o.require(lift_dev <= kTol, "sym_power_lift");
    o.require(bs_dev <= kTol, "bs_loss");
}

// 7. Mach-Zehnder Fisher information of Haar states.
void mz_fisher(Outcome& o)
{
    constexpr double kSoftRelTol = 0.10;
    const std::vector<double> phis{0.0, kPi / 3.0, kPi / 2.0};
    std::ostringstream soft;
    for (int n : {40, 100}) {
        const DickeBasis basis(n, 2);
        const auto mz = MachZehnder::shared(n);
        const std::vector<McResult> r = mc_estimate_multi(
            [&](Index, Rng& rng) {
                const SymmetricState s = SymmetricState::pure(basis, haar_state(n + 1, rng));
                std::vector<double> out;
                for (double phi : phis) {
                    out.push_back(mz->fisher(s, phi));
                }
                return out;
            },
            3, 150, 700 + static_cast<std::uint64_t>(n));
        const Bounds b = fi_avg_bounds(n);
        const double conjecture = n * (n + 1.0) / 6.0;
        o.detail << " N=" << n << ":";
        for (std::size_t i = 0; i < r.size(); ++i) {
            o.detail << " " << num(r[i].mean);
            o.require(r[i].mean >= b.lower - kStdErrors * r[i].std_error &&
                          r[i].mean <= b.upper + kStdErrors * r[i].std_error,
                      "band N=" + std::to_string(n));
            for (std::size_t j = i + 1; j < r.size(); ++j) {
                o.require(std::abs(r[i].mean - r[j].mean) <=
                              kStdErrors * std::hypot(r[i].std_error, r[j].std_error),
                          "phi independence N=" + std::to_string(n));
            }
            const double rel = std::abs(r[i].mean - conjecture) / conjecture;
            soft << " N=" << n << " phi#" << i << " " << num(100 * rel) << "%"
                 << (rel <= kSoftRelTol ? "" : " (outside 10%)");
        }
        o.detail << " in [" << num(b.lower) << ", " << num(b.upper) << "]";
    }
    o.detail << "; soft N(N+1)/6 check:" << soft.str();
}

// 8. Random-circuit states approach the Haar averages.
void circuit_convergence_check(Outcome& o)
{
    const int n = 100;
    const ConvergenceTable t = circuit_convergence(n, {20, 60}, 150, StartState::balanced, 808);
    auto rel = [](double x, double target) { return std::abs(x - target) / target; };
    const double q_target = 3366.67;
    const double f_target = 1683.33;
    for (const ConvergenceRow& row : t.rows) {
        const double q_tol = row.depth == 60 ? 0.05 : 0.10;
        const double dq = rel(row.qfi_mean, q_target);
        const double dh = rel(row.fi_half_pi_mean, f_target);
        const double dt = rel(row.fi_third_pi_mean, f_target);
        o.detail << " K=" << row.depth << ": QFI " << num(row.qfi_mean) << " (" << num(100 * dq) << "%), FI(pi/2) "
                 << num(row.fi_half_pi_mean) << " (" << num(100 * dh) << "%), FI(pi/3) " << num(row.fi_third_pi_mean)
                 << " (" << num(100 * dt) << "%)";
        const std::string k = "K=" + std::to_string(row.depth);
        o.require(dq <= q_tol, k + " QFI");
        o.require(dh <= 0.10, k + " FI(pi/2)");
        o.require(dt <= 0.10, k + " FI(pi/3)");
    }
}

// 9. Concentration of the QFI on pure symmetric Haar states.
void concentration(Outcome& o)
{
    const ConcentrationTarget target = ConcentrationTarget::qfi(0.5 * pauli(Axis::z));
    const std::vector<double> fractions{0.005, 0.01, 0.02, 0.05, 0.1, 0.2, 0.5};
    double previous = INFINITY;
    bool tails_ok = true;
    for (int n : {20, 40, 80}) {
        std::vector<double> eps;
        for (double f : fractions) {
            eps.push_back(f * n * n);
        }
        const ConcentrationReport r = concentration_report(EnsembleSpec::sym_pure(n, 2), target, 500, eps,
                                                           900 + static_cast<std::uint64_t>(n));
        const double relative = r.samples.sample_std / r.samples.mean;
        o.detail << " N=" << n << ": rel std " << num(relative);
        o.require(relative < previous, "relative std decreases at N=" + std::to_string(n));
        previous = relative;
        for (const ConcentrationRow& row : r.rows) {
            if (row.empirical_tail > row.bound + kStdErrors * row.binomial_se) {
                tails_ok = false;
                o.detail << " (tail " << num(row.empirical_tail) << " > bound " << num(row.bound) << " at eps "
                         << num(row.eps) << ")";
            }
        }
    }
    o.require(tails_ok, "tails below bounds");
}

// 10. Chain of Fisher-information inequalities.
void inequality_chain(Outcome& o)
{
    constexpr double kSlack = 1e-9;
    Rng rng(1010);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
    int violations = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 1 + trial % 24;
        const DickeBasis basis(n, 2);
        const Index rank = 1 + trial % (n + 1);
        const SymmetricState s = SymmetricState::density(basis, test::random_density(n + 1, rng, rank));
        const CollectiveHamiltonian h = collective_sym(LocalHamiltonian(test::random_hermitian(2, rng)), n);
        const AsymmetryBounds a = asymmetry_bounds(s.density_matrix(), h.matrix());
        const double q = qfi(s, h);
        const double norm = linalg::eigvalsh(h.matrix()).cwiseAbs().maxCoeff();
        const CollectiveHamiltonian jz = angular_momentum(Axis::z, n);
        const double fi = mz_fi(s, angle(rng));
        const double qz = qfi(s, jz);
        const bool ok = a.hs_bound <= a.trace_bound + kSlack && a.trace_bound <= q + kSlack &&
                        q <= 4.0 * norm * norm + kSlack && fi <= qz + kSlack;
        violations += ok ? 0 : 1;
    }
    o.detail << " " << violations << " violations in 200 states";
    o.require(violations == 0, "inequality chain");
}

struct Criterion {
    int id;
    const char* name;
    std::function<void(Outcome&)> run;
};

}  // namespace

int main(int argc, char** argv)
{
    const std::vector<Criterion> criteria{
        {1, "average pure symmetric QFI", average_pure_qfi},
        {2, "exact isospectral average", exact_average},
        {3, "futility of full-space states", futility},
        {4, "depolarised identity", depolarized_identity},
        {5, "loss robustness", loss_robustness},
        {6, "oracle equivalences", oracle_equivalences},
        {7, "Mach-Zehnder Fisher information", mz_fisher},
        {8, "random-circuit convergence", circuit_convergence_check},
        {9, "concentration", concentration},
        {10, "Fisher inequality chain", inequality_chain},
    };
    std::set<int> selected;
    for (int i = 1; i < argc; ++i) {
        selected.insert(std::atoi(argv[i]));
    }
    int failures = 0;
    for (const Criterion& c : criteria) {
        if (!selected.empty() && selected.count(c.id) == 0) {
            continue;
        }
        Outcome o;
        const auto start = std::chrono::steady_clock::now();
        try {
            c.run(o);
        } catch (const std::exception& e) {
            o.passed = false;
            o.detail << " [error: " << e.what() << "]";
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("criterion %d %s: %s (%.1f s)%s\n", c.id, c.name, o.passed ? "PASS" : "FAIL", seconds,
                    o.detail.str().c_str());
        std::fflush(stdout);
        failures += o.passed ? 0 : 1;
    }
    return failures == 0 ? 0 : 1;
}
