// Copyright 2026 The metroscope Authors
// SPDX-License-Identifier: Apache-2.0

#include "metroscope/experiments.hpp"

#include "metroscope/circuits.hpp"
#include "metroscope/fisher.hpp"
#include "metroscope/haar.hpp"
#include "metroscope/hamiltonians.hpp"
#include "metroscope/interferometer.hpp"
#include "metroscope/loss.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <iomanip>
#include <ostream>
#include <sstream>

#ifndef METROSCOPE_VERSION_STRING
#define METROSCOPE_VERSION_STRING "unknown"
#endif

namespace metroscope::experiments {

bool Result::hard_checks_pass() const
{
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.soft || c.passed; });
}

const char* version()
{
    return METROSCOPE_VERSION_STRING;
}

// ---------------------------------------------------------------------------
// Catalogue
// ---------------------------------------------------------------------------

const std::vector<Info>& catalogue()
{
    static const std::vector<Info> infos = [] {
        const double pi = kPi;
        std::vector<Info> v;
        v.push_back({"avg-qfi", "Haar-averaged QFI of isospectral states against the closed-form average",
                     "space,N,d,p,samples,skipped,mean,std_error,analytic,z_score,relative_deviation",
                     Json{{"space", "sym"}, {"N", 20}, {"d", 2}, {"pure", false}, {"p", 0.0},
                          {"samples", 2000}, {"seed", 7}}});
        v.push_back({"futility", "full-space Haar states: mean QFI, local-unitary bound and optimiser spot checks",
                     "kind,N,index,value,std_error,reference,bound",
                     Json{{"N", 10}, {"d", 2}, {"samples", 2000}, {"seed", 11}, {"lu_N", 8}, {"lu_states", 3},
                          {"lu_sweeps", 4}}});
        v.push_back({"loss", "QFI of random symmetric states after losing k particles, with GHZ fragility",
                     "kind,N,k,mean,std_error,lower,upper",
                     Json{{"N", 30}, {"k", Json::array({1, 2, 3})}, {"samples", 1000}, {"seed", 13}}});
        v.push_back({"bs-equiv", "beam-splitter loss versus binomially weighted partial traces",
                     "state,eta,max_state_deviation,max_probability_deviation",
                     Json{{"N", 12},
                          {"eta", Json::array({0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9})},
                          {"states", 5},
                          {"seed", 17},
                          {"tolerance", 1e-12}}});
        v.push_back({"mz-fi", "Mach-Zehnder Fisher information of Haar-random symmetric states",
                     "kind,N,phi,value,std_error,lower,upper,reference",
                     Json{{"N", Json::array({40, 100})},
                          {"phi", Json::array({0.0, pi / 3.0, pi / 2.0})},
                          {"samples", 150},
                          {"seed", 19},
                          {"scan_states", 20},
                          {"scan_points", 64},
                          {"scan_threshold", 0.05},
                          {"scan_fraction", 0.95}}});
        v.push_back({"circuit-converge", "QFI and FI of random-circuit states versus depth",
                     "K,samples,skipped,qfi_mean,qfi_std_error,fi_half_pi_mean,fi_half_pi_std_error,"
                     "fi_third_pi_mean,fi_third_pi_std_error,qfi_target,fi_target",
                     Json{{"N", 100},
                          {"K", Json::array({0, 5, 10, 20, 40, 60})},
                          {"samples", 150},
                          {"start", "balanced"},
                          {"seed", 23},
                          {"tolerance", 0.10}}});
        v.push_back({"concentration", "empirical tails of QFI or FI against analytic concentration bounds",
                     "kind,N,eps,empirical_tail,binomial_se,bound,vacuous,mean,relative_std",
                     Json{{"ensemble", "sym_pure"},
                          {"target", "qfi"},
                          {"N", Json::array({20, 40, 80})},
                          {"d", 2},
                          {"p", 0.0},
                          {"phi", pi / 2.0},
                          {"samples", 500},
                          {"seed", 29},
                          {"eps_fraction", Json::array({0.005, 0.01, 0.02, 0.05, 0.1, 0.2, 0.5})}}});
        return v;
    }();
    return infos;
}

const Info& info(const std::string& name)
{
    for (const Info& i : catalogue()) {
        if (i.name == name) {
            return i;
        }
    }
    throw ArgumentError("unknown experiment '" + name + "'");
}

// ---------------------------------------------------------------------------
// Parameters
// ---------------------------------------------------------------------------

namespace {

bool is_integral(const Json& v)
{
    if (v.is_number_integer()) {
        return true;
    }
    if (v.is_number_float()) {
        const double x = v.get<double>();
        return std::isfinite(x) && x == std::floor(x);
    }
    return false;
}

Json coerce(const std::string& key, const Json& expected, const Json& given)
{
    auto fail = [&] { throw ArgumentError("parameter '" + key + "' has the wrong type: " + given.dump()); };
    if (expected.is_boolean()) {
        if (!given.is_boolean()) {
            fail();
        }
        return given;
    }
    if (expected.is_string()) {
        if (!given.is_string()) {
            fail();
        }
        return given;
    }
    if (expected.is_number_integer()) {
        if (!is_integral(given)) {
            fail();
        }
        if (given.is_number_unsigned() || (given.is_number_float() && given.get<double>() >= 0.0)) {
            return Json(given.get<std::uint64_t>());
        }
        return Json(given.get<long long>());
    }
    if (expected.is_number_float()) {
        if (!given.is_number()) {
            fail();
        }
        return Json(given.get<double>());
    }
    if (expected.is_array()) {
        Json list = given.is_array() ? given : Json::array({given});
        const Json element = expected.empty() ? Json(0.0) : expected.front();
        Json out = Json::array();
        for (const Json& x : list) {
            out.push_back(coerce(key, element, x));
        }
        return out;
    }
    fail();
    return {};
}

}  // namespace

Json resolve_parameters(const std::string& name, const Json& config, const Json& overrides)
{
    const Info& i = info(name);
    Json params = i.defaults;
    for (const Json* layer : {&config, &overrides}) {
        if (layer->is_null()) {
            continue;
        }
        if (!layer->is_object()) {
            throw ArgumentError("configuration must be a JSON object");
        }
        for (auto it = layer->begin(); it != layer->end(); ++it) {
            if (!i.defaults.contains(it.key())) {
                throw ArgumentError("unknown parameter '" + it.key() + "' for experiment " + name);
            }
            params[it.key()] = coerce(it.key(), i.defaults[it.key()], it.value());
        }
    }
    return params;
}

Json parse_override(const Json& default_value, const std::string& text)
{
    auto scalar = [](const Json& expected, const std::string& t) -> Json {
        try {
            if (expected.is_boolean()) {
                if (t == "true" || t == "1") {
                    return true;
                }
                if (t == "false" || t == "0") {
                    return false;
                }
                throw ArgumentError("expected a boolean, got '" + t + "'");
            }
            if (expected.is_number_integer()) {
                std::size_t used = 0;
                if (!t.empty() && t.front() == '-') {
                    const long long x = std::stoll(t, &used);
                    if (used != t.size()) {
                        throw ArgumentError("expected an integer, got '" + t + "'");
                    }
                    return x;
                }
                const unsigned long long x = std::stoull(t, &used);
                if (used != t.size()) {
                    throw ArgumentError("expected an integer, got '" + t + "'");
                }
                return x;
            }
            if (expected.is_number_float()) {
                std::size_t used = 0;
                const double x = std::stod(t, &used);
                if (used != t.size()) {
                    throw ArgumentError("expected a number, got '" + t + "'");
                }
                return x;
            }
        } catch (const std::logic_error&) {
            throw ArgumentError("cannot parse '" + t + "'");
        }
        return t;
    };
    if (default_value.is_array()) {
        const Json element = default_value.empty() ? Json(0.0) : default_value.front();
        Json out = Json::array();
        std::stringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (!item.empty()) {
                out.push_back(scalar(element, item));
            }
        }
        return out;
    }
    return scalar(default_value, text);
}

// ---------------------------------------------------------------------------
// Experiments
// ---------------------------------------------------------------------------

namespace {

constexpr double kStdErrors = 3.0;

/// Diagonal generator diag((d-1)/2 - j) scaled to tr h^2 = 1/2; sigma_z / 2 for d = 2.
LocalHamiltonian standard_generator(int modes)
{
    if (modes < 2) {
        throw ArgumentError("d must be at least 2");
    }
    RVector diag(modes);
    for (int j = 0; j < modes; ++j) {
        diag(j) = 0.5 * (modes - 1) - j;
    }
    diag *= std::sqrt(0.5 / diag.squaredNorm());
    return LocalHamiltonian(CMatrix(diag.cast<Complex>().asDiagonal()));
}

std::string fmt(double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

Check within_std_errors(const std::string& name, double mean, double se, double target)
{
    const double z = se > 0.0 ? std::abs(mean - target) / se : (mean == target ? 0.0 : INFINITY);
    return {name, z <= kStdErrors, "mean " + fmt(mean) + ", target " + fmt(target) + ", |z| = " + fmt(z)};
}

Check within_relative(const std::string& name, double value, double target, double rel, bool soft = false)
{
    const double dev = std::abs(value - target) / std::abs(target);
    return {name, dev <= rel, "value " + fmt(value) + ", target " + fmt(target) + ", relative deviation " + fmt(dev),
            soft};
}

int get_int(const Json& p, const char* key)
{
    return p.at(key).get<int>();
}

Index get_index(const Json& p, const char* key)
{
    const long long v = p.at(key).get<long long>();
    if (v < 0) {
        throw ArgumentError(std::string(key) + " must be nonnegative");
    }
    return static_cast<Index>(v);
}

std::uint64_t get_seed(const Json& p)
{
    return p.at("seed").get<std::uint64_t>();
}

Result run_avg_qfi(const Json& p, int workers)
{
    const std::string space = p.at("space").get<std::string>();
    const int n = get_int(p, "N");
    const int d = get_int(p, "d");
    const bool pure = p.at("pure").get<bool>();
    const double dep = p.at("p").get<double>();
    if (pure && dep != 0.0) {
        throw ArgumentError("--pure conflicts with a nonzero depolarisation p");
    }
    const LocalHamiltonian h = standard_generator(d);
    EnsembleSpec spec;
    Space sp;
    if (space == "full") {
        if (dep != 0.0) {
            throw ArgumentError("the full-space ensemble is pure; p must be 0");
        }
        spec = EnsembleSpec::full_pure(n, d);
        sp = Space::full;
    } else if (space == "sym") {
        spec = EnsembleSpec::sym_depolarized(n, d, dep);
        sp = Space::symmetric;
    } else {
        throw ArgumentError("space must be 'sym' or 'full'");
    }
    spec.validate();
    const Index dim = spec.dim();
    const Spectrum spectrum = Spectrum::depolarized(dim, dep);
    const double analytic = analytic_avg_qfi(sp, n, d, spectrum, h.trace_square());
    const CollectiveHamiltonian hn = sp == Space::full ? collective_full(h, n) : collective_sym(h, n);
    const McResult mc =
        mc_estimate([&](const AnyState& s) { return qfi(s, hn); }, spec, get_index(p, "samples"), get_seed(p), workers);

    Result r;
    r.table.columns = {"space", "N", "d", "p", "samples", "skipped", "mean", "std_error", "analytic", "z_score",
                       "relative_deviation"};
    const double z = mc.std_error > 0.0 ? (mc.mean - analytic) / mc.std_error : 0.0;
    r.table.rows.push_back({space, (long long)n, (long long)d, dep, (long long)mc.n_samples, (long long)mc.skipped,
                            mc.mean, mc.std_error, analytic, z, (mc.mean - analytic) / analytic});
    r.checks.push_back(within_std_errors("mean within 3 std errors of the analytic average", mc.mean, mc.std_error,
                                         analytic));
    r.checks.push_back(within_relative("mean within 2% of the analytic average", mc.mean, analytic, 0.02));
    return r;
}

Result run_futility(const Json& p, int workers)
{
    const int n = get_int(p, "N");
    const int d = get_int(p, "d");
    const LocalHamiltonian h = standard_generator(d);
    const EnsembleSpec spec = EnsembleSpec::full_pure(n, d);
    spec.validate();
    const CollectiveHamiltonian hn = collective_full(h, n);
    const double analytic = analytic_avg_qfi(Space::full, n, d, Spectrum::pure(spec.dim()), h.trace_square());
    const double bound = lu_upper_bound(n, d, h.operator_norm());
    const std::uint64_t seed = get_seed(p);
    const McResult mc =
        mc_estimate([&](const AnyState& s) { return qfi(s, hn); }, spec, get_index(p, "samples"), seed, workers);

    Result r;
    r.table.columns = {"kind", "N", "index", "value", "std_error", "reference", "bound"};
    r.table.rows.push_back({std::string("haar_mean"), (long long)n, -1LL, mc.mean, mc.std_error, analytic, bound});
    r.checks.push_back(within_std_errors("full-space mean QFI matches the analytic average", mc.mean,
                                         mc.std_error, analytic));
    r.checks.push_back({"full-space mean QFI below the local-unitary bound", mc.mean < bound,
                        "mean " + fmt(mc.mean) + ", bound " + fmt(bound)});

    const int lu_n = get_int(p, "lu_N");
    const Index lu_states = get_index(p, "lu_states");
    if (lu_states > 0) {
        const double lu_bound = lu_upper_bound(lu_n, d, h.operator_norm());
        const Index lu_dim = full_dim(lu_n, d);
        bool ok = true;
        double worst = 0.0;
        for (Index i = 0; i < lu_states; ++i) {
            Rng rng = derive_stream(derive_seed(seed, 1), static_cast<std::uint64_t>(i));
            const FullState psi = FullState::pure(lu_n, d, haar_state(lu_dim, rng));
            const LuResult lu = lu_optimize_qfi(psi, h, get_int(p, "lu_sweeps"), std::move(rng));
            r.table.rows.push_back({std::string("lu_optimized"), (long long)lu_n, (long long)i, lu.qfi, 0.0,
                                    lu.history.front(), lu_bound});
            ok = ok && lu.qfi <= lu_bound;
            worst = std::max(worst, lu.qfi);
        }
        r.checks.push_back({"local-unitary optimised QFI never exceeds the bound", ok,
                            "largest " + fmt(worst) + ", bound " + fmt(lu_bound)});
    }
    return r;
}

Result run_loss(const Json& p, int workers)
{
    const int n = get_int(p, "N");
    std::vector<int> ks;
    for (const Json& k : p.at("k")) {
        ks.push_back(k.get<int>());
    }
    if (ks.empty()) {
        throw ArgumentError("k list is empty");
    }
    std::vector<CollectiveHamiltonian> jz;
    for (int k : ks) {
        if (k < 0 || k >= n) {
            throw ArgumentError("each k must satisfy 0 <= k < N");
        }
        jz.push_back(angular_momentum(Axis::z, n - k));
    }
    const DickeBasis basis(n, 2);
    auto sample = [&](Index, Rng& rng) {
        const SymmetricState psi = SymmetricState::pure(basis, haar_state(basis.dim(), rng));
        std::vector<double> out;
        for (std::size_t j = 0; j < ks.size(); ++j) {
            out.push_back(qfi(partial_trace_dicke(psi, ks[j]), jz[j]));
        }
        return out;
    };
    const std::vector<McResult> mc = mc_estimate_multi(sample, static_cast<Index>(ks.size()),
                                                       get_index(p, "samples"), get_seed(p), workers);
    Result r;
    r.table.columns = {"kind", "N", "k", "mean", "std_error", "lower", "upper"};
    for (std::size_t j = 0; j < ks.size(); ++j) {
        const Bounds b = loss_avg_bounds(n, ks[j], 1.0);
        r.table.rows.push_back({std::string("haar_mean"), (long long)n, (long long)ks[j], mc[j].mean,
                                mc[j].std_error, b.lower, b.upper});
        const double slack = kStdErrors * mc[j].std_error;
        r.checks.push_back({"k = " + std::to_string(ks[j]) + ": mean QFI inside the loss bounds",
                            mc[j].mean >= b.lower - slack && mc[j].mean <= b.upper + slack,
                            "mean " + fmt(mc[j].mean) + " in [" + fmt(b.lower) + ", " + fmt(b.upper) + "] +- " +
                                fmt(slack)});
    }
    CVector ghz = CVector::Zero(n + 1);
    ghz(0) = ghz(n) = 1.0 / std::sqrt(2.0);
    const double ghz_qfi =
        qfi(partial_trace_dicke(SymmetricState::pure(basis, ghz), 1), angular_momentum(Axis::z, n - 1));
    r.table.rows.push_back({std::string("ghz_after_one_loss"), (long long)n, 1LL, ghz_qfi, 0.0, 0.0, 0.0});
    r.checks.push_back({"GHZ QFI vanishes after one loss", ghz_qfi <= 1e-10, "qfi " + fmt(ghz_qfi)});
    return r;
}

Result run_bs_equiv(const Json& p, int)
{
    const int n = get_int(p, "N");
    const double tol = p.at("tolerance").get<double>();
    const Index states = get_index(p, "states");
    const DickeBasis basis(n, 2);
    Result r;
    r.table.columns = {"state", "eta", "max_state_deviation", "max_probability_deviation"};
    double worst = 0.0;
    for (Index i = 0; i < states; ++i) {
        Rng rng = derive_stream(get_seed(p), static_cast<std::uint64_t>(i));
        const SymmetricState psi = SymmetricState::pure(basis, haar_state(basis.dim(), rng));
        for (const Json& e : p.at("eta")) {
            const double eta = e.get<double>();
            const BsEquivalenceReport rep = verify_bs_trace_equivalence(psi, eta, tol);
            r.table.rows.push_back({(long long)i, eta, rep.max_state_deviation, rep.max_probability_deviation});
            worst = std::max(worst, rep.max_deviation);
        }
    }
    r.checks.push_back({"beam-splitter loss equals binomially weighted partial trace", worst <= tol,
                        "max deviation " + fmt(worst) + ", tolerance " + fmt(tol)});
    return r;
}

Result run_mz_fi(const Json& p, int workers)
{
    std::vector<double> phis;
    for (const Json& x : p.at("phi")) {
        phis.push_back(x.get<double>());
    }
    if (phis.empty()) {
        throw ArgumentError("phi list is empty");
    }
    const std::uint64_t seed = get_seed(p);
    Result r;
    r.table.columns = {"kind", "N", "phi", "value", "std_error", "lower", "upper", "reference"};
    for (const Json& nj : p.at("N")) {
        const int n = nj.get<int>();
        const auto mz = MachZehnder::shared(n);
        const DickeBasis basis(n, 2);
        auto sample = [&](Index, Rng& rng) {
            const SymmetricState psi = SymmetricState::pure(basis, haar_state(basis.dim(), rng));
            std::vector<double> out;
            for (double phi : phis) {
                out.push_back(mz->fisher(psi, phi));
            }
            return out;
        };
        const std::vector<McResult> mc = mc_estimate_multi(sample, static_cast<Index>(phis.size()),
                                                           get_index(p, "samples"), derive_seed(seed, n), workers);
        const Bounds b = fi_avg_bounds(n);
        const double conjecture = n * (n + 1.0) / 6.0;
        const std::string tag = "N = " + std::to_string(n);
        for (std::size_t j = 0; j < phis.size(); ++j) {
            r.table.rows.push_back({std::string("mean"), (long long)n, phis[j], mc[j].mean, mc[j].std_error, b.lower,
                                    b.upper, conjecture});
            const double slack = kStdErrors * mc[j].std_error;
            r.checks.push_back({tag + ", phi = " + fmt(phis[j]) + ": mean FI inside [c_- N^2, c_+ N^2 + N]",
                                mc[j].mean >= b.lower - slack && mc[j].mean <= b.upper + slack,
                                "mean " + fmt(mc[j].mean) + " in [" + fmt(b.lower) + ", " + fmt(b.upper) + "] +- " +
                                    fmt(slack)});
            r.checks.push_back(within_relative(tag + ", phi = " + fmt(phis[j]) + ": mean FI near N(N+1)/6",
                                               mc[j].mean, conjecture, 0.10, true));
        }
        double worst = 0.0;
        for (std::size_t a = 0; a < phis.size(); ++a) {
            for (std::size_t c = a + 1; c < phis.size(); ++c) {
                const double se = std::hypot(mc[a].std_error, mc[c].std_error);
                worst = std::max(worst, se > 0.0 ? std::abs(mc[a].mean - mc[c].mean) / se : 0.0);
            }
        }
        r.checks.push_back({tag + ": mean FI independent of phi", worst <= kStdErrors,
                            "largest pairwise |z| = " + fmt(worst)});

        const Index scan_states = get_index(p, "scan_states");
        if (scan_states > 0) {
            const std::vector<double> grid = uniform_phi_grid(get_int(p, "scan_points"));
            const double threshold = p.at("scan_threshold").get<double>() * n * n;
            const McResult scans = mc_estimate(
                [&](Index, Rng& rng) {
                    const SymmetricState psi = SymmetricState::pure(basis, haar_state(basis.dim(), rng));
                    return mz_fi_scan(psi, grid).min >= threshold ? 1.0 : 0.0;
                },
                scan_states, derive_seed(derive_seed(seed, n), 1), workers);
            const double want = p.at("scan_fraction").get<double>();
            r.table.rows.push_back({std::string("scan_fraction_above_threshold"), (long long)n, std::string(),
                                    scans.mean, scans.std_error, threshold, threshold, want});
            r.checks.push_back({tag + ": minimum FI over phi above threshold for enough states", scans.mean >= want,
                                "fraction " + fmt(scans.mean) + ", required " + fmt(want)});
        }
    }
    return r;
}

Result run_circuit_converge(const Json& p, int workers)
{
    const int n = get_int(p, "N");
    std::vector<int> depths;
    for (const Json& k : p.at("K")) {
        depths.push_back(k.get<int>());
    }
    const StartState start = parse_start_state(p.at("start").get<std::string>());
    const double tol = p.at("tolerance").get<double>();
    const ConvergenceTable t =
        circuit_convergence(n, depths, get_index(p, "samples"), start, get_seed(p), workers, tol);
    Result r;
    r.table.columns = {"K", "samples", "skipped", "qfi_mean", "qfi_std_error", "fi_half_pi_mean",
                       "fi_half_pi_std_error", "fi_third_pi_mean", "fi_third_pi_std_error", "qfi_target",
                       "fi_target"};
    for (const ConvergenceRow& row : t.rows) {
        r.table.rows.push_back({(long long)row.depth, (long long)row.samples, (long long)row.skipped, row.qfi_mean,
                                row.qfi_std_error, row.fi_half_pi_mean, row.fi_half_pi_std_error, row.fi_third_pi_mean,
                                row.fi_third_pi_std_error, t.qfi_target, t.fi_target});
        const std::string tag = "K = " + std::to_string(row.depth);
        if (row.depth == 60) {
            r.checks.push_back(within_relative(tag + ": mean QFI within 5%", row.qfi_mean, t.qfi_target, 0.05));
            r.checks.push_back(
                within_relative(tag + ": mean FI(pi/2) within 10%", row.fi_half_pi_mean, t.fi_target, 0.10));
            r.checks.push_back(
                within_relative(tag + ": mean FI(pi/3) within 10%", row.fi_third_pi_mean, t.fi_target, 0.10));
        }
        if (row.depth == 20) {
            r.checks.push_back(within_relative(tag + ": mean QFI within 10%", row.qfi_mean, t.qfi_target, 0.10));
            r.checks.push_back(
                within_relative(tag + ": mean FI(pi/2) within 10%", row.fi_half_pi_mean, t.fi_target, 0.10));
            r.checks.push_back(
                within_relative(tag + ": mean FI(pi/3) within 10%", row.fi_third_pi_mean, t.fi_target, 0.10));
        }
        if (row.depth == 0 && start == StartState::polarized) {
            r.checks.push_back({tag + ": polarized start has zero QFI", row.qfi_mean == 0.0, "qfi " + fmt(row.qfi_mean)});
        }
    }
    r.checks.push_back({"sufficient depth K_suf", t.sufficient_depth.has_value(),
                        t.sufficient_depth ? "K_suf = " + std::to_string(*t.sufficient_depth)
                                           : "no listed depth within the band",
                        true});
    return r;
}

Result run_concentration(const Json& p, int workers)
{
    const std::string ensemble = p.at("ensemble").get<std::string>();
    const std::string target_name = p.at("target").get<std::string>();
    const int d = get_int(p, "d");
    ConcentrationTarget target;
    if (target_name == "qfi") {
        target = ConcentrationTarget::qfi(standard_generator(d).matrix());
    } else if (target_name == "mz_fi") {
        target = ConcentrationTarget::mz_fi(p.at("phi").get<double>());
    } else {
        throw ArgumentError("target must be 'qfi' or 'mz_fi'");
    }
    Result r;
    r.table.columns = {"kind", "N", "eps", "empirical_tail", "binomial_se", "bound", "vacuous", "mean",
                       "relative_std"};
    std::vector<std::pair<int, double>> spread;
    bool tails_ok = true;
    double worst_excess = -INFINITY;
    for (const Json& nj : p.at("N")) {
        const int n = nj.get<int>();
        EnsembleSpec spec;
        if (ensemble == "sym_pure") {
            spec = EnsembleSpec::sym_pure(n, d);
        } else if (ensemble == "full_pure") {
            spec = EnsembleSpec::full_pure(n, d);
        } else if (ensemble == "depolarized") {
            spec = EnsembleSpec::sym_depolarized(n, d, p.at("p").get<double>());
        } else if (ensemble == "circuit") {
            spec = EnsembleSpec::circuit(n, 20, StartState::balanced);
        } else {
            throw ArgumentError("ensemble must be sym_pure, full_pure, depolarized or circuit");
        }
        std::vector<double> eps;
        for (const Json& f : p.at("eps_fraction")) {
            eps.push_back(f.get<double>() * n * n);
        }
        const ConcentrationReport rep =
            concentration_report(spec, target, get_index(p, "samples"), eps, derive_seed(get_seed(p), n), workers);
        const double rel = rep.samples.sample_std / std::abs(rep.samples.mean);
        spread.emplace_back(n, rel);
        for (const ConcentrationRow& row : rep.rows) {
            r.table.rows.push_back({std::string("tail"), (long long)n, row.eps, row.empirical_tail, row.binomial_se,
                                    row.bound, (long long)(row.vacuous ? 1 : 0), rep.samples.mean, rel});
            const double excess = row.empirical_tail - (row.bound + kStdErrors * row.binomial_se);
            worst_excess = std::max(worst_excess, excess);
            tails_ok = tails_ok && excess <= 0.0;
        }
        r.table.rows.push_back({std::string("spread"), (long long)n, 0.0, 0.0, 0.0, 0.0, 0LL, rep.samples.mean, rel});
    }
    r.checks.push_back({"empirical tails below analytic bounds + 3 binomial std errors", tails_ok,
                        "largest excess " + fmt(worst_excess)});
    if (spread.size() > 1) {
        std::sort(spread.begin(), spread.end());
        bool decreasing = true;
        std::string detail;
        for (std::size_t i = 0; i < spread.size(); ++i) {
            detail += (i ? ", " : "") + std::string("N=") + std::to_string(spread[i].first) + ": " +
                      fmt(spread[i].second);
            if (i > 0 && spread[i].second >= spread[i - 1].second) {
                decreasing = false;
            }
        }
        r.checks.push_back({"relative spread decreases with N", decreasing, detail});
    }
    return r;
}

}  // namespace

Result run(const std::string& name, const Json& params, int workers)
{
    if (name == "avg-qfi") {
        return run_avg_qfi(params, workers);
    }
    if (name == "futility") {
        return run_futility(params, workers);
    }
    if (name == "loss") {
        return run_loss(params, workers);
    }
    if (name == "bs-equiv") {
        return run_bs_equiv(params, workers);
    }
    if (name == "mz-fi") {
        return run_mz_fi(params, workers);
    }
    if (name == "circuit-converge") {
        return run_circuit_converge(params, workers);
    }
    if (name == "concentration") {
        return run_concentration(params, workers);
    }
    throw ArgumentError("unknown experiment '" + name + "'");
}

// ---------------------------------------------------------------------------
// Output
// ---------------------------------------------------------------------------

namespace {

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\r\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    return out + "\"";
}

std::string cell_text(const Cell& c)
{
    if (const auto* d = std::get_if<double>(&c)) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", *d);
        return buf;
    }
    if (const auto* i = std::get_if<long long>(&c)) {
        return std::to_string(*i);
    }
    return csv_field(std::get<std::string>(c));
}

}  // namespace

void write_csv(std::ostream& out, const Table& table)
{
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        out << (i ? "," : "") << csv_field(table.columns[i]);
    }
    out << "\r\n";
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            out << (i ? "," : "") << cell_text(row[i]);
        }
        out << "\r\n";
    }
}

Json sidecar(const std::string& name, const Json& params, const Result& result, double wall_seconds, int workers)
{
    Json checks = Json::array();
    for (const Check& c : result.checks) {
        checks.push_back({{"name", c.name}, {"passed", c.passed}, {"soft", c.soft}, {"detail", c.detail}});
    }
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm utc{};
    gmtime_r(&now, &utc);
    std::ostringstream stamp;
    stamp << std::put_time(&utc, "%Y-%m-%dT%H:%M:%SZ");
    return Json{{"schema", "metroscope-result/1"},
                {"experiment", name},
                {"version", version()},
                {"config", params},
                {"seed", params.contains("seed") ? params["seed"] : Json()},
                {"workers", workers},
                {"columns", result.table.columns},
                {"checks", checks},
                {"all_hard_checks_passed", result.hard_checks_pass()},
                {"wall_clock_seconds", wall_seconds},
                {"finished_at", stamp.str()}};
}

}  // namespace metroscope::experiments
