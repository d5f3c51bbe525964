// Copyright 2026 The metroscope Authors
// SPDX-License-Identifier: Apache-2.0

#include "metroscope/fisher.hpp"

#include "metroscope/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>

namespace metroscope {

namespace {

constexpr double kSpectrumSumTolerance = 1e-10;
constexpr double kPovmCompletenessTolerance = 1e-10;

// tr(A B) without forming the product.
Complex trace_product(const CMatrix& a, const CMatrix& b)
{
    return (a.transpose().array() * b.array()).sum();
}

void require_square_match(const CMatrix& rho, const CMatrix& h)
{
    if (rho.rows() != rho.cols() || h.rows() != h.cols() || rho.rows() != h.rows()) {
        throw ArgumentError("state and Hamiltonian dimensions differ");
    }
}

double min_eigenvalue(const CMatrix& a)
{
    return a.rows() == 0 ? 0.0 : linalg::eigvalsh(a).minCoeff();
}

// sum over ordered pairs with p_i + p_j > 0
double pair_sum(const RVector& p)
{
    double s = 0.0;
    for (Index i = 0; i < p.size(); ++i) {
        for (Index j = i + 1; j < p.size(); ++j) {
            const double plus = p(i) + p(j);
            if (plus > 0.0) {
                const double minus = p(i) - p(j);
                s += minus * minus / plus;
            }
        }
    }
    return 2.0 * s;
}

}  // namespace

// ---------------------------------------------------------------------------
// Spectrum / Povm
// ---------------------------------------------------------------------------

Spectrum::Spectrum(std::vector<double> probabilities)
{
    if (probabilities.empty()) {
        throw ArgumentError("spectrum must be nonempty");
    }
    double sum = 0.0;
    for (double& p : probabilities) {
        if (!std::isfinite(p) || p < -kPsdTolerance) {
            throw ArgumentError("spectrum entries must be finite and nonnegative");
        }
        p = std::max(p, 0.0);
        sum += p;
    }
    if (std::abs(sum - 1.0) > kSpectrumSumTolerance) {
        throw ArgumentError("spectrum must sum to one, got " + std::to_string(sum));
    }
    std::sort(probabilities.begin(), probabilities.end(), std::greater<>());
    values_ = Eigen::Map<const RVector>(probabilities.data(), static_cast<Index>(probabilities.size()));
}

Spectrum Spectrum::pure(Index dim)
{
    if (dim < 1) {
        throw ArgumentError("spectrum dimension must be positive");
    }
    std::vector<double> p(static_cast<std::size_t>(dim), 0.0);
    p[0] = 1.0;
    return Spectrum(std::move(p));
}

Spectrum Spectrum::uniform(Index dim)
{
    if (dim < 1) {
        throw ArgumentError("spectrum dimension must be positive");
    }
    return Spectrum(std::vector<double>(static_cast<std::size_t>(dim), 1.0 / static_cast<double>(dim)));
}

Spectrum Spectrum::depolarized(Index dim, double p)
{
    if (dim < 1) {
        throw ArgumentError("spectrum dimension must be positive");
    }
    if (!(p >= 0.0 && p <= 1.0)) {
        throw ArgumentError("depolarization weight must lie in [0, 1]");
    }
    const double floor = p / static_cast<double>(dim);
    std::vector<double> v(static_cast<std::size_t>(dim), floor);
    v[0] = 1.0 - p + floor;
    return Spectrum(std::move(v));
}

Povm::Povm(std::vector<CMatrix> elements) : elements_(std::move(elements))
{
    if (elements_.empty()) {
        throw ArgumentError("POVM must have at least one element");
    }
    const Index dim = elements_.front().rows();
    CMatrix total = CMatrix::Zero(dim, dim);
    for (std::size_t n = 0; n < elements_.size(); ++n) {
        const CMatrix& e = elements_[n];
        if (e.rows() != dim || e.cols() != dim) {
            throw ArgumentError("POVM elements must share one square shape");
        }
        if (linalg::hermiticity_defect(e) > kPsdTolerance || min_eigenvalue(e) < -kPsdTolerance) {
            throw ArgumentError("POVM element " + std::to_string(n) + " is not Hermitian PSD");
        }
        total += e;
    }
    if (linalg::max_abs(total - CMatrix::Identity(dim, dim)) > kPovmCompletenessTolerance) {
        throw ArgumentError("POVM elements do not sum to the identity");
    }
}

Povm Povm::from_vectors(const CMatrix& columns)
{
    std::vector<CMatrix> elements;
    elements.reserve(static_cast<std::size_t>(columns.cols()));
    for (Index n = 0; n < columns.cols(); ++n) {
        elements.push_back(linalg::projector(columns.col(n)));
    }
    Povm povm(std::move(elements));
    povm.vectors_ = columns;
    return povm;
}

// ---------------------------------------------------------------------------
// QFI
// ---------------------------------------------------------------------------

double qfi_pure(const CVector& psi, const CMatrix& h)
{
    if (h.rows() != h.cols() || h.rows() != psi.size()) {
        throw ArgumentError("state and Hamiltonian dimensions differ");
    }
    const CVector hpsi = h * psi;
    const double second = hpsi.squaredNorm();
    const double first = psi.dot(hpsi).real();
    return std::max(0.0, 4.0 * (second - first * first));
}

double qfi_density(const CMatrix& rho, const CMatrix& h, double threshold)
{
    require_square_match(rho, h);
    const linalg::HermitianEigen e = linalg::eigh(rho);
    const RVector& p = e.values;
    const double tau = threshold * p.maxCoeff();
    const CMatrix ht = e.vectors.adjoint() * h * e.vectors;
    double s = 0.0;
    for (Index i = 0; i < p.size(); ++i) {
        for (Index j = i + 1; j < p.size(); ++j) {
            const double plus = p(i) + p(j);
            if (plus > tau) {
                const double minus = p(i) - p(j);
                s += minus * minus / plus * std::norm(ht(i, j));
            }
        }
    }
    return std::max(0.0, 4.0 * s);
}

double qfi(const SymmetricState& state, const CollectiveHamiltonian& h)
{
    if (h.space() != Space::symmetric || h.particles() != state.particles() || h.modes() != state.modes()) {
        throw ArgumentError("Hamiltonian does not act on the state's symmetric subspace");
    }
    return state.is_pure() ? qfi_pure(state.amplitudes(), h.matrix())
                           : qfi_density(state.density_matrix(), h.matrix());
}

double qfi(const FullState& state, const CollectiveHamiltonian& h)
{
    if (h.space() != Space::full || h.particles() != state.particles() || h.modes() != state.modes()) {
        throw ArgumentError("Hamiltonian does not act on the state's full space");
    }
    return state.is_pure() ? qfi_pure(state.amplitudes(), h.matrix())
                           : qfi_density(state.density_matrix(), h.matrix());
}

double qfi(const AnyState& state, const CollectiveHamiltonian& h)
{
    return std::visit([&](const auto& s) { return qfi(s, h); }, state);
}

// ---------------------------------------------------------------------------
// Classical FI
// ---------------------------------------------------------------------------

double fisher_sum(const RVector& probabilities, const RVector& derivatives)
{
    if (probabilities.size() != derivatives.size()) {
        throw ArgumentError("probability and derivative vectors differ in length");
    }
    double f = 0.0;
    for (Index n = 0; n < probabilities.size(); ++n) {
        const double p = probabilities(n);
        const double dp = derivatives(n);
        if (p < kFiProbabilityFloor) {
            if (dp * dp < kFiNumeratorFloor) {
                continue;
            }
            throw NumericalDomainError("non-removable singularity in Fisher sum at outcome " + std::to_string(n),
                                       n);
        }
        f += dp * dp / p;
    }
    return f;
}

double classical_fi(const Povm& povm, const CVector& psi, const CMatrix& h, double phi)
{
    if (povm.dim() != psi.size() || h.rows() != psi.size()) {
        throw ArgumentError("POVM, state and Hamiltonian dimensions differ");
    }
    const CVector evolved = linalg::expm_hermitian(h, phi) * psi;
    const CVector hevolved = h * evolved;
    RVector p(povm.size());
    RVector dp(povm.size());
    if (povm.vectors()) {
        const CMatrix& v = *povm.vectors();
        const CVector w = v.adjoint() * evolved;
        const CVector u = v.adjoint() * hevolved;
        for (Index n = 0; n < povm.size(); ++n) {
            p(n) = std::norm(w(n));
            // tr(Pi i[H, rho]) = -2 Im <psi|Pi H|psi>
            dp(n) = -2.0 * (std::conj(w(n)) * u(n)).imag();
        }
    } else {
        for (Index n = 0; n < povm.size(); ++n) {
            const CVector pe = povm[n] * evolved;
            p(n) = evolved.dot(pe).real();
            dp(n) = -2.0 * pe.dot(hevolved).imag();
        }
    }
    return fisher_sum(p, dp);
}

double classical_fi(const Povm& povm, const CMatrix& rho, const CMatrix& h, double phi)
{
    require_square_match(rho, h);
    if (povm.dim() != rho.rows()) {
        throw ArgumentError("POVM and state dimensions differ");
    }
    const CMatrix u = linalg::expm_hermitian(h, phi);
    const CMatrix evolved = u * rho * u.adjoint();
    const CMatrix derivative = kI * linalg::commutator(h, evolved);
    RVector p(povm.size());
    RVector dp(povm.size());
    for (Index n = 0; n < povm.size(); ++n) {
        p(n) = trace_product(povm[n], evolved).real();
        dp(n) = trace_product(povm[n], derivative).real();
    }
    return fisher_sum(p, dp);
}

double classical_fi(const Povm& povm, const SymmetricState& state, const CollectiveHamiltonian& h, double phi)
{
    if (h.space() != Space::symmetric || h.dim() != state.dim()) {
        throw ArgumentError("Hamiltonian does not act on the state's symmetric subspace");
    }
    return state.is_pure() ? classical_fi(povm, state.amplitudes(), h.matrix(), phi)
                           : classical_fi(povm, state.density_matrix(), h.matrix(), phi);
}

// ---------------------------------------------------------------------------
// Distances
// ---------------------------------------------------------------------------

FidelityBures fidelity_bures(const CMatrix& rho, const CMatrix& sigma)
{
    if (rho.rows() != rho.cols() || sigma.rows() != sigma.cols() || rho.rows() != sigma.rows()) {
        throw ArgumentError("fidelity needs two square matrices of equal size");
    }
    if (min_eigenvalue(rho) < -kPsdTolerance || min_eigenvalue(sigma) < -kPsdTolerance) {
        throw ArgumentError("fidelity inputs must be positive semidefinite");
    }
    const CMatrix root = linalg::sqrtm_psd(rho);
    CMatrix inner = root * sigma * root;
    inner = 0.5 * (inner + inner.adjoint());
    const RVector ev = linalg::eigvalsh(inner);
    double f = 0.0;
    for (Index i = 0; i < ev.size(); ++i) {
        f += std::sqrt(std::max(ev(i), 0.0));
    }
    f = std::clamp(f, 0.0, 1.0);
    return {f, std::sqrt(2.0 * (1.0 - f))};
}

AsymmetryBounds asymmetry_bounds(const CMatrix& rho, const CMatrix& h)
{
    require_square_match(rho, h);
    CMatrix c = kI * linalg::commutator(h, rho);
    c = 0.5 * (c + c.adjoint());
    const RVector ev = linalg::eigvalsh(c);
    const double trace_norm = ev.cwiseAbs().sum();
    return {trace_norm * trace_norm, ev.squaredNorm()};
}

// ---------------------------------------------------------------------------
// Averages and bounds
// ---------------------------------------------------------------------------

LambdaResult lambda_of_spectrum(const Spectrum& p, Index dim)
{
    if (p.size() != dim) {
        throw ArgumentError("spectrum length differs from the space dimension");
    }
    if (dim < 2) {
        throw ArgumentError("Lambda needs dimension at least 2");
    }
    const double d = static_cast<double>(dim);
    const double lambda = pair_sum(p.values()) / (2.0 * (d - 1.0));
    const double fidelity = std::min(1.0, p.values().cwiseSqrt().sum() / std::sqrt(d));
    const double scale = d / (d - 1.0);
    return {lambda, scale * (1.0 - fidelity), scale * (1.0 - fidelity * fidelity), fidelity};
}

double compact_average_qfi(const Spectrum& p, const CMatrix& h)
{
    if (h.rows() != h.cols() || h.rows() != p.size()) {
        throw ArgumentError("spectrum length differs from the Hamiltonian dimension");
    }
    const Index dim = h.rows();
    if (dim < 2) {
        return 0.0;
    }
    const double d = static_cast<double>(dim);
    const double tr = h.trace().real();
    const double tr2 = trace_product(h, h).real() - tr * tr / d;
    return 2.0 * tr2 / (d * d - 1.0) * pair_sum(p.values());
}

double analytic_avg_qfi(Space space, int particles, int modes, const Spectrum& p, double tr_h2)
{
    if (particles < 1 || modes < 2) {
        throw ArgumentError("analytic average needs N >= 1 and d >= 2");
    }
    const double n = particles;
    const double d = modes;
    if (space == Space::full) {
        const double dim = std::pow(d, n);
        if (static_cast<double>(p.size()) != dim) {
            throw ArgumentError("spectrum length differs from d^N");
        }
        const double lambda = lambda_of_spectrum(p, p.size()).lambda;
        return 4.0 * n * tr_h2 * dim / (d * (dim + 1.0)) * lambda;
    }
    const double dim = static_cast<double>(sym_dim(particles, modes));
    if (static_cast<double>(p.size()) != dim) {
        throw ArgumentError("spectrum length differs from the symmetric-subspace dimension");
    }
    const double lambda = lambda_of_spectrum(p, p.size()).lambda;
    return 4.0 * n * (n + d) * tr_h2 / (d * (d + 1.0)) * dim / (dim + 1.0) * lambda;
}

Bounds loss_avg_bounds(int particles, int lost, double purity)
{
    if (particles < 1 || lost < 0 || lost >= particles) {
        throw ArgumentError("loss bounds need 0 <= k < N");
    }
    const double n = particles;
    const double k = lost;
    if (!(purity >= 1.0 / (n + 1.0) - 1e-12 && purity <= 1.0 + 1e-12)) {
        throw ArgumentError("purity must lie in [1/(N+1), 1]");
    }
    const double lower = (n - k) * (n + 1.0) / ((k + 1.0) * (k + 2.0)) * ((n + 1.0) * purity - 1.0) / n / 3.0;
    const double upper = (n - k) * (n - k + 2.0) / 3.0;
    return {std::max(0.0, lower), upper};
}

Bounds fi_avg_bounds(int particles)
{
    if (particles < 1) {
        throw ArgumentError("N must be positive");
    }
    const double n = particles;
    return {kFiAvgLowerConstant * n * n, kFiAvgUpperConstant * n * n + n};
}

double lu_upper_bound(int particles, int modes, double h_norm)
{
    if (particles < 1 || modes < 1 || h_norm < 0.0) {
        throw ArgumentError("lu_upper_bound needs N >= 1, d >= 1, ||h|| >= 0");
    }
    const double n = particles;
    const double d = modes;
    return 4.0 * n * h_norm * h_norm * (1.0 + (n - 1.0) * d * d / std::pow(d, 0.5 * n));
}

}  // namespace metroscope
