// Copyright 2026 The metroscope Authors
// SPDX-License-Identifier: Apache-2.0

#include "metroscope/dicke.hpp"

#include "metroscope/hamiltonians.hpp"
#include "metroscope/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace metroscope {

namespace {

__extension__ using u128 = unsigned __int128;

u128 exact_binomial(int n, int k)
{
    k = std::min(k, n - k);
    u128 r = 1;
    for (int i = 0; i < k; ++i) {
        r = r * static_cast<u128>(n - i) / static_cast<u128>(i + 1);
    }
    return r;
}

void enumerate_occupations(int particles, int modes, Occupation& prefix, std::vector<Occupation>& out)
{
    if (modes == 1) {
        prefix.push_back(particles);
        out.push_back(prefix);
        prefix.pop_back();
        return;
    }
    for (int k = 0; k <= particles; ++k) {
        prefix.push_back(k);
        enumerate_occupations(particles - k, modes - 1, prefix, out);
        prefix.pop_back();
    }
}

// log of the multinomial N! / prod k_i!
double log_multinomial(const Occupation& k)
{
    int total = 0;
    double acc = 0.0;
    for (int ki : k) {
        total += ki;
        acc -= std::lgamma(ki + 1.0);
    }
    return acc + std::lgamma(total + 1.0);
}

void check_pure(const CVector& v)
{
    if (v.size() == 0) {
        throw ArgumentError("state vector is empty");
    }
    const double norm = v.norm();
    if (!(std::abs(norm - 1.0) <= kNormTolerance)) {
        std::ostringstream os;
        os << "pure state is not normalised: |psi| = " << norm;
        throw ArgumentError(os.str());
    }
}

void check_density(const CMatrix& rho)
{
    if (rho.rows() == 0 || rho.rows() != rho.cols()) {
        throw ArgumentError("density matrix must be square and nonempty");
    }
    const double scale = std::max(1.0, linalg::max_abs(rho));
    if (linalg::hermiticity_defect(rho) > kPsdTolerance * scale) {
        throw ArgumentError("density matrix is not Hermitian");
    }
    const double tr = rho.trace().real();
    if (!(std::abs(tr - 1.0) <= kNormTolerance)) {
        std::ostringstream os;
        os << "density matrix trace is " << tr << ", expected 1";
        throw ArgumentError(os.str());
    }
    const RVector ev = linalg::eigvalsh(0.5 * (rho + rho.adjoint()));
    if (ev.minCoeff() < -kPsdTolerance) {
        std::ostringstream os;
        os << "density matrix is not positive semidefinite: min eigenvalue " << ev.minCoeff();
        throw ArgumentError(os.str());
    }
}

}  // namespace

// ---------------------------------------------------------------------------

double log_binomial(int n, int k)
{
    if (n < 0 || k < 0 || k > n) {
        return -std::numeric_limits<double>::infinity();
    }
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double binomial(int n, int k)
{
    if (n < 0 || k < 0 || k > n) {
        return 0.0;
    }
    if (n <= 30) {
        return static_cast<double>(exact_binomial(n, k));
    }
    return std::exp(log_binomial(n, k));
}

std::uint64_t sym_dim(int particles, int modes)
{
    if (particles < 0) {
        throw ArgumentError("particle number must be nonnegative");
    }
    if (modes < 1) {
        throw ArgumentError("mode count must be at least 1");
    }
    const int n = particles + modes - 1;
    const int k = std::min(particles, modes - 1);
    u128 r = 1;
    constexpr u128 limit = std::numeric_limits<std::uint64_t>::max();
    for (int i = 0; i < k; ++i) {
        r = r * static_cast<u128>(n - i) / static_cast<u128>(i + 1);
        if (r > limit) {
            throw CapacityError("symmetric subspace dimension exceeds 64 bits");
        }
    }
    return static_cast<std::uint64_t>(r);
}

// ---------------------------------------------------------------------------

DickeBasis::DickeBasis(int particles, int modes)
{
    const std::uint64_t dim = sym_dim(particles, modes);
    constexpr std::uint64_t kMaxDim = 1u << 22;
    if (dim > kMaxDim) {
        throw CapacityError("symmetric subspace too large for a dense basis");
    }
    auto impl = std::make_shared<Impl>();
    impl->particles = particles;
    impl->modes = modes;
    impl->occupations.reserve(dim);
    Occupation prefix;
    enumerate_occupations(particles, modes, prefix, impl->occupations);
    for (std::size_t i = 0; i < impl->occupations.size(); ++i) {
        impl->lookup.emplace(impl->occupations[i], static_cast<Index>(i));
    }
    impl_ = std::move(impl);
}

const Occupation& DickeBasis::occupation(Index i) const
{
    if (i < 0 || i >= dim()) {
        throw ArgumentError("Dicke index out of range");
    }
    return impl_->occupations[static_cast<std::size_t>(i)];
}

Index DickeBasis::index_of(const Occupation& k) const
{
    auto it = impl_->lookup.find(k);
    if (it == impl_->lookup.end()) {
        throw ArgumentError("occupation vector not in this basis");
    }
    return it->second;
}

// ---------------------------------------------------------------------------

StatePayload StatePayload::pure(CVector amplitudes)
{
    check_pure(amplitudes);
    return StatePayload(std::move(amplitudes));
}

StatePayload StatePayload::density(CMatrix rho)
{
    check_density(rho);
    return StatePayload(std::move(rho));
}

Index StatePayload::dim() const noexcept
{
    return std::visit([](const auto& x) -> Index { return x.rows(); }, data_);
}

const CVector& StatePayload::amplitudes() const
{
    if (!is_pure()) {
        throw ArgumentError("state has a density payload, not amplitudes");
    }
    return std::get<CVector>(data_);
}

const CMatrix& StatePayload::density_matrix() const
{
    if (is_pure()) {
        throw ArgumentError("state has a pure payload, not a density matrix");
    }
    return std::get<CMatrix>(data_);
}

CMatrix StatePayload::to_density() const
{
    if (is_pure()) {
        return linalg::projector(std::get<CVector>(data_));
    }
    return std::get<CMatrix>(data_);
}

SymmetricState SymmetricState::pure(const DickeBasis& basis, CVector amplitudes)
{
    if (amplitudes.size() != basis.dim()) {
        throw ArgumentError("amplitude vector length does not match the Dicke basis dimension");
    }
    return SymmetricState(basis, StatePayload::pure(std::move(amplitudes)));
}

SymmetricState SymmetricState::density(const DickeBasis& basis, CMatrix rho)
{
    if (rho.rows() != basis.dim()) {
        throw ArgumentError("density matrix size does not match the Dicke basis dimension");
    }
    return SymmetricState(basis, StatePayload::density(std::move(rho)));
}

SymmetricState SymmetricState::dicke(int particles, int n)
{
    if (n < 0 || n > particles) {
        throw ArgumentError("Dicke index out of range");
    }
    DickeBasis basis(particles, 2);
    CVector v = CVector::Zero(basis.dim());
    v(n) = 1.0;
    return pure(basis, std::move(v));
}

Index full_dim(int particles, int modes)
{
    if (particles < 0 || modes < 1) {
        throw ArgumentError("invalid particle or mode count");
    }
    std::uint64_t dim = 1;
    for (int i = 0; i < particles; ++i) {
        dim *= static_cast<std::uint64_t>(modes);
        if (dim > kMaxFullDim) {
            std::ostringstream os;
            os << "full space dimension " << modes << "^" << particles << " exceeds the dense limit of "
               << kMaxFullDim << "; use the symmetric-subspace representation or reduce N";
            throw CapacityError(os.str());
        }
    }
    return static_cast<Index>(dim);
}

FullState FullState::pure(int particles, int modes, CVector amplitudes)
{
    if (amplitudes.size() != full_dim(particles, modes)) {
        throw ArgumentError("amplitude vector length does not match d^N");
    }
    return FullState(particles, modes, StatePayload::pure(std::move(amplitudes)));
}

FullState FullState::density(int particles, int modes, CMatrix rho)
{
    if (rho.rows() != full_dim(particles, modes)) {
        throw ArgumentError("density matrix size does not match d^N");
    }
    return FullState(particles, modes, StatePayload::density(std::move(rho)));
}

// ---------------------------------------------------------------------------

CMatrix dicke_isometry(const DickeBasis& basis)
{
    const int n = basis.particles();
    const int d = basis.modes();
    const Index full = full_dim(n, d);
    CMatrix w = CMatrix::Zero(full, basis.dim());
    Occupation k(static_cast<std::size_t>(d));
    for (Index x = 0; x < full; ++x) {
        std::fill(k.begin(), k.end(), 0);
        Index rest = x;
        for (int j = 0; j < n; ++j) {
            ++k[static_cast<std::size_t>(rest % d)];
            rest /= d;
        }
        const Index col = basis.index_of(k);
        w(x, col) = std::exp(-0.5 * log_multinomial(k));
    }
    return w;
}

FullState dicke_embed(const SymmetricState& state)
{
    const CMatrix w = dicke_isometry(state.basis());
    const int n = state.particles();
    const int d = state.modes();
    if (state.is_pure()) {
        CVector v = w * state.amplitudes();
        v /= v.norm();
        return FullState::pure(n, d, std::move(v));
    }
    CMatrix rho = w * state.density_matrix() * w.adjoint();
    rho /= rho.trace().real();
    return FullState::density(n, d, std::move(rho));
}

SymmetricState dicke_project(const FullState& state)
{
    const DickeBasis basis(state.particles(), state.modes());
    const CMatrix w = dicke_isometry(basis);
    if (state.is_pure()) {
        const CVector& c = state.amplitudes();
        CVector alpha = w.adjoint() * c;
        const double leaked = (c - w * alpha).squaredNorm();
        if (leaked > kSymmetricLeakTolerance) {
            std::ostringstream os;
            os << "state has weight " << leaked << " outside the symmetric subspace";
            throw DomainError(os.str(), leaked);
        }
        alpha /= alpha.norm();
        return SymmetricState::pure(basis, std::move(alpha));
    }
    const CMatrix& rho = state.density_matrix();
    CMatrix sym = w.adjoint() * rho * w;
    const double leaked = 1.0 - sym.trace().real();
    if (leaked > kSymmetricLeakTolerance) {
        std::ostringstream os;
        os << "state has weight " << leaked << " outside the symmetric subspace";
        throw DomainError(os.str(), leaked);
    }
    sym /= sym.trace().real();
    return SymmetricState::density(basis, std::move(sym));
}

// ---------------------------------------------------------------------------

namespace detail {

CMatrix sym_power_lift_binomial(const CMatrix& v, int particles)
{
    const int big_n = particles;
    const Index dim = big_n + 1;
    // V maps a^dag -> v00 a^dag + v10 b^dag and b^dag -> v01 a^dag + v11 b^dag.
    const Complex v00 = v(0, 0), v01 = v(0, 1), v10 = v(1, 0), v11 = v(1, 1);
    auto log_abs = [](Complex z) { return std::log(std::abs(z)); };
    const double l00 = log_abs(v00), l01 = log_abs(v01), l10 = log_abs(v10), l11 = log_abs(v11);
    const double a00 = std::arg(v00), a01 = std::arg(v01), a10 = std::arg(v10), a11 = std::arg(v11);

    // exponent * log|z| with 0 * log 0 = 0
    auto weighted = [](int e, double l) { return e == 0 ? 0.0 : e * l; };

    CMatrix out = CMatrix::Zero(dim, dim);
    for (int m = 0; m <= big_n; ++m) {
        for (int n = 0; n <= big_n; ++n) {
            const double log_pref = 0.5 * (std::lgamma(n + 1.0) + std::lgamma(big_n - n + 1.0)
                                           - std::lgamma(m + 1.0) - std::lgamma(big_n - m + 1.0));
            Complex acc = 0.0;
            const int p_lo = std::max(0, n - (big_n - m));
            const int p_hi = std::min(m, n);
            for (int p = p_lo; p <= p_hi; ++p) {
                const int e00 = p, e10 = m - p, e01 = n - p, e11 = big_n - m - n + p;
                const double lm = log_pref + log_binomial(m, p) + log_binomial(big_n - m, n - p)
                                  + weighted(e00, l00) + weighted(e10, l10) + weighted(e01, l01)
                                  + weighted(e11, l11);
                if (!std::isfinite(lm)) {
                    continue;  // a zero entry raised to a positive power
                }
                const double phase = e00 * a00 + e10 * a10 + e01 * a01 + e11 * a11;
                acc += std::polar(std::exp(lm), phase);
            }
            out(n, m) = acc;
        }
    }
    return out;
}

CMatrix sym_power_lift_euler(const CMatrix& v, int particles)
{
    // V = e^{i alpha} Rz(beta) Rx(gamma) Rz(delta), Rz(t) = diag(e^{-it/2}, e^{it/2}),
    // Rx(t) = exp(-i t sigma_x / 2); each factor lifts to exp(-i t J).
    const Complex det = v.determinant();
    const double alpha = 0.5 * std::arg(det);
    const Complex a = v(0, 0) * std::exp(-kI * alpha);
    const Complex b = v(0, 1) * std::exp(-kI * alpha);
    const double gamma = 2.0 * std::atan2(std::abs(b), std::abs(a));
    const double arg_a = std::abs(a) > 0.0 ? std::arg(a) : 0.0;
    const double arg_b = std::abs(b) > 0.0 ? std::arg(b) : 0.0;
    const double beta = -arg_a - arg_b - 0.5 * kPi;
    const double delta = -arg_a + arg_b + 0.5 * kPi;

    const int big_n = particles;
    const Index dim = big_n + 1;
    CVector left(dim), right(dim);
    for (Index n = 0; n < dim; ++n) {
        const double jz = static_cast<double>(n) - 0.5 * big_n;
        left(n) = std::exp(-kI * beta * jz);
        right(n) = std::exp(-kI * delta * jz);
    }
    const CMatrix rx = jx_rotation(big_n, gamma);
    const Complex global = std::exp(kI * (alpha * big_n));
    return global * (left.asDiagonal() * rx * right.asDiagonal());
}

}  // namespace detail

CMatrix sym_power_lift(const CMatrix& v, int particles)
{
    if (v.rows() != 2 || v.cols() != 2) {
        throw ArgumentError("sym_power_lift expects a 2x2 matrix");
    }
    if (particles < 0) {
        throw ArgumentError("particle number must be nonnegative");
    }
    if (linalg::unitarity_defect(v) > 1e-12) {
        throw ArgumentError("sym_power_lift expects a unitary matrix");
    }
    if (particles <= detail::kBinomialLiftMaxParticles) {
        return detail::sym_power_lift_binomial(v, particles);
    }
    return detail::sym_power_lift_euler(v, particles);
}

}  // namespace metroscope
