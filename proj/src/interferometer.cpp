// Copyright 2026 The metroscope Authors
// SPDX-License-Identifier: Apache-2.0

#include "metroscope/interferometer.hpp"

#include "metroscope/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace metroscope {

MachZehnder::MachZehnder(int particles)
    : particles_(particles),
      b_(metroscope::beam_splitter(particles)),
      jz_(angular_momentum(Axis::z, particles)),
      jz_diag_(jz_.matrix().diagonal().real()),
      jy_(angular_momentum(Axis::y, particles)),
      povm_(Povm::from_vectors(b_.adjoint()))
{
}

std::shared_ptr<const MachZehnder> MachZehnder::shared(int particles)
{
    static std::mutex mutex;
    static std::map<int, std::shared_ptr<const MachZehnder>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto& slot = cache[particles];
    if (!slot) {
        slot = std::make_shared<const MachZehnder>(particles);
    }
    return slot;
}

void MachZehnder::check(const SymmetricState& state) const
{
    if (state.modes() != 2 || state.particles() != particles_) {
        throw ArgumentError("interferometer and state disagree on N or d");
    }
}

namespace {

CVector phase_diagonal(const RVector& jz, double phi)
{
    CVector d(jz.size());
    for (Index n = 0; n < jz.size(); ++n) {
        d(n) = std::exp(-kI * phi * jz(n));
    }
    return d;
}

RVector clamp_probabilities(RVector p)
{
    return p.cwiseMax(0.0);
}

}  // namespace

RVector MachZehnder::probabilities(const SymmetricState& state, double phi) const
{
    check(state);
    const CVector phase = phase_diagonal(jz_diag_, phi);
    if (state.is_pure()) {
        const CVector out = b_ * phase.cwiseProduct(state.amplitudes());
        return clamp_probabilities(out.cwiseAbs2());
    }
    const CMatrix evolved = phase.asDiagonal() * state.density_matrix() * phase.conjugate().asDiagonal();
    return clamp_probabilities((b_ * evolved * b_.adjoint()).diagonal().real());
}

RVector MachZehnder::probabilities_conjugated(const SymmetricState& state, double phi) const
{
    check(state);
    const CMatrix rot = linalg::expm_hermitian(jy_.matrix(), -phi);  // e^{+i J_y phi}
    if (state.is_pure()) {
        const CVector out = rot * (b_ * state.amplitudes());
        return clamp_probabilities(out.cwiseAbs2());
    }
    const CMatrix m = rot * b_;
    return clamp_probabilities((m * state.density_matrix() * m.adjoint()).diagonal().real());
}

double MachZehnder::fisher(const SymmetricState& state, double phi) const
{
    check(state);
    const CVector phase = phase_diagonal(jz_diag_, phi);
    const Index dim = particles_ + 1;
    RVector p(dim);
    RVector dp(dim);
    if (state.is_pure()) {
        const CVector evolved = phase.cwiseProduct(state.amplitudes());
        const CVector w = b_ * evolved;
        const CVector u = b_ * jz_diag_.cast<Complex>().cwiseProduct(evolved);
        for (Index n = 0; n < dim; ++n) {
            p(n) = std::norm(w(n));
            dp(n) = -2.0 * (std::conj(w(n)) * u(n)).imag();
        }
        return fisher_sum(p, dp);
    }
    const CMatrix evolved = phase.asDiagonal() * state.density_matrix() * phase.conjugate().asDiagonal();
    // i [J_z, rho] with J_z diagonal
    CMatrix derivative(dim, dim);
    for (Index j = 0; j < dim; ++j) {
        for (Index i = 0; i < dim; ++i) {
            derivative(i, j) = kI * (jz_diag_(i) - jz_diag_(j)) * evolved(i, j);
        }
    }
    p = (b_ * evolved * b_.adjoint()).diagonal().real();
    dp = (b_ * derivative * b_.adjoint()).diagonal().real();
    return fisher_sum(p, dp);
}

Povm mz_povm(int particles)
{
    return MachZehnder::shared(particles)->povm();
}

RVector mz_probabilities(const SymmetricState& state, double phi)
{
    return MachZehnder::shared(state.particles())->probabilities(state, phi);
}

RVector mz_probabilities_conjugated(const SymmetricState& state, double phi)
{
    return MachZehnder::shared(state.particles())->probabilities_conjugated(state, phi);
}

double mz_fi(const SymmetricState& state, double phi)
{
    return MachZehnder::shared(state.particles())->fisher(state, phi);
}

MzScan mz_fi_scan(const SymmetricState& state, const std::vector<double>& phi_grid)
{
    if (phi_grid.empty()) {
        throw ArgumentError("phi grid is empty");
    }
    if (!std::is_sorted(phi_grid.begin(), phi_grid.end()) || phi_grid.front() < 0.0 ||
        phi_grid.back() > 2.0 * kPi) {
        throw ArgumentError("phi grid must be ascending inside [0, 2 pi]");
    }
    const auto mz = MachZehnder::shared(state.particles());
    MzScan scan{0.0, 0.0, 0.0, 0.0, {}};
    scan.values.reserve(phi_grid.size());
    for (double phi : phi_grid) {
        scan.values.push_back(mz->fisher(state, phi));
    }
    const auto [lo, hi] = std::minmax_element(scan.values.begin(), scan.values.end());
    scan.min = *lo;
    scan.argmin = phi_grid[static_cast<std::size_t>(lo - scan.values.begin())];
    scan.max = *hi;
    scan.argmax = phi_grid[static_cast<std::size_t>(hi - scan.values.begin())];
    return scan;
}

std::vector<double> uniform_phi_grid(int points)
{
    if (points < 1) {
        throw ArgumentError("phi grid needs at least one point");
    }
    std::vector<double> grid(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) {
        grid[static_cast<std::size_t>(i)] = 2.0 * kPi * i / points;
    }
    return grid;
}

}  // namespace metroscope
