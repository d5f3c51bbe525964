// Copyright 2026 The metroscope Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "metroscope/common.hpp"
#include "metroscope/dicke.hpp"
#include "metroscope/fisher.hpp"
#include "metroscope/hamiltonians.hpp"

#include <memory>
#include <vector>

namespace metroscope {

/// Two-mode Mach-Zehnder interferometer on S_N: phase e^{-i J_z phi}, balanced
/// beam splitter B, photon counting. Outcome n has element B^dag |D_n><D_n| B.
class MachZehnder {
public:
    explicit MachZehnder(int particles);

    /// Process-wide cache keyed by N; thread-safe.
    static std::shared_ptr<const MachZehnder> shared(int particles);

    int particles() const noexcept { return particles_; }
    const CMatrix& beam_splitter() const noexcept { return b_; }
    const CollectiveHamiltonian& jz() const noexcept { return jz_; }
    /// n - N/2
    const RVector& jz_diagonal() const noexcept { return jz_diag_; }
    const Povm& povm() const noexcept { return povm_; }

    /// p_n = |<D_n| B e^{-i J_z phi} psi>|^2 (density states analogously).
    RVector probabilities(const SymmetricState& state, double phi) const;
    /// Same distribution through B e^{-i J_z phi} B^dag = e^{i J_y phi}:
    /// p_n = <D_n| e^{i J_y phi} B rho B^dag e^{-i J_y phi} |D_n>.
    RVector probabilities_conjugated(const SymmetricState& state, double phi) const;
    /// Classical FI of the photon-counting distribution with respect to phi.
    double fisher(const SymmetricState& state, double phi) const;

private:
    void check(const SymmetricState& state) const;

    int particles_;
    CMatrix b_;
    CollectiveHamiltonian jz_;
    RVector jz_diag_;
    CollectiveHamiltonian jy_;
    Povm povm_;
};

Povm mz_povm(int particles);
RVector mz_probabilities(const SymmetricState& state, double phi);
RVector mz_probabilities_conjugated(const SymmetricState& state, double phi);
double mz_fi(const SymmetricState& state, double phi);

struct MzScan {
    double min;
    double argmin;
    double max;
    double argmax;
    std::vector<double> values;
};

/// FI at every grid point. The grid must be nonempty, ascending and inside [0, 2 pi].
MzScan mz_fi_scan(const SymmetricState& state, const std::vector<double>& phi_grid);

inline constexpr int kDefaultPhiGridPoints = 128;

/// `points` uniform phases on [0, 2 pi).
std::vector<double> uniform_phi_grid(int points = kDefaultPhiGridPoints);

}  // namespace metroscope
