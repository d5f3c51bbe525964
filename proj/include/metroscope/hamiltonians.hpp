// Copyright 2026 The metroscope Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "metroscope/common.hpp"
#include "metroscope/dicke.hpp"

namespace metroscope {

/// Traceless Hermitian single-particle generator h on C^d.
///
/// A nonzero trace is removed on construction (it only contributes a global
/// phase) and the removed amount tr(h)/d is kept in trace_shift().
class LocalHamiltonian {
public:
    explicit LocalHamiltonian(const CMatrix& h);

    int modes() const noexcept { return static_cast<int>(matrix_.rows()); }
    const CMatrix& matrix() const noexcept { return matrix_; }
    double trace_shift() const noexcept { return trace_shift_; }

    /// Ascending eigenvalues and matching eigenvectors of the traceless part.
    const RVector& eigenvalues() const noexcept { return eigenvalues_; }
    const CMatrix& eigenvectors() const noexcept { return eigenvectors_; }

    double operator_norm() const noexcept;
    /// tr(h^2)
    double trace_square() const noexcept;

private:
    CMatrix matrix_;
    double trace_shift_ = 0.0;
    RVector eigenvalues_;
    CMatrix eigenvectors_;
};

/// Sum_j h^{(j)}, either on the full space (C^d)^{\otimes N} or restricted to S_N.
class CollectiveHamiltonian {
public:
    CollectiveHamiltonian(Space space, int particles, int modes, CMatrix matrix);

    Space space() const noexcept { return space_; }
    int particles() const noexcept { return particles_; }
    int modes() const noexcept { return modes_; }
    Index dim() const noexcept { return matrix_.rows(); }
    const CMatrix& matrix() const noexcept { return matrix_; }

private:
    Space space_;
    int particles_;
    int modes_;
    CMatrix matrix_;
};

/// H_N on S_N in the canonical Dicke basis: matrix elements of sum_ij h_ij a_i^dag a_j.
/// Its spectrum is {k . lambda : |k| = N} with lambda the eigenvalues of h.
CollectiveHamiltonian collective_sym(const LocalHamiltonian& h, int particles);

/// Dense sum_j h^{(j)} on (C^d)^{\otimes N}; CapacityError if d^N > 4096.
CollectiveHamiltonian collective_full(const LocalHamiltonian& h, int particles);

/// Applies sum_j h^{(j)} to a full-space vector without forming the dense operator.
CVector apply_collective(const CMatrix& h, int particles, const CVector& psi);

enum class Axis { x, y, z };

/// Pauli matrices in the single-particle basis (a, b).
CMatrix pauli(Axis axis);

/// Two-mode angular momentum J_axis = collective_sym(sigma_axis / 2) on S_N.
CollectiveHamiltonian angular_momentum(Axis axis, int particles);

/// exp(-i gamma J_x) on S_N, from the real tridiagonal eigendecomposition of J_x.
CMatrix jx_rotation(int particles, double gamma);

/// Balanced beam splitter B = exp(-i pi J_x / 2) on S_N.
CMatrix beam_splitter(int particles);

}  // namespace metroscope
