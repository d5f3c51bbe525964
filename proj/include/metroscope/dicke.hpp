// Copyright 2026 The metroscope Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "metroscope/common.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <variant>
#include <vector>

namespace metroscope {

// ---------------------------------------------------------------------------
// Binomials
// ---------------------------------------------------------------------------

/// log C(n, k) via lgamma; -inf when k is outside [0, n].
double log_binomial(int n, int k);

/// C(n, k) as a double. Exact 128-bit arithmetic for n <= 30, log-gamma beyond.
double binomial(int n, int k);

/// Dimension C(N + d - 1, N) of the symmetric subspace of N particles in d modes.
/// Throws ArgumentError for N < 0 or d < 1 and CapacityError if the value
/// does not fit into 64 bits.
std::uint64_t sym_dim(int particles, int modes);

// ---------------------------------------------------------------------------
// Generalised Dicke basis
// ---------------------------------------------------------------------------

using Occupation = std::vector<int>;

/// Occupation-number basis of the symmetric subspace S_N of (C^d)^{\otimes N}.
///
/// Basis vectors are ordered lexicographically in (k_0, k_1, ..., k_{d-1})
/// with k_0 the outermost index. For d = 2 this gives the canonical ordering
/// |D_n> = |n, N - n>, i.e. position n holds n particles in mode a (the
/// single-particle state with index 0).
///
/// Cheap to copy: the index tables are shared and immutable.
class DickeBasis {
public:
    DickeBasis(int particles, int modes);

    int particles() const noexcept { return impl_->particles; }
    int modes() const noexcept { return impl_->modes; }
    Index dim() const noexcept { return static_cast<Index>(impl_->occupations.size()); }

    const Occupation& occupation(Index i) const;
    Index index_of(const Occupation& k) const;

    friend bool operator==(const DickeBasis& a, const DickeBasis& b) noexcept
    {
        return a.particles() == b.particles() && a.modes() == b.modes();
    }

private:
    struct Impl {
        int particles;
        int modes;
        std::vector<Occupation> occupations;
        std::map<Occupation, Index> lookup;
    };
    std::shared_ptr<const Impl> impl_;
};

// ---------------------------------------------------------------------------
// States
// ---------------------------------------------------------------------------

inline constexpr double kNormTolerance = 1e-12;
inline constexpr double kPsdTolerance = 1e-12;
inline constexpr double kSymmetricLeakTolerance = 1e-10;

/// Largest dense full-space dimension d^N accepted anywhere in the library.
inline constexpr std::uint64_t kMaxFullDim = 4096;

/// Pure vector or density matrix. Shared by SymmetricState and FullState.
class StatePayload {
public:
    static StatePayload pure(CVector amplitudes);
    static StatePayload density(CMatrix rho);

    bool is_pure() const noexcept { return std::holds_alternative<CVector>(data_); }
    Index dim() const noexcept;

    /// Throws ArgumentError for density payloads.
    const CVector& amplitudes() const;
    /// Throws ArgumentError for pure payloads.
    const CMatrix& density_matrix() const;
    /// Density matrix; pure payloads are promoted to projectors.
    CMatrix to_density() const;

private:
    explicit StatePayload(std::variant<CVector, CMatrix> d) : data_(std::move(d)) {}
    std::variant<CVector, CMatrix> data_;
};

/// State of N bosons in d modes, expressed in the generalised Dicke basis.
class SymmetricState {
public:
    static SymmetricState pure(const DickeBasis& basis, CVector amplitudes);
    static SymmetricState density(const DickeBasis& basis, CMatrix rho);

    /// |D_n^N> for d = 2.
    static SymmetricState dicke(int particles, int n);

    const DickeBasis& basis() const noexcept { return basis_; }
    int particles() const noexcept { return basis_.particles(); }
    int modes() const noexcept { return basis_.modes(); }
    Index dim() const noexcept { return basis_.dim(); }

    bool is_pure() const noexcept { return payload_.is_pure(); }
    const CVector& amplitudes() const { return payload_.amplitudes(); }
    const CMatrix& density_matrix() const { return payload_.density_matrix(); }
    CMatrix to_density() const { return payload_.to_density(); }
    const StatePayload& payload() const noexcept { return payload_; }

private:
    SymmetricState(DickeBasis b, StatePayload p) : basis_(std::move(b)), payload_(std::move(p)) {}
    DickeBasis basis_;
    StatePayload payload_;
};

/// State of N distinguishable d-level particles on (C^d)^{\otimes N}.
///
/// Basis index of the product |x_1 ... x_N> is sum_j x_j d^{N - j}, i.e. the
/// first particle is the most significant digit. Construction enforces
/// d^N <= 4096 (N <= 12 for qubits).
class FullState {
public:
    static FullState pure(int particles, int modes, CVector amplitudes);
    static FullState density(int particles, int modes, CMatrix rho);

    int particles() const noexcept { return particles_; }
    int modes() const noexcept { return modes_; }
    Index dim() const noexcept { return payload_.dim(); }

    bool is_pure() const noexcept { return payload_.is_pure(); }
    const CVector& amplitudes() const { return payload_.amplitudes(); }
    const CMatrix& density_matrix() const { return payload_.density_matrix(); }
    CMatrix to_density() const { return payload_.to_density(); }
    const StatePayload& payload() const noexcept { return payload_; }

private:
    FullState(int n, int d, StatePayload p) : particles_(n), modes_(d), payload_(std::move(p)) {}
    int particles_;
    int modes_;
    StatePayload payload_;
};

using AnyState = std::variant<SymmetricState, FullState>;

/// d^N, throwing CapacityError above kMaxFullDim.
Index full_dim(int particles, int modes);

// ---------------------------------------------------------------------------
// Symmetric <-> particle picture
// ---------------------------------------------------------------------------

/// Isometry S_N -> (C^d)^{\otimes N} mapping each Dicke vector to the
/// normalised uniform superposition of its product strings.
CMatrix dicke_isometry(const DickeBasis& basis);

/// Embeds a symmetric state into the distinguishable-particle space.
/// For d = 2, |D_n^N> maps to the uniform superposition of strings with n zeros.
FullState dicke_embed(const SymmetricState& state);

/// Inverse of dicke_embed. Throws DomainError (diagnostic = leaked weight)
/// if the input has more than 1e-10 weight outside the symmetric subspace.
SymmetricState dicke_project(const FullState& state);

/// Matrix of V^{\otimes N} restricted to S_N in the Dicke basis, d = 2.
/// Throws ArgumentError if V is not a 2x2 unitary within 1e-12.
CMatrix sym_power_lift(const CMatrix& v, int particles);

namespace detail {
// Both exposed for cross-validation in tests; sym_power_lift picks by N.
CMatrix sym_power_lift_binomial(const CMatrix& v, int particles);
CMatrix sym_power_lift_euler(const CMatrix& v, int particles);
inline constexpr int kBinomialLiftMaxParticles = 24;
}  // namespace detail

}  // namespace metroscope
