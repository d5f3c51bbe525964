// Copyright 2026 The metroscope Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "metroscope/common.hpp"
#include "metroscope/dicke.hpp"
#include "metroscope/hamiltonians.hpp"

#include <cmath>
#include <optional>
#include <vector>

namespace metroscope {

/// Eigenvalues of a density matrix: nonnegative, summing to one, descending.
class Spectrum {
public:
    /// Sorts the input; throws ArgumentError on negative entries (below -1e-12)
    /// or if the sum differs from one by more than 1e-10.
    explicit Spectrum(std::vector<double> probabilities);

    static Spectrum pure(Index dim);
    static Spectrum uniform(Index dim);
    /// (1 - p) |psi><psi| + p 1/D
    static Spectrum depolarized(Index dim, double p);

    Index size() const noexcept { return values_.size(); }
    const RVector& values() const noexcept { return values_; }
    double operator[](Index i) const { return values_(i); }
    double purity() const noexcept { return values_.squaredNorm(); }

private:
    RVector values_;
};

/// Positive operator-valued measure on a common space.
///
/// Rank-one POVMs built with from_vectors() keep their vectors so that
/// probabilities and Fisher information can be evaluated in O(D^2) per element set.
class Povm {
public:
    explicit Povm(std::vector<CMatrix> elements);
    /// Elements |v_n><v_n|.
    static Povm from_vectors(const CMatrix& columns);

    Index size() const noexcept { return static_cast<Index>(elements_.size()); }
    Index dim() const noexcept { return elements_.empty() ? 0 : elements_.front().rows(); }
    const std::vector<CMatrix>& elements() const noexcept { return elements_; }
    const CMatrix& operator[](Index n) const { return elements_[static_cast<std::size_t>(n)]; }
    /// Column n spans element n; present only for rank-one POVMs.
    const std::optional<CMatrix>& vectors() const noexcept { return vectors_; }

private:
    Povm() = default;
    std::vector<CMatrix> elements_;
    std::optional<CMatrix> vectors_;
};

// ---------------------------------------------------------------------------
// Quantum Fisher information
// ---------------------------------------------------------------------------

/// Eigenpairs whose weight sum p_i + p_j is below this fraction of max p are skipped.
inline constexpr double kQfiPairThreshold = 1e-12;

/// 4 Var_psi(H).
double qfi_pure(const CVector& psi, const CMatrix& h);
/// 2 sum (p_i - p_j)^2 / (p_i + p_j) |<e_i|H|e_j>|^2, clamped at zero.
double qfi_density(const CMatrix& rho, const CMatrix& h, double threshold = kQfiPairThreshold);

double qfi(const SymmetricState& state, const CollectiveHamiltonian& h);
double qfi(const FullState& state, const CollectiveHamiltonian& h);
double qfi(const AnyState& state, const CollectiveHamiltonian& h);

// ---------------------------------------------------------------------------
// Classical Fisher information
// ---------------------------------------------------------------------------

/// An outcome with probability below kFiProbabilityFloor is dropped when its
/// numerator (dp/dphi)^2 is below kFiNumeratorFloor and is otherwise an error.
inline constexpr double kFiProbabilityFloor = 1e-12;
inline constexpr double kFiNumeratorFloor = 1e-9;

/// sum_n tr(Pi_n i[H, rho(phi)])^2 / tr(Pi_n rho(phi)) with rho(phi) = e^{-iH phi} rho e^{iH phi}.
/// Throws NumericalDomainError naming the outcome when a vanishing probability
/// has a non-vanishing derivative.
double classical_fi(const Povm& povm, const CVector& psi, const CMatrix& h, double phi);
double classical_fi(const Povm& povm, const CMatrix& rho, const CMatrix& h, double phi);
double classical_fi(const Povm& povm, const SymmetricState& state, const CollectiveHamiltonian& h,
                    double phi);

/// Fisher sum from outcome probabilities and their phi-derivatives.
double fisher_sum(const RVector& probabilities, const RVector& derivatives);

// ---------------------------------------------------------------------------
// Distances and asymmetry
// ---------------------------------------------------------------------------

struct FidelityBures {
    double fidelity;
    double bures;
};

/// Root fidelity tr sqrt(sqrt(rho) sigma sqrt(rho)) and d_B = sqrt(2 (1 - F)).
FidelityBures fidelity_bures(const CMatrix& rho, const CMatrix& sigma);

struct AsymmetryBounds {
    double trace_bound;  ///< ||[H, rho]||_1^2
    double hs_bound;     ///< ||[H, rho]||_2^2
};

AsymmetryBounds asymmetry_bounds(const CMatrix& rho, const CMatrix& h);

// ---------------------------------------------------------------------------
// Spectrum functional and ensemble averages
// ---------------------------------------------------------------------------

struct LambdaResult {
    double lambda;
    /// D/(D-1) (1 - F): the Bures-distance bound d_B(sigma, 1/D)^2 D / (2(D-1)).
    double bures_bound;
    /// D/(D-1) (1 - F^2), the sharper intermediate harmonic/geometric-mean bound.
    double fidelity_bound;
    /// F(sigma, 1/D) = sum sqrt(p_i) / sqrt(D).
    double fidelity;
};

/// Lambda = sum_{ij} (p_i - p_j)^2 / (p_i + p_j) / (2 (D - 1)). Requires D >= 2.
LambdaResult lambda_of_spectrum(const Spectrum& p, Index dim);

/// Exact Haar average of qfi(U rho U^dag, H) over U(D) for a D-dimensional H:
/// 2 [tr H^2 - (tr H)^2 / D] / (D^2 - 1) * sum (p_i - p_j)^2 / (p_i + p_j).
double compact_average_qfi(const Spectrum& p, const CMatrix& h);

/// Closed-form isospectral average for collective Hamiltonians with tr(h^2) = tr_h2.
double analytic_avg_qfi(Space space, int particles, int modes, const Spectrum& p, double tr_h2);

struct Bounds {
    double lower;
    double upper;
};

/// Average-QFI bounds after losing k of N qubits, for input purity tr rho^2.
Bounds loss_avg_bounds(int particles, int lost, double purity);

/// 1/36 - 4/(3 e^6), the value of the lower-bound optimisation at Delta = 6.
inline const double kFiAvgLowerConstant = 1.0 / 36.0 - 4.0 / (3.0 * std::exp(6.0));
inline const double kFiAvgUpperConstant = -5.0 / 6.0 + 3.0 / std::exp(1.0);

/// (c_- N^2, c_+ N^2 + N) bracketing the Haar-averaged Mach-Zehnder FI.
Bounds fi_avg_bounds(int particles);

/// 4 N ||h||^2 [1 + (N - 1) d^2 / sqrt(d^N)]
double lu_upper_bound(int particles, int modes, double h_norm);

// ---------------------------------------------------------------------------
// Local-unitary optimisation
// ---------------------------------------------------------------------------

struct LuResult {
    double qfi;
    /// Best value before the first sweep and after each sweep.
    std::vector<double> history;
};

/// Coordinate ascent of qfi((V_1 x ... x V_N) psi, H) over local unitaries.
/// Each V_j = exp(-i sum_k theta_k G_k) over the d^2 - 1 generalised Gell-Mann
/// matrices; every angle gets a golden-section search from kLuRestarts random
/// brackets and only improvements are accepted, so the value is a certified
/// lower bound on the local-unitary supremum.
LuResult lu_optimize_qfi(const FullState& state, const LocalHamiltonian& h, int sweeps, Rng rng);

inline constexpr int kLuRestarts = 5;

/// Generalised Gell-Mann matrices on C^d, normalised to tr(G_a G_b) = 2 delta_ab.
std::vector<CMatrix> gell_mann(int modes);

}  // namespace metroscope
