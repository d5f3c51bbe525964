// Copyright 2026 The metroscope Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "metroscope/circuits.hpp"
#include "metroscope/common.hpp"
#include "metroscope/dicke.hpp"
#include "metroscope/fisher.hpp"
#include "metroscope/hamiltonians.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace metroscope {

// ---------------------------------------------------------------------------
// Haar sampling
//
// Unitaries are drawn from U(D), not SU(D). Every functional in this library
// is invariant under a global phase, so the two measures give identical
// statistics and no determinant correction is applied.
// ---------------------------------------------------------------------------

/// Ginibre matrix followed by QR, with the phases of R's diagonal moved into Q.
CMatrix haar_unitary(Index dim, Rng& rng);

/// Uniformly random unit vector in C^D (a column of a Haar unitary).
CVector haar_state(Index dim, Rng& rng);

enum class EnsembleKind { haar_full_pure, haar_sym_isospectral, haar_sym_depolarized, circuit };

std::string to_string(EnsembleKind kind);

struct EnsembleSpec {
    EnsembleKind kind = EnsembleKind::haar_sym_isospectral;
    int particles = 1;
    int modes = 2;
    /// Reference spectrum for isospectral ensembles; pure when empty.
    std::optional<Spectrum> spectrum;
    /// Depolarisation weight p of (1 - p) U psi U^dag + p 1/D.
    double depolarization = 0.0;
    /// Circuit depth K and starting state for the circuit ensemble (d = 2).
    int depth = 0;
    StartState start = StartState::balanced;

    static EnsembleSpec full_pure(int particles, int modes);
    static EnsembleSpec sym_pure(int particles, int modes);
    static EnsembleSpec sym_isospectral(int particles, int modes, Spectrum spectrum);
    static EnsembleSpec sym_depolarized(int particles, int modes, double p);
    static EnsembleSpec circuit(int particles, int depth, StartState start);

    /// Dimension of the space the samples live on (CapacityError for oversized full spaces).
    Index dim() const;
    /// True when every sample is a pure state.
    bool pure() const;
    /// Throws ArgumentError or CapacityError on inconsistent parameters.
    void validate() const;
};

/// One draw from the ensemble. Pure ensembles yield pure payloads.
AnyState sample_state(const EnsembleSpec& spec, Rng& rng);

// ---------------------------------------------------------------------------
// Deterministic Monte Carlo
// ---------------------------------------------------------------------------

/// 64-bit seed for child `index` of `master`, from a splitmix64 chain.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// Engine for sample i: seeded with 128 bits of hash of (master, i).
Rng derive_stream(std::uint64_t master, std::uint64_t index);

/// Fraction of failing samples above which mc_estimate gives up.
inline constexpr double kMaxSkipFraction = 0.01;

struct McResult {
    Index n_samples = 0;  ///< samples that contributed
    Index skipped = 0;    ///< samples whose functional threw
    double mean = 0.0;
    double std_error = 0.0;
    double sample_std = 0.0;
    std::uint64_t master_seed = 0;
    /// Per-sample values in index order (skipped samples omitted).
    std::vector<double> values;
    /// Indices and messages of skipped samples.
    std::vector<std::pair<Index, std::string>> failures;
};

using SampleFunction = std::function<double(Index, Rng&)>;
using MultiSampleFunction = std::function<std::vector<double>(Index, Rng&)>;
using StateFunctional = std::function<double(const AnyState&)>;

/// Evaluates f(i, stream_i) for i < n on `workers` threads (0 = hardware
/// concurrency). Results are merged in index order, so every output is
/// bitwise independent of the worker count. A sample whose function throws
/// std::exception is skipped; more than 1% skipped raises Error.
McResult mc_estimate(const SampleFunction& f, Index n, std::uint64_t master_seed, int workers = 0);

/// Several statistics of the same samples; a failure skips the sample for all of them.
std::vector<McResult> mc_estimate_multi(const MultiSampleFunction& f, Index width, Index n,
                                        std::uint64_t master_seed, int workers = 0);

/// Mean of functional(sample_state(spec, stream_i)).
McResult mc_estimate(const StateFunctional& functional, const EnsembleSpec& spec, Index n,
                     std::uint64_t master_seed, int workers = 0);

// ---------------------------------------------------------------------------
// Concentration
// ---------------------------------------------------------------------------

/// Functionals with known Lipschitz-based tail bounds.
struct ConcentrationTarget {
    enum class Kind { qfi, mz_fi };
    Kind kind = Kind::qfi;
    /// Single-particle generator (qfi); ignored for mz_fi, which uses J_z.
    CMatrix h;
    double phi = 0.5 * kPi;

    static ConcentrationTarget qfi(const CMatrix& h);
    static ConcentrationTarget mz_fi(double phi);
};

struct ConcentrationRow {
    double eps;
    double empirical_tail;  ///< fraction with |f - sample mean| >= eps
    double binomial_se;     ///< sqrt(t (1 - t) / n)
    double bound;           ///< two-sided analytic bound
    bool vacuous;           ///< bound >= 1
};

struct ConcentrationReport {
    McResult samples;
    std::vector<ConcentrationRow> rows;
};

/// Two-sided analytic tail bound Pr(|f - E f| >= eps) for the given ensemble and functional.
double concentration_bound(const EnsembleSpec& spec, const ConcentrationTarget& target, double eps);

/// Empirical tails over an ascending positive eps grid, paired with concentration_bound.
/// ArgumentError for the circuit ensemble, which has no Haar tail bound.
ConcentrationReport concentration_report(const EnsembleSpec& spec, const ConcentrationTarget& target, Index n,
                                         const std::vector<double>& eps_grid, std::uint64_t master_seed,
                                         int workers = 0);

/// Evaluates the target functional on one state.
double evaluate_target(const ConcentrationTarget& target, const AnyState& state);

}  // namespace metroscope
