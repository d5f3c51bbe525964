// Copyright 2026 The metroscope Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "metroscope/common.hpp"
#include "metroscope/dicke.hpp"

#include <vector>

namespace metroscope {

/// Reduced state of N - k bosons after discarding k of them (d = 2).
///
/// [rho']_{nm} = sum_u C(k, u) sqrt(C(N-k, n) C(N-k, m) / (C(N, n+u) C(N, m+u))) rho_{n+u, m+u};
/// binomial ratios go through log-gamma so N in the thousands is fine.
SymmetricState partial_trace_dicke(const SymmetricState& state, int lost);

/// Literal partial trace over the last k tensor factors of a qubit state.
FullState partial_trace_bruteforce(const FullState& state, int lost);

struct LossBlock {
    int lost;
    double probability;
    SymmetricState state;  ///< density on S_{N - lost}
};

struct LossBlocks {
    int particles;
    /// Blocks with nonzero probability, ordered by the number of lost particles.
    std::vector<LossBlock> blocks;

    double total_probability() const;
};

/// Photon loss through fictitious beam splitters of transmissivity eta_a, eta_b
/// on the two modes, grouped by the total number of lost particles.
LossBlocks bs_loss(const SymmetricState& state, double eta_a, double eta_b);

struct BsEquivalenceReport {
    double max_state_deviation;        ///< entrywise, over blocks
    double max_probability_deviation;  ///< |p_l - C(N, l) eta^{N-l} (1 - eta)^l|
    double max_deviation;
    bool within_tolerance;
};

/// Checks bs_loss(psi, eta, eta) against binomially weighted partial_trace_dicke.
BsEquivalenceReport verify_bs_trace_equivalence(const SymmetricState& state, double eta, double tolerance);

}  // namespace metroscope
