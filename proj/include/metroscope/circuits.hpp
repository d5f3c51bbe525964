// Copyright 2026 The metroscope Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "metroscope/common.hpp"
#include "metroscope/dicke.hpp"

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace metroscope {

/// Two-mode linear-optics gates V1..V3 and the cross-Kerr phase gate.
enum class GateKind { v1, v2, v3, xk };

struct Gate {
    GateKind kind;
    bool dagger = false;

    friend bool operator==(const Gate& a, const Gate& b) noexcept
    {
        return a.kind == b.kind && a.dagger == b.dagger;
    }
};

/// The eight-element alphabet {V1, V1^dag, V2, V2^dag, V3, V3^dag, XK, XK^dag}.
inline constexpr std::array<Gate, 8> kGateAlphabet{{
    {GateKind::v1, false}, {GateKind::v1, true},
    {GateKind::v2, false}, {GateKind::v2, true},
    {GateKind::v3, false}, {GateKind::v3, true},
    {GateKind::xk, false}, {GateKind::xk, true},
}};

std::string to_string(const Gate& g);
/// Position of g in kGateAlphabet.
int alphabet_index(const Gate& g) noexcept;

/// 2x2 single-particle matrix of V1, V2 or V3 (ArgumentError for XK).
CMatrix single_particle_gate(GateKind kind);

/// Unitary of g on S_N in the Dicke basis. XK is diag exp(-i pi n (N - n) / 3).
CMatrix gate_matrix(const Gate& g, int particles);

/// All eight gate matrices for one N, computed once.
class GateSet {
public:
    explicit GateSet(int particles);

    /// Process-wide cache keyed by N; thread-safe.
    static std::shared_ptr<const GateSet> shared(int particles);

    int particles() const noexcept { return particles_; }
    const CMatrix& operator()(const Gate& g) const { return matrices_[static_cast<std::size_t>(alphabet_index(g))]; }
    /// XK gates are diagonal; their diagonal is kept separately.
    const CVector& xk_diagonal(bool dagger) const { return dagger ? xk_dagger_ : xk_; }

private:
    int particles_;
    std::array<CMatrix, 8> matrices_;
    CVector xk_;
    CVector xk_dagger_;
};

struct Circuit {
    int particles = 0;
    std::vector<Gate> gates;
    /// Seed of the stream the circuit was drawn from, if sampled.
    std::optional<std::uint64_t> seed;

    /// Reversed list of daggered gates.
    Circuit inverse() const;
};

/// K i.i.d. uniform draws from kGateAlphabet.
Circuit sample_circuit(int particles, int depth, Rng& rng);

/// Applies the gates in list order (first gate acts first). Pure states are
/// evolved by matrix-vector products, density matrices by conjugation.
SymmetricState apply_circuit(const SymmetricState& state, const Circuit& circuit);

/// Dense product of the gate matrices, last gate leftmost.
CMatrix circuit_unitary(const Circuit& circuit);

enum class StartState { polarized, balanced, noon };

std::string to_string(StartState s);
/// Accepts "polarized"/"polarised", "balanced", "noon"; ArgumentError otherwise.
StartState parse_start_state(const std::string& name);

/// polarized: |D_0>; balanced: alpha_n = sqrt(C(N, n) / 2^N); noon: (|D_0> + |D_N>)/sqrt 2.
SymmetricState start_state(StartState s, int particles);

struct ConvergenceRow {
    int depth;
    Index samples;
    Index skipped;
    double qfi_mean;
    double qfi_std_error;
    double fi_half_pi_mean;
    double fi_half_pi_std_error;
    double fi_third_pi_mean;
    double fi_third_pi_std_error;
};

struct ConvergenceTable {
    int particles;
    StartState start;
    double qfi_target;  ///< N (N + 1) / 3
    double fi_target;   ///< N (N + 1) / 6
    double tolerance;   ///< relative band used for K_suf
    std::vector<ConvergenceRow> rows;
    /// Smallest listed K whose QFI and both FI means are within the band.
    std::optional<int> sufficient_depth;
};

/// For each K, samples n circuits applied to the start state and averages
/// qfi(., J_z) and the Mach-Zehnder FI at phi = pi/2 and pi/3.
/// Row r draws its circuits from mc_estimate streams under the master seed
/// derive_seed(master_seed, r), so rows are independent and reproducible.
ConvergenceTable circuit_convergence(int particles, const std::vector<int>& depths, Index n_samples,
                                     StartState start, std::uint64_t master_seed, int workers = 0,
                                     double tolerance = 0.10);

}  // namespace metroscope
