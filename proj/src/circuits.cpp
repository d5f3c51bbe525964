// Copyright 2026 The metroscope Authors
// SPDX-License-Identifier: Apache-2.0

#include "metroscope/circuits.hpp"

#include "metroscope/fisher.hpp"
#include "metroscope/haar.hpp"
#include "metroscope/hamiltonians.hpp"
#include "metroscope/interferometer.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace metroscope {

std::string to_string(const Gate& g)
{
    static constexpr const char* names[] = {"V1", "V2", "V3", "XK"};
    std::string s = names[static_cast<int>(g.kind)];
    return g.dagger ? s + "^dag" : s;
}

int alphabet_index(const Gate& g) noexcept
{
    return 2 * static_cast<int>(g.kind) + (g.dagger ? 1 : 0);
}

CMatrix single_particle_gate(GateKind kind)
{
    const double s = 1.0 / std::sqrt(5.0);
    CMatrix v(2, 2);
    switch (kind) {
    case GateKind::v1:
        v << 1.0, 2.0 * kI, 2.0 * kI, 1.0;
        break;
    case GateKind::v2:
        v << 1.0, 2.0, -2.0, 1.0;
        break;
    case GateKind::v3:
        v << Complex(1.0, 2.0), 0.0, 0.0, Complex(1.0, -2.0);
        break;
    case GateKind::xk:
        throw ArgumentError("XK is a two-mode gate with no single-particle matrix");
    }
    return s * v;
}

namespace {

CVector xk_phases(int particles, bool dagger)
{
    CVector d(particles + 1);
    const double sign = dagger ? 1.0 : -1.0;
    for (int n = 0; n <= particles; ++n) {
        // n (N - n) mod 6 keeps the argument small; the phase has period 6
        const long long q = (static_cast<long long>(n) * (particles - n)) % 6;
        d(n) = std::exp(sign * kI * kPi * static_cast<double>(q) / 3.0);
    }
    return d;
}

}  // namespace

CMatrix gate_matrix(const Gate& g, int particles)
{
    if (particles < 0) {
        throw ArgumentError("particle number must be nonnegative");
    }
    if (g.kind == GateKind::xk) {
        return xk_phases(particles, g.dagger).asDiagonal();
    }
    CMatrix v = single_particle_gate(g.kind);
    if (g.dagger) {
        v.adjointInPlace();
    }
    return sym_power_lift(v, particles);
}

GateSet::GateSet(int particles) : particles_(particles)
{
    for (const Gate& g : kGateAlphabet) {
        matrices_[static_cast<std::size_t>(alphabet_index(g))] = gate_matrix(g, particles);
    }
    xk_ = xk_phases(particles, false);
    xk_dagger_ = xk_phases(particles, true);
}

std::shared_ptr<const GateSet> GateSet::shared(int particles)
{
    static std::mutex mutex;
    static std::map<int, std::shared_ptr<const GateSet>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto& slot = cache[particles];
    if (!slot) {
        slot = std::make_shared<const GateSet>(particles);
    }
    return slot;
}

Circuit Circuit::inverse() const
{
    Circuit out{particles, {}, std::nullopt};
    out.gates.reserve(gates.size());
    for (auto it = gates.rbegin(); it != gates.rend(); ++it) {
        out.gates.push_back({it->kind, !it->dagger});
    }
    return out;
}

Circuit sample_circuit(int particles, int depth, Rng& rng)
{
    if (depth < 0) {
        throw ArgumentError("circuit depth must be nonnegative");
    }
    std::uniform_int_distribution<int> pick(0, static_cast<int>(kGateAlphabet.size()) - 1);
    Circuit c{particles, {}, std::nullopt};
    c.gates.reserve(static_cast<std::size_t>(depth));
    for (int k = 0; k < depth; ++k) {
        c.gates.push_back(kGateAlphabet[static_cast<std::size_t>(pick(rng))]);
    }
    return c;
}

SymmetricState apply_circuit(const SymmetricState& state, const Circuit& circuit)
{
    if (state.modes() != 2 || state.particles() != circuit.particles) {
        throw ArgumentError("circuit and state disagree on N or d");
    }
    const auto gates = GateSet::shared(circuit.particles);
    if (state.is_pure()) {
        CVector psi = state.amplitudes();
        CVector next(psi.size());
        for (const Gate& g : circuit.gates) {
            if (g.kind == GateKind::xk) {
                psi.array() *= gates->xk_diagonal(g.dagger).array();
            } else {
                next.noalias() = (*gates)(g) * psi;
                psi.swap(next);
            }
        }
        psi.normalize();
        return SymmetricState::pure(state.basis(), std::move(psi));
    }
    CMatrix u = circuit_unitary(circuit);
    CMatrix rho = u * state.density_matrix() * u.adjoint();
    rho = 0.5 * (rho + rho.adjoint());
    rho /= rho.trace().real();
    return SymmetricState::density(state.basis(), std::move(rho));
}

CMatrix circuit_unitary(const Circuit& circuit)
{
    const auto gates = GateSet::shared(circuit.particles);
    CMatrix u = CMatrix::Identity(circuit.particles + 1, circuit.particles + 1);
    for (const Gate& g : circuit.gates) {
        u = (*gates)(g) * u;
    }
    return u;
}

std::string to_string(StartState s)
{
    switch (s) {
    case StartState::polarized:
        return "polarized";
    case StartState::balanced:
        return "balanced";
    case StartState::noon:
        return "noon";
    }
    return "?";
}

StartState parse_start_state(const std::string& name)
{
    if (name == "polarized" || name == "polarised") {
        return StartState::polarized;
    }
    if (name == "balanced") {
        return StartState::balanced;
    }
    if (name == "noon") {
        return StartState::noon;
    }
    throw ArgumentError("unknown start state '" + name + "' (expected polarized, balanced or noon)");
}

SymmetricState start_state(StartState s, int particles)
{
    if (particles < 1) {
        throw ArgumentError("start states need N >= 1");
    }
    const DickeBasis basis(particles, 2);
    CVector a = CVector::Zero(particles + 1);
    switch (s) {
    case StartState::polarized:
        a(0) = 1.0;
        break;
    case StartState::balanced:
        for (int n = 0; n <= particles; ++n) {
            a(n) = std::exp(0.5 * (log_binomial(particles, n) - particles * std::log(2.0)));
        }
        a.normalize();
        break;
    case StartState::noon:
        a(0) = 1.0 / std::sqrt(2.0);
        a(particles) = 1.0 / std::sqrt(2.0);
        break;
    }
    return SymmetricState::pure(basis, std::move(a));
}

ConvergenceTable circuit_convergence(int particles, const std::vector<int>& depths, Index n_samples,
                                     StartState start, std::uint64_t master_seed, int workers, double tolerance)
{
    if (particles < 1) {
        throw ArgumentError("circuit_convergence needs N >= 1");
    }
    const double n = particles;
    ConvergenceTable table{particles, start, n * (n + 1.0) / 3.0, n * (n + 1.0) / 6.0, tolerance, {}, std::nullopt};
    const SymmetricState initial = start_state(start, particles);
    const auto mz = MachZehnder::shared(particles);
    GateSet::shared(particles);  // build the gate cache before workers start

    for (std::size_t r = 0; r < depths.size(); ++r) {
        const int depth = depths[r];
        auto sample = [&](Index, Rng& rng) {
            const SymmetricState s = apply_circuit(initial, sample_circuit(particles, depth, rng));
            return std::vector<double>{qfi(s, mz->jz()), mz->fisher(s, 0.5 * kPi), mz->fisher(s, kPi / 3.0)};
        };
        const std::vector<McResult> mc =
            mc_estimate_multi(sample, 3, n_samples, derive_seed(master_seed, r), workers);
        table.rows.push_back({depth, mc[0].n_samples, mc[0].skipped, mc[0].mean, mc[0].std_error, mc[1].mean,
                              mc[1].std_error, mc[2].mean, mc[2].std_error});
    }

    auto within = [tolerance](double value, double target) { return std::abs(value - target) <= tolerance * target; };
    for (const ConvergenceRow& row : table.rows) {
        if (within(row.qfi_mean, table.qfi_target) && within(row.fi_half_pi_mean, table.fi_target) &&
            within(row.fi_third_pi_mean, table.fi_target)) {
            if (!table.sufficient_depth || row.depth < *table.sufficient_depth) {
                table.sufficient_depth = row.depth;
            }
        }
    }
    return table;
}

}  // namespace metroscope
