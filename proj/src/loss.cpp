// Copyright 2026 The metroscope Authors
// SPDX-License-Identifier: Apache-2.0

#include "metroscope/loss.hpp"

#include "metroscope/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace metroscope {

namespace {

void require_two_mode(const SymmetricState& state)
{
    if (state.modes() != 2) {
        throw ArgumentError("loss channels are implemented for two modes");
    }
}

// count * log(p) with 0 * log 0 = 0
double xlogy(int count, double p)
{
    if (count == 0) {
        return 0.0;
    }
    return p > 0.0 ? count * std::log(p) : -std::numeric_limits<double>::infinity();
}

CMatrix hermitian_part(const CMatrix& a)
{
    return 0.5 * (a + a.adjoint());
}

}  // namespace

SymmetricState partial_trace_dicke(const SymmetricState& state, int lost)
{
    require_two_mode(state);
    const int n = state.particles();
    if (lost < 0 || lost > n) {
        throw ArgumentError("number of traced particles must lie in [0, N]");
    }
    const CMatrix rho = state.to_density();
    const int kept = n - lost;
    // w(m, u)^2 = C(k, u) C(N - k, m) / C(N, m + u)
    RMatrix w(kept + 1, lost + 1);
    for (int m = 0; m <= kept; ++m) {
        for (int u = 0; u <= lost; ++u) {
            w(m, u) = std::exp(0.5 * (log_binomial(lost, u) + log_binomial(kept, m) - log_binomial(n, m + u)));
        }
    }
    CMatrix out = CMatrix::Zero(kept + 1, kept + 1);
    for (int j = 0; j <= kept; ++j) {
        for (int i = 0; i <= kept; ++i) {
            Complex s = 0.0;
            for (int u = 0; u <= lost; ++u) {
                s += w(i, u) * w(j, u) * rho(i + u, j + u);
            }
            out(i, j) = s;
        }
    }
    return SymmetricState::density(DickeBasis(kept, 2), hermitian_part(out));
}

FullState partial_trace_bruteforce(const FullState& state, int lost)
{
    const int n = state.particles();
    if (lost < 0 || lost > n) {
        throw ArgumentError("number of traced particles must lie in [0, N]");
    }
    const Index d = state.modes();
    Index traced = 1;
    for (int j = 0; j < lost; ++j) {
        traced *= d;
    }
    const Index kept = state.dim() / traced;
    CMatrix out = CMatrix::Zero(kept, kept);
    if (state.is_pure()) {
        const CVector& psi = state.amplitudes();
        for (Index a = 0; a < kept; ++a) {
            for (Index c = 0; c < kept; ++c) {
                Complex s = 0.0;
                for (Index b = 0; b < traced; ++b) {
                    s += psi(a * traced + b) * std::conj(psi(c * traced + b));
                }
                out(a, c) = s;
            }
        }
    } else {
        const CMatrix& rho = state.density_matrix();
        for (Index a = 0; a < kept; ++a) {
            for (Index c = 0; c < kept; ++c) {
                Complex s = 0.0;
                for (Index b = 0; b < traced; ++b) {
                    s += rho(a * traced + b, c * traced + b);
                }
                out(a, c) = s;
            }
        }
    }
    return FullState::density(n - lost, state.modes(), hermitian_part(out));
}

double LossBlocks::total_probability() const
{
    double s = 0.0;
    for (const LossBlock& b : blocks) {
        s += b.probability;
    }
    return s;
}

LossBlocks bs_loss(const SymmetricState& state, double eta_a, double eta_b)
{
    require_two_mode(state);
    if (!state.is_pure()) {
        throw ArgumentError("bs_loss expects a pure state");
    }
    if (!(eta_a >= 0.0 && eta_a <= 1.0 && eta_b >= 0.0 && eta_b <= 1.0)) {
        throw ArgumentError("transmissivities must lie in [0, 1]");
    }
    const int n = state.particles();
    const CVector& alpha = state.amplitudes();
    std::vector<CMatrix> acc;
    std::vector<double> prob(static_cast<std::size_t>(n + 1), 0.0);
    for (int l = 0; l <= n; ++l) {
        acc.push_back(CMatrix::Zero(n - l + 1, n - l + 1));
    }
    for (int la = 0; la <= n; ++la) {
        for (int lb = 0; la + lb <= n; ++lb) {
            const int l = la + lb;
            // conditional state with la photons lost from mode a and lb from mode b
            CVector xi = CVector::Zero(n - l + 1);
            for (int k = la; k <= n - lb; ++k) {
                const double log_b = log_binomial(k, la) + xlogy(k - la, eta_a) + xlogy(la, 1.0 - eta_a) +
                                     log_binomial(n - k, lb) + xlogy(n - k - lb, eta_b) + xlogy(lb, 1.0 - eta_b);
                xi(k - la) = alpha(k) * std::exp(0.5 * log_b);
            }
            const double weight = xi.squaredNorm();
            if (weight > 0.0) {
                acc[static_cast<std::size_t>(l)] += xi * xi.adjoint();
                prob[static_cast<std::size_t>(l)] += weight;
            }
        }
    }
    LossBlocks out{n, {}};
    for (int l = 0; l <= n; ++l) {
        const double p = prob[static_cast<std::size_t>(l)];
        if (p > 0.0) {
            CMatrix rho = hermitian_part(acc[static_cast<std::size_t>(l)]) / p;
            out.blocks.push_back({l, p, SymmetricState::density(DickeBasis(n - l, 2), std::move(rho))});
        }
    }
    return out;
}

BsEquivalenceReport verify_bs_trace_equivalence(const SymmetricState& state, double eta, double tolerance)
{
    const LossBlocks blocks = bs_loss(state, eta, eta);
    const int n = state.particles();
    double state_dev = 0.0;
    double prob_dev = 0.0;
    std::size_t next = 0;
    for (int l = 0; l <= n; ++l) {
        const double expected =
            std::exp(log_binomial(n, l) + xlogy(n - l, eta) + xlogy(l, 1.0 - eta));
        double found = 0.0;
        if (next < blocks.blocks.size() && blocks.blocks[next].lost == l) {
            const LossBlock& b = blocks.blocks[next++];
            found = b.probability;
            if (expected > 0.0) {
                const CMatrix reference = partial_trace_dicke(state, l).density_matrix();
                state_dev = std::max(state_dev, linalg::max_abs(b.state.density_matrix() - reference));
            }
        }
        prob_dev = std::max(prob_dev, std::abs(found - expected));
    }
    const double worst = std::max(state_dev, prob_dev);
    return {state_dev, prob_dev, worst, worst <= tolerance};
}

}  // namespace metroscope
