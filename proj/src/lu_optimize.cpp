// Copyright 2026 The metroscope Authors
// SPDX-License-Identifier: Apache-2.0

#include "metroscope/fisher.hpp"

#include "metroscope/linalg.hpp"

#include <cmath>

namespace metroscope {

std::vector<CMatrix> gell_mann(int modes)
{
    if (modes < 2) {
        throw ArgumentError("Gell-Mann basis needs d >= 2");
    }
    const Index d = modes;
    std::vector<CMatrix> out;
    out.reserve(static_cast<std::size_t>(d * d - 1));
    for (Index j = 0; j < d; ++j) {
        for (Index k = j + 1; k < d; ++k) {
            CMatrix s = CMatrix::Zero(d, d);
            s(j, k) = 1.0;
            s(k, j) = 1.0;
            out.push_back(s);
            CMatrix a = CMatrix::Zero(d, d);
            a(j, k) = -kI;
            a(k, j) = kI;
            out.push_back(a);
        }
    }
    for (Index l = 1; l < d; ++l) {
        CMatrix g = CMatrix::Zero(d, d);
        const double c = std::sqrt(2.0 / static_cast<double>(l * (l + 1)));
        for (Index j = 0; j < l; ++j) {
            g(j, j) = c;
        }
        g(l, l) = -c * static_cast<double>(l);
        out.push_back(g);
    }
    return out;
}

namespace {

// m acting on tensor factor `site` of a full-space vector
CVector apply_site(const CMatrix& m, int site, const CVector& psi)
{
    const Index d = m.rows();
    const Index dim = psi.size();
    Index stride = dim;
    for (int j = 0; j <= site; ++j) {
        stride /= d;
    }
    CVector out = CVector::Zero(dim);
    for (Index x = 0; x < dim; ++x) {
        const Complex c = psi(x);
        if (c == Complex(0.0)) {
            continue;
        }
        const Index digit = (x / stride) % d;
        const Index base = x - digit * stride;
        for (Index r = 0; r < d; ++r) {
            out(base + r * stride) += m(r, digit) * c;
        }
    }
    return out;
}

double variance_qfi(const CVector& psi, const CVector& hpsi)
{
    const double mean = psi.dot(hpsi).real();
    return std::max(0.0, 4.0 * (hpsi.squaredNorm() - mean * mean));
}

CMatrix rotated(const CMatrix& h, const std::vector<CMatrix>& generators, const std::vector<double>& angles)
{
    CMatrix g = CMatrix::Zero(h.rows(), h.cols());
    for (std::size_t k = 0; k < generators.size(); ++k) {
        g += angles[k] * generators[k];
    }
    const CMatrix v = linalg::expm_hermitian(g, 1.0);
    return v.adjoint() * h * v;
}

}  // namespace

LuResult lu_optimize_qfi(const FullState& state, const LocalHamiltonian& h, int sweeps, Rng rng)
{
    if (!state.is_pure()) {
        throw ArgumentError("lu_optimize_qfi needs a pure state");
    }
    if (state.modes() != h.modes()) {
        throw ArgumentError("local Hamiltonian dimension differs from the state's d");
    }
    if (sweeps < 0) {
        throw ArgumentError("sweeps must be nonnegative");
    }
    const int n = state.particles();
    const CVector& psi = state.amplitudes();
    const std::vector<CMatrix> generators = gell_mann(state.modes());
    const std::size_t n_angles = generators.size();

    // Optimising V_j on the state is the same as optimising V_j^dag h V_j on psi.
    std::vector<std::vector<double>> angles(static_cast<std::size_t>(n), std::vector<double>(n_angles, 0.0));
    std::vector<CVector> terms;
    CVector total = CVector::Zero(psi.size());
    for (int j = 0; j < n; ++j) {
        terms.push_back(apply_site(h.matrix(), j, psi));
        total += terms.back();
    }
    double best = variance_qfi(psi, total);

    LuResult result{best, {best}};
    std::uniform_real_distribution<double> centre(-kPi, kPi);
    const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
    constexpr int kGoldenIterations = 48;

    for (int sweep = 0; sweep < sweeps; ++sweep) {
        for (int j = 0; j < n; ++j) {
            const std::size_t js = static_cast<std::size_t>(j);
            const CVector rest = total - terms[js];
            for (std::size_t k = 0; k < n_angles; ++k) {
                std::vector<double> trial = angles[js];
                auto objective = [&](double t) {
                    trial[k] = t;
                    return variance_qfi(psi, rest + apply_site(rotated(h.matrix(), generators, trial), j, psi));
                };
                double best_angle = angles[js][k];
                double best_value = best;
                for (int r = 0; r < kLuRestarts; ++r) {
                    const double c = centre(rng);
                    double a = c - 0.5 * kPi;
                    double b = c + 0.5 * kPi;
                    double x1 = b - inv_phi * (b - a);
                    double x2 = a + inv_phi * (b - a);
                    double f1 = objective(x1);
                    double f2 = objective(x2);
                    for (int it = 0; it < kGoldenIterations; ++it) {
                        if (f1 > f2) {
                            b = x2;
                            x2 = x1;
                            f2 = f1;
                            x1 = b - inv_phi * (b - a);
                            f1 = objective(x1);
                        } else {
                            a = x1;
                            x1 = x2;
                            f1 = f2;
                            x2 = a + inv_phi * (b - a);
                            f2 = objective(x2);
                        }
                    }
                    const double x = f1 > f2 ? x1 : x2;
                    const double fx = std::max(f1, f2);
                    if (fx > best_value) {
                        best_value = fx;
                        best_angle = x;
                    }
                }
                if (best_value > best) {
                    angles[js][k] = best_angle;
                    best = best_value;
                    terms[js] = apply_site(rotated(h.matrix(), generators, angles[js]), j, psi);
                    total = rest + terms[js];
                }
            }
        }
        result.history.push_back(best);
    }
    result.qfi = best;
    return result;
}

}  // namespace metroscope
