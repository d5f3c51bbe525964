// Copyright 2026 The metroscope Authors
// SPDX-License-Identifier: Apache-2.0

// Helpers shared by the unit and acceptance tests. The oracles here are built
// from first principles (bit strings, Kronecker products, explicit sums) and
// deliberately avoid the library routines they are compared against.

#pragma once

#include "metroscope/common.hpp"

#include <bit>
#include <cmath>
#include <random>

namespace metroscope::test {

inline CVector random_vector(Index dim, Rng& rng)
{
    std::normal_distribution<double> g;
    CVector v(dim);
    for (Index i = 0; i < dim; ++i) {
        v(i) = Complex(g(rng), g(rng));
    }
    return v.normalized();
}

inline CMatrix random_hermitian(Index dim, Rng& rng)
{
    std::normal_distribution<double> g;
    CMatrix a(dim, dim);
    for (Index j = 0; j < dim; ++j) {
        for (Index i = 0; i < dim; ++i) {
            a(i, j) = Complex(g(rng), g(rng));
        }
    }
    return 0.5 * (a + a.adjoint());
}

/// Random full-rank density matrix A A^dag / tr.
inline CMatrix random_density(Index dim, Rng& rng, Index rank = -1)
{
    if (rank < 0) {
        rank = dim;
    }
    std::normal_distribution<double> g;
    CMatrix a(dim, rank);
    for (Index j = 0; j < rank; ++j) {
        for (Index i = 0; i < dim; ++i) {
            a(i, j) = Complex(g(rng), g(rng));
        }
    }
    CMatrix rho = a * a.adjoint();
    rho /= rho.trace().real();
    return 0.5 * (rho + rho.adjoint());
}

/// 2x2 unitary from a Gram-Schmidt'd Gaussian matrix.
inline CMatrix random_qubit_unitary(Rng& rng)
{
    std::normal_distribution<double> g;
    CMatrix a(2, 2);
    for (Index j = 0; j < 2; ++j) {
        for (Index i = 0; i < 2; ++i) {
            a(i, j) = Complex(g(rng), g(rng));
        }
    }
    CVector c0 = a.col(0).normalized();
    CVector c1 = a.col(1) - c0 * c0.dot(a.col(1));
    c1.normalize();
    CMatrix u(2, 2);
    u.col(0) = c0;
    u.col(1) = c1;
    return u;
}

inline CMatrix kron_power(const CMatrix& v, int n)
{
    CMatrix out = CMatrix::Identity(1, 1);
    for (int j = 0; j < n; ++j) {
        CMatrix next(out.rows() * v.rows(), out.cols() * v.cols());
        for (Index a = 0; a < out.rows(); ++a) {
            for (Index b = 0; b < out.cols(); ++b) {
                next.block(a * v.rows(), b * v.cols(), v.rows(), v.cols()) = out(a, b) * v;
            }
        }
        out = next;
    }
    return out;
}

/// Qubit-picture Dicke isometry: column n is the uniform superposition of the
/// N-bit strings containing exactly n zeros (n particles in mode 0).
inline CMatrix qubit_dicke_isometry(int n_particles)
{
    const Index dim = Index{1} << n_particles;
    CMatrix w = CMatrix::Zero(dim, n_particles + 1);
    for (Index x = 0; x < dim; ++x) {
        const int ones = std::popcount(static_cast<unsigned long long>(x));
        w(x, n_particles - ones) = 1.0;
    }
    for (Index c = 0; c <= n_particles; ++c) {
        w.col(c).normalize();
    }
    return w;
}

/// Sum over single-site copies of h on (C^2)^{\otimes N}, via Kronecker products.
inline CMatrix kron_collective(const CMatrix& h, int n_particles)
{
    const Index d = h.rows();
    CMatrix total = CMatrix::Zero(1, 1);
    for (int site = 0; site < n_particles; ++site) {
        CMatrix term = CMatrix::Identity(1, 1);
        for (int j = 0; j < n_particles; ++j) {
            const CMatrix f = j == site ? h : CMatrix(CMatrix::Identity(d, d));
            CMatrix next(term.rows() * d, term.cols() * d);
            for (Index a = 0; a < term.rows(); ++a) {
                for (Index b = 0; b < term.cols(); ++b) {
                    next.block(a * d, b * d, d, d) = term(a, b) * f;
                }
            }
            term = next;
        }
        total = site == 0 ? term : CMatrix(total + term);
    }
    return total;
}

/// Partial trace over the last k of n qubits by explicit index sums.
inline CMatrix trace_last_qubits(const CMatrix& rho, int n, int k)
{
    const Index traced = Index{1} << k;
    const Index kept = Index{1} << (n - k);
    CMatrix out = CMatrix::Zero(kept, kept);
    for (Index a = 0; a < kept; ++a) {
        for (Index c = 0; c < kept; ++c) {
            for (Index b = 0; b < traced; ++b) {
                out(a, c) += rho(a * traced + b, c * traced + b);
            }
        }
    }
    return out;
}

inline double binom(int n, int k)
{
    if (k < 0 || k > n) {
        return 0.0;
    }
    double r = 1.0;
    for (int i = 0; i < k; ++i) {
        r = r * (n - i) / (i + 1);
    }
    return r;
}

/// Amplitudes sqrt(C(N, n)) / 2^{N/2}: the state |+>^{\otimes N} in the Dicke basis.
inline CVector balanced_amplitudes(int n_particles)
{
    CVector a(n_particles + 1);
    for (int n = 0; n <= n_particles; ++n) {
        a(n) = std::sqrt(binom(n_particles, n) / std::pow(2.0, n_particles));
    }
    return a;
}

inline CVector ghz_amplitudes(int n_particles)
{
    CVector a = CVector::Zero(n_particles + 1);
    a(0) = a(n_particles) = 1.0 / std::sqrt(2.0);
    return a;
}

inline double max_abs(const CMatrix& a)
{
    return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

}  // namespace metroscope::test
