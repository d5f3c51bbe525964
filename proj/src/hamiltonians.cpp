// Copyright 2026 The metroscope Authors
// SPDX-License-Identifier: Apache-2.0

#include "metroscope/hamiltonians.hpp"

#include "metroscope/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace metroscope {

LocalHamiltonian::LocalHamiltonian(const CMatrix& h)
{
    if (h.rows() == 0 || h.rows() != h.cols()) {
        throw ArgumentError("local Hamiltonian must be a nonempty square matrix");
    }
    const double scale = std::max(1.0, linalg::max_abs(h));
    if (linalg::hermiticity_defect(h) > 1e-12 * scale) {
        throw ArgumentError("local Hamiltonian is not Hermitian");
    }
    const Index d = h.rows();
    trace_shift_ = h.trace().real() / static_cast<double>(d);
    matrix_ = 0.5 * (h + h.adjoint());
    matrix_.diagonal().array() -= trace_shift_;
    const linalg::HermitianEigen e = linalg::eigh(matrix_);
    eigenvalues_ = e.values;
    eigenvectors_ = e.vectors;
}

double LocalHamiltonian::operator_norm() const noexcept
{
    return eigenvalues_.cwiseAbs().maxCoeff();
}

double LocalHamiltonian::trace_square() const noexcept
{
    return eigenvalues_.squaredNorm();
}

CollectiveHamiltonian::CollectiveHamiltonian(Space space, int particles, int modes, CMatrix matrix)
    : space_(space), particles_(particles), modes_(modes), matrix_(std::move(matrix))
{
    if (matrix_.rows() != matrix_.cols()) {
        throw ArgumentError("collective Hamiltonian must be square");
    }
    const Index expected = space == Space::full ? full_dim(particles, modes)
                                                : static_cast<Index>(sym_dim(particles, modes));
    if (matrix_.rows() != expected) {
        throw ArgumentError("collective Hamiltonian has the wrong dimension for its space");
    }
}

CollectiveHamiltonian collective_sym(const LocalHamiltonian& h, int particles)
{
    const int d = h.modes();
    const DickeBasis basis(particles, d);
    const CMatrix& hm = h.matrix();
    CMatrix out = CMatrix::Zero(basis.dim(), basis.dim());
    Occupation moved;
    for (Index col = 0; col < basis.dim(); ++col) {
        const Occupation& k = basis.occupation(col);
        for (int i = 0; i < d; ++i) {
            out(col, col) += hm(i, i) * static_cast<double>(k[i]);
        }
        for (int j = 0; j < d; ++j) {
            if (k[j] == 0) {
                continue;
            }
            for (int i = 0; i < d; ++i) {
                if (i == j || hm(i, j) == Complex(0.0)) {
                    continue;
                }
                moved = k;
                --moved[j];
                ++moved[i];
                const double amp = std::sqrt(static_cast<double>(k[j]) * static_cast<double>(k[i] + 1));
                out(basis.index_of(moved), col) += hm(i, j) * amp;
            }
        }
    }
    return CollectiveHamiltonian(Space::symmetric, particles, d, std::move(out));
}

CollectiveHamiltonian collective_full(const LocalHamiltonian& h, int particles)
{
    const int d = h.modes();
    const Index dim = full_dim(particles, d);
    const CMatrix& hm = h.matrix();
    CMatrix out = CMatrix::Zero(dim, dim);
    // particle j occupies digit position j from the left: stride d^{N-1-j}
    Index stride = dim;
    for (int j = 0; j < particles; ++j) {
        stride /= d;
        for (Index x = 0; x < dim; ++x) {
            const Index digit = (x / stride) % d;
            const Index base = x - digit * stride;
            for (Index r = 0; r < d; ++r) {
                out(base + r * stride, x) += hm(r, digit);
            }
        }
    }
    return CollectiveHamiltonian(Space::full, particles, d, std::move(out));
}

CVector apply_collective(const CMatrix& h, int particles, const CVector& psi)
{
    const Index d = h.rows();
    const Index dim = psi.size();
    CVector out = CVector::Zero(dim);
    Index stride = dim;
    for (int j = 0; j < particles; ++j) {
        stride /= d;
        for (Index x = 0; x < dim; ++x) {
            const Complex c = psi(x);
            if (c == Complex(0.0)) {
                continue;
            }
            const Index digit = (x / stride) % d;
            const Index base = x - digit * stride;
            for (Index r = 0; r < d; ++r) {
                out(base + r * stride) += h(r, digit) * c;
            }
        }
    }
    return out;
}

CMatrix pauli(Axis axis)
{
    CMatrix s(2, 2);
    switch (axis) {
    case Axis::x:
        s << 0.0, 1.0, 1.0, 0.0;
        break;
    case Axis::y:
        s << 0.0, -kI, kI, 0.0;
        break;
    case Axis::z:
        s << 1.0, 0.0, 0.0, -1.0;
        break;
    }
    return s;
}

CollectiveHamiltonian angular_momentum(Axis axis, int particles)
{
    return collective_sym(LocalHamiltonian(0.5 * pauli(axis)), particles);
}

CMatrix jx_rotation(int particles, double gamma)
{
    const Index dim = particles + 1;
    RMatrix jx = RMatrix::Zero(dim, dim);
    for (Index n = 0; n + 1 < dim; ++n) {
        const double off = 0.5 * std::sqrt(static_cast<double>((n + 1) * (particles - n)));
        jx(n + 1, n) = off;
        jx(n, n + 1) = off;
    }
    Eigen::SelfAdjointEigenSolver<RMatrix> solver(jx);
    if (solver.info() != Eigen::Success) {
        throw Error("J_x eigendecomposition failed");
    }
    // The spectrum is exactly {m - N/2}; snap to it.
    CVector phases(dim);
    for (Index m = 0; m < dim; ++m) {
        phases(m) = std::exp(-kI * gamma * (static_cast<double>(m) - 0.5 * particles));
    }
    const CMatrix w = solver.eigenvectors().cast<Complex>();
    return w * phases.asDiagonal() * w.adjoint();
}

CMatrix beam_splitter(int particles)
{
    return jx_rotation(particles, 0.5 * kPi);
}

}  // namespace metroscope
