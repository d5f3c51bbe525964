// Copyright 2026 The metroscope Authors
// SPDX-License-Identifier: Apache-2.0

#include "metroscope/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace metroscope::linalg {

HermitianEigen eigh(const CMatrix& hermitian)
{
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(hermitian);
    if (solver.info() != Eigen::Success) {
        throw Error("Hermitian eigensolver failed to converge");
    }
    return {solver.eigenvalues(), solver.eigenvectors()};
}

RVector eigvalsh(const CMatrix& hermitian)
{
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(hermitian, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw Error("Hermitian eigensolver failed to converge");
    }
    return solver.eigenvalues();
}

CMatrix expm_hermitian(const CMatrix& hermitian, double t)
{
    const HermitianEigen e = eigh(hermitian);
    CVector phases(e.values.size());
    for (Index i = 0; i < e.values.size(); ++i) {
        phases(i) = std::exp(-kI * t * e.values(i));
    }
    return e.vectors * phases.asDiagonal() * e.vectors.adjoint();
}

CMatrix sqrtm_psd(const CMatrix& psd)
{
    const HermitianEigen e = eigh(psd);
    RVector roots = e.values.unaryExpr([](double x) { return std::sqrt(std::max(x, 0.0)); });
    return e.vectors * roots.cast<Complex>().asDiagonal() * e.vectors.adjoint();
}

double unitarity_defect(const CMatrix& u)
{
    if (u.rows() != u.cols()) {
        return INFINITY;
    }
    return max_abs(u.adjoint() * u - CMatrix::Identity(u.rows(), u.cols()));
}

double hermiticity_defect(const CMatrix& a)
{
    if (a.rows() != a.cols()) {
        return INFINITY;
    }
    return max_abs(a - a.adjoint());
}

double max_abs(const CMatrix& a)
{
    return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

CMatrix projector(const CVector& v)
{
    return v * v.adjoint();
}

CMatrix commutator(const CMatrix& a, const CMatrix& b)
{
    return a * b - b * a;
}

double trace_norm(const CMatrix& a)
{
    Eigen::JacobiSVD<CMatrix> svd(a);
    return svd.singularValues().sum();
}

CMatrix kron(const CMatrix& a, const CMatrix& b)
{
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i) {
        for (Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

}  // namespace metroscope::linalg
