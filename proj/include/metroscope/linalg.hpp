// Copyright 2026 The metroscope Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "metroscope/common.hpp"

namespace metroscope::linalg {

/// Ascending eigenvalues with matching eigenvector columns.
struct HermitianEigen {
    RVector values;
    CMatrix vectors;
};

HermitianEigen eigh(const CMatrix& hermitian);
RVector eigvalsh(const CMatrix& hermitian);

/// exp(-i t H) for Hermitian H via its eigendecomposition.
CMatrix expm_hermitian(const CMatrix& hermitian, double t);

/// Principal square root of a PSD matrix; tiny negative eigenvalues are clamped to zero.
CMatrix sqrtm_psd(const CMatrix& psd);

/// max |U^dag U - 1| entrywise
double unitarity_defect(const CMatrix& u);
/// max |A - A^dag| entrywise
double hermiticity_defect(const CMatrix& a);
double max_abs(const CMatrix& a);

CMatrix projector(const CVector& v);
CMatrix commutator(const CMatrix& a, const CMatrix& b);

/// Trace norm, sum of singular values.
double trace_norm(const CMatrix& a);

/// Kronecker product of two dense complex matrices.
CMatrix kron(const CMatrix& a, const CMatrix& b);

}  // namespace metroscope::linalg
