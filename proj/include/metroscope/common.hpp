// Copyright 2026 The metroscope Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace metroscope {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Random engine used throughout. Streams are derived per sample, see haar.hpp.
using Rng = std::mt19937_64;

inline constexpr Complex kI{0.0, 1.0};
inline constexpr double kPi = 3.14159265358979323846;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid argument (bad N, d, non-unitary input, out-of-range parameter).
class ArgumentError : public Error {
public:
    using Error::Error;
};

/// Requested Hilbert space is too large for a dense representation.
class CapacityError : public Error {
public:
    using Error::Error;
};

/// Input violates a domain constraint (e.g. support outside the symmetric subspace).
class DomainError : public Error {
public:
    DomainError(const std::string& what, double diagnostic)
        : Error(what), diagnostic_(diagnostic) {}

    double diagnostic() const noexcept { return diagnostic_; }

private:
    double diagnostic_;
};

/// Numerical failure that cannot be repaired, e.g. a non-removable 0/0 term in a Fisher sum.
class NumericalDomainError : public Error {
public:
    NumericalDomainError(const std::string& what, Index offending)
        : Error(what), offending_(offending) {}

    Index offending_index() const noexcept { return offending_; }

private:
    Index offending_;
};

/// Space tag shared by Hamiltonians, ensembles and analytic averages.
enum class Space { full, symmetric };

}  // namespace metroscope
