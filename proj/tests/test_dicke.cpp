// Copyright 2026 The metroscope Authors
// SPDX-License-Identifier: Apache-2.0

#include "metroscope/dicke.hpp"
#include "metroscope/linalg.hpp"
#include "support.hpp"

#include <doctest.h>

#include <set>

using namespace metroscope;
using test::max_abs;

TEST_CASE("sym_dim small cases")
{
    CHECK(sym_dim(2, 2) == 3);
    CHECK(sym_dim(3, 3) == 10);
    for (int n = 0; n < 12; ++n) {
        CHECK(sym_dim(n, 1) == 1);
    }
    CHECK(sym_dim(100, 2) == 101);
    CHECK_THROWS_AS(sym_dim(-1, 2), ArgumentError);
    CHECK_THROWS_AS(sym_dim(3, 0), ArgumentError);
    CHECK_THROWS_AS(sym_dim(1000, 1000), CapacityError);
}

TEST_CASE("binomials: exact, log-gamma and pascal agree")
{
    for (int n = 0; n <= 60; ++n) {
        for (int k = 0; k <= n; ++k) {
            const double pascal = test::binom(n, k);
            CHECK(binomial(n, k) == doctest::Approx(pascal).epsilon(1e-12));
            CHECK(std::exp(log_binomial(n, k)) == doctest::Approx(pascal).epsilon(1e-10));
        }
    }
    CHECK(binomial(30, 15) == 155117520.0);
    CHECK(std::isinf(log_binomial(5, 6)));
}

TEST_CASE("Dicke basis enumerates each occupation once")
{
    for (auto [n, d] : {std::pair{4, 2}, {3, 3}, {5, 4}, {6, 3}}) {
        const DickeBasis basis(n, d);
        CHECK(static_cast<std::uint64_t>(basis.dim()) == sym_dim(n, d));
        std::set<Occupation> seen;
        for (Index i = 0; i < basis.dim(); ++i) {
            const Occupation& k = basis.occupation(i);
            int total = 0;
            for (int x : k) {
                CHECK(x >= 0);
                total += x;
            }
            CHECK(total == n);
            CHECK(seen.insert(k).second);
            CHECK(basis.index_of(k) == i);
        }
    }
    const DickeBasis two(5, 2);
    for (Index n = 0; n <= 5; ++n) {
        CHECK(two.occupation(n) == Occupation{static_cast<int>(n), static_cast<int>(5 - n)});
    }
}

TEST_CASE("state validation")
{
    const DickeBasis basis(3, 2);
    CVector v = CVector::Zero(4);
    v(0) = 1.0;
    CHECK_NOTHROW(SymmetricState::pure(basis, v));
    v(1) = 1e-4;
    CHECK_THROWS_AS(SymmetricState::pure(basis, v), ArgumentError);
    CHECK_THROWS_AS(SymmetricState::pure(basis, CVector::Zero(3)), ArgumentError);

    CMatrix rho = CMatrix::Identity(4, 4) / 4.0;
    CHECK_NOTHROW(SymmetricState::density(basis, rho));
    CMatrix bad = rho;
    bad(0, 1) = 0.1;
    CHECK_THROWS_AS(SymmetricState::density(basis, bad), ArgumentError);
    CMatrix negative = CMatrix::Zero(4, 4);
    negative(0, 0) = 1.5;
    negative(1, 1) = -0.5;
    CHECK_THROWS_AS(SymmetricState::density(basis, negative), ArgumentError);
    CHECK_THROWS_AS(SymmetricState::density(basis, 2.0 * rho), ArgumentError);
}

TEST_CASE("full_dim capacity")
{
    CHECK(full_dim(12, 2) == 4096);
    CHECK(full_dim(7, 3) == 2187);
    CHECK_THROWS_AS(full_dim(13, 2), CapacityError);
    CHECK_THROWS_AS(full_dim(20, 2), CapacityError);
}

TEST_CASE("dicke_embed on two qubits")
{
    // |D_0> has both particles in mode 1, |D_2> both in mode 0.
    const FullState d0 = dicke_embed(SymmetricState::dicke(2, 0));
    CHECK(std::abs(d0.amplitudes()(3) - 1.0) < 1e-15);
    const FullState d2 = dicke_embed(SymmetricState::dicke(2, 2));
    CHECK(std::abs(d2.amplitudes()(0) - 1.0) < 1e-15);
    const FullState d1 = dicke_embed(SymmetricState::dicke(2, 1));
    CHECK(std::abs(d1.amplitudes()(1) - 1.0 / std::sqrt(2.0)) < 1e-15);
    CHECK(std::abs(d1.amplitudes()(2) - 1.0 / std::sqrt(2.0)) < 1e-15);
    CHECK(std::abs(d1.amplitudes()(0)) < 1e-15);
    CHECK(std::abs(d1.amplitudes()(3)) < 1e-15);
}

TEST_CASE("dicke_project")
{
    CVector sym = CVector::Zero(4);
    sym(1) = sym(2) = 1.0 / std::sqrt(2.0);
    const SymmetricState p = dicke_project(FullState::pure(2, 2, sym));
    CHECK(std::abs(p.amplitudes()(1) - 1.0) < 1e-12);

    CVector anti = CVector::Zero(4);
    anti(1) = 1.0 / std::sqrt(2.0);
    anti(2) = -1.0 / std::sqrt(2.0);
    CHECK_THROWS_AS(dicke_project(FullState::pure(2, 2, anti)), DomainError);
    try {
        dicke_project(FullState::pure(2, 2, anti));
    } catch (const DomainError& e) {
        CHECK(e.diagnostic() == doctest::Approx(1.0));
    }

    CVector zz = CVector::Zero(4);
    zz(0) = 1.0;
    CHECK(std::abs(dicke_project(FullState::pure(2, 2, zz)).amplitudes()(2) - 1.0) < 1e-12);
}

TEST_CASE("embedding matches the bit-string oracle and is an isometry")
{
    Rng rng(101);
    for (int n = 1; n <= 10; ++n) {
        const DickeBasis basis(n, 2);
        const CMatrix oracle = test::qubit_dicke_isometry(n);
        CHECK(max_abs(dicke_isometry(basis) - oracle) < 1e-12);
        const CVector a = test::random_vector(n + 1, rng);
        const CVector b = test::random_vector(n + 1, rng);
        const FullState ea = dicke_embed(SymmetricState::pure(basis, a));
        const FullState eb = dicke_embed(SymmetricState::pure(basis, b));
        CHECK(std::abs(ea.amplitudes().dot(eb.amplitudes()) - a.dot(b)) < 1e-12);
        const SymmetricState back = dicke_project(ea);
        CHECK(max_abs(back.amplitudes() - a) < 1e-12);

        const CMatrix rho = test::random_density(n + 1, rng);
        const SymmetricState mixed = SymmetricState::density(basis, rho);
        CHECK(max_abs(dicke_project(dicke_embed(mixed)).density_matrix() - rho) < 1e-12);
    }
}

TEST_CASE("sym_power_lift: identity and diagonal phases")
{
    for (int n : {1, 2, 5, 17, 40}) {
        CHECK(max_abs(sym_power_lift(CMatrix::Identity(2, 2), n) - CMatrix::Identity(n + 1, n + 1)) < 1e-12);
        const double theta = 0.731;
        CMatrix v = CMatrix::Zero(2, 2);
        v(0, 0) = std::exp(-kI * theta / 2.0);
        v(1, 1) = std::exp(kI * theta / 2.0);
        const CMatrix lift = sym_power_lift(v, n);
        for (int a = 0; a <= n; ++a) {
            for (int b = 0; b <= n; ++b) {
                const Complex expected = a == b ? std::exp(-kI * theta * (a - n / 2.0)) : Complex(0.0);
                CHECK(std::abs(lift(a, b) - expected) < 1e-12);
            }
        }
    }
}

TEST_CASE("sym_power_lift matches the tensor-power oracle")
{
    Rng rng(202);
    for (int n = 1; n <= 6; ++n) {
        const CMatrix w = test::qubit_dicke_isometry(n);
        for (int trial = 0; trial < 5; ++trial) {
            const CMatrix v = test::random_qubit_unitary(rng);
            const CMatrix oracle = w.adjoint() * test::kron_power(v, n) * w;
            CHECK(max_abs(sym_power_lift(v, n) - oracle) < 1e-12);
            CHECK(max_abs(detail::sym_power_lift_binomial(v, n) - oracle) < 1e-12);
            CHECK(max_abs(detail::sym_power_lift_euler(v, n) - oracle) < 1e-12);
        }
    }
}

TEST_CASE("binomial and Euler lifts agree")
{
    Rng rng(303);
    for (int n = 8; n <= detail::kBinomialLiftMaxParticles; n += 4) {
        for (int trial = 0; trial < 4; ++trial) {
            const CMatrix v = test::random_qubit_unitary(rng);
            CHECK(max_abs(detail::sym_power_lift_binomial(v, n) - detail::sym_power_lift_euler(v, n)) < 1e-10);
        }
    }
}

TEST_CASE("sym_power_lift is a unitary homomorphism")
{
    Rng rng(404);
    for (int n : {1, 3, 8, 13, 20}) {
        for (int trial = 0; trial < 4; ++trial) {
            const CMatrix v = test::random_qubit_unitary(rng);
            const CMatrix w = test::random_qubit_unitary(rng);
            const CMatrix lv = sym_power_lift(v, n);
            CHECK(linalg::unitarity_defect(lv) < 1e-12);
            CHECK(max_abs(sym_power_lift(v * w, n) - lv * sym_power_lift(w, n)) < 1e-10);
        }
    }
    for (int n : {60, 200}) {
        const CMatrix v = test::random_qubit_unitary(rng);
        const CMatrix w = test::random_qubit_unitary(rng);
        CHECK(linalg::unitarity_defect(sym_power_lift(v, n)) < 1e-12);
        CHECK(max_abs(sym_power_lift(v * w, n) - sym_power_lift(v, n) * sym_power_lift(w, n)) < 1e-10);
    }
    CHECK_THROWS_AS(sym_power_lift(2.0 * CMatrix::Identity(2, 2), 3), ArgumentError);
}
