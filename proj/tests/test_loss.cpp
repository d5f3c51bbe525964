// Copyright 2026 The metroscope Authors
// SPDX-License-Identifier: Apache-2.0

#include "metroscope/fisher.hpp"
#include "metroscope/haar.hpp"
#include "metroscope/linalg.hpp"
#include "metroscope/loss.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace metroscope;
using test::max_abs;

TEST_CASE("k = 0 returns the input as a density matrix")
{
    Rng rng(1);
    const DickeBasis basis(7, 2);
    const CVector psi = test::random_vector(8, rng);
    const SymmetricState out = partial_trace_dicke(SymmetricState::pure(basis, psi), 0);
    CHECK(max_abs(out.density_matrix() - psi * psi.adjoint()) < 1e-14);
}

TEST_CASE("GHZ loses all phase information after one loss")
{
    for (int n : {2, 5, 30, 200}) {
        const SymmetricState ghz = SymmetricState::pure(DickeBasis(n, 2), test::ghz_amplitudes(n));
        const SymmetricState out = partial_trace_dicke(ghz, 1);
        CMatrix expected = CMatrix::Zero(n, n);
        expected(0, 0) = expected(n - 1, n - 1) = 0.5;
        CHECK(max_abs(out.density_matrix() - expected) < 1e-14);
        CHECK(qfi(out, angular_momentum(Axis::z, n - 1)) <= 1e-10);
    }
}

TEST_CASE("Dicke state partial trace is hypergeometric")
{
    for (int n : {4, 9, 40}) {
        for (int m = 0; m <= n; m += std::max(1, n / 5)) {
            for (int k : {1, 2, 3}) {
                const CMatrix out = partial_trace_dicke(SymmetricState::dicke(n, m), k).density_matrix();
                for (int i = 0; i <= n - k; ++i) {
                    for (int j = 0; j <= n - k; ++j) {
                        double expected = 0.0;
                        if (i == j) {
                            const int u = m - i;
                            expected = test::binom(k, u) * test::binom(n - k, i) / test::binom(n, m);
                        }
                        CHECK(std::abs(out(i, j) - expected) < 1e-12);
                    }
                }
            }
        }
    }
}

TEST_CASE("partial_trace_dicke matches the qubit partial trace")
{
    Rng rng(2);
    double worst = 0.0;
    for (int n = 1; n <= 8; ++n) {
        const DickeBasis basis(n, 2);
        const CMatrix w = test::qubit_dicke_isometry(n);
        for (int trial = 0; trial < 50; ++trial) {
            const bool pure = trial % 2 == 0;
            const SymmetricState s = pure ? SymmetricState::pure(basis, test::random_vector(n + 1, rng))
                                          : SymmetricState::density(basis, test::random_density(n + 1, rng, 2));
            const CMatrix full = w * s.to_density() * w.adjoint();
            for (int k = 0; k <= n; ++k) {
                const CMatrix reduced = test::trace_last_qubits(full, n, k);
                const CMatrix sym = partial_trace_dicke(s, k).density_matrix();
                const CMatrix wk = test::qubit_dicke_isometry(n - k);
                worst = std::max(worst, max_abs(wk * sym * wk.adjoint() - reduced));
                // the library's brute-force route agrees with this one
                const FullState lib = partial_trace_bruteforce(dicke_embed(s), k);
                worst = std::max(worst, max_abs(lib.to_density() - reduced));
            }
        }
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("brute-force partial trace")
{
    Rng rng(3);
    for (int n : {1, 3, 6}) {
        const Index dim = Index{1} << n;
        const FullState pure = FullState::pure(n, 2, test::random_vector(dim, rng));
        const FullState all = partial_trace_bruteforce(pure, n);
        CHECK(all.dim() == 1);
        CHECK(std::abs(all.density_matrix()(0, 0) - 1.0) < 1e-12);
        const FullState mixed = FullState::density(n, 2, test::random_density(dim, rng));
        for (int k = 0; k <= n; ++k) {
            CHECK(std::abs(partial_trace_bruteforce(mixed, k).density_matrix().trace() - 1.0) < 1e-12);
        }
    }
    const FullState qutrits = FullState::pure(3, 3, test::random_vector(27, rng));
    CHECK(partial_trace_bruteforce(qutrits, 1).dim() == 9);
}

TEST_CASE("partial trace preserves trace, positivity and fidelity order")
{
    Rng rng(4);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 3 + trial % 20;
        const int k = 1 + trial % 3;
        const DickeBasis basis(n, 2);
        const SymmetricState rho = SymmetricState::density(basis, test::random_density(n + 1, rng, 3));
        const SymmetricState sigma = SymmetricState::pure(basis, test::random_vector(n + 1, rng));
        const SymmetricState r = partial_trace_dicke(rho, k);
        const SymmetricState s = partial_trace_dicke(sigma, k);
        CHECK(std::abs(r.density_matrix().trace() - 1.0) < 1e-12);
        CHECK(linalg::eigvalsh(r.density_matrix()).minCoeff() >= -1e-10);
        CHECK(fidelity_bures(r.density_matrix(), s.density_matrix()).fidelity >=
              fidelity_bures(rho.density_matrix(), sigma.to_density()).fidelity - 1e-9);
    }
}

TEST_CASE("beam-splitter loss edge cases")
{
    Rng rng(5);
    const int n = 6;
    const DickeBasis basis(n, 2);
    const CVector psi = test::random_vector(n + 1, rng);
    const SymmetricState s = SymmetricState::pure(basis, psi);

    const LossBlocks none = bs_loss(s, 1.0, 1.0);
    REQUIRE(none.blocks.size() == 1);
    CHECK(none.blocks[0].lost == 0);
    CHECK(none.blocks[0].probability == doctest::Approx(1.0));
    CHECK(max_abs(none.blocks[0].state.density_matrix() - psi * psi.adjoint()) < 1e-12);

    const LossBlocks all = bs_loss(s, 0.0, 0.0);
    REQUIRE(all.blocks.size() == 1);
    CHECK(all.blocks[0].lost == n);
    CHECK(all.blocks[0].probability == doctest::Approx(1.0));
    CHECK(all.blocks[0].state.basis().dim() == 1);

    // one photon, alpha |1,0> + beta |0,1>
    CVector one(2);
    one << Complex(0.6, 0.0), Complex(0.0, 0.8);
    const double eta = 0.37;
    const LossBlocks single = bs_loss(SymmetricState::pure(DickeBasis(1, 2), one), eta, eta);
    REQUIRE(single.blocks.size() == 2);
    CHECK(single.blocks[0].probability == doctest::Approx(eta));
    CHECK(max_abs(single.blocks[0].state.density_matrix() - one * one.adjoint()) < 1e-12);
    CHECK(single.blocks[1].probability == doctest::Approx(1.0 - eta));
    CHECK(single.total_probability() == doctest::Approx(1.0));

    CHECK_THROWS_AS(bs_loss(s, 1.2, 0.5), ArgumentError);
    CHECK_THROWS_AS(bs_loss(SymmetricState::density(basis, psi * psi.adjoint()), 0.5, 0.5), ArgumentError);
}

TEST_CASE("beam-splitter loss equals weighted partial traces")
{
    Rng rng(6);
    const int n = 12;
    const DickeBasis basis(n, 2);
    for (int trial = 0; trial < 5; ++trial) {
        const SymmetricState s = SymmetricState::pure(basis, test::random_vector(n + 1, rng));
        for (int e = 1; e <= 9; ++e) {
            const double eta = 0.1 * e;
            const BsEquivalenceReport r = verify_bs_trace_equivalence(s, eta, 1e-12);
            CHECK(r.max_deviation <= 1e-12);
            CHECK(r.within_tolerance);
            CHECK(bs_loss(s, eta, eta).total_probability() == doctest::Approx(1.0).epsilon(1e-13));
        }
        const LossBlocks lossless = bs_loss(s, 1.0, 1.0);
        CHECK(lossless.blocks.front().probability == doctest::Approx(1.0));
        CHECK(verify_bs_trace_equivalence(s, 1.0, 1e-12).within_tolerance);
        // unequal transmissivities still give a normalised mixture
        CHECK(bs_loss(s, 0.2, 0.9).total_probability() == doctest::Approx(1.0).epsilon(1e-13));
    }
}

TEST_CASE("mean QFI after loss lies between the bounds")
{
    const int n = 16;
    const DickeBasis basis(n, 2);
    for (int k : {1, 2}) {
        const CollectiveHamiltonian jz = angular_momentum(Axis::z, n - k);
        const McResult r = mc_estimate(
            [&](Index, Rng& rng) {
                return qfi(partial_trace_dicke(SymmetricState::pure(basis, haar_state(n + 1, rng)), k), jz);
            },
            600, 50 + k);
        const Bounds b = loss_avg_bounds(n, k, 1.0);
        CHECK(r.mean >= b.lower - 3.0 * r.std_error);
        CHECK(r.mean <= b.upper + 3.0 * r.std_error);
    }
}
