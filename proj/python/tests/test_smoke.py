import math

import numpy as np
import pytest

import metroscope as ms


def balanced(n):
    return np.sqrt([math.comb(n, k) / 2.0**n for k in range(n + 1)]).astype(complex)


def test_dimensions():
    assert ms.sym_dim(10, 2) == 11
    assert ms.sym_dim(3, 3) == 10
    assert ms.full_dim(4, 3) == 81


def test_qfi_of_textbook_states():
    n = 12
    jz = ms.angular_momentum("z", n)
    ghz = np.zeros(n + 1, complex)
    ghz[0] = ghz[n] = 1 / math.sqrt(2)
    assert ms.qfi(ghz, jz) == pytest.approx(n * n)
    assert ms.qfi(balanced(n), jz) == pytest.approx(n)
    assert ms.qfi(np.outer(ghz, ghz.conj()), jz) == pytest.approx(n * n)


def test_mach_zehnder():
    n = 8
    plus = balanced(n)
    p = ms.mz_probabilities(plus, 0.7)
    assert p.sum() == pytest.approx(1.0)
    assert ms.mz_fi(plus, 0.7) == pytest.approx(n)
    assert ms.mz_fi(np.outer(plus, plus.conj()), 0.7) == pytest.approx(n)


def test_haar_and_loss():
    n = 10
    psi = ms.haar_state(n + 1, seed=3)
    assert np.linalg.norm(psi) == pytest.approx(1.0)
    assert np.array_equal(psi, ms.haar_state(n + 1, seed=3))
    u = ms.haar_unitary(5, seed=1)
    assert np.allclose(u @ u.conj().T, np.eye(5), atol=1e-12)
    rho = ms.partial_trace(psi, 2)
    assert rho.shape == (n - 1, n - 1)
    assert np.trace(rho).real == pytest.approx(1.0)
    lo, hi = ms.loss_avg_bounds(n, 2)
    assert lo < hi


def test_lift_and_bounds():
    v = ms.haar_unitary(2, seed=4)
    lift = ms.sym_power_lift(v, 6)
    assert np.allclose(lift @ lift.conj().T, np.eye(7), atol=1e-12)
    lo, hi = ms.fi_avg_bounds(100)
    assert lo == pytest.approx(244.727749, rel=1e-8)
    assert hi == pytest.approx(2803.049902, rel=1e-8)
    assert ms.lambda_of_spectrum([1.0, 0.0, 0.0]) == pytest.approx(1.0)
    assert ms.lambda_of_spectrum([0.25] * 4) == pytest.approx(0.0)


def test_circuits():
    psi, gates = ms.random_circuit_state(20, 15, "polarized", seed=9)
    assert len(gates) == 15
    assert np.linalg.norm(psi) == pytest.approx(1.0)
    again, _ = ms.random_circuit_state(20, 15, "polarized", seed=9)
    assert np.array_equal(psi, again)


def test_errors():
    with pytest.raises(ms.ArgumentError):
        ms.angular_momentum("w", 3)
    with pytest.raises(ValueError):
        ms.qfi(np.ones(4, complex) / 2, ms.angular_momentum("z", 2))
    with pytest.raises(ms.Error):
        ms.run_experiment("avg-qfi", space="full", N=20)


def test_experiment():
    assert "bs-equiv" in ms.experiment_names()
    assert ms.experiment_defaults("bs-equiv")["N"] == 12
    r = ms.run_experiment("bs-equiv", workers=1, N=6, states=1)
    assert r["columns"][0] == "state"
    assert len(r["rows"]) == 9
    assert all(c["passed"] for c in r["checks"])
    assert r["csv"].startswith("state,eta,")
    with pytest.raises(ms.ArgumentError):
        ms.run_experiment("bs-equiv", bogus=1)
