import math

import numpy as np
import pytest

import vnelab


def binary_entropy(lam):
    return sum(-t * math.log(t) for t in (lam, 1 - lam) if t > 0)


def test_eta_and_tau_eta():
    assert vnelab.eta(0.0) == 0.0
    assert vnelab.eta(0.5) == pytest.approx(0.5 * math.log(2))
    assert vnelab.tau_eta(np.diag([0.25, 0.75]).astype(complex)) == pytest.approx(0.28116757230940415, abs=1e-14)


def test_relative_entropy():
    rho = np.diag([0.5, 0.5]).astype(complex)
    sigma = np.diag([0.25, 0.75]).astype(complex)
    assert vnelab.relative_entropy(rho, sigma) == pytest.approx(0.14384103622589045, abs=1e-12)


def test_u_lambda_bracket():
    u = vnelab.clock_shift_u(2, 0.3)
    assert np.allclose(u @ u.conj().T, np.eye(4))
    assert vnelab.fourier_weights(2, u) == pytest.approx([0.3, 0.7])
    b = vnelab.bracket_h(2, u)
    assert b["upper"] == pytest.approx(binary_entropy(0.3), abs=1e-10)
    assert b["lower"] >= binary_entropy(0.3) - 1e-3
    assert sum(b["witness"]) == pytest.approx(np.eye(4))


def test_flat_unitary_entropy():
    for n in (2, 3, 4):
        u = vnelab.clock_shift_u(n)
        assert vnelab.inner_automorphism_entropy(n, u) == pytest.approx(math.log(n), abs=1e-12)


def test_unistochastic():
    t = 0.4
    rot = np.array([[math.cos(t), -math.sin(t)], [math.sin(t), math.cos(t)]], dtype=complex)
    assert vnelab.unistochastic_entropy(rot) == pytest.approx(0.4255547592869222, abs=1e-12)
    assert vnelab.abelian_fourier_entropy_bound(rot) == pytest.approx(0.4255547592869222, abs=1e-12)


def test_conditional_expectation_and_commuting_square():
    e = [np.diag([1.0, 0.0]).astype(complex), np.diag([0.0, 1.0]).astype(complex)]
    x = np.array([[1, 2], [3, 4]], dtype=complex)
    assert np.allclose(vnelab.conditional_expectation(e, x), np.diag([1, 4]))
    assert vnelab.commuting_square_defect(e, [np.eye(2, dtype=complex)]) < 1e-12


def test_run_scenario():
    ids = [s[0] for s in vnelab.scenarios()]
    assert "thm-3-2-2" in ids
    report = vnelab.run_scenario("thm-3-2-2", n=2, metadata=False)
    assert report["verdict"] == "pass"
    assert report["units"] == "nats"
    assert "metadata" not in report
    assert report["cases"][0]["lower"] == pytest.approx(math.log(2), abs=1e-9)
    with pytest.raises(ValueError):
        vnelab.run_scenario("no-such-scenario")
