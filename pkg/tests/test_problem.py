"""Problem constants, scaled state, activity tests, residual identities."""

import numpy as np
import pytest

from localpr.graph import from_edges
from localpr.oracle import dense_eigs_Q, dense_ppr
from localpr.problem import (Problem, ScaledState, error_vs_oracle,
                             init_state, is_active, is_converged,
                             residual_from_solution, scaled_matvec)


def P(g, alpha=0.1, eps=1e-6, source=0):
    return Problem(graph=g, alpha=alpha, eps=eps, source=source)


# --- derived constants (independent closed forms) ---------------------------

@pytest.mark.parametrize("alpha,c,atilde,omega_star", [
    (0.05, 0.09523809523809523, 0.6345120047368864, 1.4026054841552225),
    (0.1, 0.18181818181818182, 0.5194938532959156, 1.2698738636122384),
    (0.25, 0.4, 0.3333333333333333, 1.1111111111111112),
])
def test_constants(k2, alpha, c, atilde, omega_star):
    p = P(k2, alpha=alpha)
    assert p.c == pytest.approx(c, rel=0, abs=1e-15)
    assert p.atilde == pytest.approx(atilde, rel=0, abs=1e-15)
    assert p.omega_star == pytest.approx(omega_star, rel=1e-14)
    assert p.rho == pytest.approx((1 - alpha) / (1 + alpha), rel=0, abs=1e-16)


def test_omega_star_alternative_form(k2):
    # 1 + ((1-sqrt(a))/(1+sqrt(a)))^2 is the same quantity, up to 1 ulp
    for alpha in (0.05, 0.1, 0.25):
        p = P(k2, alpha=alpha)
        assert p.omega_star == pytest.approx(1.0 + p.atilde ** 2, rel=1e-14)


def test_validation(k2):
    with pytest.raises(ValueError, match="alpha"):
        P(k2, alpha=0.0)
    with pytest.raises(ValueError, match="alpha"):
        P(k2, alpha=1.0)
    with pytest.raises(ValueError, match="alpha"):
        P(k2, alpha=1.5)
    with pytest.raises(ValueError, match="eps"):
        P(k2, eps=0.0)
    with pytest.raises(ValueError, match="eps"):
        P(k2, eps=-1e-3)
    with pytest.raises(ValueError, match="source"):
        P(k2, source=2)
    with pytest.raises(ValueError, match="source"):
        P(k2, source=-1)


# --- state and activity ------------------------------------------------------

def test_init_state(star4):
    p = P(star4, source=2)
    st = init_state(p)
    assert np.array_equal(st.x_tilde, np.zeros(4))
    expect = np.zeros(4)
    expect[2] = p.c
    assert np.array_equal(st.r_tilde, expect)


def test_threshold(star4):
    p = P(star4, alpha=0.1, eps=1e-3)
    assert np.allclose(p.threshold(), p.c * 1e-3 * np.array([3, 1, 1, 1]),
                       rtol=0, atol=1e-18)


def test_is_active_and_converged(k2):
    p = P(k2, eps=0.5)
    st = init_state(p)
    assert is_active(p, st, 0)          # c >= c * 0.5 * 1
    assert not is_active(p, st, 1)
    assert not is_converged(p, st)
    st.r_tilde[0] = 0.0
    assert is_converged(p, st)


def test_activity_threshold_is_degree_weighted(star4):
    p = P(star4, eps=0.3)
    st = ScaledState(np.zeros(4), np.zeros(4))
    st.r_tilde[0] = p.c * 0.3 * 3  # exactly at threshold of the degree-3 hub
    assert is_active(p, st, 0)
    st.r_tilde[0] = np.nextafter(p.c * 0.3 * 3, 0.0)
    assert not is_active(p, st, 0)


def test_negative_residual_is_active(k2):
    p = P(k2, eps=0.5)
    st = ScaledState(np.zeros(2), np.array([-p.c, 0.0]))
    assert is_active(p, st, 0)


# --- operators ----------------------------------------------------------------

def test_scaled_matvec_matches_dense(er50):
    rng = np.random.default_rng(0)
    y = rng.standard_normal(er50.n)
    A = np.zeros((er50.n, er50.n))
    rows = np.repeat(np.arange(er50.n), er50.degrees)
    A[rows, er50.neighbors] = 1.0
    dense = A @ (y / er50.degrees_f)
    assert np.allclose(scaled_matvec(er50, y), dense, rtol=0, atol=1e-12)


def test_residual_from_solution_zero_and_hand(k2):
    p = P(k2)
    assert np.array_equal(residual_from_solution(p, np.zeros(2)),
                          np.array([p.c, 0.0]))
    # x_tilde = e_0: r = c*e_0 - e_0 + rho * (A D^{-1}) e_0
    r = residual_from_solution(p, np.array([1.0, 0.0]))
    assert r[0] == pytest.approx(p.c - 1.0, abs=1e-15)
    assert r[1] == pytest.approx(p.rho, abs=1e-15)


def test_residual_of_exact_solution_vanishes(triangle):
    p = P(triangle, alpha=0.25, source=1)
    pi = dense_ppr(triangle, 0.25, 1)
    assert np.max(np.abs(residual_from_solution(p, pi))) < 1e-14


def test_error_vs_oracle_degree_normalized(star4):
    p = P(star4)
    pi_hat = np.array([0.03, 0.0, 0.0, 0.0])
    pi_star = np.array([0.0, 0.02, 0.0, 0.0])
    # |0.03|/3 = 0.01 at the hub, |0.02|/1 = 0.02 at the leaf
    assert error_vs_oracle(p, pi_hat, pi_star) == pytest.approx(0.02)


# --- spectrum of the symmetric operator --------------------------------------

@pytest.mark.parametrize("alpha", [0.05, 0.1, 0.25])
def test_q_spectrum_interval(er200, alpha):
    """Eigenvalues lie in [2 alpha/(1+alpha), 2/(1+alpha)]; the lower edge is
    attained (the normalized adjacency always has eigenvalue 1)."""
    eigs = dense_eigs_Q(er200, alpha)
    lo = 2 * alpha / (1 + alpha)
    hi = 2 / (1 + alpha)
    assert eigs.min() >= lo - 1e-12
    assert eigs.max() <= hi + 1e-12
    assert eigs.min() == pytest.approx(lo, abs=1e-12)


def test_stop_condition_implies_oracle_error(er50):
    """The degree-normalized stop condition transfers to true error <= eps."""
    from localpr.local_solvers import loc_sor
    p = P(er50, alpha=0.1, eps=1e-6, source=7)
    sol = loc_sor(p, "opt")
    assert is_converged(p, ScaledState(sol.pi_hat, sol.r_tilde))
    err = error_vs_oracle(p, sol.pi_hat, dense_ppr(er50, 0.1, 7))
    assert err <= 1e-6
