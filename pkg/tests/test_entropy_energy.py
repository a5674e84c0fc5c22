import itertools
import math

import mpmath
import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from chromlab.errors import HypothesisError
from chromlab.entropy_energy import (
    NEG_XLOGX,
    HFunction,
    Psi,
    b_rho,
    check_stochastic,
    counterexample_check,
    counterexample_matrix,
    energy,
    entropy,
    eta,
    expo_gap_scan,
    expo_gap_slack,
    f_of_r,
    f_prime,
    g_c,
    g_c_gradient,
    g_c_uniform,
    hypothesis_flags,
    lemma11_bound,
    maximize_row,
    neveruse_report,
    polish_g_c,
    q_rho,
    remark_matrix,
    remark_optimality,
    remark_y,
    richardson_third_derivative,
    row_decomposition_check,
    row_h_total,
    s_star,
    sample_birkhoff,
    sample_row_stochastic,
    squared_norm,
    theorem8_bound,
    uniform_matrix,
    verify_expo_gap,
    verify_f_third_derivative,
    verify_lemma11,
    verify_lemma12,
    verify_neveruse,
    verify_theorem7,
    zeta,
)
from chromlab.entropy_energy.verify import lemma12_objective, sample_capped_simplex
from chromlab.thresholds import c_k, u_k

X2 = HFunction.from_expression("x**2")


def rng(seed=0):
    return np.random.Generator(np.random.PCG64(seed))


# ------------------------------------------------------------ H, E, g_c

@pytest.mark.parametrize("k", [2, 3, 5, 8])
def test_entropy_energy_at_uniform_and_identity(k):
    J, I = uniform_matrix(k), np.eye(k)
    assert entropy(J) == pytest.approx(math.log(k), abs=1e-14)
    assert energy(J) == pytest.approx(2 * math.log(1 - 1 / k), abs=1e-14)
    assert entropy(I) == 0
    assert energy(I) == pytest.approx(math.log(1 - 1 / k), abs=1e-14)
    c = 1.3
    assert g_c(J, c) == pytest.approx(math.log(k) + 2 * c * math.log(1 - 1 / k), abs=1e-14)
    assert g_c_uniform(k, c) == pytest.approx(g_c(J, c), abs=1e-14)
    assert g_c(I, c) == pytest.approx(c * math.log(1 - 1 / k), abs=1e-14)


def test_entropy_small_case_and_permutations():
    A = np.array([[1.0, 0.0], [0.5, 0.5]])
    assert entropy(A) == pytest.approx(0.5 * math.log(2), abs=1e-15)
    for p in itertools.permutations(range(4)):
        P = np.eye(4)[list(p)]
        assert entropy(P) == 0
        assert squared_norm(P) == 4
    A = sample_row_stochastic(3, 10, rng())
    assert np.allclose(g_c(A, 0.0), entropy(A))


def test_energy_domain_error():
    with pytest.raises(ValueError):
        energy(np.zeros((2, 2)))


def test_check_stochastic():
    check_stochastic(uniform_matrix(3), doubly=True)
    with pytest.raises(ValueError):
        check_stochastic(np.array([[0.5, 0.6], [0.5, 0.5]]))
    with pytest.raises(ValueError):
        check_stochastic(np.array([[1.0, 0.0], [1.0, 0.0]]), doubly=True)
    with pytest.raises(ValueError):
        check_stochastic(np.ones((2, 3)) / 3)


def test_gradient_matches_finite_differences():
    A = sample_row_stochastic(4, 1, rng(3))[0]
    c, eps = 2.0, 1e-6
    G = g_c_gradient(A, c)
    for i, j in [(0, 0), (1, 2), (3, 3)]:
        E = np.zeros_like(A)
        E[i, j] = eps
        num = (g_c(A + E, c) - g_c(A - E, c)) / (2 * eps)
        assert G[i, j] == pytest.approx(num, rel=1e-6, abs=1e-8)


def test_polish_never_decreases():
    A0 = sample_row_stochastic(3, 1, rng(4))[0]
    A, val = polish_g_c(A0, 1.0)
    assert val >= g_c(A0, 1.0) - 1e-12
    assert np.allclose(A.sum(axis=1), 1)


# ------------------------------------------------------------ h hypotheses

def test_hypothesis_flags():
    assert all(hypothesis_flags(NEG_XLOGX).values())
    flags = X2.hypotheses
    assert not flags["h3_positive"] and not flags["hprime0_infinite"]
    sym = HFunction.from_expression("-x*log(x)")
    assert all(hypothesis_flags(sym).values())
    assert sym(0.0) == 0.0


def test_refusals_for_bad_h():
    with pytest.raises(HypothesisError):
        theorem8_bound(1.5, 3, X2)
    with pytest.raises(HypothesisError):
        verify_f_third_derivative(3, X2)
    with pytest.raises(HypothesisError):
        Psi(3, X2).require()


# ------------------------------------------------------------ s*(r), f

@pytest.mark.parametrize("k", [2, 3, 4, 7])
def test_s_star_constraints(k):
    for r in np.linspace(1 / k, 1, 41):
        s = s_star(float(r), k)
        assert abs(s.sum() - 1) < 1e-12
        assert abs((s ** 2).sum() - r) < 1e-12
        assert np.all(s >= 0)
    assert np.allclose(s_star(1 / k, k), 1 / k)
    assert np.allclose(s_star(1.0, k), np.eye(k)[0])


def test_s_star_example_and_errors():
    assert np.allclose(s_star(0.5, 3), [2 / 3, 1 / 6, 1 / 6], atol=1e-15)
    with pytest.raises(ValueError):
        s_star(0.2, 3)
    with pytest.raises(ValueError):
        s_star(1.1, 3)


def test_f_values():
    for k in (2, 3, 6):
        assert f_of_r(1 / k, k) == pytest.approx(math.log(k), abs=1e-14)
        assert f_of_r(1.0, k) == 0
        # the one-sided slope tends to -k/2 with an O(sqrt t) correction
        for t in (1e-6, 1e-8, 1e-10):
            assert abs(f_prime(1 / k + t, k) + k / 2) <= 5 * k * math.sqrt(t)
        assert f_prime(1 / k, k) == pytest.approx(-k / 2, abs=1e-12)


def sympy_f_derivatives(k):
    r = sp.Symbol("r", positive=True)
    x = (1 + sp.sqrt((k - 1) * (k * r - 1))) / k
    y = (1 - x) / (k - 1)
    f = -x * sp.log(x) - (k - 1) * y * sp.log(y)
    return [sp.lambdify(r, sp.diff(f, r, n), "mpmath") for n in (1, 3)]


@pytest.mark.parametrize("k", [2, 3, 5])
def test_f_prime_and_third_derivative_against_sympy(k):
    d1, d3 = sympy_f_derivatives(k)
    pts = 1 / k + (1 - 1 / k) * np.linspace(0.1, 0.9, 9)
    for r in pts:
        assert f_prime(float(r), k) == pytest.approx(float(d1(mpmath.mpf(r))), rel=1e-10)
    dist = np.minimum(pts - 1 / k, 1 - pts)
    est, err = richardson_third_derivative(lambda t: f_of_r(t, k), pts, dist)
    exact = np.array([float(d3(mpmath.mpf(r))) for r in pts])
    assert np.all(np.abs(est - exact) <= err + 1e-9)
    assert np.all(exact < 0)


@pytest.mark.parametrize("k", [2, 3])
def test_f_third_derivative_report(k):
    rep = verify_f_third_derivative(k)
    assert rep.passed and rep.worst_upper < 0
    assert rep.as_dict()["k"] == k


# ------------------------------------------------------------ norm-constrained entropy bound

def test_theorem8_bound_examples():
    k = 3
    assert theorem8_bound(1.0, k).value == pytest.approx(k * k * NEG_XLOGX(1 / k), abs=1e-12)
    res = theorem8_bound(float(k), k)
    assert res.m == 0 and res.value == pytest.approx(k * f_of_r(1.0, k), abs=1e-15)
    rho = 1 + (k - 2) ** 2 / (k * (k - 1))
    res = theorem8_bound(rho, k)
    assert res.value == pytest.approx(row_h_total(b_rho(rho, k - 1, k)), abs=1e-9)
    assert res.m == pytest.approx(k - 1, abs=1e-4)


def test_b_rho_structure():
    A = b_rho(1.5, 1, 3)
    assert np.allclose(A.sum(axis=1), 1)
    assert squared_norm(A) == pytest.approx(1.5, abs=1e-12)
    assert row_h_total(A) == pytest.approx(q_rho(1, 1.5, 3), abs=1e-12)
    with pytest.raises(ValueError):
        b_rho(0.5, 0, 3)


@pytest.mark.parametrize("k", [2, 3, 4, 5])
def test_row_decomposition_chain(k):
    rep = row_decomposition_check(k, trials=10**4, seed=k)
    assert rep.passed, rep


# ------------------------------------------------------------ row maximizer

def test_maximize_row_examples():
    res = maximize_row(1 / 3, 3)
    assert np.allclose(res.s, 1 / 3)
    res = maximize_row(0.5, 3)
    assert np.allclose(np.sort(res.s)[::-1], [2 / 3, 1 / 6, 1 / 6], atol=1e-6)
    assert res.matches and res.converged_starts > 0
    res = maximize_row(1.0, 4)
    assert sorted(res.s) == [0, 0, 0, 1]
    with pytest.raises(ValueError):
        maximize_row(0.1, 3)


# ------------------------------------------------------------ J_k optimality and the exponential gap

def test_theorem7_small_instances():
    rep = verify_theorem7(2, 0.0, trials=5000, seed=1)
    assert rep.passed and abs(rep.margin) < 1e-9
    rep = verify_theorem7(3, c_k(2), trials=20000, seed=2)
    assert rep.passed and rep.in_regime


def test_theorem7_remark_family_k5():
    k = 5
    A = remark_matrix(k, remark_y(k))
    above = verify_theorem7(k, c_k(k - 1) + 1, trials=2000, seed=0, candidates=A[None])
    assert not above.passed and not above.in_regime
    at = verify_theorem7(k, c_k(k - 1), trials=2000, seed=0, candidates=A[None])
    assert at.passed


def test_expo_gap_examples():
    for k in (3, 4, 5):
        assert verify_expo_gap(k, 1.0, uniform_matrix(k))
        assert expo_gap_slack(k, 1.0, uniform_matrix(k)) == pytest.approx(0, abs=1e-14)
    slack = expo_gap_slack(3, 1.0, np.eye(3))
    assert slack > 0.1
    assert verify_expo_gap(3, 1.0, np.eye(3)[[2, 0, 1]])
    with pytest.raises(ValueError):
        verify_expo_gap(3, c_k(2), uniform_matrix(3))
    with pytest.raises(ValueError):
        verify_expo_gap(3, 1.0, np.array([[1, 0, 0], [1, 0, 0], [0, 0, 1.0]]))


def test_expo_scan_small():
    rep = expo_gap_scan(3, 0.5, samples=2000, seed=3)
    assert rep.passed and rep.violations == 0


def test_birkhoff_samples():
    for k in (2, 3, 4):
        B = sample_birkhoff(k, 3000, rng(k))
        assert np.allclose(B.sum(axis=1), 1) and np.allclose(B.sum(axis=2), 1)
        rho = squared_norm(B)
        assert np.all(rho >= 1 - 1e-12) and np.all(rho <= k + 1e-12)
        assert np.all(entropy(B) <= math.log(k) + 1e-12) and np.all(entropy(B) >= -1e-12)
        verts = np.array([np.eye(k)[list(p)] for p in itertools.permutations(range(k))])
        assert np.allclose(squared_norm(verts), k) and np.allclose(entropy(verts), 0)


# ------------------------------------------------------------ the matrix of the counterexample remark

def gap_oracle(k):
    """g_c(A) - g_c(J_k) at c = u_k - 1 for A = J_k/(k-1) + (k-2)/(k-1) I, at 40 digits."""
    with mpmath.workdps(40):
        k_ = mpmath.mpf(k)
        off = 1 / (k_ * (k_ - 1))
        diag = off + (k_ - 2) / (k_ - 1)
        H = -(diag * mpmath.log(diag) + (k_ - 1) * off * mpmath.log(off))
        rho = k_ * (diag ** 2 + (k_ - 1) * off ** 2)
        E = mpmath.log(1 - 2 / k_ + rho / k_ ** 2)
        u = mpmath.log(k_) / (mpmath.log(k_) - mpmath.log(k_ - 1))
        c = u - 1
        return float(H + c * E - (mpmath.log(k_) + 2 * c * mpmath.log(1 - 1 / k_)))


@pytest.mark.parametrize("k", [3, 4, 10])
def test_counterexample_values(k):
    rep = counterexample_check(k)
    assert rep.c == pytest.approx(u_k(k) - 1)
    assert rep.gap == pytest.approx(gap_oracle(k), abs=1e-12)
    assert rep.gap_at_zero < 0
    A = counterexample_matrix(k)
    assert np.allclose(A.sum(axis=0), 1) and np.allclose(A.sum(axis=1), 1)


def test_counterexample_computed_behavior():
    # evaluated directly, the gap at c = u_k - 1 is negative and J_k still wins;
    # the break-even c lies above u_k - 1
    for k in range(3, 11):
        rep = counterexample_check(k)
        assert rep.gap < 0
        assert rep.breakeven_c > u_k(k) - 1
    with pytest.raises(ValueError):
        counterexample_check(2)


# ------------------------------------------------------------ eta, zeta, never_use

def test_eta_zeta_basics():
    for k in (3, 5, 9):
        assert eta(0.0, k) == pytest.approx(k / 2, abs=1e-12)
        assert abs(eta(1e-8, k) - k / 2) <= 5 * k * 1e-4
        assert abs(zeta(remark_y(k), k)) < 1e-12
        assert eta(1 - 1 / k, k) == pytest.approx(k / (k - 1) * math.log(k), abs=1e-12)
    with pytest.raises(ValueError):
        eta(-0.1, 3)
    with pytest.raises(ValueError):
        zeta(0.9, 3)


def test_neveruse_examples():
    rep = neveruse_report(3)
    assert rep.closed_form == pytest.approx(8 / 3 * math.log(2))
    assert rep.terms[1] == min(rep.terms)
    assert rep.closed_form > 2 * math.log(2)
    assert neveruse_report(4).closed_form == pytest.approx(27 / 8 * math.log(3))
    assert all(verify_neveruse(k) for k in range(3, 21))
    with pytest.raises(ValueError):
        verify_neveruse(2)


# ------------------------------------------------------------ capped-simplex concave sums

def test_psi_hypotheses():
    for k in (2, 3, 5):
        flags = Psi(k).check()
        assert flags["psi3_negative"] and flags["psiprime1_minus_infinite"]


def test_lemma11_bound_configuration_is_tight():
    psi, k, gamma = Psi(3), 3, 1.5
    bound, m = lemma11_bound(psi, gamma)
    for mi in range(0, 2):
        s = np.array([0.0] * mi + [gamma / (k - mi)] * (k - mi))
        assert psi(s).sum() <= bound + 1e-9
    # the real-m maximum is attained by the continuous configuration
    val = m * psi(0.0) + (k - m) * psi(gamma / (k - m))
    assert val == pytest.approx(bound, abs=1e-9)


def test_lemma11_degenerate_and_random():
    psi = Psi(3)
    bound, m = lemma11_bound(psi, 3.0)
    assert m == 0 and bound == pytest.approx(3 * psi(1.0))
    rep = verify_lemma11(psi, 1.5, 3, trials=10**4, seed=1)
    assert rep.passed and rep.worst_slack >= -1e-9
    S = sample_capped_simplex(4, 2.5, 500, rng())
    assert np.allclose(S.sum(axis=1), 2.5) and np.all(S <= 1 + 1e-12) and np.all(S >= 0)


def test_lemma12_against_grid_oracle():
    psi, k, gamma = Psi(3), 3, 1.0
    rep = verify_lemma12(psi, gamma, k)
    assert rep.passed and rep.b == 0.0
    # brute force over (a, b, l) with the constraint solved for b
    best = -np.inf
    for ell in np.linspace(0.01, k, 300):
        for a in np.linspace(1e-4, 1, 300):
            if ell == k:
                if abs(ell * a - gamma) > 1e-3:
                    continue
                b = 0.0
            else:
                b = (gamma - ell * a) / (k - ell)
                if not 0 <= b < a:
                    continue
            best = max(best, float(ell * psi(a) + (k - ell) * psi(b)))
    assert rep.value >= best - 1e-9
    assert rep.value == pytest.approx(best, abs=5e-3)


def test_lemma12_limits():
    psi, k = Psi(3), 3
    rep = verify_lemma12(psi, 2.95, k)
    assert rep.ell == pytest.approx(k, abs=1e-6) and rep.a > 0.98
    tiny = verify_lemma12(psi, 1e-6, k)
    assert tiny.value == pytest.approx(k * psi(0.0), abs=1e-4)
    assert float(lemma12_objective(1.0, 0.0, psi, 1.0)) == pytest.approx(3 * psi(1 / 3))
    with pytest.raises(ValueError):
        verify_lemma12(psi, 3.0, k)


# ------------------------------------------------------------ the B_rho(k-1) family

def test_remark_bracket_up_to_ten():
    for k in (3, 9, 10):
        rep = remark_optimality(k)
        assert rep.in_bracket, rep
        assert rep.breakeven_c <= rep.first_violation_c
        assert rep.c_prev < rep.breakeven_c < rep.c_prev + 1
