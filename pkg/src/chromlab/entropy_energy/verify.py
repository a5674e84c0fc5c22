"""Refutation-style numerical checks of the entropy-energy inequality and of
the lemmas it rests on.

Every check returns a small report object carrying the margin it measured, so
callers can print or serialize what was found instead of a bare boolean.
Tolerances: constraint satisfaction 1e-12, inequalities 1e-9, maximizer
location 1e-6.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.optimize import minimize, minimize_scalar

from ..errors import HypothesisError
from ..thresholds import c_k, u_k
from .functionals import (
    NEG_XLOGX,
    HFunction,
    energy,
    entropy,
    eta,
    f_of_r,
    g_c,
    g_c_uniform,
    m_upper,
    psi_of,
    q_rho,
    remark_y,
    require_hypotheses,
    row_h_total,
    s_star,
    squared_norm,
    theorem8_bound,
    uniform_matrix,
    zeta,
)
from .optimize import polish_g_c, sample_birkhoff, sample_row_stochastic

INEQ_TOL = 1e-9
LOCATION_TOL = 1e-6


def _rng(seed):
    return np.random.Generator(np.random.PCG64(seed))


class _Report:
    def as_dict(self) -> dict:
        out = {}
        for key, val in asdict(self).items():
            if isinstance(val, np.ndarray):
                val = val.tolist()
            elif isinstance(val, np.generic):
                val = val.item()
            out[key] = val
        return out


# ------------------------------------------------------------ J_k against sampled doubly stochastic matrices

@dataclass(frozen=True)
class Theorem7Report(_Report):
    k: int
    c: float
    in_regime: bool  # c <= c_{k-1}
    g_uniform: float
    best: float
    margin: float  # g_c(J_k) - best
    argmax: np.ndarray = field(repr=False)
    samples: int = 0
    polished: int = 0

    @property
    def passed(self) -> bool:
        return self.margin >= -INEQ_TOL


def verify_theorem7(k: int, c: float, trials: int = 10**5, seed: int = 0, *,
                    polish: int = 50, candidates: np.ndarray | None = None,
                    batch: int = 20_000) -> Theorem7Report:
    """Search S_k for a matrix beating J_k on g_c.

    ``trials`` matrices with Dirichlet(1) rows are scored; the ``polish`` best
    (together with any ``candidates``) are then improved by local ascent.
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    rng = _rng(seed)
    pool_A, pool_g = [], []
    keep = max(polish, 1)
    for start in range(0, trials, batch):
        A = sample_row_stochastic(k, min(batch, trials - start), rng)
        vals = g_c(A, c)
        top = np.argsort(vals)[-keep:]
        pool_A.append(A[top])
        pool_g.append(vals[top])
    if candidates is not None:
        cand = np.asarray(candidates, dtype=float).reshape(-1, k, k)
        pool_A.append(cand)
        pool_g.append(g_c(cand, c))
    A_all = np.concatenate(pool_A)
    g_all = np.concatenate(pool_g)
    order = np.argsort(g_all)[::-1]
    n_cand = 0 if candidates is None else len(np.asarray(candidates).reshape(-1, k, k))
    starts = list(order[:polish]) + list(range(len(A_all) - n_cand, len(A_all)))
    best_i = int(order[0])
    best, best_A = float(g_all[best_i]), A_all[best_i]
    for i in dict.fromkeys(starts):
        A, val = polish_g_c(A_all[i], c)
        if val > best:
            best, best_A = val, A
    gJ = g_c_uniform(k, c)
    return Theorem7Report(k, float(c), bool(c <= c_k(k - 1) + 1e-15), gJ, best, gJ - best,
                          best_A, trials, len(set(starts)))


# ------------------------------------------------------------ exponential gap over B_k

def expo_beta(k: int, c: float) -> float:
    return (c_k(k - 1) - c) / (2 * (k - 1) ** 2)


def expo_gap_slack(k: int, c: float, A) -> np.ndarray | float:
    """g_c(J_k) - beta (rho_A - 1) - g_c(A); nonnegative when the gap bound holds."""
    return g_c_uniform(k, c) - expo_beta(k, c) * (squared_norm(A) - 1) - g_c(A, c)


def verify_expo_gap(k: int, c: float, A) -> bool:
    """Check ``g_c(A) <= g_c(J_k) - (c_{k-1} - c)/(2(k-1)^2) (rho_A - 1)`` for doubly stochastic A."""
    if not c < c_k(k - 1):
        raise ValueError(f"need c < c_(k-1) = {c_k(k - 1):.6g}, got {c}")
    A = np.asarray(A, dtype=float)
    if np.any(np.abs(A.sum(axis=-2) - 1) > 1e-12) or np.any(np.abs(A.sum(axis=-1) - 1) > 1e-12):
        raise ValueError("A must be doubly stochastic")
    return bool(np.all(expo_gap_slack(k, c, A) >= -INEQ_TOL))


@dataclass(frozen=True)
class ExpoScanReport(_Report):
    k: int
    c: float
    samples: int
    worst_slack: float
    violations: int

    @property
    def passed(self) -> bool:
        return self.violations == 0


def expo_gap_scan(k: int, c: float, samples: int = 10**4, seed: int = 0) -> ExpoScanReport:
    """The gap bound on random mixtures of permutation matrices plus every vertex."""
    if not c < c_k(k - 1):
        raise ValueError(f"need c < c_(k-1) = {c_k(k - 1):.6g}, got {c}")
    A = sample_birkhoff(k, samples, _rng(seed))
    slack = expo_gap_slack(k, c, A)
    return ExpoScanReport(k, float(c), samples, float(slack.min()),
                          int(np.sum(slack < -INEQ_TOL)))


# ------------------------------------------------------------ the B_k counterexample

@dataclass(frozen=True)
class CounterexampleReport(_Report):
    k: int
    c: float
    gap: float  # g_c(A) - g_c(J_k) at c = u_k - 1
    gap_at_zero: float  # same difference at c = 0
    breakeven_c: float  # c at which g_c(A) = g_c(J_k)
    best_t: float  # best A_t = (1-t) J_k + t I at c = u_k - 1
    best_line_gap: float

    @property
    def positive(self) -> bool:
        return self.gap > 0


def counterexample_matrix(k: int) -> np.ndarray:
    """(1/(k-1)) J_k + ((k-2)/(k-1)) I, with J_k the constant 1/k matrix."""
    return uniform_matrix(k) / (k - 1) + (k - 2) / (k - 1) * np.eye(k)


def counterexample_check(k: int, *, line_points: int = 20001) -> CounterexampleReport:
    """Evaluate g_c(A) - g_c(J_k) at c = u_k - 1 for the matrix above.

    Also scans the segment A_t = (1-t) J_k + t I for its largest difference,
    which shows whether any member of that line beats J_k at this c.
    """
    if k < 3:
        raise ValueError("k must be >= 3 (the matrix degenerates to J_2 at k = 2)")
    c = u_k(k) - 1
    A = counterexample_matrix(k)
    J = uniform_matrix(k)
    dH = float(entropy(A) - entropy(J))
    dE = float(energy(A) - energy(J))
    ts = np.linspace(0.0, 1.0, line_points)
    line = (1 - ts)[:, None, None] * J + ts[:, None, None] * np.eye(k)
    diffs = g_c(line, c) - g_c_uniform(k, c)
    i = int(np.argmax(diffs))
    return CounterexampleReport(k, c, dH + c * dE, dH, -dH / dE, float(ts[i]), float(diffs[i]))


# ------------------------------------------------------------ eta / zeta identities

def eta_zeta_identities(k: int, h: HFunction = NEG_XLOGX) -> dict[str, float]:
    """Residuals of the closed-form values of eta and zeta (absolute errors)."""
    if k < 3:
        raise ValueError("k must be >= 3")
    y0 = remark_y(k)
    return {
        "zeta_at_remark_y": abs(float(zeta(y0, k, h))),
        "eta_at_end": abs(float(eta(1 - 1 / k, k, h)) - k / (k - 1) * np.log(k)),
        "eta_at_remark_y": abs(float(eta(y0, k, h)) - (k - 1) / (k - 2) * np.log(k - 1)),
        "eta_at_zero": abs(float(eta(0.0, k, h)) - k / 2),
    }


@dataclass(frozen=True)
class NeverUseReport(_Report):
    k: int
    terms: tuple[float, float, float]
    scaled_min: float
    closed_form: float
    c_prev: float
    eta_grid_min: float

    @property
    def min_is_middle(self) -> bool:
        return abs(self.scaled_min - self.closed_form) <= 1e-12 * max(1.0, self.closed_form)

    @property
    def exceeds_c_prev(self) -> bool:
        return self.closed_form > self.c_prev

    @property
    def eta_min_consistent(self) -> bool:
        """The grid minimum of eta is not below the smallest of the three candidates."""
        return self.eta_grid_min >= min(self.terms) - 1e-9

    def __bool__(self) -> bool:
        return self.min_is_middle and self.exceeds_c_prev


def neveruse_report(k: int, grid: int = 20001) -> NeverUseReport:
    if k < 3:
        raise ValueError("k must be >= 3")
    terms = (k / 2, (k - 1) / (k - 2) * np.log(k - 1), k / (k - 1) * np.log(k))
    scale = (k - 1) ** 2 / k
    closed = (k - 1) ** 3 / (k * (k - 2)) * np.log(k - 1)
    ys = np.linspace(0.0, 1 - 1 / k, grid)
    return NeverUseReport(k, tuple(float(t) for t in terms), float(scale * min(terms)),
                          float(closed), c_k(k - 1), float(np.min(eta(ys, k))))


def verify_neveruse(k: int) -> bool:
    """The smallest candidate value of eta, scaled by (k-1)^2/k, is the
    middle one and exceeds c_{k-1}."""
    return bool(neveruse_report(k))


# ------------------------------------------------------------ third derivative of f

@dataclass(frozen=True)
class ThirdDerivativeReport(_Report):
    k: int
    h: str
    grid: np.ndarray = field(repr=False)
    estimate: np.ndarray = field(repr=False)
    error: np.ndarray = field(repr=False)

    @property
    def worst_upper(self) -> float:
        """max over the grid of estimate + error bar; negative means every point is certified."""
        return float(np.max(self.estimate + self.error))

    @property
    def passed(self) -> bool:
        return bool(np.all(self.estimate + self.error < 0))


def _third_diff(fun, x, d):
    return (fun(x + 2 * d) - 2 * fun(x + d) + 2 * fun(x - d) - fun(x - 2 * d)) / (2 * d**3)


def richardson_third_derivative(fun, x, dist, *, fractions=(0.4, 0.2, 0.1, 0.05)):
    """Third derivative of a vectorized ``fun`` at points ``x`` whose distance
    to the domain boundary is ``dist``.

    For each base step (a fraction of ``dist``, capped at 0.05) two Richardson
    sweeps over halved steps cancel the O(d^2) and O(d^4) error terms; the
    error bar is the last correction plus a round-off term.  The base step
    with the smallest error bar wins.
    """
    x = np.asarray(x, dtype=float)
    eps = np.finfo(float).eps
    scale = np.abs(fun(x)) + 1.0
    best_est = np.full(x.shape, np.nan)
    best_err = np.full(x.shape, np.inf)
    for frac in fractions:
        d = np.minimum(frac * dist / 2, 0.05 / 2)
        D = [_third_diff(fun, x, d / 2**j) for j in range(3)]
        R1 = [(4 * D[j + 1] - D[j]) / 3 for j in range(2)]
        RR = (16 * R1[1] - R1[0]) / 15
        roundoff = 6 * eps * scale / (2 * (d / 4) ** 3)
        err = np.abs(RR - R1[1]) + roundoff
        better = err < best_err
        best_est = np.where(better, RR, best_est)
        best_err = np.where(better, err, best_err)
    return best_est, best_err


def verify_f_third_derivative(k: int, h: HFunction = NEG_XLOGX, *, points: int = 200) -> ThirdDerivativeReport:
    """Finite-difference f''' on ``points`` interior grid points of (1/k, 1)."""
    require_hypotheses(h, ["h3_positive", "h4_negative", "h6_negative"])
    grid = np.linspace(1 / k, 1.0, points + 2)[1:-1]
    dist = np.minimum(grid - 1 / k, 1.0 - grid)
    est, err = richardson_third_derivative(lambda r: f_of_r(r, k, h), grid, dist)
    return ThirdDerivativeReport(k, h.name, grid, est, err)


# ------------------------------------------------------------ capped-simplex concave sums

@dataclass(frozen=True)
class Psi:
    """psi(x) = f(1/k + (k-1) x / k) on [0, 1]."""

    k: int
    h: HFunction = NEG_XLOGX

    def __call__(self, x):
        return psi_of(x, self.k, self.h)

    def check(self, points: int = 200) -> dict[str, bool]:
        k = self.k
        grid = np.linspace(0.0, 1.0, points + 2)[1:-1]
        dist = np.minimum(grid, 1.0 - grid)
        est, err = richardson_third_derivative(self, grid, dist)
        j = np.arange(1, 40)
        t = 2.0 ** -j
        with np.errstate(all="ignore"):
            q = (self(1.0) - self(1.0 - t)) / t
        return {
            "psi3_negative": bool(np.all(est + err < 0)),
            "psiprime1_minus_infinite": bool(np.all(np.diff(q)[-10:] < -1e-6)),
            "k": k,
        }

    def require(self) -> None:
        flags = self.check()
        if not (flags["psi3_negative"] and flags["psiprime1_minus_infinite"]):
            raise HypothesisError(f"psi for k={self.k}, h={self.h.name} fails: {flags}")


def lemma11_bound(psi: Psi, gamma: float, *, grid: int = 4001) -> tuple[float, float]:
    """max over real m in [0, k - gamma] of m psi(0) + (k - m) psi(gamma / (k - m)); returns (value, m)."""
    k = psi.k
    hi = k - gamma
    p0 = float(psi(0.0))

    def val(m):
        m = np.asarray(m, dtype=float)
        return m * p0 + (k - m) * psi(np.minimum(gamma / (k - m), 1.0))

    if hi <= 0:
        return float(val(0.0)), 0.0
    ms = np.linspace(0.0, hi, grid)
    v = val(ms)
    i = int(np.argmax(v))
    best_m, best = float(ms[i]), float(v[i])
    lo_b, hi_b = ms[max(i - 1, 0)], ms[min(i + 1, grid - 1)]
    res = minimize_scalar(lambda m: -val(m), bounds=(lo_b, hi_b), method="bounded",
                          options={"xatol": 1e-13})
    if -res.fun > best:
        best_m, best = float(res.x), float(-res.fun)
    return best, best_m


def sample_capped_simplex(k: int, gamma: float, size: int, rng: np.random.Generator,
                          alpha: float = 1.0) -> np.ndarray:
    """Points of [0,1]^k with coordinate sum gamma (rejection from gamma * Dirichlet)."""
    if not 0 < gamma <= k:
        raise ValueError(f"gamma must lie in (0, k], got {gamma}")
    if gamma == k:
        return np.ones((size, k))
    if gamma > k / 2:
        return 1.0 - sample_capped_simplex(k, k - gamma, size, rng, alpha)
    out = []
    have = 0
    while have < size:
        s = gamma * rng.dirichlet(np.full(k, alpha), size=2 * size)
        s = s[np.all(s <= 1.0, axis=1)]
        out.append(s)
        have += len(s)
    return np.concatenate(out)[:size]


@dataclass(frozen=True)
class Lemma11Report(_Report):
    k: int
    gamma: float
    trials: int
    bound: float
    bound_m: float
    worst_slack: float  # min over samples of bound - Psi(s)
    worst_point: np.ndarray = field(repr=False)

    @property
    def passed(self) -> bool:
        return self.worst_slack >= -INEQ_TOL


def verify_lemma11(psi: Psi, gamma: float, k: int | None = None, trials: int = 10**4,
                   seed: int = 0) -> Lemma11Report:
    """Random s in [0,1]^k with sum gamma never beat the two-level bound."""
    k = psi.k if k is None else k
    if k != psi.k:
        raise ValueError("k does not match the psi instance")
    psi.require()
    rng = _rng(seed)
    half = trials // 2
    S = np.concatenate([sample_capped_simplex(k, gamma, half, rng),
                        sample_capped_simplex(k, gamma, trials - half, rng, alpha=0.3)])
    bound, m = lemma11_bound(psi, gamma)
    vals = psi(S).sum(axis=1)
    slack = bound - vals
    i = int(np.argmin(slack))
    return Lemma11Report(k, float(gamma), trials, bound, m, float(slack[i]), S[i])


@dataclass(frozen=True)
class Lemma12Report(_Report):
    k: int
    gamma: float
    a: float
    b: float
    ell: float
    value: float
    location_error: float  # |a - gamma / ell|

    @property
    def passed(self) -> bool:
        return self.location_error <= LOCATION_TOL


def _lemma12_point(ell, t, k, gamma):
    a_hi = np.minimum(1.0, gamma / ell)
    a = gamma / k + t * (a_hi - gamma / k)
    with np.errstate(divide="ignore", invalid="ignore"):
        b = np.where(ell < k, (gamma - ell * a) / (k - ell), 0.0)
    return a, np.maximum(b, 0.0)


def lemma12_objective(ell, t, psi: Psi, gamma: float):
    """g(a, b, l) = l psi(a) + (k - l) psi(b) on the constraint surface
    parametrized by l in (0, k) and t in [0, 1] (t = 1 is the face b = 0 or a = 1)."""
    k = psi.k
    a, b = _lemma12_point(ell, t, k, gamma)
    return ell * psi(a) + (k - ell) * psi(b)


def verify_lemma12(psi: Psi, gamma: float, k: int | None = None, *, grid: int = 301) -> Lemma12Report:
    """Maximize g over the constraint set and report how far the maximizer is from a = gamma / l."""
    k = psi.k if k is None else k
    if k != psi.k:
        raise ValueError("k does not match the psi instance")
    if not 0 < gamma < k:
        raise ValueError(f"gamma must lie in (0, k), got {gamma}")
    psi.require()
    eps = 1e-9
    L, T = np.meshgrid(np.linspace(eps, k - eps, grid), np.linspace(0.0, 1.0, grid), indexing="ij")
    V = lemma12_objective(L, T, psi, gamma)
    i, j = np.unravel_index(int(np.nanargmax(V)), V.shape)
    x0 = np.array([L[i, j], T[i, j]])
    res = minimize(lambda z: -float(lemma12_objective(z[0], z[1], psi, gamma)), x0,
                   method="L-BFGS-B", bounds=[(eps, k - eps), (0.0, 1.0)],
                   options={"ftol": 1e-15, "gtol": 1e-12})
    ell, t = (res.x if -res.fun >= V[i, j] else x0)
    a, b = _lemma12_point(ell, t, k, gamma)
    value = float(lemma12_objective(ell, t, psi, gamma))
    # on the face ell = k the term in b vanishes, so b < a is free and we record b = 0;
    # interior points with a = b lie outside the set and reach the same value
    face = float(k * psi(gamma / k))
    if face >= value - INEQ_TOL:
        ell, a, b, value = float(k), gamma / k, 0.0, max(face, value)
    return Lemma12Report(k, float(gamma), float(a), float(b), float(ell), value,
                         float(abs(a - gamma / ell)))


# ------------------------------------------------------------ the B_rho(k-1) family

def remark_matrix(k: int, y: float) -> np.ndarray:
    """k-1 uniform rows and a last row s*(1/k + y)."""
    A = uniform_matrix(k)
    A[-1] = s_star(1 / k + y, k)
    return A


@dataclass(frozen=True)
class RemarkReport(_Report):
    k: int
    step: float
    first_violation_c: float | None  # smallest grid c where the family beats J_k
    breakeven_c: float  # continuous infimum of such c
    breakeven_y: float
    remark_c: float  # breakeven for the specific y = (k-2)^2/(k(k-1))
    c_prev: float

    @property
    def in_bracket(self) -> bool:
        c = self.first_violation_c
        return c is not None and self.c_prev <= c < self.c_prev + 1


def remark_optimality(k: int, step: float = 0.05, *, grid: int = 4001, c_max: float | None = None) -> RemarkReport:
    """Scan c = 0, step, 2 step, ... for the first value at which some matrix
    of the family has g_c(A) > g_c(J_k) + 1e-9."""
    if k < 3:
        raise ValueError("k must be >= 3")
    J = uniform_matrix(k)
    ys = np.linspace(0.0, 1 - 1 / k, grid)[1:]
    fam = np.repeat(J[None], len(ys), axis=0)
    fam[:, -1] = np.stack([s_star(1 / k + y, k) for y in ys])
    dH = entropy(fam) - entropy(J)
    dE = energy(fam) - energy(J)
    cp = c_k(k - 1)
    c_max = cp + 3 if c_max is None else c_max

    def diff(c, y):
        A = remark_matrix(k, y)
        return float(g_c(A, c) - g_c(J, c))

    first = None
    for j in range(int(np.ceil(c_max / step)) + 1):
        c = j * step
        d = dH + c * dE
        i = int(np.argmax(d))
        best = float(d[i])
        if best <= INEQ_TOL:
            lo_b, hi_b = ys[max(i - 1, 0)], ys[min(i + 1, len(ys) - 1)]
            res = minimize_scalar(lambda y: -diff(c, y), bounds=(lo_b, hi_b), method="bounded",
                                  options={"xatol": 1e-14})
            best = max(best, -float(res.fun))
        if best > INEQ_TOL:
            first = round(c, 10)
            break

    # breakeven c(y) = -dH / dE, minimized over y
    ratio = -dH / dE
    i = int(np.argmin(ratio))

    def ce(y):
        A = remark_matrix(k, y)
        return float(-(entropy(A) - entropy(J)) / (energy(A) - energy(J)))

    res = minimize_scalar(ce, bounds=(ys[max(i - 1, 0)], ys[min(i + 1, len(ys) - 1)]),
                          method="bounded", options={"xatol": 1e-14})
    y_star, c_star = (float(res.x), float(res.fun)) if res.fun < ratio[i] else (float(ys[i]), float(ratio[i]))
    return RemarkReport(k, step, first, c_star, y_star, ce(remark_y(k)), cp)


# ------------------------------------------------------------ row decomposition chain

@dataclass(frozen=True)
class RowChainReport(_Report):
    k: int
    trials: int
    worst_row_slack: float  # min of sum_i f(rho_i) - H(A)
    worst_bound_slack: float  # min of theorem8_bound(rho_A) - sum_i f(rho_i)

    @property
    def passed(self) -> bool:
        return self.worst_row_slack >= -INEQ_TOL and self.worst_bound_slack >= -INEQ_TOL


def row_decomposition_check(k: int, trials: int = 10**4, seed: int = 0,
                            h: HFunction = NEG_XLOGX, *, grid: int = 801) -> RowChainReport:
    """Check H(A) <= sum_i f(rho_i) <= max_m q_rho(m) on random row-stochastic matrices."""
    require_hypotheses(h)
    A = sample_row_stochastic(k, trials, _rng(seed))
    H = row_h_total(A, h)
    rho_rows = np.square(A).sum(axis=2)
    F = f_of_r(rho_rows, k, h).sum(axis=1)
    rho = rho_rows.sum(axis=1)
    # grid maximum of the bound for every matrix at once
    frac = np.linspace(0.0, 1.0, grid)
    M = frac[None, :] * np.maximum(m_upper(rho, k), 0.0)[:, None]
    Q = q_rho(M, rho[:, None], k, h).max(axis=1)
    tight = np.nonzero(Q - F < 1e-6)[0]
    for i in tight:
        Q[i] = max(Q[i], theorem8_bound(float(rho[i]), k, h).value)
    return RowChainReport(k, trials, float(np.min(F - H)), float(np.min(Q - F)))
