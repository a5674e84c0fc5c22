"""Entropy, energy and the entropy-energy functional over stochastic matrices,
together with the one-dimensional reductions used to bound it.

Matrix functions accept a single ``(k, k)`` array or a stack ``(..., k, k)``
and reduce over the last two axes.  ``0 log 0`` is taken to be 0 throughout.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.special import entr

from ..errors import HypothesisError

ROW_TOL = 1e-12


# ------------------------------------------------------------ matrices

def uniform_matrix(k: int) -> np.ndarray:
    """J_k, the constant 1/k matrix."""
    return np.full((k, k), 1.0 / k)


def check_stochastic(A, *, doubly: bool = False, tol: float = ROW_TOL) -> np.ndarray:
    A = np.asarray(A, dtype=float)
    if A.shape[-1] != A.shape[-2]:
        raise ValueError(f"expected square matrices, got shape {A.shape}")
    if np.any(A < -tol) or np.any(A > 1 + tol):
        raise ValueError("entries must lie in [0, 1]")
    if np.any(np.abs(A.sum(axis=-1) - 1) > tol):
        raise ValueError("rows must sum to 1")
    if doubly and np.any(np.abs(A.sum(axis=-2) - 1) > tol):
        raise ValueError("columns must sum to 1")
    return A


def squared_norm(A) -> np.ndarray | float:
    """rho_A = sum of squared entries."""
    A = np.asarray(A, dtype=float)
    return np.square(A).sum(axis=(-2, -1))


def entropy(A) -> np.ndarray | float:
    """-(1/k) sum a log a."""
    A = np.asarray(A, dtype=float)
    k = A.shape[-1]
    return entr(A).sum(axis=(-2, -1)) / k


def energy(A) -> np.ndarray | float:
    """log(1 - 2/k + rho_A / k^2)."""
    A = np.asarray(A, dtype=float)
    k = A.shape[-1]
    arg = 1 - 2 / k + squared_norm(A) / k**2
    if np.any(arg <= 0):
        raise ValueError("energy undefined: 1 - 2/k + rho/k^2 <= 0 (not a stochastic matrix?)")
    return np.log(arg)


def g_c(A, c: float) -> np.ndarray | float:
    """Entropy-energy functional H(A) + c E(A)."""
    return entropy(A) + c * energy(A)


def g_c_uniform(k: int, c: float) -> float:
    """Closed form of g_c at J_k: log k + 2c log(1 - 1/k)."""
    return float(np.log(k) + 2 * c * np.log1p(-1.0 / k))


def g_c_gradient(A: np.ndarray, c: float) -> np.ndarray:
    k = A.shape[-1]
    with np.errstate(divide="ignore"):
        dH = -(np.log(A) + 1) / k
    q = 1 - 2 / k + squared_norm(A) / k**2
    dE = 2 * A / k**2 / np.asarray(q)[..., None, None]
    return dH + c * dE


# ------------------------------------------------------------ h functions

@dataclass(frozen=True)
class HFunction:
    """A concave h on [0, 1] with derivatives h', ..., h^(6) on (0, 1).

    ``derivs[0]`` is h itself and must accept 0 and 1.
    """

    name: str
    derivs: tuple[Callable[[np.ndarray], np.ndarray], ...] = field(repr=False)

    def __call__(self, x):
        return self.derivs[0](np.asarray(x, dtype=float))

    def d(self, order: int, x):
        return self.derivs[order](np.asarray(x, dtype=float))

    @classmethod
    def from_expression(cls, expr: str) -> "HFunction":
        """Build from a sympy expression in ``x``, e.g. ``"x**2"``."""
        import sympy as sp

        x = sp.Symbol("x", positive=True)
        e = sp.sympify(expr, locals={"x": x})
        fns = []
        for order in range(7):
            fn = sp.lambdify(x, sp.diff(e, x, order), "numpy")
            fns.append(lambda t, fn=fn: np.broadcast_to(fn(t), np.shape(t)).astype(float))
        base = fns[0]

        def h(t, base=base, e=e):
            t = np.asarray(t, dtype=float)
            with np.errstate(all="ignore"):
                out = np.array(base(t), dtype=float)
            # endpoints where direct evaluation is 0*inf and the like: use the limit
            bad = ~np.isfinite(out)
            for idx in np.argwhere(bad):
                idx = tuple(idx)
                out[idx] = float(sp.limit(e, x, float(t[idx])))
            return out

        return cls(expr, (h, *fns[1:]))

    @property
    def hypotheses(self) -> dict[str, bool]:
        return hypothesis_flags(self)


def _neg_xlogx_derivs():
    return (
        lambda x: entr(x),
        lambda x: -np.log(x) - 1,
        lambda x: -1 / x,
        lambda x: 1 / x**2,
        lambda x: -2 / x**3,
        lambda x: 6 / x**4,
        lambda x: -24 / x**5,
    )


NEG_XLOGX = HFunction("-x log x", _neg_xlogx_derivs())

_FLAG_CACHE: dict[HFunction, dict[str, bool]] = {}


def hypothesis_flags(h: HFunction, grid: np.ndarray | None = None) -> dict[str, bool]:
    """Numerical check of the hypotheses on h.

    Sign conditions are checked on a grid of (0, 1).  ``h'(0+) = inf`` is
    read off the difference quotients (h(2^-j) - h(0)) / 2^-j: they must keep
    growing by a non-vanishing amount.  ``h'(1-) > -inf`` requires the
    quotients (h(1) - h(1 - 2^-j)) / 2^-j to settle.
    """
    cached = grid is None
    if cached and h in _FLAG_CACHE:
        return _FLAG_CACHE[h]
    if grid is None:
        grid = np.concatenate([np.geomspace(1e-6, 1e-2, 60), np.linspace(1e-2, 1 - 1e-3, 400)])
    with np.errstate(all="ignore"):
        flags = {
            "concave": bool(np.all(h.d(2, grid) < 0)),
            "h3_positive": bool(np.all(h.d(3, grid) > 0)),
            "h4_negative": bool(np.all(h.d(4, grid) < 0)),
            "h6_negative": bool(np.all(h.d(6, grid) < 0)),
        }
        j = np.arange(1, 51)
        t = 2.0 ** -j
        q0 = (h(t) - h(0.0)) / t
        inc = np.diff(q0)[-10:]
        flags["hprime0_infinite"] = bool(np.all(np.isfinite(q0)) and np.all(inc > 1e-6))
        j1 = np.arange(1, 27)
        t1 = 2.0 ** -j1
        q1 = (h(1.0) - h(1.0 - t1)) / t1
        flags["hprime1_finite"] = bool(np.all(np.isfinite(q1)) and abs(q1[-1] - q1[-2]) < 1e-5)
    if cached:
        _FLAG_CACHE[h] = flags
    return flags


def require_hypotheses(h: HFunction, names=None) -> None:
    flags = hypothesis_flags(h)
    names = names or list(flags)
    failed = [n for n in names if not flags[n]]
    if failed:
        raise HypothesisError(f"h = {h.name} fails {', '.join(failed)}; flags: {flags}")


def row_h_total(A, h: HFunction = NEG_XLOGX) -> np.ndarray | float:
    """sum_ij h(a_ij) (no 1/k normalization)."""
    return h(np.asarray(A, dtype=float)).sum(axis=(-2, -1))


# ------------------------------------------------------------ s*(r) and f

def _check_r(r, k):
    r = np.asarray(r, dtype=float)
    if np.any(r < 1 / k - ROW_TOL) or np.any(r > 1 + ROW_TOL):
        raise ValueError(f"r must lie in [1/k, 1] = [{1/k:.6g}, 1]")
    return np.clip(r, 1 / k, 1.0)


def s_star_xy(r, k: int) -> tuple[np.ndarray, np.ndarray]:
    r = _check_r(r, k)
    x = (1 + np.sqrt((k - 1) * np.maximum(k * r - 1, 0.0))) / k
    y = (1 - x) / (k - 1)
    return x, np.maximum(y, 0.0)


def s_star(r: float, k: int) -> np.ndarray:
    """The simplex vector (x_r, y_r, ..., y_r) with squared norm r."""
    if k < 2:
        raise ValueError("k must be >= 2")
    x, y = s_star_xy(r, k)
    out = np.full(k, float(y))
    out[0] = float(x)
    return out


def f_of_r(r, k: int, h: HFunction = NEG_XLOGX):
    """f(r) = h(x_r) + (k-1) h(y_r)."""
    x, y = s_star_xy(r, k)
    out = h(x) + (k - 1) * h(y)
    return out if out.ndim else float(out)


def f_prime(r, k: int, h: HFunction = NEG_XLOGX):
    """Derivative of f on [1/k, 1); at r = 1/k it is the limit h''(1/k)/2."""
    r = _check_r(r, k)
    x, y = s_star_xy(r, k)
    root = np.sqrt((k - 1) * np.maximum(k * r - 1, 0.0))
    with np.errstate(divide="ignore", invalid="ignore"):
        dx = (k - 1) / (2 * root)
        out = dx * (h.d(1, x) - h.d(1, y))
    out = np.where(root == 0, h.d(2, np.asarray(1.0 / k)) / 2, out)
    return out if out.ndim else float(out)


def psi_of(x, k: int, h: HFunction = NEG_XLOGX):
    """psi(x) = f(1/k + (k-1) x / k), the rescaling of f onto [0, 1]."""
    x = np.asarray(x, dtype=float)
    return f_of_r(1 / k + (k - 1) * x / k, k, h)


def eta(y, k: int, h: HFunction = NEG_XLOGX):
    """(f(1/k) - f(1/k + y)) / y, continued by -f'(1/k) at y = 0."""
    y = np.asarray(y, dtype=float)
    if np.any(y < 0) or np.any(y > 1 - 1 / k + ROW_TOL):
        raise ValueError(f"y must lie in [0, 1 - 1/k] for k={k}")
    y = np.minimum(y, 1 - 1 / k)
    f0 = f_of_r(1 / k, k, h)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = (f0 - f_of_r(1 / k + y, k, h)) / y
    out = np.where(y == 0, -f_prime(1 / k, k, h), out)
    return out if out.ndim else float(out)


def zeta(y, k: int, h: HFunction = NEG_XLOGX):
    """f(1/k + y) - f(1/k) - y f'(1/k + y); its sign is that of eta'."""
    y = np.asarray(y, dtype=float)
    if np.any(y < 0) or np.any(y > 1 - 1 / k + ROW_TOL):
        raise ValueError(f"y must lie in [0, 1 - 1/k] for k={k}")
    y = np.minimum(y, 1 - 1 / k)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = f_of_r(1 / k + y, k, h) - f_of_r(1 / k, k, h) - y * f_prime(1 / k + y, k, h)
    out = np.where(y == 0, 0.0, out)
    return out if out.ndim else float(out)


def remark_y(k: int) -> float:
    """(k-2)^2 / (k(k-1)), the interior zero of zeta."""
    return (k - 2) ** 2 / (k * (k - 1))


# ------------------------------------------------------------ B_rho(m) and the max over m

def m_upper(rho: float, k: int) -> float:
    return k * (k - rho) / (k - 1)


def b_rho(rho: float, m: int, k: int) -> np.ndarray:
    """First m rows uniform, remaining k-m rows s*((k rho - m) / (k (k - m)))."""
    if not 1 - ROW_TOL <= rho <= k + ROW_TOL:
        raise ValueError(f"rho must lie in [1, k], got {rho}")
    if not 0 <= m <= m_upper(rho, k) + 1e-12:
        raise ValueError(f"m={m} outside [0, k(k-rho)/(k-1)] = [0, {m_upper(rho, k):.6g}]")
    A = np.full((k, k), 1.0 / k)
    if m < k:
        r = (k * rho - m) / (k * (k - m))
        A[m:] = s_star(min(max(r, 1 / k), 1.0), k)
    return A


def q_rho(m, rho: float, k: int, h: HFunction = NEG_XLOGX):
    """m k h(1/k) + (k - m) f((k rho - m) / (k (k - m))), with the m = k term read as 0."""
    m = np.asarray(m, dtype=float)
    rest = k - m
    with np.errstate(divide="ignore", invalid="ignore"):
        r = np.where(rest > 0, (k * rho - m) / (k * rest), 1 / k)
    r = np.clip(r, 1 / k, 1.0)
    out = m * k * h(np.asarray(1.0 / k)) + np.where(rest > 0, rest * f_of_r(r, k, h), 0.0)
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class BoundResult:
    value: float
    m: float
    m_int: int | None
    value_int: float | None


def theorem8_bound(rho: float, k: int, h: HFunction = NEG_XLOGX, *, grid: int = 2001) -> BoundResult:
    """max over real m in [0, k(k-rho)/(k-1)] of ``q_rho(m)``; dense grid plus bounded refinement.

    The best integer m in range is reported alongside.
    """
    require_hypotheses(h)
    if not 1 - ROW_TOL <= rho <= k + ROW_TOL:
        raise ValueError(f"rho must lie in [1, k], got {rho}")
    rho = min(max(rho, 1.0), float(k))
    hi = max(m_upper(rho, k), 0.0)
    ms = np.linspace(0.0, hi, grid) if hi > 0 else np.array([0.0])
    vals = q_rho(ms, rho, k, h)
    i = int(np.argmax(vals))
    best_m, best = float(ms[i]), float(vals[i])
    if hi > 0:
        lo_b, hi_b = ms[max(i - 1, 0)], ms[min(i + 1, len(ms) - 1)]
        if hi_b > lo_b:
            res = minimize_scalar(lambda t: -q_rho(t, rho, k, h), bounds=(lo_b, hi_b),
                                  method="bounded", options={"xatol": 1e-12})
            if -res.fun > best:
                best_m, best = float(res.x), float(-res.fun)
    ints = [m for m in range(0, int(np.floor(hi + 1e-12)) + 1)]
    if ints:
        iv = [q_rho(m, rho, k, h) for m in ints]
        j = int(np.argmax(iv))
        return BoundResult(best, best_m, ints[j], float(iv[j]))
    return BoundResult(best, best_m, None, None)
