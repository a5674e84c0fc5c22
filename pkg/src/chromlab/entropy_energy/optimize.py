"""Samplers for stochastic / doubly stochastic matrices and the local
optimizers used by the verifiers."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from ..errors import ConvergenceError
from .functionals import NEG_XLOGX, HFunction, g_c, g_c_gradient, hypothesis_flags, s_star


def sample_row_stochastic(k: int, size: int, rng: np.random.Generator) -> np.ndarray:
    """``size`` matrices with i.i.d. Dirichlet(1, ..., 1) rows (uniform on S_k)."""
    return rng.dirichlet(np.ones(k), size=(size, k))


def sample_birkhoff(k: int, size: int, rng: np.random.Generator, *, chunk: int = 2000) -> np.ndarray:
    """Random convex combinations of between 1 and k^2 random permutation matrices.

    Not uniform on the Birkhoff polytope, but every point has positive density
    in a neighbourhood of the support.
    """
    out = np.empty((size, k, k))
    terms = k * k
    eye = np.eye(k)
    for start in range(0, size, chunk):
        b = min(chunk, size - start)
        t = rng.integers(1, terms + 1, size=b)
        w = rng.gamma(1.0, size=(b, terms))
        w[np.arange(terms)[None, :] >= t[:, None]] = 0.0
        w /= w.sum(axis=1, keepdims=True)
        perms = np.argsort(rng.random((b, terms, k)), axis=-1)
        out[start:start + b] = np.einsum("st,stij->sij", w, eye[perms])
    return out


# ------------------------------------------------------------ row maximization

@dataclass(frozen=True)
class RowMaximum:
    s: np.ndarray
    value: float
    deviation: float  # max-norm distance to a permutation of s*(r)
    converged_starts: int
    starts: int
    tol: float

    @property
    def matches(self) -> bool:
        return self.deviation <= self.tol


def _row_starts(r, k, starts, rng, max_draws=200_000):
    u = np.full(k, 1.0 / k)
    R2 = r - 1.0 / k
    alphas = (1.0, 0.5, 0.2, 0.1, 0.05)
    found = []
    draws = 0
    while len(found) < starts and draws < max_draws:
        alpha = alphas[len(found) % len(alphas)] if draws < 1000 else alphas[-1]
        p = rng.dirichlet(np.full(k, alpha), size=64)
        draws += 64
        d = p - u
        nn = np.einsum("ij,ij->i", d, d)
        # the segment from u to p stays in the simplex, so the point at radius
        # sqrt(R2) on it is feasible whenever |p - u|^2 >= R2
        for di, ni in zip(d[nn > R2], nn[nn > R2]):
            s = u + di * np.sqrt(R2 / ni)
            if np.all(s > 0):
                found.append(s)
            if len(found) == starts:
                break
    return np.array(found)


def _retract(X, r, k):
    X = X - (X.sum(axis=1, keepdims=True) - 1.0) / k
    D = X - 1.0 / k
    nn = np.linalg.norm(D, axis=1, keepdims=True)
    return 1.0 / k + D * (np.sqrt(r - 1.0 / k) / nn)


def _tangent(G, S, k):
    T = G - G.mean(axis=1, keepdims=True)
    D = S - 1.0 / k
    coef = np.einsum("ij,ij->i", T, D) / np.einsum("ij,ij->i", D, D)
    return T - coef[:, None] * D


def maximize_row(r: float, k: int, h: HFunction = NEG_XLOGX, *, starts: int = 50,
                 seed: int = 0, tol: float = 1e-6, gtol: float = 1e-11,
                 max_iter: int = 20_000) -> RowMaximum:
    """Maximize sum_i h(s_i) over the simplex intersected with {sum s^2 = r}.

    Multi-start Riemannian gradient ascent on the (k-2)-sphere cut out by the
    two constraints: the gradient is projected onto the tangent space, a step
    is taken, and the point is mapped back exactly (hyperplane projection,
    then radial rescaling about the barycenter).  Steps that leave the
    positive orthant or fail an Armijo test are halved.  The best converged
    start is compared with s*(r) up to a permutation of coordinates.
    """
    if not 1.0 / k - 1e-12 <= r <= 1.0 + 1e-12:
        raise ValueError(f"r must lie in [1/k, 1], got {r}")
    target = np.sort(s_star(min(max(r, 1.0 / k), 1.0), k))[::-1]
    R2 = r - 1.0 / k
    # single feasible point up to permutation
    if R2 <= 1e-15 or r >= 1.0 - 1e-15:
        s = target.copy()
        return RowMaximum(s, float(h(s).sum()), 0.0, starts, starts, tol)

    positive = hypothesis_flags(h)["hprime0_infinite"]
    rng = np.random.Generator(np.random.PCG64(seed))
    S = _row_starts(r, k, starts, rng)
    if len(S) == 0:
        raise ConvergenceError(f"no feasible starting point found for r={r}, k={k}")
    n = len(S)
    F = h(S).sum(axis=1)
    step = np.full(n, 0.05)
    gnorm = np.full(n, np.inf)
    for _ in range(max_iter):
        with np.errstate(all="ignore"):
            T = _tangent(h.d(1, S), S, k)
        gnorm = np.linalg.norm(T, axis=1)
        # a collapsed step means F no longer resolves the remaining ascent
        live = (gnorm > gtol) & (step > 1e-14)
        if not live.any():
            break
        idx = np.nonzero(live)[0]
        trial = _retract(S[idx] + step[idx, None] * T[idx], r, k)
        feasible = np.all(trial > 0, axis=1) if positive else np.all(trial >= 0, axis=1)
        with np.errstate(all="ignore"):
            Ft = h(np.where(feasible[:, None], trial, 1.0 / k)).sum(axis=1)
        ok = feasible & (Ft > F[idx] + 1e-4 * step[idx] * gnorm[idx] ** 2)
        acc, rej = idx[ok], idx[~ok]
        S[acc] = trial[ok]
        F[acc] = Ft[ok]
        step[acc] *= 1.5
        step[rej] *= 0.5

    converged = gnorm <= 1e-7
    if not converged.any():
        raise ConvergenceError(
            f"row maximization did not converge (r={r}, k={k}); "
            f"smallest tangential gradient {gnorm.min():.3g}")
    best = int(np.argmax(np.where(converged, F, -np.inf)))
    s = S[best]
    dev = float(np.max(np.abs(np.sort(s)[::-1] - target)))
    return RowMaximum(s.copy(), float(F[best]), dev, int(converged.sum()), n, tol)


# ------------------------------------------------------------ g_c polishing

def _softmax(Z):
    Z = Z - Z.max(axis=-1, keepdims=True)
    E = np.exp(Z)
    return E / E.sum(axis=-1, keepdims=True)


def polish_g_c(A0: np.ndarray, c: float, *, maxiter: int = 2000) -> tuple[np.ndarray, float]:
    """Local ascent of g_c over row-stochastic matrices from ``A0``.

    Rows are parametrized by a softmax, which keeps iterates inside S_k and
    makes the problem unconstrained for L-BFGS.
    """
    k = A0.shape[0]
    Z0 = np.log(np.maximum(A0, 1e-300)).ravel()

    def obj(z):
        A = _softmax(z.reshape(k, k))
        A = np.maximum(A, 1e-300)
        G = g_c_gradient(A, c)
        dz = A * (G - (A * G).sum(axis=1, keepdims=True))
        return -float(g_c(A, c)), -dz.ravel()

    res = minimize(obj, Z0, jac=True, method="L-BFGS-B",
                   options={"maxiter": maxiter, "gtol": 1e-12, "ftol": 1e-15})
    A = _softmax(res.x.reshape(k, k))
    return A, float(g_c(A, c))
