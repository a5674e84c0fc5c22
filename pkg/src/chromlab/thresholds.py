"""Closed-form threshold quantities and the predicted chromatic-number bands.

All comparisons are carried out with :mod:`mpmath` at 40 significant digits.
A value of ``d`` that lies within ``ENDPOINT_TOL`` (relative) of a threshold
``2k log k`` is treated as equal to it, and equality belongs to the next
``k`` because the defining inequality ``d < 2k log k`` is strict.  The same
tolerance makes the lower endpoint ``(2k-1) log k`` of the exact band
inclusive.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath

ENDPOINT_TOL = 1e-12
_DPS = 40


def _check_d(d: float) -> mpmath.mpf:
    if not isinstance(d, (int, float)) or isinstance(d, bool):
        raise TypeError(f"d must be a real number, got {type(d).__name__}")
    if not math.isfinite(d) or d <= 0:
        raise ValueError(f"d must be positive and finite, got {d!r}")
    return mpmath.mpf(d)


def _check_k(k: int, minimum: int) -> int:
    if isinstance(k, bool) or int(k) != k:
        raise TypeError(f"k must be an integer, got {k!r}")
    k = int(k)
    if k < minimum:
        raise ValueError(f"k must be >= {minimum}, got {k}")
    return k


def _tol(x: mpmath.mpf) -> mpmath.mpf:
    return ENDPOINT_TOL * max(mpmath.mpf(1), abs(x))


def _upper(k: int) -> mpmath.mpf:
    """2k log k at working precision."""
    return 2 * k * mpmath.log(k)


def _lower(k: int) -> mpmath.mpf:
    """(2k-1) log k at working precision."""
    return (2 * k - 1) * mpmath.log(k)


def k_d(d: float) -> int:
    """Smallest integer k with ``d < 2 k log k``.

    >>> k_d(1.0), k_d(7.0)
    (2, 4)
    """
    with mpmath.workdps(_DPS):
        dd = _check_d(d)
        # 2k log k is increasing for k >= 1
        k = 1
        while True:
            t = _upper(k)
            if dd < t - _tol(t):
                return k
            k += 1


def c_k(k: int) -> float:
    """``k log k``; by convention ``c_1 = 0``."""
    k = _check_k(k, 1)
    with mpmath.workdps(_DPS):
        return float(k * mpmath.log(k))


def u_k(k: int) -> float:
    """First-moment density ``log k / (log k - log(k-1))`` above which G(n, m=cn)
    is w.h.p. not k-colorable."""
    k = _check_k(k, 2)
    with mpmath.workdps(_DPS):
        return float(mpmath.log(k) / (mpmath.log(k) - mpmath.log(k - 1)))


@dataclass(frozen=True)
class ThresholdProfile:
    """Threshold quantities for a fixed number of colors ``k``.

    ``band_lo`` and ``band_hi`` are in expected-degree units of G(n, d/n);
    ``u_k`` and ``c_k`` are in edges per vertex of G(n, m).
    """

    k: int
    u_k: float
    c_k: float
    band_lo: float
    band_hi: float


def threshold_profile(k: int) -> ThresholdProfile:
    k = _check_k(k, 2)
    with mpmath.workdps(_DPS):
        return ThresholdProfile(
            k=k,
            u_k=u_k(k),
            c_k=c_k(k),
            band_lo=float(_lower(k)),
            band_hi=float(_upper(k)),
        )


@dataclass(frozen=True)
class Band:
    """Prediction for chi(G(n, d/n)): always ``{k_d, k_d + 1}``; when ``d``
    falls in ``[(2k-1) log k, 2k log k)`` the value is pinned to ``exact``."""

    d: float
    k_d: int
    values: tuple[int, int]
    exact: int | None

    @property
    def exact_flag(self) -> bool:
        return self.exact is not None

    def __contains__(self, chi: int) -> bool:
        return chi in self.values


def predicted_band(d: float) -> Band:
    kd = k_d(d)
    exact = None
    with mpmath.workdps(_DPS):
        lo = _lower(kd)
        if mpmath.mpf(d) >= lo - _tol(lo):
            exact = kd + 1
    return Band(d=float(d), k_d=kd, values=(kd, kd + 1), exact=exact)


def threshold_record(*, d: float | None = None, k: int | None = None) -> dict:
    """JSON-ready record ``{d, k_d, band, exact_flag, u_k, c_k}``.

    Given ``d`` the threshold quantities refer to ``k_d``; given only ``k`` the
    band fields describe the exact-prediction interval for that ``k``.
    """
    if (d is None) == (k is None):
        raise ValueError("give exactly one of d or k")
    if d is not None:
        band = predicted_band(d)
        kk = band.k_d
        return {
            "d": band.d,
            "k_d": kk,
            "band": list(band.values),
            "exact_flag": band.exact_flag,
            "exact_chi": band.exact,
            "u_k": u_k(kk),
            "c_k": c_k(kk),
        }
    prof = threshold_profile(k)
    return {
        "d": None,
        "k_d": prof.k,
        "band": [prof.band_lo, prof.band_hi],
        "exact_flag": True,
        "exact_chi": prof.k + 1,
        "u_k": prof.u_k,
        "c_k": prof.c_k,
    }
