"""Exact first and second moments of the number Z of balanced k-colorings of
G(n, m), computed by enumerating overlap (contingency) matrices.

Two balanced partitions sigma, tau of ``n`` vertices overlap in a k x k
matrix ``L`` whose entry ``L[i][j]`` counts vertices colored i by sigma and j
by tau; all its row and column sums equal ``n/k``.  A uniformly random
ordered vertex pair is bichromatic under both partitions with probability
``1 - 2/k + sum((L/n)**2)`` and exactly ``n!/prod(L!)`` ordered pairs of
balanced partitions share a given ``L``.

Everything here is exact (``fractions.Fraction``) except the scaling probe,
which uses mpmath because its exponent ``c*n`` need not be an integer.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator

import mpmath

from .errors import InfeasibleError

ENUMERATION_LIMIT = 10**8

Matrix = tuple[tuple[int, ...], ...]


def _margin(n: int, k: int) -> int:
    if k < 1 or n < 0:
        raise ValueError(f"need n >= 0 and k >= 1 (n={n}, k={k})")
    if n % k:
        raise ValueError(f"k must divide n (n={n}, k={k})")
    return n // k


def contingency_bound(n: int, k: int) -> int:
    """``(n/k + 1)**((k-1)**2)``, an upper bound on the number of matrices."""
    return (_margin(n, k) + 1) ** ((k - 1) ** 2)


def enumerate_contingency(n: int, k: int, *, limit: int = ENUMERATION_LIMIT) -> Iterator[Matrix]:
    """Every k x k nonnegative integer matrix with all margins ``n/k``, once.

    Matrices come out in decreasing lexicographic order of their row-major
    entries (the all-on-the-diagonal matrix first).  Only the leading
    (k-1) x (k-1) block is free; the last column and row are forced.
    """
    s = _margin(n, k)
    bound = contingency_bound(n, k)
    if bound > limit:
        raise InfeasibleError(
            f"|D| <= (n/k+1)^((k-1)^2) = {bound} exceeds the enumeration guard {limit}")
    if k == 1:
        yield ((s,),)
        return

    col_left = [s] * k
    rows: list[tuple[int, ...]] = []

    def fill_row(j: int, left: int, row: list[int]):
        # entries j..k-1 of the current row; the last entry takes what is left
        if j == k - 1:
            if left <= col_left[j]:
                yield row + [left]
            return
        # remaining columns after j must be able to absorb what row j leaves
        room = sum(col_left[j + 1:])
        for x in range(min(left, col_left[j]), max(0, left - room) - 1, -1):
            yield from fill_row(j + 1, left - x, row + [x])

    def rec(i: int):
        if i == k - 1:
            last = tuple(col_left)
            yield tuple(rows) + (last,)
            return
        for row in fill_row(0, s, []):
            for j, x in enumerate(row):
                col_left[j] -= x
            rows.append(tuple(row))
            yield from rec(i + 1)
            rows.pop()
            for j, x in enumerate(row):
                col_left[j] += x

    yield from rec(0)


def count_contingency(n: int, k: int, *, limit: int = ENUMERATION_LIMIT) -> int:
    return sum(1 for _ in enumerate_contingency(n, k, limit=limit))


@lru_cache(maxsize=None)
def _factorial(x: int) -> int:
    return math.factorial(x)


def multinomial(L: Matrix) -> int:
    """``n!/prod(l_ij!)``: ordered pairs of balanced partitions with overlap ``L``."""
    n = sum(map(sum, L))
    out = _factorial(n)
    for row in L:
        for x in row:
            out //= _factorial(x)
    return out


def pair_bichromatic_probability(L: Matrix, k: int) -> Fraction:
    """Probability a uniform ordered vertex pair is properly colored by both partitions."""
    n = sum(map(sum, L))
    sq = sum(x * x for row in L for x in row)
    return 1 - Fraction(2, k) + Fraction(sq, n * n)


def balanced_partition_count(n: int, k: int) -> int:
    s = _margin(n, k)
    return _factorial(n) // _factorial(s) ** k


@dataclass(frozen=True)
class ExactMoment:
    value: Fraction
    n: int
    k: int
    m: int

    def __float__(self) -> float:
        return float(self.value)

    def as_json(self) -> dict:
        return {
            "n": self.n, "k": self.k, "m": self.m,
            "numerator": str(self.value.numerator),
            "denominator": str(self.value.denominator),
            "approx": float(self.value),
        }


def _check_m(m: int) -> int:
    if isinstance(m, bool) or int(m) != m or m < 0:
        raise ValueError(f"m must be a nonnegative integer, got {m!r}")
    return int(m)


def expected_Z(n: int, k: int, m: int) -> ExactMoment:
    """``E[Z] = n!/((n/k)!)^k * (1 - 1/k)^m``."""
    m = _check_m(m)
    value = balanced_partition_count(n, k) * Fraction(k - 1, k) ** m
    return ExactMoment(value, n, k, m)


def expected_Z2(n: int, k: int, m: int, *, limit: int = ENUMERATION_LIMIT) -> ExactMoment:
    """``E[Z^2] = sum_L n!/prod(l_ij!) * (1 - 2/k + sum (l_ij/n)^2)^m``."""
    m = _check_m(m)
    total = Fraction(0)
    if n == 0:
        return ExactMoment(Fraction(1), n, k, m)
    for L in enumerate_contingency(n, k, limit=limit):
        total += multinomial(L) * pair_bichromatic_probability(L, k) ** m
    return ExactMoment(total, n, k, m)


def edges_for_density(c, n: int) -> int:
    """``m = floor(c*n)``.  Floats are read through their shortest repr, so
    ``0.7`` means 7/10 and ``floor(0.7 * 10) == 7``."""
    if isinstance(c, float):
        c = Fraction(repr(c))
    c = Fraction(c)
    if c < 0:
        raise ValueError(f"c must be nonnegative, got {c}")
    return math.floor(c * n)


@dataclass(frozen=True)
class MomentRatio:
    n: int
    k: int
    c: float
    m: int
    first: ExactMoment
    second: ExactMoment
    ratio: Fraction  # E[Z^2] / E[Z]^2

    @property
    def pz_bound(self) -> Fraction:
        """Paley-Zygmund lower bound ``E[Z]^2 / E[Z^2]`` on ``Pr[Z > 0]``."""
        return 1 / self.ratio

    def as_json(self) -> dict:
        return {
            "n": self.n, "k": self.k, "c": self.c, "m": self.m,
            "EZ": self.first.as_json(), "EZ2": self.second.as_json(),
            "ratio": {"numerator": str(self.ratio.numerator),
                      "denominator": str(self.ratio.denominator),
                      "approx": float(self.ratio)},
            "pz_bound": float(self.pz_bound),
        }


def second_moment_ratio(n: int, k: int, c, *, limit: int = ENUMERATION_LIMIT) -> MomentRatio:
    m = edges_for_density(c, n)
    first = expected_Z(n, k, m)
    second = expected_Z2(n, k, m, limit=limit)
    return MomentRatio(n, k, float(c), m, first, second, second.value / first.value ** 2)


def stirling_bound_holds(L: Matrix) -> bool:
    """Check ``n!/prod(l!) <= prod((l/n)^(-l/n))^n * min(3 sqrt(n), [(2 pi n)^(k^2-1) prod(l/n)]^(-1/2))``.

    The second member of the min is only meaningful when every entry is positive.
    """
    n = sum(map(sum, L))
    k2 = sum(len(r) for r in L)
    with mpmath.workdps(30):
        lhs = mpmath.mpf(multinomial(L))
        ent = mpmath.mpf(1)
        prod = mpmath.mpf(1)
        for row in L:
            for x in row:
                if x:
                    p = mpmath.mpf(x) / n
                    ent *= p ** (-x)
                prod *= mpmath.mpf(x) / n
        cap = 3 * mpmath.sqrt(n)
        if prod > 0:
            cap = min(cap, ((2 * mpmath.pi * n) ** (k2 - 1) * prod) ** mpmath.mpf(-0.5))
        return bool(lhs <= ent * cap * (1 + mpmath.mpf(10) ** -20))


@dataclass(frozen=True)
class ProbeRow:
    n: int
    S: float
    normalized: float


@dataclass(frozen=True)
class ProbeReport:
    k: int
    c: float
    beta: float
    hypothesis_holds: bool  # c < c_{k-1}, under which a finite constant is guaranteed
    rows: tuple[ProbeRow, ...]

    @property
    def max_ratio(self) -> float:
        return max(r.normalized for r in self.rows)


def laplace_scaling_probe(k: int, c: float, ns, *, limit: int = ENUMERATION_LIMIT) -> ProbeReport:
    """Exact value of ``S(n) = sum_L n!/prod(l!) exp(n phi(kL/n))`` with
    ``phi = c * energy`` and its normalization ``S(n) n^(k-1) / (k^2 e^phi(J_k))^n``.

    ``exp(n phi(kL/n))`` equals ``(1 - 2/k + sum (l/n)^2)^(c n)``.
    """
    from .thresholds import c_k

    ck1 = c_k(k - 1) if k > 1 else 0.0
    beta = (ck1 - c) / (2 * (k - 1) ** 2) if k > 1 else float("nan")
    rows = []
    with mpmath.workdps(50):
        cc = mpmath.mpf(repr(c)) if isinstance(c, float) else mpmath.mpf(c)
        phi_J = cc * 2 * mpmath.log(1 - mpmath.mpf(1) / k)
        for n in ns:
            _margin(n, k)
            S = mpmath.mpf(0)
            for L in enumerate_contingency(n, k, limit=limit):
                p = pair_bichromatic_probability(L, k)
                S += multinomial(L) * (mpmath.mpf(p.numerator) / p.denominator) ** (cc * n)
            norm = S * mpmath.mpf(n) ** (k - 1) / (k * k * mpmath.exp(phi_J)) ** n
            rows.append(ProbeRow(n, float(S), float(norm)))
    return ProbeReport(k, float(c), float(beta), bool(c < ck1), tuple(rows))
