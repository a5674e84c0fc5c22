"""Brute-force reference computations.

Nothing here imports the package: every quantity is recomputed from its
definition by exhaustive enumeration, with exact rationals where possible.
"""
from __future__ import annotations

import itertools
import math
from fractions import Fraction


def balanced_assignments(n: int, k: int) -> list[tuple[int, ...]]:
    """All maps [n] -> [k] whose classes have exactly n/k elements."""
    return [s for s in itertools.product(range(k), repeat=n)
            if all(s.count(c) == n // k for c in range(k))]


def bichromatic_fraction(sigma, tau=None) -> Fraction:
    """Fraction of the n^2 ordered vertex pairs that are bichromatic under sigma (and tau)."""
    n = len(sigma)
    good = 0
    for u in range(n):
        for v in range(n):
            if sigma[u] != sigma[v] and (tau is None or tau[u] != tau[v]):
                good += 1
    return Fraction(good, n * n)


def first_moment(n: int, k: int, ms) -> dict[int, Fraction]:
    """E[Z] for each m, as a sum over balanced partitions of Pr[all m edges proper]."""
    ps = [bichromatic_fraction(s) for s in balanced_assignments(n, k)]
    return {m: sum((p ** m for p in ps), Fraction(0)) for m in ms}


def second_moment(n: int, k: int, ms) -> dict[int, Fraction]:
    """E[Z^2] for each m, summed over ordered pairs of balanced partitions."""
    parts = balanced_assignments(n, k)
    qs = [bichromatic_fraction(s, t) for s in parts for t in parts]
    return {m: sum((q ** m for q in qs), Fraction(0)) for m in ms}


def first_moment_by_edges(n: int, k: int, m: int) -> Fraction:
    """E[Z] by averaging over all (n^2)^m ordered edge sequences (tiny cases only)."""
    parts = balanced_assignments(n, k)
    pairs = list(itertools.product(range(n), repeat=2))
    total = 0
    for seq in itertools.product(pairs, repeat=m):
        total += sum(all(s[u] != s[v] for u, v in seq) for s in parts)
    return Fraction(total, len(pairs) ** m)


def count_proper(n: int, edges, k: int, balanced: bool = False) -> int:
    total = 0
    for s in itertools.product(range(k), repeat=n):
        if balanced and any(s.count(c) != n // k for c in range(k)):
            continue
        if all(s[u] != s[v] for u, v in edges):
            total += 1
    return total


def chromatic_number(n: int, edges) -> int:
    if n == 0:
        return 0
    for k in range(1, n + 1):
        if count_proper_exists(n, edges, k):
            return k
    return n


def count_proper_exists(n: int, edges, k: int) -> bool:
    return any(all(s[u] != s[v] for u, v in edges) for s in itertools.product(range(k), repeat=n))


def contingency_matrices(n: int, k: int) -> list[tuple[tuple[int, ...], ...]]:
    """All k x k matrices over {0..n/k} with margins n/k, by filtering the full grid."""
    s = n // k
    out = []
    for flat in itertools.product(range(s + 1), repeat=k * k):
        L = tuple(tuple(flat[i * k:(i + 1) * k]) for i in range(k))
        if all(sum(r) == s for r in L) and all(sum(L[i][j] for i in range(k)) == s for j in range(k)):
            out.append(L)
    return out


def multinomial(L) -> int:
    n = sum(map(sum, L))
    out = math.factorial(n)
    for row in L:
        for x in row:
            out //= math.factorial(x)
    return out
