"""Exact colorability, chromatic number and exact coloring counts.

The decision procedure is a DSATUR-ordered backtracking search with
forward checking on bitmask color domains.  Among uncolored vertices it picks
the one with the fewest remaining colors (largest saturation), then largest
degree, then lowest index.  Colors are introduced in increasing order only,
which removes the k! relabelings of every coloring from the search.

Before searching, vertices of degree < k are peeled off repeatedly (they can
always be colored last) and the remaining k-core is split into connected
components that are decided independently.

Counting never uses symmetry breaking: it is a plain enumeration with
pruning, so counts are exact for every assignment.
"""
from __future__ import annotations

import time
from collections import deque
from typing import Sequence

from .errors import InfeasibleError, SolverTimeout
from .graphs import Multigraph, SimpleGraph

COUNT_LIMIT = 10**9


# ---------------------------------------------------------------- decisions

def _adjacency(g: SimpleGraph) -> list[list[int]]:
    return g.neighbors()


def _two_coloring(adj: Sequence[Sequence[int]], vertices) -> dict[int, int] | None:
    color: dict[int, int] = {}
    for s in vertices:
        if s in color:
            continue
        color[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if w not in color:
                    color[w] = 1 - color[u]
                    queue.append(w)
                elif color[w] == color[u]:
                    return None
    return color


def _core(adj: Sequence[Sequence[int]], k: int) -> tuple[set[int], list[int]]:
    """Vertices of the k-core and the peeling order of everything else."""
    deg = [len(a) for a in adj]
    alive = set(range(len(adj)))
    stack = [v for v in alive if deg[v] < k]
    removed: list[int] = []
    gone = set()
    while stack:
        v = stack.pop()
        if v in gone:
            continue
        gone.add(v)
        removed.append(v)
        for w in adj[v]:
            if w not in gone:
                deg[w] -= 1
                if deg[w] < k:
                    stack.append(w)
    return alive - gone, removed


def _components(adj, vertices: set[int]) -> list[list[int]]:
    seen: set[int] = set()
    comps = []
    for s in sorted(vertices):
        if s in seen:
            continue
        comp = [s]
        seen.add(s)
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if w in vertices and w not in seen:
                    seen.add(w)
                    comp.append(w)
                    queue.append(w)
        comps.append(sorted(comp))
    return comps


class _Search:
    """Backtracking k-coloring of one connected component."""

    CHECK_EVERY = 2048

    def __init__(self, adj, vertices, k, deadline):
        index = {v: i for i, v in enumerate(vertices)}
        self.vertices = vertices
        self.adj = [[index[w] for w in adj[v] if w in index] for v in vertices]
        self.deg = [len(a) for a in self.adj]
        self.k = k
        self.deadline = deadline
        self.nodes = 0
        n = len(vertices)
        self.color = [-1] * n
        self.dom = [(1 << k) - 1] * n

    def _select(self, uncolored: list[int]) -> int:
        dom, deg = self.dom, self.deg
        best = uncolored[0]
        bkey = (dom[best].bit_count(), -deg[best], best)
        for v in uncolored:
            key = (dom[v].bit_count(), -deg[v], v)
            if key < bkey:
                best, bkey = v, key
        return best

    def run(self) -> list[int] | None:
        uncolored = list(range(len(self.vertices)))
        if self._solve(uncolored, 0):
            return self.color
        return None

    def _solve(self, uncolored: list[int], used: int) -> bool:
        if not uncolored:
            return True
        self.nodes += 1
        if self.deadline is not None and self.nodes % self.CHECK_EVERY == 0:
            if time.monotonic() > self.deadline:
                raise SolverTimeout(f"search aborted after {self.nodes} nodes")
        v = self._select(uncolored)
        rest = [u for u in uncolored if u != v]
        allowed = self.dom[v] & ((1 << min(used + 1, self.k)) - 1)
        color, dom, adj = self.color, self.dom, self.adj
        c = 0
        while allowed:
            if allowed & 1:
                bit = 1 << c
                color[v] = c
                changed = []
                ok = True
                for w in adj[v]:
                    if color[w] < 0 and dom[w] & bit:
                        dom[w] &= ~bit
                        changed.append(w)
                        if not dom[w]:
                            ok = False
                            break
                if ok and self._solve(rest, max(used, c + 1)):
                    return True
                for w in changed:
                    dom[w] |= bit
                color[v] = -1
            allowed >>= 1
            c += 1
        return False


def find_k_coloring(g: SimpleGraph, k: int, *, deadline: float | None = None) -> list[int] | None:
    """A proper coloring with colors in ``range(k)``, or ``None`` if none exists.

    ``deadline`` is an absolute ``time.monotonic()`` value; past it the search
    raises :class:`SolverTimeout`.
    """
    if k < 0:
        raise ValueError(f"k must be nonnegative, got {k}")
    n = g.n
    if n == 0:
        return []
    if k == 0:
        return None
    adj = _adjacency(g)
    if k == 1:
        return [0] * n if g.m == 0 else None
    if k == 2:
        col = _two_coloring(adj, range(n))
        return None if col is None else [col[v] for v in range(n)]

    core, peeled = _core(adj, k)
    coloring = [-1] * n
    for comp in _components(adj, core):
        sol = _Search(adj, comp, k, deadline).run()
        if sol is None:
            return None
        for i, v in enumerate(comp):
            coloring[v] = sol[i]
    # peeled vertices had < k live neighbours when removed; reinsert in reverse
    for v in reversed(peeled):
        taken = {coloring[w] for w in adj[v]}
        coloring[v] = next(c for c in range(k) if c not in taken)
    return coloring


def is_k_colorable(g: SimpleGraph, k: int, *, deadline: float | None = None) -> bool:
    return find_k_coloring(g, k, deadline=deadline) is not None


def is_proper(g: SimpleGraph | Multigraph, coloring: Sequence[int]) -> bool:
    edges = g.edges if isinstance(g, SimpleGraph) else g.edge_list()
    return all(coloring[u] != coloring[v] for u, v in edges)


# ---------------------------------------------------------------- bounds

def greedy_clique(g: SimpleGraph) -> int:
    """Size of a clique found greedily from every start vertex (a lower bound on chi)."""
    if g.n == 0:
        return 0
    adj = [set(a) for a in _adjacency(g)]
    best = 1
    for s in range(g.n):
        clique = [s]
        cand = sorted(adj[s], key=lambda w: (-len(adj[w]), w))
        for w in cand:
            if all(w in adj[u] for u in clique):
                clique.append(w)
        best = max(best, len(clique))
    return best


def dsatur_greedy(g: SimpleGraph) -> list[int]:
    """Greedy DSATUR coloring (an upper bound on chi), same tie-breaking as the search."""
    adj = _adjacency(g)
    n = g.n
    color = [-1] * n
    sat: list[set[int]] = [set() for _ in range(n)]
    deg = [len(a) for a in adj]
    for _ in range(n):
        v = min((u for u in range(n) if color[u] < 0),
                key=lambda u: (-len(sat[u]), -deg[u], u))
        c = 0
        while c in sat[v]:
            c += 1
        color[v] = c
        for w in adj[v]:
            sat[w].add(c)
    return color


def chromatic_bounds(g: SimpleGraph) -> tuple[int, int]:
    if g.n == 0:
        return 0, 0
    if g.m == 0:
        return 1, 1
    lo = greedy_clique(g)
    if lo < 3 and _two_coloring(_adjacency(g), range(g.n)) is None:
        lo = 3
    hi = max(dsatur_greedy(g)) + 1
    return lo, hi


def chromatic_number(g: SimpleGraph, *, time_budget: float | None = None) -> int:
    """Exact chromatic number.  ``time_budget`` (seconds) bounds the whole call."""
    deadline = None if time_budget is None else time.monotonic() + time_budget
    lo, hi = chromatic_bounds(g)
    for k in range(lo, hi):
        if is_k_colorable(g, k, deadline=deadline):
            return k
    return hi


# ---------------------------------------------------------------- counting

def _count_setup(g: Multigraph | SimpleGraph, k: int, limit: int):
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if k ** g.n > limit:
        raise InfeasibleError(
            f"enumerating k^n = {k}^{g.n} assignments exceeds the guard {limit:.3g}")
    edges = g.edges if isinstance(g, SimpleGraph) else g.edge_list()
    if any(u == v for u, v in edges):
        return None
    # each vertex checks only neighbours that precede it in index order
    earlier: list[list[int]] = [[] for _ in range(g.n)]
    for u, v in set(edges):
        earlier[max(u, v)].append(min(u, v))
    return earlier


def count_colorings(g: Multigraph | SimpleGraph, k: int, *, limit: int = COUNT_LIMIT) -> int:
    """Number of maps V -> [k] with no monochromatic edge.  A loop gives 0."""
    earlier = _count_setup(g, k, limit)
    if earlier is None:
        return 0
    n = g.n
    color = [0] * n

    def rec(v: int) -> int:
        if v == n:
            return 1
        total = 0
        for c in range(k):
            if all(color[w] != c for w in earlier[v]):
                color[v] = c
                total += rec(v + 1)
        return total

    return rec(0)


def count_balanced_colorings(g: Multigraph | SimpleGraph, k: int, *,
                             limit: int = COUNT_LIMIT) -> int:
    """Number of proper colorings whose classes all have exactly n/k vertices."""
    if g.n % k:
        raise ValueError(f"balanced colorings need k | n (n={g.n}, k={k})")
    earlier = _count_setup(g, k, limit)
    if earlier is None:
        return 0
    n, size = g.n, g.n // k
    color = [0] * n
    load = [0] * k

    def rec(v: int) -> int:
        if v == n:
            return 1
        total = 0
        for c in range(k):
            if load[c] < size and all(color[w] != c for w in earlier[v]):
                color[v] = c
                load[c] += 1
                total += rec(v + 1)
                load[c] -= 1
        return total

    return rec(0)


def balanced_partitions(n: int, k: int):
    """Yield every balanced assignment vertex -> color as a tuple (lexicographic)."""
    if n % k:
        raise ValueError(f"balanced partitions need k | n (n={n}, k={k})")
    size = n // k
    color = [0] * n
    load = [0] * k

    def rec(v):
        if v == n:
            yield tuple(color)
            return
        for c in range(k):
            if load[c] < size:
                color[v] = c
                load[c] += 1
                yield from rec(v + 1)
                load[c] -= 1

    yield from rec(0)

