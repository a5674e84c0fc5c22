"""Random graph models G(n, m) and G(n, p), blemish removal and edge-list I/O.

G(n, m) here is the multigraph model: each of the ``m`` edges joins two
vertices drawn uniformly, independently and with replacement, so the sample
space of a single edge is the ``n**2`` ordered pairs.  Edges are stored as
unordered pairs ``(min, max)``; loops and repeated edges are kept.

Randomness comes from numpy's PCG64 generator.  Every sampler takes a 64-bit
integer seed; independent streams for parallel trials are obtained with
:func:`derive_seed`, which hashes ``(seed, index)`` through ``SeedSequence``.
"""
from __future__ import annotations

import io
import os
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, TextIO

import numpy as np


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def derive_seed(seed: int, index: int) -> int:
    """Seed of the ``index``-th child stream of ``seed`` (a 64-bit integer)."""
    ss = np.random.SeedSequence([int(seed), int(index)])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


@dataclass(frozen=True)
class Multigraph:
    n: int
    edges: np.ndarray = field(repr=False)  # shape (m, 2), rows sorted u <= v

    def __post_init__(self):
        e = np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)
        if e.size and (e.min() < 0 or e.max() >= self.n):
            raise ValueError("edge endpoint out of range")
        object.__setattr__(self, "edges", np.sort(e, axis=1))

    @property
    def m(self) -> int:
        return len(self.edges)

    def edge_list(self) -> list[tuple[int, int]]:
        return [(int(u), int(v)) for u, v in self.edges]

    @property
    def has_loop(self) -> bool:
        return bool(np.any(self.edges[:, 0] == self.edges[:, 1]))


@dataclass(frozen=True)
class SimpleGraph:
    n: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        clean = set()
        for u, v in self.edges:
            u, v = int(u), int(v)
            if u == v:
                raise ValueError(f"loop at vertex {u} in a simple graph")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError("edge endpoint out of range")
            clean.add((min(u, v), max(u, v)))
        if len(clean) != len(self.edges):
            raise ValueError("duplicate edges in a simple graph")
        object.__setattr__(self, "edges", tuple(sorted(clean)))

    @property
    def m(self) -> int:
        return len(self.edges)

    def neighbors(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return adj

    def to_multigraph(self) -> Multigraph:
        return Multigraph(self.n, np.array(self.edges, dtype=np.int64).reshape(-1, 2))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "SimpleGraph":
        """Build from any iterable of pairs, merging duplicates."""
        return cls(n, tuple({(min(u, v), max(u, v)) for u, v in edges}))


def gnm_from_draws(n: int, draws: np.ndarray) -> Multigraph:
    """The multigraph produced by a sequence of ordered vertex draws, shape (m, 2)."""
    return Multigraph(n, np.asarray(draws, dtype=np.int64).reshape(-1, 2))


def sample_gnm(n: int, m: int, seed: int) -> Multigraph:
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if m < 0:
        raise ValueError(f"m must be >= 0, got {m}")
    rng = make_rng(seed)
    return gnm_from_draws(n, rng.integers(0, n, size=(m, 2)))


def sample_gnp(n: int, p: float, seed: int) -> SimpleGraph:
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p!r}")
    rng = make_rng(seed)
    iu, iv = np.triu_indices(n, k=1)
    keep = rng.random(iu.size) < p
    return SimpleGraph(n, tuple(zip(iu[keep].tolist(), iv[keep].tolist())))


def simplify(g: Multigraph) -> tuple[SimpleGraph, int]:
    """Drop loops and repeated copies; returns the simple graph and the number
    ``q`` of removed edges (blemishes)."""
    kept = {(int(u), int(v)) for u, v in g.edges if u != v}
    return SimpleGraph(g.n, tuple(kept)), g.m - len(kept)


def blemishes(g: Multigraph) -> Counter:
    """Counts of loops and of excess multiplicities (``q = loops + repeats``)."""
    c = Counter(map(tuple, g.edges.tolist()))
    loops = sum(cnt for (u, v), cnt in c.items() if u == v)
    repeats = sum(cnt - 1 for (u, v), cnt in c.items() if u != v)
    return Counter(loops=loops, repeats=repeats)


# --- edge-list interchange: first line "n m", then one "u v" per edge ---

def write_edgelist(g: Multigraph | SimpleGraph, fh: TextIO) -> None:
    edges = g.edge_list() if isinstance(g, Multigraph) else list(g.edges)
    fh.write(f"{g.n} {len(edges)}\n")
    for u, v in edges:
        fh.write(f"{u} {v}\n")


def dumps_edgelist(g: Multigraph | SimpleGraph) -> str:
    buf = io.StringIO()
    write_edgelist(g, buf)
    return buf.getvalue()


def read_edgelist(fh: TextIO) -> Multigraph:
    lines = [ln.split() for ln in fh if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise ValueError("empty edge list: expected a header line 'n m'")
    try:
        n, m = (int(x) for x in lines[0])
        edges = [(int(a), int(b)) for a, b in lines[1:]]
    except ValueError as exc:
        raise ValueError(f"malformed edge list: {exc}") from None
    if len(edges) != m:
        raise ValueError(f"header announces {m} edges but {len(edges)} follow")
    return Multigraph(n, np.array(edges, dtype=np.int64).reshape(-1, 2))


def loads_edgelist(text: str) -> Multigraph:
    return read_edgelist(io.StringIO(text))


def load_edgelist(path: str | os.PathLike) -> Multigraph:
    with open(path) as fh:
        return read_edgelist(fh)
