import io
import itertools
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.stats import chisquare

from chromlab.graphs import (
    Multigraph,
    SimpleGraph,
    blemishes,
    derive_seed,
    dumps_edgelist,
    gnm_from_draws,
    load_edgelist,
    loads_edgelist,
    sample_gnm,
    sample_gnp,
    simplify,
    write_edgelist,
)


def test_single_vertex_gives_loops():
    g = sample_gnm(1, 3, seed=11)
    assert g.edge_list() == [(0, 0)] * 3


def test_empty_gnm():
    g = sample_gnm(4, 0, seed=1)
    assert g.m == 0 and g.edge_list() == []


def test_gnm_rejects():
    with pytest.raises(ValueError):
        sample_gnm(0, 1, 0)
    with pytest.raises(ValueError):
        sample_gnm(3, -1, 0)


@pytest.mark.slow
def test_loop_fraction_over_a_million_seeds():
    loops = sum(sample_gnm(2, 1, s).has_loop for s in range(10**6))
    assert abs(loops / 10**6 - 0.5) <= 0.002


def test_gnm_edge_distribution_chi_square():
    # n = 3, one edge: loops have probability 1/9, each non-loop pair 2/9
    counts = Counter(tuple(sample_gnm(3, 1, derive_seed(5, i)).edge_list()[0]) for i in range(30000))
    cells = [(0, 0), (1, 1), (2, 2), (0, 1), (0, 2), (1, 2)]
    expected = np.array([1, 1, 1, 2, 2, 2]) / 9 * 30000
    assert chisquare([counts[c] for c in cells], expected).pvalue > 1e-4


def test_conditioned_on_no_blemish_uniform_over_simple_graphs():
    n, m = 3, 2
    pairs = list(itertools.product(range(n), repeat=2))
    graphs = Counter()
    outcomes = 0
    for draw in itertools.product(pairs, repeat=m):
        outcomes += 1
        g = gnm_from_draws(n, np.array(draw))
        if sum(blemishes(g).values()) == 0:
            graphs[frozenset(g.edge_list())] += 1
    assert outcomes == 81
    assert len(graphs) == 3
    assert set(graphs.values()) == {8}


def test_gnp_extremes():
    assert sample_gnp(6, 0.0, 3).m == 0
    g = sample_gnp(6, 1.0, 3)
    assert set(g.edges) == set(itertools.combinations(range(6), 2))


@pytest.mark.parametrize("p", [-0.1, 1.5, float("nan")])
def test_gnp_rejects_bad_p(p):
    with pytest.raises(ValueError):
        sample_gnp(5, p, 0)


def test_gnp_mean_edge_count():
    mean = np.mean([sample_gnp(100, 0.5, derive_seed(7, i)).m for i in range(10**4)])
    assert abs(mean - 2475) <= 25


def test_determinism():
    assert np.array_equal(sample_gnm(50, 80, 123).edges, sample_gnm(50, 80, 123).edges)
    assert sample_gnp(50, 0.1, 123) == sample_gnp(50, 0.1, 123)
    assert not np.array_equal(sample_gnm(50, 80, 123).edges, sample_gnm(50, 80, 124).edges)


def test_derive_seed_streams_distinct():
    seeds = {derive_seed(1, i) for i in range(1000)}
    assert len(seeds) == 1000
    assert derive_seed(1, 0) == derive_seed(1, 0)
    assert derive_seed(1, 0) != derive_seed(2, 0)


def test_simplify_examples():
    g, q = simplify(Multigraph(2, np.array([(0, 0), (0, 1), (1, 0)])))
    assert g.edges == ((0, 1),) and q == 2
    g, q = simplify(Multigraph(5, np.zeros((0, 2))))
    assert g.m == 0 and q == 0


@given(st.integers(1, 12), st.lists(st.tuples(st.integers(0, 11), st.integers(0, 11)), max_size=40))
def test_simplify_counts(n, raw):
    edges = [(u % n, v % n) for u, v in raw]
    mg = Multigraph(n, np.array(edges, dtype=np.int64).reshape(-1, 2))
    g, q = simplify(mg)
    assert g.m == mg.m - q
    assert q == sum(blemishes(mg).values())
    assert all(u < v for u, v in g.edges)
    # idempotent on the simple image
    g2, q2 = simplify(g.to_multigraph())
    assert g2 == g and q2 == 0


def test_blemishes_small_relative_to_n():
    qs = [simplify(sample_gnm(1000, 2000, derive_seed(3, i)))[1] for i in range(1000)]
    assert np.mean(qs) < 10


def test_simple_graph_validation():
    with pytest.raises(ValueError):
        SimpleGraph(3, ((0, 0),))
    with pytest.raises(ValueError):
        SimpleGraph(3, ((0, 1), (1, 0)))
    with pytest.raises(ValueError):
        SimpleGraph(3, ((0, 3),))
    assert SimpleGraph.from_edges(3, [(1, 0), (0, 1), (2, 1)]).edges == ((0, 1), (1, 2))


def test_edgelist_round_trip(tmp_path):
    g = sample_gnm(7, 12, 99)
    text = dumps_edgelist(g)
    assert text.splitlines()[0] == "7 12"
    back = loads_edgelist(text)
    assert back.n == 7 and back.edge_list() == g.edge_list()
    path = tmp_path / "g.txt"
    with open(path, "w") as fh:
        write_edgelist(g, fh)
    assert load_edgelist(path).edge_list() == g.edge_list()


def test_edgelist_comments_and_errors():
    assert loads_edgelist("# header next\n3 1\n0 2\n").edge_list() == [(0, 2)]
    with pytest.raises(ValueError):
        loads_edgelist("")
    with pytest.raises(ValueError):
        loads_edgelist("3 2\n0 1\n")
    with pytest.raises(ValueError):
        loads_edgelist("3 1\n0 x\n")
    with pytest.raises(ValueError):
        loads_edgelist("3 1\n0 5\n")
