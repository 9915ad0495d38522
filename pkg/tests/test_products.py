import itertools
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from daisy_turan.daisy import DaisyPattern
from daisy_turan.errors import InvalidInputError, ResourceRefusal
from daisy_turan.family import SetFamily
from daisy_turan.products import (
    UniformHypergraph,
    daisy_hypergraph,
    enumerate_copies,
    hypergraph_id,
    power,
    star_product,
)
from daisy_turan.search import brute_force_oracle, build_daisy_constraints, solve_max_avoiding


def random_graph(rng, m, u, p=0.5):
    return UniformHypergraph(SetFamily(m, u, rng.random(comb(m, u)) < p))


def test_single_edge_product():
    e = UniformHypergraph.from_edges(2, 2, [(0, 1)])
    out = star_product(e, e)
    assert (out.m, out.u) == (4, 4)
    assert out.edge_list() == [(0, 1, 2, 3)]


@pytest.mark.parametrize("s,t", [(2, 2), (3, 2), (3, 4), (4, 4)])
def test_complete_graph_product(s, t):
    out = star_product(UniformHypergraph.complete(s, 2), UniformHypergraph.complete(t, 2))
    expected = {c for c in itertools.combinations(range(s + t), 4) if sum(x < s for x in c) == 2}
    assert set(out.edge_list()) == expected


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(2, 5), st.integers(1, 3), st.integers(2, 5), st.integers(1, 3))
def test_product_sizes_multiply(seed, m1, u1, m2, u2):
    rng = np.random.default_rng(seed)
    F = random_graph(rng, m1, min(u1, m1))
    G = random_graph(rng, m2, min(u2, m2))
    out = star_product(F, G)
    assert len(out) == len(F) * len(G)
    assert (out.m, out.u) == (F.m + G.m, F.u + G.u)
    # brute force: every edge of the product splits back into an F-edge and a shifted G-edge
    for e in out.edge_list():
        a = tuple(x for x in e if x < F.m)
        b = tuple(x - F.m for x in e if x >= F.m)
        assert a in F.edges and b in G.edges


def test_power_basics():
    F = UniformHypergraph.complete(4, 2)
    assert power(F, 1) == F
    sq = power(F, 2)
    assert len(sq) == comb(4, 2) ** 2 and sq.u == 4 and sq.m == 8
    assert len(power(UniformHypergraph.complete(3, 1), 3)) == 27
    for d in (0, -1):
        with pytest.raises(InvalidInputError):
            power(F, d)


def test_associativity():
    rng = np.random.default_rng(11)
    for _ in range(10):
        F = random_graph(rng, 4, 2)
        assert star_product(star_product(F, F), F) == star_product(F, star_product(F, F))
        assert power(F, 3) == star_product(star_product(F, F), F)


def test_daisy_hypergraph_shape():
    H = daisy_hypergraph(DaisyPattern(3, 4, 2))
    assert (H.m, H.u, len(H)) == (5, 3, 6)
    assert all(0 in e for e in H.edge_list())


@pytest.mark.parametrize("n", [5, 6, 7])
def test_copies_match_daisy_generator(n):
    pattern = DaisyPattern(3, 4, 2)
    a = enumerate_copies(daisy_hypergraph(pattern), n).constraint_set()
    b = build_daisy_constraints(n, pattern).constraint_set()
    assert a == b


@pytest.mark.parametrize("pattern", [DaisyPattern(2, 4, 2), DaisyPattern(3, 4, 3), DaisyPattern(3, 3, 1), DaisyPattern(4, 4, 2)])
def test_copies_match_other_patterns(pattern):
    n = pattern.min_ground + 1
    a = enumerate_copies(daisy_hypergraph(pattern), n).constraint_set()
    assert a == build_daisy_constraints(n, pattern).constraint_set()


def test_single_edge_forbidden():
    cs = enumerate_copies(UniformHypergraph.from_edges(3, 3, [(0, 1, 2)]), 5)
    assert len(cs.constraints) == comb(5, 3)
    assert all(len(c) == 1 for c in cs.constraints)
    assert solve_max_avoiding(cs).objective == 0


def test_k4_at_n5():
    cs = enumerate_copies(UniformHypergraph.complete(4, 2), 5)
    assert len(cs.constraints) == 5
    assert all(len(c) == 6 for c in cs.constraints)
    assert list(cs.constraints) == sorted(cs.constraints)


def test_copies_ex_matches_oracle_and_is_relabel_invariant():
    H = UniformHypergraph.from_edges(4, 2, [(0, 1), (1, 2), (2, 3)])  # path with 3 edges
    cs = enumerate_copies(H, 5)
    assert solve_max_avoiding(cs).objective == brute_force_oracle(cs).objective
    H2 = UniformHypergraph.from_edges(4, 2, [(0, 3), (0, 2), (1, 2)])
    assert enumerate_copies(H2, 5).constraint_set() == cs.constraint_set()


def test_small_ground_and_isolated_vertices():
    H = UniformHypergraph.from_edges(5, 2, [(0, 1)])
    assert enumerate_copies(H, 4).constraints == ()
    assert len(enumerate_copies(H, 5).constraints) == comb(5, 2)


def test_refusals():
    with pytest.raises(ResourceRefusal):
        enumerate_copies(UniformHypergraph.complete(9, 2), 9)
    with pytest.raises(ResourceRefusal):
        enumerate_copies(UniformHypergraph.complete(8, 2), 40)


def test_hypergraph_id_stable():
    a = UniformHypergraph.complete(4, 2)
    assert hypergraph_id(a) == hypergraph_id(UniformHypergraph.complete(4, 2))
    assert hypergraph_id(a) != hypergraph_id(UniformHypergraph.from_edges(4, 2, [(0, 1)]))
