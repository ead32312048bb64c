from __future__ import annotations

import random
from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dotline import PropertyGraph, degree_ranking, derive, evaluate, materialize, shortest_path
from dotline.derive import ALL, DerivedGraph, from_label, hop_counts
from dotline.errors import ExpressionEndsOnEdge, LabelCollision, UnknownVertex

from conftest import NAIVE_FOAF
from oracles import floyd_warshall, foaf_pairs, random_graph


def test_chain_foaf(chain):
    d = derive(chain, NAIVE_FOAF, ALL)
    assert d.edges == {("a", "c"): 1}
    assert dict(foaf_pairs(chain)) == d.edges


def test_empty_graph():
    d = derive(PropertyGraph(), NAIVE_FOAF)
    assert d.vertices == [] and d.edges == {}


def test_identity_gives_loops(chain):
    d = derive(chain, ".")
    assert d.edges == {("a", "a"): 1, ("b", "b"): 1, ("c", "c"): 1}


def test_ends_on_edge_rejected(chain):
    with pytest.raises(ExpressionEndsOnEdge):
        derive(chain, "./outE")


def test_vertex_set_is_roots_plus_reached(chain):
    d = derive(chain, NAIVE_FOAF, ["a"])
    assert d.vertices == ["a", "c"]


@pytest.mark.parametrize("seed", range(15))
def test_foaf_matches_walk_count(seed):
    g = random_graph(random.Random(seed), max_vertices=8, max_edges=25)
    d = derive(g, NAIVE_FOAF)
    assert d.edges == dict(foaf_pairs(g))


@given(st.integers(0, 10_000))
@settings(max_examples=50, deadline=None)
def test_consistent_with_evaluate(seed):
    g = random_graph(random.Random(seed))
    d = derive(g, NAIVE_FOAF)
    for r in g.vertices():
        bag, _ = evaluate(g, [r], NAIVE_FOAF)
        assert Counter(bag) == Counter({v: n for (t, v), n in d.edges.items() if t == r})


def test_materialize_chain(chain):
    d = derive(chain, NAIVE_FOAF)
    assert materialize(chain, d, "friend-of-a-friend") == 1
    (e,) = chain.out_edges("a", "friend-of-a-friend")
    assert chain.edge(e).head == "c"
    assert chain.get_property(e, "derived", edge=True) is True


def test_materialize_empty(chain):
    assert materialize(chain, DerivedGraph([]), "x") == 0


def test_materialize_multiplicity():
    g = PropertyGraph()
    a, b, c = g.add_vertex(), g.add_vertex(), g.add_vertex()
    g.add_edge(a, b, "friend")
    g.add_edge(a, b, "friend")
    g.add_edge(b, c, "friend")
    d = derive(g, NAIVE_FOAF)
    assert d.edges == {(a, c): 2}
    assert materialize(g, d, "foaf") == 2
    assert len(g.out_edges(a, "foaf")) == 2


def test_label_collision(chain):
    with pytest.raises(LabelCollision):
        materialize(chain, derive(chain, NAIVE_FOAF), "friend")


@pytest.mark.parametrize("seed", range(10))
def test_materialize_round_trip(seed):
    g = random_graph(random.Random(seed))
    d = derive(g, NAIVE_FOAF)
    materialize(g, d, "foaf")
    assert from_label(g, "foaf").edges == d.edges


def test_path_to_self():
    d = DerivedGraph(["a"], {})
    assert shortest_path(d, "a", "a") == ["a"]


def test_unreachable():
    d = DerivedGraph(["a", "b"], {("b", "a"): 1})
    assert shortest_path(d, "a", "b") is None
    with pytest.raises(UnknownVertex):
        shortest_path(d, "a", "zz")


def test_tie_break_lexicographic():
    d = DerivedGraph(list("sabt"), {("s", "b"): 1, ("s", "a"): 1, ("b", "t"): 1, ("a", "t"): 3})
    assert shortest_path(d, "s", "t") == ["s", "a", "t"]


def _random_derived(rng: random.Random, n: int = 15) -> DerivedGraph:
    vs = [f"v{i}" for i in range(rng.randint(1, n))]
    edges = {}
    for _ in range(rng.randint(0, 3 * len(vs))):
        edges[(rng.choice(vs), rng.choice(vs))] = rng.randint(1, 3)
    return DerivedGraph(vs, edges)


def _is_path(d: DerivedGraph, path: list[str]) -> bool:
    return all((a, b) in d.edges for a, b in zip(path, path[1:]))


@pytest.mark.parametrize("seed", range(10))
def test_hop_counts_match_floyd_warshall(seed):
    d = _random_derived(random.Random(seed))
    dist = floyd_warshall(d.vertices, d.edges)
    for a in d.vertices:
        for b in d.vertices:
            path = shortest_path(d, a, b)
            if dist[(a, b)] == float("inf"):
                assert path is None
            else:
                assert len(path) - 1 == dist[(a, b)]
                assert _is_path(d, path) and path[0] == a and path[-1] == b
        reach = hop_counts(d, a)
        assert reach == {b: dist[(a, b)] for b in d.vertices if dist[(a, b)] != float("inf")}


@given(st.integers(0, 10_000))
@settings(max_examples=50, deadline=None)
def test_adding_edges_never_lengthens(seed):
    rng = random.Random(seed)
    d = _random_derived(rng, 8)
    before = {a: hop_counts(d, a) for a in d.vertices}
    d.edges[(rng.choice(d.vertices), rng.choice(d.vertices))] = 1
    for a in d.vertices:
        after = hop_counts(d, a)
        for b, n in before[a].items():
            assert after[b] <= n


def test_ranking_empty():
    assert degree_ranking(DerivedGraph([])) == []


def test_ranking_star():
    leaves = [f"l{i}" for i in range(4)]
    d = DerivedGraph(["hub", *leaves], {("hub", leaf): 1 for leaf in leaves})
    assert degree_ranking(d)[0] == ("hub", 4)


@pytest.mark.parametrize("seed", range(10))
def test_ranking_matches_count(seed):
    d = _random_derived(random.Random(seed))
    counts = Counter()
    for (t, _), n in d.edges.items():
        counts[t] += n
    ranking = degree_ranking(d)
    assert dict(ranking) == {v: counts[v] for v in d.vertices}
    keys = [(-deg, v) for v, deg in ranking]
    assert keys == sorted(keys)
