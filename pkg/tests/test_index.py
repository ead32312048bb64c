from __future__ import annotations

import math
import random

import pytest

from dotline import PropertyGraph, build_index, dumps, index_insert, index_remove, loads, lookup
from dotline import index as idx
from dotline.errors import KeyIsReserved, MissingKey, TypeMismatch, UnknownVertex

from oracles import linear_scan


def _longest_walk(g: PropertyGraph, node: str) -> int:
    # independent depth measure: follow every lt/gte edge
    kids = [g.edge(e).head for e in g.out_edges(node) if g.edge(e).label in ("lt", "gte")]
    return 1 + max((_longest_walk(g, k) for k in kids), default=0)


def _graph_with_names(values) -> PropertyGraph:
    g = PropertyGraph()
    for v in values:
        g.add_vertex({"name": v})
    return g


def test_empty_index():
    g = _graph_with_names([])
    g.add_vertex({"other": 1})
    t = build_index(g, "name")
    assert g.out_edges(t.root) == []
    assert lookup(t, "x") == set()


def test_single_value_root_is_leaf():
    g = _graph_with_names(["josh"])
    t = build_index(g, "name")
    assert [g.edge(e).label for e in g.out_edges(t.root)] == ["hit"]
    assert lookup(t, "josh") == {"0"}


def test_depth_bound_100():
    g = _graph_with_names(range(100))
    t = build_index(g, "name")
    assert _longest_walk(g, t.root) <= math.ceil(math.log2(100)) + 1 == 8
    assert idx.depth(t) == _longest_walk(g, t.root)


def test_reserved_key():
    with pytest.raises(KeyIsReserved):
        build_index(PropertyGraph(), "kind")


def test_mixed_tags_rejected():
    g = _graph_with_names(["a", 1])
    with pytest.raises(TypeMismatch):
        build_index(g, "name")
    g = _graph_with_names([1, True])
    with pytest.raises(TypeMismatch):
        build_index(g, "name")


def test_lookup_type_mismatch():
    t = build_index(_graph_with_names(["a", "b"]), "name")
    with pytest.raises(TypeMismatch):
        lookup(t, 3)


def test_fig4_name_lookup(fig4_path):
    from dotline import load

    g = load(fig4_path)
    t = build_index(g, "name")
    assert lookup(t, "josh") == {"josh"} == linear_scan(g, "name", "josh")
    assert lookup(t, "nobody") == set()


@pytest.mark.parametrize("seed", range(10))
def test_lookup_matches_scan(seed):
    rng = random.Random(seed)
    g = PropertyGraph()
    for _ in range(50):
        props = {"k": rng.randint(0, 20)} if rng.random() < 0.8 else {}
        g.add_vertex(props)
    t = build_index(g, "k")
    for value in range(-1, 22):
        assert lookup(t, value) == linear_scan(g, "k", value)


def test_duplicates_share_leaf():
    g = _graph_with_names(["a", "a", "b"])
    t = build_index(g, "name")
    assert lookup(t, "a") == {"0", "1"}
    leaves = [v for v in g.vertices() if g.get_property(v, "value") == "a"]
    assert len(leaves) == 1


def test_separation(fig4_path):
    from dotline import load
    from dotline.views import to_semantic

    g = load(fig4_path)
    before = to_semantic(g)
    build_index(g, "name")
    for e in g.edges():
        if g.edge(e).label == "hit":
            assert g.get_property(g.edge(e).head, "kind") != "index"
    data = [v for v in g.vertices() if g.get_property(v, "kind") != "index"]
    data_edges = [
        e for e in g.edges()
        if g.get_property(g.edge(e).tail, "kind") != "index"
        and g.get_property(g.edge(e).head, "kind") != "index"
    ]
    assert data == list(before.vertices)
    assert data_edges == [e.id for e in before.edges]


def test_insert_and_remove():
    g = _graph_with_names(["a", "c"])
    t = build_index(g, "name")
    b = g.add_vertex({"name": "b"})
    index_insert(t, b)
    assert lookup(t, "b") == {b}
    index_remove(t, b)
    assert lookup(t, "b") == set()
    with pytest.raises(MissingKey):
        index_remove(t, b)
    with pytest.raises(MissingKey):
        index_insert(t, g.add_vertex({}))
    with pytest.raises(UnknownVertex):
        index_insert(t, "missing")
    with pytest.raises(TypeMismatch):
        index_insert(t, g.add_vertex({"name": 5}))


def test_insert_into_empty_then_drain():
    g = PropertyGraph()
    t = build_index(g, "name")
    a = g.add_vertex({"name": 3})
    index_insert(t, a)
    assert lookup(t, 3) == {a}
    index_remove(t, a)
    assert lookup(t, 3) == set()
    # tree is empty again, so any tag is accepted
    s = g.add_vertex({"name": "s"})
    index_insert(t, s)
    assert lookup(t, "s") == {s}


def test_reinsert_after_value_change():
    g = _graph_with_names(["a", "b"])
    t = build_index(g, "name")
    g.set_property("0", "name", "z")
    index_insert(t, "0")
    assert lookup(t, "z") == {"0"}
    assert lookup(t, "a") == set()


def _check_tree(t) -> None:
    """BST invariant: every key under an lt edge is below the split, gte at or above."""
    g = t.graph

    def walk(node, low, high):
        props = g.vertex(node).properties
        assert props["kind"] == "index" and props["index"] == t.root
        if "split" in props:
            s = props["split"]
            assert (low is None or low <= s) and (high is None or s < high)
            (lt,) = g.out_edges(node, "lt")
            (gte,) = g.out_edges(node, "gte")
            walk(g.edge(lt).head, low, s)
            walk(g.edge(gte).head, s, high)
        elif "value" in props:
            v = props["value"]
            assert (low is None or low <= v) and (high is None or v < high)

    walk(t.root, None, None)


@pytest.mark.parametrize("seed", range(5))
def test_interleaved_maintenance(seed):
    rng = random.Random(seed)
    g = PropertyGraph()
    pool = [g.add_vertex({"k": rng.randint(0, 40)}) for _ in range(20)]
    t = build_index(g, "k")
    indexed = set(pool)
    for _ in range(200):
        if indexed and rng.random() < 0.45:
            v = rng.choice(sorted(indexed))
            index_remove(t, v)
            g.remove_property(v, "k")
            indexed.discard(v)
        else:
            v = g.add_vertex({"k": rng.randint(0, 40)})
            index_insert(t, v)
            indexed.add(v)
        n = len(indexed)
        if n:
            assert idx.depth(t) <= 2 * math.ceil(math.log2(n + 1))
    _check_tree(t)
    for value in range(0, 41):
        assert lookup(t, value) == linear_scan(g, "k", value)


def test_survives_round_trip():
    rng = random.Random(3)
    g = PropertyGraph()
    for _ in range(40):
        g.add_vertex({"k": rng.choice("abcdefg")})
    t = build_index(g, "k")
    before = {c: lookup(t, c) for c in "abcdefgh"}
    h = loads(dumps(g))
    t2 = idx.open_index(h, "k")
    assert t2.root == t.root
    assert {c: lookup(t2, c) for c in "abcdefgh"} == before


def test_rebuild_replaces_existing():
    g = _graph_with_names(["a", "b", "c"])
    build_index(g, "name")
    n = g.vertex_count
    build_index(g, "name")
    assert g.vertex_count == n
