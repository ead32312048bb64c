"""Property index stored inside the graph it indexes.

The index is a binary comparison tree made of ordinary vertices and edges:

* every index vertex has ``kind="index"``, ``indexed_key`` and ``index``
  (the id of its tree's root);
* an internal vertex holds ``split`` and two out-edges, ``lt`` to the bin of
  keys below the split and ``gte`` to the bin of keys at or above it;
* a leaf vertex holds one distinct ``value`` and a ``hit`` edge to every data
  vertex carrying it.

The root additionally records ``index_root``, the value tag, the number of
distinct values and an upper bound on the tree height. Lookups walk the tree
with plain adjacency reads, so an index survives a save/load cycle with the
rest of the graph.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass

from .core import PropertyGraph, PropertyValue, value_tag, values_equal
from .errors import KeyIsReserved, MissingKey, NoSuchIndex, TypeMismatch, UnknownVertex

INDEX_KIND = "index"
LT = "lt"
GTE = "gte"
HIT = "hit"


@dataclass(frozen=True)
class IndexTree:
    graph: PropertyGraph
    root: str
    key: str


def is_index_vertex(g: PropertyGraph, vid: str) -> bool:
    return g.get_property(vid, "kind") == INDEX_KIND


def _height_limit(size: int) -> int:
    return 2 * math.ceil(math.log2(size + 1))


def _child(g: PropertyGraph, node: str, label: str) -> str:
    (eid,) = g.out_edges(node, label)
    return g.edge(eid).head


def _new_node(g: PropertyGraph, t: IndexTree, **props: PropertyValue) -> str:
    return g.add_vertex({"kind": INDEX_KIND, "indexed_key": t.key, "index": t.root, **props})


def _fill(g: PropertyGraph, t: IndexTree, node: str, values: list, buckets: dict) -> int:
    """Grow a balanced subtree for sorted distinct ``values`` under ``node``; return its height."""
    if len(values) == 1:
        g.set_property(node, "value", values[0])
        for vid in buckets[values[0]]:
            g.add_edge(node, vid, HIT)
        return 1
    mid = len(values) // 2
    g.set_property(node, "split", values[mid])
    heights = []
    for label, part in ((LT, values[:mid]), (GTE, values[mid:])):
        child = _new_node(g, t)
        g.add_edge(node, child, label)
        heights.append(_fill(g, t, child, part, buckets))
    return 1 + max(heights)


def _grow(t: IndexTree, buckets: dict[tuple[str, PropertyValue], list[str]]) -> None:
    g = t.graph
    keyed = {}
    for (tag, value), vids in buckets.items():
        keyed[value] = vids
    values = sorted(keyed)
    height = _fill(g, t, t.root, values, keyed) if values else 0
    g.set_property(t.root, "size", len(values))
    g.set_property(t.root, "height", height)


def build_index(g: PropertyGraph, key: str) -> IndexTree:
    """Index every non-index vertex that carries ``key``.

    An existing index on the same key is dropped first. All indexed values
    must share one tag.
    """
    if key == "kind":
        raise KeyIsReserved("'kind' marks index vertices and cannot itself be indexed")
    existing = find_index(g, key)
    if existing is not None:
        drop_index(existing)

    buckets: dict[tuple[str, PropertyValue], list[str]] = defaultdict(list)
    tags = set()
    for vid in g.vertices():
        props = g.vertex(vid).properties
        if props.get("kind") == INDEX_KIND or key not in props:
            continue
        tag = value_tag(props[key])
        tags.add(tag)
        buckets[(tag, props[key])].append(vid)
    if len(tags) > 1:
        raise TypeMismatch(f"values of {key!r} mix types: {', '.join(sorted(tags))}")

    root = g.add_vertex({"kind": INDEX_KIND, "indexed_key": key, "index_root": True})
    g.set_property(root, "index", root)
    if tags:
        g.set_property(root, "value_tag", tags.pop())
    t = IndexTree(g, root, key)
    _grow(t, buckets)
    return t


def find_index(g: PropertyGraph, key: str) -> IndexTree | None:
    for vid in g.vertices():
        props = g.vertex(vid).properties
        if (props.get("kind") == INDEX_KIND and props.get("index_root") is True
                and props.get("indexed_key") == key):
            return IndexTree(g, vid, key)
    return None


def open_index(g: PropertyGraph, key: str) -> IndexTree:
    """Reattach to the index on ``key``, e.g. after loading a saved graph."""
    t = find_index(g, key)
    if t is None:
        raise NoSuchIndex(f"no index on {key!r}")
    return t


def _tree_nodes(t: IndexTree) -> list[str]:
    g, nodes, stack = t.graph, [], [t.root]
    while stack:
        node = stack.pop()
        nodes.append(node)
        for label in (LT, GTE):
            stack.extend(g.edge(e).head for e in g.out_edges(node, label))
    return nodes


def drop_index(t: IndexTree) -> None:
    for node in _tree_nodes(t):
        t.graph.remove_vertex(node)


def _check_tag(t: IndexTree, value: PropertyValue) -> None:
    expected = t.graph.get_property(t.root, "value_tag")
    if expected is not None and value_tag(value) != expected:
        raise TypeMismatch(
            f"index on {t.key!r} holds {expected} values, got {value_tag(value)} {value!r}"
        )


def _descend(t: IndexTree, value: PropertyValue, trace: list[str] | None) -> tuple[str, int]:
    g = t.graph
    node, level = t.root, 0
    while True:
        level += 1
        if trace is not None:
            trace.append(node)
        props = g.vertex(node).properties
        if "split" not in props:
            return node, level
        node = _child(g, node, LT if value < props["split"] else GTE)


def lookup(t: IndexTree, value: PropertyValue, *, trace: list[str] | None = None) -> set[str]:
    """Vertices whose indexed key equals ``value``.

    Visits one index vertex per tree level. Pass ``trace`` to collect the
    ids of the index vertices visited.
    """
    _check_tag(t, value)
    g = t.graph
    leaf, _ = _descend(t, value, trace)
    props = g.vertex(leaf).properties
    if "value" not in props or not values_equal(props["value"], value):
        return set()
    return {g.edge(e).head for e in g.out_edges(leaf, HIT)}


def _hit_edge(t: IndexTree, vid: str) -> str | None:
    g = t.graph
    for eid in g.in_edges(vid, HIT):
        if g.get_property(g.edge(eid).tail, "index") == t.root:
            return eid
    return None


def _move_out_edges(g: PropertyGraph, src: str, dst: str) -> None:
    for eid in g.out_edges(src):
        e = g.edge(eid)
        g.add_edge(dst, e.head, e.label)
        g.remove_edge(eid)


def _bump(t: IndexTree, size_delta: int, level: int = 0) -> None:
    g = t.graph
    size = g.get_property(t.root, "size") + size_delta
    height = max(g.get_property(t.root, "height"), level)
    g.set_property(t.root, "size", size)
    g.set_property(t.root, "height", height if size else 0)
    if size and height > _height_limit(size):
        rebuild(t)


def rebuild(t: IndexTree) -> None:
    """Rebalance the tree in place; the root id is kept."""
    g = t.graph
    buckets: dict[tuple[str, PropertyValue], list[str]] = defaultdict(list)
    for node in _tree_nodes(t):
        props = g.vertex(node).properties
        if "value" in props:
            value = props["value"]
            buckets[(value_tag(value), value)].extend(
                g.edge(e).head for e in g.out_edges(node, HIT)
            )
    for node in _tree_nodes(t):
        if node != t.root:
            g.remove_vertex(node)
    for eid in g.out_edges(t.root):
        g.remove_edge(eid)
    g.remove_property(t.root, "split")
    g.remove_property(t.root, "value")
    _grow(t, buckets)


def index_insert(t: IndexTree, vid: str) -> None:
    g = t.graph
    if not g.has_vertex(vid):
        raise UnknownVertex(vid)
    props = g.vertex(vid).properties
    if t.key not in props or props.get("kind") == INDEX_KIND:
        raise MissingKey(f"vertex {vid!r} carries no indexable {t.key!r}")
    value = props[t.key]
    _check_tag(t, value)

    stale = _hit_edge(t, vid)
    if stale is not None:
        if values_equal(g.get_property(g.edge(stale).tail, "value"), value):
            return
        index_remove(t, vid)

    if g.get_property(t.root, "value_tag") is None:
        g.set_property(t.root, "value_tag", value_tag(value))
    leaf, level = _descend(t, value, None)
    current = g.get_property(leaf, "value")
    if current is None:
        # empty tree: the root becomes the only leaf
        g.set_property(leaf, "value", value)
        g.add_edge(leaf, vid, HIT)
        _bump(t, 1, level)
    elif values_equal(current, value):
        g.add_edge(leaf, vid, HIT)
    else:
        # split the leaf into an internal node over two new leaves
        low, high = sorted((current, value))
        old_leaf = _new_node(g, t, value=current)
        _move_out_edges(g, leaf, old_leaf)
        new_leaf = _new_node(g, t, value=value)
        g.add_edge(new_leaf, vid, HIT)
        g.remove_property(leaf, "value")
        g.set_property(leaf, "split", high)
        g.add_edge(leaf, old_leaf if current == low else new_leaf, LT)
        g.add_edge(leaf, new_leaf if current == low else old_leaf, GTE)
        _bump(t, 1, level + 1)


def index_remove(t: IndexTree, vid: str) -> None:
    g = t.graph
    if not g.has_vertex(vid):
        raise UnknownVertex(vid)
    hit = _hit_edge(t, vid)
    if hit is None:
        raise MissingKey(f"vertex {vid!r} is not in the index on {t.key!r}")
    leaf = g.edge(hit).tail
    g.remove_edge(hit)
    if g.out_edges(leaf, HIT):
        return

    if leaf == t.root:
        g.remove_property(leaf, "value")
        g.remove_property(leaf, "value_tag")
    else:
        # the parent takes over the sibling's role, so the root id never changes
        (up,) = g.in_edges(leaf)
        parent = g.edge(up).tail
        sibling = _child(g, parent, GTE if g.edge(up).label == LT else LT)
        g.remove_vertex(leaf)
        g.remove_property(parent, "split")
        sib_props = g.vertex(sibling).properties
        for field in ("split", "value"):
            if field in sib_props:
                g.set_property(parent, field, sib_props[field])
        _move_out_edges(g, sibling, parent)
        g.remove_vertex(sibling)
    _bump(t, -1)


def depth(t: IndexTree) -> int:
    """Longest root-to-leaf walk, counted in index vertices (0 for an empty tree)."""
    g = t.graph

    def walk(node: str) -> int:
        kids = [g.edge(e).head for label in (LT, GTE) for e in g.out_edges(node, label)]
        return 1 + max((walk(k) for k in kids), default=0)

    props = g.vertex(t.root).properties
    if "split" not in props and "value" not in props:
        return 0
    return walk(t.root)
