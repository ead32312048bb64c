"""Detached views that turn a property graph into other graph types.

Each view drops or adds a feature of the property graph: loops, parallel
edges and direction go for a simple graph, attributes go for a semantic
graph, and a weight attribute is promoted for a weighted graph. Hypergraphs
are modelled with one hub vertex per hyperedge. Views are snapshots and never
touch the source graph.
"""

from __future__ import annotations

import re
from collections.abc import Iterable
from dataclasses import dataclass

from .core import PropertyGraph, PropertyValue
from .errors import (
    EmptyMemberSet,
    MissingWeight,
    NotAHyperedge,
    TypeMismatch,
    UnknownVertex,
)

HYPEREDGE_KIND = "hyperedge"
MEMBER_LABEL = "member"

# scheme ":" hier-part, with a non-empty, whitespace-free remainder
_ABSOLUTE_URI = re.compile(r"[A-Za-z][A-Za-z0-9+.\-]*:[^\s<>\"{}|\\^`]+")


@dataclass(frozen=True)
class SimpleGraphView:
    vertices: frozenset[str]
    edges: frozenset[frozenset[str]]


@dataclass(frozen=True)
class WeightedEdge:
    id: str
    tail: str
    head: str
    weight: float


@dataclass(frozen=True)
class WeightedGraphView:
    vertices: tuple[str, ...]
    edges: tuple[WeightedEdge, ...]


@dataclass(frozen=True)
class SemanticEdge:
    id: str
    label: str
    tail: str
    head: str


@dataclass(frozen=True)
class SemanticGraphView:
    """Labels and structure only. A vertex is labelled by its id."""

    vertices: tuple[str, ...]
    edges: tuple[SemanticEdge, ...]


@dataclass(frozen=True)
class RdfReport:
    vertices: tuple[str, ...]
    edges: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.vertices and not self.edges


def to_simple(g: PropertyGraph) -> SimpleGraphView:
    pairs = set()
    for eid in g.edges():
        e = g.edge(eid)
        if e.tail != e.head:
            pairs.add(frozenset((e.tail, e.head)))
    return SimpleGraphView(frozenset(g.vertices()), frozenset(pairs))


def to_weighted(
    g: PropertyGraph, weight_key: str = "weight", default: float | None = None
) -> WeightedGraphView:
    edges = []
    for eid in g.edges():
        e = g.edge(eid)
        raw = e.properties.get(weight_key)
        if raw is None:
            if default is None:
                raise MissingWeight(eid, weight_key)
            weight = float(default)
        elif isinstance(raw, bool) or not isinstance(raw, (int, float)):
            raise TypeMismatch(f"edge {eid!r}: {weight_key!r} is not numeric ({raw!r})")
        else:
            weight = float(raw)
        edges.append(WeightedEdge(eid, e.tail, e.head, weight))
    return WeightedGraphView(tuple(g.vertices()), tuple(edges))


def to_semantic(g: PropertyGraph) -> SemanticGraphView:
    edges = []
    for eid in g.edges():
        e = g.edge(eid)
        edges.append(SemanticEdge(eid, e.label, e.tail, e.head))
    return SemanticGraphView(tuple(g.vertices()), tuple(edges))


def is_absolute_uri(text: PropertyValue | None) -> bool:
    return isinstance(text, str) and _ABSOLUTE_URI.fullmatch(text) is not None


def check_rdf_shaped(g: PropertyGraph, vertex_label_key: str = "name") -> RdfReport:
    """List the vertices and edges whose label is not an absolute URI.

    Vertex labels are read from ``vertex_label_key``; a vertex without one is
    reported too. The check is purely syntactic.
    """
    bad_vertices = tuple(
        vid for vid in g.vertices()
        if not is_absolute_uri(g.vertex(vid).properties.get(vertex_label_key))
    )
    bad_edges = tuple(eid for eid in g.edges() if not is_absolute_uri(g.edge(eid).label))
    return RdfReport(bad_vertices, bad_edges)


def encode_hyperedge(g: PropertyGraph, members: Iterable[str], label: str) -> str:
    """Add a hub vertex standing for one hyperedge and link it to each member."""
    members = list(dict.fromkeys(members))
    if not members:
        raise EmptyMemberSet("a hyperedge needs at least one member")
    for vid in members:
        if not g.has_vertex(vid):
            raise UnknownVertex(vid)
    hub = g.add_vertex({"kind": HYPEREDGE_KIND, "label": label})
    for vid in members:
        g.add_edge(hub, vid, MEMBER_LABEL)
    return hub


def decode_hyperedge(g: PropertyGraph, hub: str) -> set[str]:
    if g.get_property(hub, "kind") != HYPEREDGE_KIND:
        raise NotAHyperedge(f"vertex {hub!r} is not a hyperedge hub")
    return {g.edge(eid).head for eid in g.out_edges(hub, MEMBER_LABEL)}
