"""In-memory property graph: a directed, labeled, attributed multi-graph.

Vertices and edges each carry a flat property map. Loops and parallel edges
are allowed. Adjacency is kept per vertex in insertion order so every
traversal over the graph is deterministic.
"""

from __future__ import annotations

import copy
import re
from collections.abc import Iterator, Mapping
from dataclasses import dataclass, field
from typing import Union

from .errors import (
    DuplicateId,
    EmptyLabel,
    InvalidPropertyValue,
    ReservedKey,
    UnknownEdge,
    UnknownVertex,
)

PropertyValue = Union[str, int, float, bool]

#: Read-only virtual property that exposes an edge's label to queries.
EDGE_LABEL_KEY = "label"

_CANONICAL_INT = re.compile(r"0|[1-9][0-9]*")


def value_tag(value: PropertyValue) -> str:
    """Return the union tag of a property value: ``bool``, ``int``, ``float`` or ``str``."""
    # bool must be tested before int, it is a subclass
    if isinstance(value, bool):
        return "bool"
    if isinstance(value, int):
        return "int"
    if isinstance(value, float):
        return "float"
    if isinstance(value, str):
        return "str"
    raise InvalidPropertyValue(
        f"property values must be str, int, float or bool, not {type(value).__name__}"
    )


def values_equal(a: PropertyValue, b: PropertyValue) -> bool:
    """Tag-aware equality: ``1``, ``1.0`` and ``True`` are three different values."""
    return value_tag(a) == value_tag(b) and a == b


def id_sort_key(element_id: str) -> tuple[int, int, str]:
    """Order ids so graph-assigned decimal ids sort numerically, ahead of free-form ids."""
    if _CANONICAL_INT.fullmatch(element_id):
        return (0, int(element_id), "")
    return (1, 0, element_id)


def _check_properties(properties: Mapping[str, PropertyValue] | None) -> dict[str, PropertyValue]:
    if properties is None:
        return {}
    checked = {}
    for key, value in properties.items():
        if not isinstance(key, str):
            raise InvalidPropertyValue(f"property keys must be str, not {type(key).__name__}")
        value_tag(value)
        checked[key] = value
    return checked


@dataclass
class Vertex:
    id: str
    properties: dict[str, PropertyValue] = field(default_factory=dict)


@dataclass
class Edge:
    id: str
    label: str
    tail: str
    head: str
    properties: dict[str, PropertyValue] = field(default_factory=dict)


class PropertyGraph:
    """Directed labeled attributed multi-graph.

    Ids are assigned from monotonic per-class counters rendered as decimal
    text unless the caller passes an explicit id. An id is never handed out
    twice within one graph, even after the element is removed.

    Not internally synchronized: callers serialize writes.
    """

    def __init__(self) -> None:
        self._vertices: dict[str, Vertex] = {}
        self._edges: dict[str, Edge] = {}
        # dicts used as insertion-ordered sets of edge ids
        self._out: dict[str, dict[str, None]] = {}
        self._in: dict[str, dict[str, None]] = {}
        self._next_vertex = 0
        self._next_edge = 0
        self._retired_vertices: set[str] = set()
        self._retired_edges: set[str] = set()

    # -- ids ------------------------------------------------------------------

    def _fresh_vertex_id(self) -> str:
        while True:
            vid = str(self._next_vertex)
            self._next_vertex += 1
            if vid not in self._vertices and vid not in self._retired_vertices:
                return vid

    def _fresh_edge_id(self) -> str:
        while True:
            eid = str(self._next_edge)
            self._next_edge += 1
            if eid not in self._edges and eid not in self._retired_edges:
                return eid

    # -- mutation -------------------------------------------------------------

    def add_vertex(
        self,
        properties: Mapping[str, PropertyValue] | None = None,
        *,
        vertex_id: str | None = None,
    ) -> str:
        props = _check_properties(properties)
        if vertex_id is None:
            vertex_id = self._fresh_vertex_id()
        elif vertex_id in self._vertices or vertex_id in self._retired_vertices:
            raise DuplicateId(vertex_id, "vertex")
        self._vertices[vertex_id] = Vertex(vertex_id, props)
        self._out[vertex_id] = {}
        self._in[vertex_id] = {}
        return vertex_id

    def add_edge(
        self,
        tail: str,
        head: str,
        label: str,
        properties: Mapping[str, PropertyValue] | None = None,
        *,
        edge_id: str | None = None,
    ) -> str:
        if tail not in self._vertices:
            raise UnknownVertex(tail)
        if head not in self._vertices:
            raise UnknownVertex(head)
        if not isinstance(label, str) or not label:
            raise EmptyLabel("edge label must be a non-empty string")
        props = _check_properties(properties)
        if EDGE_LABEL_KEY in props:
            raise ReservedKey(f"{EDGE_LABEL_KEY!r} is reserved on edges")
        if edge_id is None:
            edge_id = self._fresh_edge_id()
        elif edge_id in self._edges or edge_id in self._retired_edges:
            raise DuplicateId(edge_id, "edge")
        self._edges[edge_id] = Edge(edge_id, label, tail, head, props)
        self._out[tail][edge_id] = None
        self._in[head][edge_id] = None
        return edge_id

    def remove_edge(self, edge_id: str) -> None:
        edge = self._edges.pop(edge_id, None)
        if edge is None:
            raise UnknownEdge(edge_id)
        del self._out[edge.tail][edge_id]
        del self._in[edge.head][edge_id]
        self._retired_edges.add(edge_id)

    def remove_vertex(self, vertex_id: str) -> None:
        if vertex_id not in self._vertices:
            raise UnknownVertex(vertex_id)
        # a loop sits in both lists; dict.fromkeys dedups it
        incident = dict.fromkeys([*self._out[vertex_id], *self._in[vertex_id]])
        for edge_id in incident:
            self.remove_edge(edge_id)
        del self._vertices[vertex_id]
        del self._out[vertex_id]
        del self._in[vertex_id]
        self._retired_vertices.add(vertex_id)

    # -- properties -----------------------------------------------------------

    def _element(self, element_id: str, edge: bool) -> Vertex | Edge:
        if edge:
            try:
                return self._edges[element_id]
            except KeyError:
                raise UnknownEdge(element_id) from None
        try:
            return self._vertices[element_id]
        except KeyError:
            raise UnknownVertex(element_id) from None

    def get_property(
        self, element_id: str, key: str, *, edge: bool = False
    ) -> PropertyValue | None:
        """Return a property value or ``None`` when unset.

        Pass ``edge=True`` to address an edge; vertex and edge ids live in
        separate namespaces.
        """
        return self._element(element_id, edge).properties.get(key)

    def set_property(
        self, element_id: str, key: str, value: PropertyValue, *, edge: bool = False
    ) -> None:
        element = self._element(element_id, edge)
        if not isinstance(key, str):
            raise InvalidPropertyValue(f"property keys must be str, not {type(key).__name__}")
        value_tag(value)
        if edge and key == EDGE_LABEL_KEY:
            raise ReservedKey(f"{EDGE_LABEL_KEY!r} is reserved on edges")
        element.properties[key] = value

    def remove_property(self, element_id: str, key: str, *, edge: bool = False) -> None:
        self._element(element_id, edge).properties.pop(key, None)

    # -- reads ----------------------------------------------------------------

    def has_vertex(self, vertex_id: str) -> bool:
        return vertex_id in self._vertices

    def has_edge(self, edge_id: str) -> bool:
        return edge_id in self._edges

    def vertex(self, vertex_id: str) -> Vertex:
        try:
            return self._vertices[vertex_id]
        except KeyError:
            raise UnknownVertex(vertex_id) from None

    def edge(self, edge_id: str) -> Edge:
        try:
            return self._edges[edge_id]
        except KeyError:
            raise UnknownEdge(edge_id) from None

    def vertices(self) -> Iterator[str]:
        return iter(self._vertices)

    def edges(self) -> Iterator[str]:
        return iter(self._edges)

    @property
    def vertex_count(self) -> int:
        return len(self._vertices)

    @property
    def edge_count(self) -> int:
        return len(self._edges)

    def labels(self) -> set[str]:
        return {e.label for e in self._edges.values()}

    def out_edges(self, vertex_id: str, label: str | None = None) -> list[str]:
        """Edges whose tail is ``vertex_id``, in insertion order."""
        try:
            ids = self._out[vertex_id]
        except KeyError:
            raise UnknownVertex(vertex_id) from None
        if label is None:
            return list(ids)
        return [e for e in ids if self._edges[e].label == label]

    def in_edges(self, vertex_id: str, label: str | None = None) -> list[str]:
        """Edges whose head is ``vertex_id``, in insertion order."""
        try:
            ids = self._in[vertex_id]
        except KeyError:
            raise UnknownVertex(vertex_id) from None
        if label is None:
            return list(ids)
        return [e for e in ids if self._edges[e].label == label]

    def out_degree(self, vertex_id: str) -> int:
        return len(self.out_edges(vertex_id))

    def in_degree(self, vertex_id: str) -> int:
        return len(self.in_edges(vertex_id))

    def copy(self) -> PropertyGraph:
        return copy.deepcopy(self)

    def __repr__(self) -> str:
        return f"<PropertyGraph vertices={self.vertex_count} edges={self.edge_count}>"
