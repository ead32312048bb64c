"""JSON graph file format.

::

    {"vertices": [{"id": "...", "properties": {...}}, ...],
     "edges":    [{"id": "...", "label": "...", "out": "<tail>", "in": "<head>",
                   "properties": {...}}, ...]}

Saved files are canonical: ids sorted with :func:`~dotline.core.id_sort_key`,
keys sorted, floats in shortest round-trip form. Loading a canonical file and
saving it again reproduces it byte for byte.
"""

from __future__ import annotations

import json
import math
import os
import re
from typing import Any

from .core import PropertyGraph, id_sort_key
from .errors import (
    DanglingEdge,
    DotlineError,
    DuplicateId,
    InvalidPropertyValue,
    ParseError,
)


def _line_of(text: str, pos: int) -> int:
    return text.count("\n", 0, pos) + 1


def _locate_id(text: str, section: str, element_id: str, occurrence: int = 1) -> int | None:
    """Best-effort line number of the ``occurrence``-th ``"id": element_id`` in a section."""
    start = text.find(f'"{section}"')
    if start < 0:
        return None
    pattern = re.compile(r'"id"\s*:\s*' + re.escape(json.dumps(element_id)))
    seen = 0
    for m in pattern.finditer(text, start):
        seen += 1
        if seen == occurrence:
            return _line_of(text, m.start())
    return None


def _check_value(value: Any) -> None:
    if isinstance(value, (dict, list)) or value is None:
        raise InvalidPropertyValue(
            f"property values must be string, number or boolean, got {json.dumps(value)}"
        )
    if isinstance(value, float) and not math.isfinite(value):
        raise InvalidPropertyValue("non-finite floats cannot be stored")


def _require(obj: Any, field: str, kind: type, where: str) -> Any:
    if not isinstance(obj, dict) or field not in obj:
        raise ParseError(f"{where}: missing field {field!r}")
    value = obj[field]
    if not isinstance(value, kind) or (kind is dict and not isinstance(value, dict)):
        raise ParseError(f"{where}: field {field!r} has the wrong type")
    return value


def loads(text: str) -> PropertyGraph:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno) from None
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object", 1)
    vertices = doc.get("vertices", None)
    edges = doc.get("edges", None)
    if not isinstance(vertices, list) or not isinstance(edges, list):
        raise ParseError("top level needs 'vertices' and 'edges' arrays", 1)

    g = PropertyGraph()
    seen: dict[str, int] = {}
    for i, item in enumerate(vertices):
        vid = _require(item, "id", str, f"vertex #{i}")
        props = _require(item, "properties", dict, f"vertex {vid!r}")
        seen[vid] = seen.get(vid, 0) + 1
        line = _locate_id(text, "vertices", vid, seen[vid])
        try:
            for value in props.values():
                _check_value(value)
            g.add_vertex(props, vertex_id=vid)
        except DuplicateId:
            raise DuplicateId(vid, "vertex", line) from None
        except DotlineError as exc:
            raise ParseError(f"vertex {vid!r}: {exc}", line) from None

    seen.clear()
    for i, item in enumerate(edges):
        eid = _require(item, "id", str, f"edge #{i}")
        seen[eid] = seen.get(eid, 0) + 1
        line = _locate_id(text, "edges", eid, seen[eid])
        label = _require(item, "label", str, f"edge {eid!r}")
        tail = _require(item, "out", str, f"edge {eid!r}")
        head = _require(item, "in", str, f"edge {eid!r}")
        props = _require(item, "properties", dict, f"edge {eid!r}")
        for end in (tail, head):
            if not g.has_vertex(end):
                raise DanglingEdge(eid, end, line)
        try:
            for value in props.values():
                _check_value(value)
            g.add_edge(tail, head, label, props, edge_id=eid)
        except DuplicateId:
            raise DuplicateId(eid, "edge", line) from None
        except DotlineError as exc:
            raise ParseError(f"edge {eid!r}: {exc}", line) from None
    return g


def to_document(g: PropertyGraph) -> dict[str, Any]:
    vertices = [
        {"id": vid, "properties": dict(g.vertex(vid).properties)}
        for vid in sorted(g.vertices(), key=id_sort_key)
    ]
    edges = []
    for eid in sorted(g.edges(), key=id_sort_key):
        e = g.edge(eid)
        edges.append(
            {"id": eid, "label": e.label, "out": e.tail, "in": e.head,
             "properties": dict(e.properties)}
        )
    return {"vertices": vertices, "edges": edges}


def dumps(g: PropertyGraph) -> str:
    """Canonical text form of ``g``; equal graphs give identical strings."""
    return json.dumps(to_document(g), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def load(path: str | os.PathLike[str]) -> PropertyGraph:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def save(g: PropertyGraph, path: str | os.PathLike[str]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(g))
