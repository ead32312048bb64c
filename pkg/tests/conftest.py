from __future__ import annotations

from importlib import resources

import pytest

from dotline import PropertyGraph

NAIVE_FOAF = "./outE[@label=`friend']/inV/outE[@label=`friend']/inV"
REFINED_FOAF = (
    "./outE[@label=`friend']/inV[g:assign(`$x')]/\n"
    "      outE[@label=`friend']/inV[g:except($x)]"
)


@pytest.fixture
def fig4_path():
    with resources.as_file(resources.files("dotline") / "data" / "fig4.json") as path:
        yield path


@pytest.fixture
def chain() -> PropertyGraph:
    g = PropertyGraph()
    for vid in "abc":
        g.add_vertex({"name": vid}, vertex_id=vid)
    g.add_edge("a", "b", "friend")
    g.add_edge("b", "c", "friend")
    return g


@pytest.fixture
def triangle() -> PropertyGraph:
    """Friend edges both ways round a triangle, forward ones first."""
    g = PropertyGraph()
    for vid in "abc":
        g.add_vertex({"name": vid}, vertex_id=vid)
    for tail, head in [("a", "b"), ("b", "c"), ("c", "a"), ("b", "a"), ("c", "b"), ("a", "c")]:
        g.add_edge(tail, head, "friend")
    return g


_ACCEPTANCE: list[str] = []


def record_acceptance(line: str) -> None:
    _ACCEPTANCE.append(line)


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE:
            terminalreporter.write_line(line)
