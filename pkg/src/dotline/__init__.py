"""dotline: an embedded in-memory property graph with a path traversal language."""

from .core import Edge, PropertyGraph, PropertyValue, Vertex, value_tag, values_equal
from .derive import ALL, DerivedGraph, degree_ranking, derive, materialize, shortest_path
from .errors import DotlineError
from .graphfile import dumps, load, loads, save
from .index import IndexTree, build_index, index_insert, index_remove, lookup, open_index
from .pathlang import Env, PathExpr, evaluate, parse, pretty_print, unique

__all__ = [
    "ALL",
    "DerivedGraph",
    "DotlineError",
    "Edge",
    "Env",
    "IndexTree",
    "PathExpr",
    "PropertyGraph",
    "PropertyValue",
    "Vertex",
    "build_index",
    "degree_ranking",
    "derive",
    "dumps",
    "evaluate",
    "index_insert",
    "index_remove",
    "load",
    "loads",
    "lookup",
    "materialize",
    "open_index",
    "parse",
    "pretty_print",
    "save",
    "shortest_path",
    "unique",
    "value_tag",
    "values_equal",
]

__version__ = "0.1.0"
