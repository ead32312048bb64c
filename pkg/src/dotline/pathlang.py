"""Path expressions over a property graph.

An expression starts at the root set (``.``) and alternates between vertex
and edge positions, filesystem style::

    ./outE[@label='friend']/inV[g:assign('$x')]/outE[@label='friend']/inV[g:except($x)]

Evaluation has bag semantics: each element keeps one occurrence per distinct
walk that reaches it. ``outE``/``inV`` and ``g:assign``/``g:except`` are the
core of the language; ``inE``, ``bothE``, ``outV``, ``bothV`` and ``!=`` are
symmetric extensions.
"""

from __future__ import annotations

import math
import re
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from typing import Union

from .core import EDGE_LABEL_KEY, PropertyGraph, PropertyValue, value_tag, values_equal
from .errors import PathSyntaxError, StepTypeError, UnboundVariable, UnknownRoot

VERTEX = "vertex"
EDGE = "edge"

ROOT = "root"
EDGE_STEPS = ("outE", "inE", "bothE")
VERTEX_STEPS = ("inV", "outV", "bothV")
STEP_NAMES = EDGE_STEPS + VERTEX_STEPS

_VAR_NAME = re.compile(r"\$[A-Za-z][A-Za-z0-9_]*")


# -- AST ----------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class PropEq:
    """``[@key='value']``, or ``[@key!='value']`` when ``negated``."""

    key: str
    value: PropertyValue
    negated: bool = False

    def _ident(self) -> tuple:
        return (self.key, value_tag(self.value), self.value, self.negated)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PropEq):
            return NotImplemented
        return self._ident() == other._ident()

    def __hash__(self) -> int:
        return hash(self._ident())


@dataclass(frozen=True)
class Assign:
    var: str


@dataclass(frozen=True)
class Except:
    var: str


Predicate = Union[PropEq, Assign, Except]


@dataclass(frozen=True)
class Step:
    kind: str
    predicates: tuple[Predicate, ...] = ()


@dataclass(frozen=True)
class PathExpr:
    steps: tuple[Step, ...]

    @property
    def ends_on(self) -> str:
        """Element type of the final position: ``"vertex"`` or ``"edge"``."""
        return EDGE if self.steps[-1].kind in EDGE_STEPS else VERTEX

    def __str__(self) -> str:
        return pretty_print(self)


# -- lexer --------------------------------------------------------------------

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<string>(?:'|`)(?:[^'\\]|\\.)*')
  | (?P<number>-?[0-9]+(?:\.[0-9]+)?(?:[eE][+-]?[0-9]+)?)
  | (?P<var>\$[A-Za-z][A-Za-z0-9_]*)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*(?::[A-Za-z_][A-Za-z0-9_]*)?)
  | (?P<op>!=|[./\[\]@=()])
    """,
    re.VERBOSE | re.DOTALL,
)

_UNESCAPE = re.compile(r"\\(.)", re.DOTALL)


@dataclass(frozen=True)
class Token:
    kind: str  # string | number | var | name | op | error | eof
    text: str
    pos: int


def _byte_offset(source: str, pos: int) -> int:
    return len(source[:pos].encode("utf-8"))


def tokenize(source: str) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(source):
        m = _TOKEN.match(source, pos)
        if m is None:
            # the parser reports it, with the tokens it expected here
            tokens.append(Token("error", source[pos:], pos))
            break
        if m.lastgroup != "ws":
            tokens.append(Token(m.lastgroup, m.group(), pos))
        pos = m.end()
    tokens.append(Token("eof", "", len(source)))
    return tokens


# -- parser -------------------------------------------------------------------


class _Parser:
    def __init__(self, source: str) -> None:
        self.source = source
        self.tokens = tokenize(source)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def fail(self, expected: Iterable[str], message: str | None = None) -> PathSyntaxError:
        tok = self.tok
        if tok.kind == "error":
            found = "unterminated string" if tok.text[0] in "'`" else f"character {tok.text[0]!r}"
        elif tok.kind == "eof":
            found = "end of input"
        else:
            found = repr(tok.text)
        return PathSyntaxError(
            message or f"unexpected {found}",
            _byte_offset(self.source, tok.pos),
            frozenset(expected),
        )

    def accept(self, text: str) -> bool:
        if self.tok.kind in ("op", "name") and self.tok.text == text:
            self.i += 1
            return True
        return False

    def expect(self, text: str) -> None:
        if not self.accept(text):
            raise self.fail([repr(text)])

    def parse(self) -> PathExpr:
        self.expect(".")
        steps = [Step(ROOT)]
        position = VERTEX
        while self.accept("/"):
            step, position = self.step(position)
            steps.append(step)
        if self.tok.kind != "eof":
            raise self.fail(["'/'", "end of input"])
        return PathExpr(tuple(steps))

    def step(self, position: str) -> tuple[Step, str]:
        tok = self.tok
        if tok.kind != "name" or tok.text not in STEP_NAMES:
            raise self.fail([repr(s) for s in STEP_NAMES])
        allowed = EDGE_STEPS if position == VERTEX else VERTEX_STEPS
        if tok.text not in allowed:
            raise StepTypeError(
                f"{tok.text!r} cannot follow a {position} position "
                f"(expected one of {', '.join(allowed)})",
                _byte_offset(self.source, tok.pos),
            )
        self.i += 1
        predicates = []
        while self.accept("["):
            predicates.append(self.predicate())
            self.expect("]")
        return Step(tok.text, tuple(predicates)), EDGE if tok.text in EDGE_STEPS else VERTEX

    def predicate(self) -> Predicate:
        if self.accept("@"):
            if self.tok.kind != "name":
                raise self.fail(["property key"])
            key = self.tok.text
            self.i += 1
            if self.accept("="):
                negated = False
            elif self.accept("!="):
                negated = True
            else:
                raise self.fail(["'='", "'!='"])
            return PropEq(key, self.literal(), negated)
        if self.accept("g:assign"):
            self.expect("(")
            if self.tok.kind != "string":
                raise self.fail(["quoted variable name"])
            var = _unquote(self.tok.text)
            if not _VAR_NAME.fullmatch(var):
                raise self.fail(["quoted variable name"], f"bad variable name {var!r}")
            self.i += 1
            self.expect(")")
            return Assign(var)
        if self.accept("g:except"):
            self.expect("(")
            if self.tok.kind != "var":
                raise self.fail(["variable"])
            var = self.tok.text
            self.i += 1
            self.expect(")")
            return Except(var)
        raise self.fail(["'@'", "'g:assign'", "'g:except'"])

    def literal(self) -> PropertyValue:
        tok = self.tok
        if tok.kind == "string":
            value: PropertyValue = _unquote(tok.text)
        elif tok.kind == "number":
            is_float = any(c in tok.text for c in ".eE")
            value = float(tok.text) if is_float else int(tok.text)
        elif tok.kind == "name" and tok.text in ("true", "false"):
            value = tok.text == "true"
        else:
            raise self.fail(["string", "number", "'true'", "'false'"])
        self.i += 1
        return value


def _unquote(text: str) -> str:
    return _UNESCAPE.sub(r"\1", text[1:-1])


def parse(source: str) -> PathExpr:
    """Parse expression text.

    Raises :class:`PathSyntaxError` (with byte offset and expected tokens) on
    malformed input and :class:`StepTypeError` when a step cannot follow the
    previous position, e.g. ``./inV``.
    """
    return _Parser(source).parse()


def parse_literal(text: str) -> PropertyValue:
    """Parse a single literal (``'x'``, ``3``, ``2.5``, ``true``)."""
    p = _Parser(text)
    value = p.literal()
    if p.tok.kind != "eof":
        raise p.fail(["end of input"])
    return value


# -- printer ------------------------------------------------------------------


def format_literal(value: PropertyValue) -> str:
    tag = value_tag(value)
    if tag == "bool":
        return "true" if value else "false"
    if tag == "int":
        return str(value)
    if tag == "float":
        if not math.isfinite(value):
            raise ValueError(f"{value!r} has no literal form")
        return repr(value)
    return "'" + value.replace("\\", "\\\\").replace("'", "\\'") + "'"


def _format_predicate(pred: Predicate) -> str:
    if isinstance(pred, PropEq):
        op = "!=" if pred.negated else "="
        return f"[@{pred.key}{op}{format_literal(pred.value)}]"
    if isinstance(pred, Assign):
        return f"[g:assign('{pred.var}')]"
    return f"[g:except({pred.var})]"


def pretty_print(expr: PathExpr) -> str:
    parts = ["."]
    for step in expr.steps[1:]:
        parts.append("/" + step.kind + "".join(_format_predicate(p) for p in step.predicates))
    return "".join(parts)


# -- evaluation ---------------------------------------------------------------

Ref = tuple[str, str]  # (position, element id)


@dataclass
class Env:
    """Variable bindings. Each variable holds a set of elements."""

    bindings: dict[str, set[Ref]] = field(default_factory=dict)

    def ids(self, var: str) -> set[str]:
        return {eid for _, eid in self.bindings.get(var, ())}

    def bind(self, var: str, position: str, ids: Iterable[str]) -> None:
        self.bindings.setdefault(var, set()).update((position, i) for i in ids)

    def copy(self) -> Env:
        return Env({k: set(v) for k, v in self.bindings.items()})

    def __contains__(self, var: object) -> bool:
        return var in self.bindings


def _check_bound(expr: PathExpr, env: Env) -> None:
    bound = set(env.bindings)
    for step in expr.steps:
        for pred in step.predicates:
            if isinstance(pred, Assign):
                bound.add(pred.var)
            elif isinstance(pred, Except) and pred.var not in bound:
                raise UnboundVariable(f"variable {pred.var} is used before g:assign binds it")


def _read(g: PropertyGraph, position: str, element_id: str, key: str) -> PropertyValue | None:
    if position == EDGE:
        edge = g.edge(element_id)
        return edge.label if key == EDGE_LABEL_KEY else edge.properties.get(key)
    return g.vertex(element_id).properties.get(key)


def _advance(g: PropertyGraph, bag: list[str], kind: str) -> list[str]:
    out: list[str] = []
    if kind == "outE":
        for v in bag:
            out.extend(g.out_edges(v))
    elif kind == "inE":
        for v in bag:
            out.extend(g.in_edges(v))
    elif kind == "bothE":
        for v in bag:
            out.extend(g.out_edges(v))
            out.extend(g.in_edges(v))
    elif kind == "inV":
        out = [g.edge(e).head for e in bag]
    elif kind == "outV":
        out = [g.edge(e).tail for e in bag]
    elif kind == "bothV":
        for e in bag:
            edge = g.edge(e)
            out.append(edge.tail)
            out.append(edge.head)
    return out


def _filter(g: PropertyGraph, bag: list[str], position: str, pred: Predicate, env: Env) -> list[str]:
    if isinstance(pred, PropEq):
        kept = []
        for el in bag:
            value = _read(g, position, el, pred.key)
            hit = value is not None and values_equal(value, pred.value)
            if hit != pred.negated:
                kept.append(el)
        return kept
    if isinstance(pred, Assign):
        env.bind(pred.var, position, bag)
        return bag
    excluded = {eid for pos, eid in env.bindings[pred.var] if pos == position}
    return [el for el in bag if el not in excluded]


def evaluate(
    g: PropertyGraph,
    roots: Sequence[str],
    expr: PathExpr | str,
    env: Env | None = None,
) -> tuple[list[str], Env]:
    """Run ``expr`` from ``roots`` and return the result bag and the updated bindings.

    The input ``env`` is not modified. Predicates within a step apply left to
    right, each to the whole bag.
    """
    if isinstance(expr, str):
        expr = parse(expr)
    env = env.copy() if env is not None else Env()
    for r in roots:
        if not g.has_vertex(r):
            raise UnknownRoot(r)
    _check_bound(expr, env)

    bag = list(roots)
    position = VERTEX
    for step in expr.steps:
        if step.kind != ROOT:
            bag = _advance(g, bag, step.kind)
            position = EDGE if step.kind in EDGE_STEPS else VERTEX
        for pred in step.predicates:
            bag = _filter(g, bag, position, pred, env)
    return bag, env


def unique(bag: Iterable[str]) -> list[str]:
    """Keep the first occurrence of each id, in order."""
    return list(dict.fromkeys(bag))
