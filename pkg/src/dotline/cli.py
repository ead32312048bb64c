"""Command-line front end and REPL.

One-shot use::

    dotline -g graph.json query --root josh --expr "./outE[@label='attends']/inV"
    dotline -g graph.json -o indexed.json index build --key name

Interactive or scripted use reads one command per line::

    dotline -g graph.json repl < script.txt

Exit codes: 0 success, 1 usage or expression syntax error, 2 evaluation error.
Set ``DOTLINE_COLOR=1`` for ANSI-colored output.
"""

from __future__ import annotations

import argparse
import json
import os
import shlex
import sys
from typing import TextIO

from . import graphfile, index, views
from .derive import (
    ALL,
    DerivedGraph,
    degree_ranking,
    derive,
    from_label,
    materialize,
    shortest_path,
)
from .core import PropertyGraph, PropertyValue, id_sort_key
from .errors import DotlineError, PathSyntaxError, StepTypeError
from .pathlang import EDGE, VERTEX, evaluate, parse, parse_literal, unique

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_EVAL = 2


class UsageError(Exception):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(f"{self.prog}: {message}")

    def print_help(self, file=None) -> None:  # type: ignore[override]
        # route help through run() so it lands on the caller's stdout
        raise _HelpShown(self.format_help())

    def exit(self, status: int = 0, message: str | None = None) -> None:  # type: ignore[override]
        raise UsageError((message or f"{self.prog}: exited with status {status}").strip())


class _HelpShown(Exception):
    def __init__(self, text: str) -> None:
        self.text = text


def _color_enabled() -> bool:
    return os.environ.get("DOTLINE_COLOR", "0") == "1"


def _paint(text: str, code: str) -> str:
    return f"\x1b[{code}m{text}\x1b[0m" if _color_enabled() else text


def _build_parser() -> _ArgumentParser:
    parser = _ArgumentParser(prog="dotline", description="In-memory property graph toolkit.")
    parser.add_argument("-g", "--graph", help="graph file to load before the command")
    parser.add_argument("-o", "--output", help="save the graph here after the command")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)

    p = sub.add_parser("load", help="load a graph file")
    p.add_argument("path")
    p = sub.add_parser("save", help="save the current graph")
    p.add_argument("path")
    sub.add_parser("stats", help="print vertex and edge counts")
    sub.add_parser("repl", help="read commands from stdin")

    p = sub.add_parser("query", help="evaluate a path expression")
    p.add_argument("--root", action="append", required=True, help="root vertex id (repeatable)")
    p.add_argument("--expr", required=True)
    p.add_argument("--unique", action="store_true", help="drop repeated ids")
    p.add_argument("--exclude-roots", action="store_true", help="drop the roots from the result")
    p.add_argument("--format", choices=("ids", "json", "table"), default="ids")

    p = sub.add_parser("index", help="build or query a property index")
    isub = p.add_subparsers(dest="index_command", required=True, parser_class=_ArgumentParser)
    q = isub.add_parser("build")
    q.add_argument("--key", required=True)
    q = isub.add_parser("lookup")
    q.add_argument("--key", required=True)
    q.add_argument("--value", required=True)

    p = sub.add_parser("view", help="print another graph type derived from the graph")
    p.add_argument("kind", choices=("simple", "semantic", "weighted", "rdf-check"))
    p.add_argument("--key", default="weight", help="weight property (weighted view)")
    p.add_argument("--default", type=float, help="weight for edges lacking the key")

    p = sub.add_parser("derive", help="derive edges from an expression")
    p.add_argument("--expr", required=True)
    p.add_argument("--label", required=True)
    p.add_argument("--roots", default=ALL, help="ALL or comma-separated ids")
    p.add_argument("--materialize", action="store_true", help="add derived edges to the graph")

    p = sub.add_parser("path", help="shortest path over a derived graph")
    p.add_argument("--from", dest="source", required=True)
    p.add_argument("--to", dest="target", required=True)
    p.add_argument("--via-derived", dest="label", required=True)

    p = sub.add_parser("rank", help="rank vertices by derived out-degree")
    p.add_argument("--via-derived", dest="label", required=True)
    return parser


def _parse_value(text: str) -> PropertyValue:
    try:
        return parse_literal(text)
    except DotlineError:
        return text


def _format_props(props: dict) -> str:
    return " ".join(f"{k}={json.dumps(props[k], ensure_ascii=False)}" for k in sorted(props))


def _table(rows: list[list[str]], header: list[str]) -> list[str]:
    widths = [max(len(r[i]) for r in [header, *rows]) for i in range(len(header))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(header, widths)).rstrip()]
    lines[0] = _paint(lines[0], "1")
    for r in rows:
        lines.append("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip())
    return lines


class Session:
    """Mutable state shared by the commands of one run or REPL session."""

    def __init__(self, graph: PropertyGraph | None = None) -> None:
        self.graph = graph if graph is not None else PropertyGraph()
        self.derived: dict[str, DerivedGraph] = {}

    def derived_graph(self, label: str) -> DerivedGraph:
        if label in self.derived:
            return self.derived[label]
        if label not in self.graph.labels():
            raise DotlineError(f"no derived graph {label!r}; run 'derive' or 'derive --materialize' first")
        return from_label(self.graph, label)

    def execute(self, args: argparse.Namespace, out: TextIO) -> None:
        handler = getattr(self, "cmd_" + args.command.replace("-", "_"))
        handler(args, out)

    def cmd_load(self, args, out):
        self.graph = graphfile.load(args.path)
        self.derived.clear()
        self.cmd_stats(args, out)

    def cmd_save(self, args, out):
        graphfile.save(self.graph, args.path)

    def cmd_stats(self, args, out):
        print(f"vertices: {self.graph.vertex_count}, edges: {self.graph.edge_count}", file=out)

    def cmd_query(self, args, out):
        expr = parse(args.expr)
        bag, _ = evaluate(self.graph, args.root, expr)
        position = expr.ends_on
        if args.exclude_roots and position == VERTEX:
            roots = set(args.root)
            bag = [v for v in bag if v not in roots]
        if args.unique:
            bag = unique(bag)
        if args.format == "json":
            print(json.dumps(bag), file=out)
        elif args.format == "table":
            g = self.graph
            if position == EDGE:
                rows = []
                for eid in bag:
                    e = g.edge(eid)
                    rows.append([eid, e.label, e.tail, e.head, _format_props(e.properties)])
                lines = _table(rows, ["id", "label", "out", "in", "properties"])
            else:
                rows = [[v, _format_props(g.vertex(v).properties)] for v in bag]
                lines = _table(rows, ["id", "properties"])
            for line in lines:
                print(line, file=out)
        else:
            for el in bag:
                print(el, file=out)

    def cmd_index(self, args, out):
        if args.index_command == "build":
            t = index.build_index(self.graph, args.key)
            size = self.graph.get_property(t.root, "size")
            print(f"index on {args.key}: root {t.root}, {size} values, depth {index.depth(t)}", file=out)
        else:
            t = index.open_index(self.graph, args.key)
            for vid in sorted(index.lookup(t, _parse_value(args.value)), key=id_sort_key):
                print(vid, file=out)

    def cmd_view(self, args, out):
        g = self.graph
        if args.kind == "simple":
            v = views.to_simple(g)
            print(f"vertices: {len(v.vertices)}, edges: {len(v.edges)}", file=out)
            pairs = sorted(tuple(sorted(p, key=id_sort_key)) for p in v.edges)
            for a, b in sorted(pairs, key=lambda p: (id_sort_key(p[0]), id_sort_key(p[1]))):
                print(f"{a} -- {b}", file=out)
        elif args.kind == "semantic":
            v = views.to_semantic(g)
            print(f"vertices: {len(v.vertices)}, edges: {len(v.edges)}", file=out)
            for e in v.edges:
                print(f"{e.tail} -[{e.label}]-> {e.head}", file=out)
        elif args.kind == "weighted":
            v = views.to_weighted(g, args.key, args.default)
            for e in v.edges:
                print(f"{e.tail} -> {e.head} {e.weight!r}", file=out)
        else:
            report = views.check_rdf_shaped(g)
            if report.ok:
                print("ok", file=out)
            for vid in report.vertices:
                print(f"vertex {vid}", file=out)
            for eid in report.edges:
                print(f"edge {eid}", file=out)

    def cmd_derive(self, args, out):
        roots = args.roots if args.roots == ALL else [r for r in args.roots.split(",") if r]
        d = derive(self.graph, args.expr, roots, args.label)
        created = materialize(self.graph, d, args.label) if args.materialize else None
        for (tail, head), n in d.edges.items():
            print(f"{tail} -> {head} x{n}", file=out)
        if created is not None:
            print(f"materialized {created} edges labeled {args.label}", file=out)
        self.derived[args.label] = d

    def cmd_path(self, args, out):
        path = shortest_path(self.derived_graph(args.label), args.source, args.target)
        print("no path" if path is None else " -> ".join(path), file=out)

    def cmd_rank(self, args, out):
        for vid, degree in degree_ranking(self.derived_graph(args.label)):
            print(f"{vid}\t{degree}", file=out)


def _report(stderr: TextIO, message: str) -> None:
    print(f"{_paint('error:', '31')} {message}", file=stderr)


def _run_command(
    session: Session,
    argv: list[str],
    stdin: TextIO,
    stdout: TextIO,
    stderr: TextIO,
    *,
    allow_repl: bool,
) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "repl" and not allow_repl:
            raise UsageError("repl cannot be nested")
        if args.graph:
            session.graph = graphfile.load(args.graph)
            session.derived.clear()
        if args.command == "repl":
            code = repl(session, stdin, stdout, stderr)
        else:
            session.execute(args, stdout)
            code = EXIT_OK
        if args.output:
            graphfile.save(session.graph, args.output)
        return code
    except _HelpShown as exc:
        print(exc.text, file=stdout, end="")
        return EXIT_OK
    except (UsageError, PathSyntaxError, StepTypeError) as exc:
        _report(stderr, str(exc))
        return EXIT_USAGE
    except (DotlineError, OSError) as exc:
        _report(stderr, str(exc))
        return EXIT_EVAL


def repl(
    session: Session | None = None,
    stdin: TextIO = sys.stdin,
    stdout: TextIO = sys.stdout,
    stderr: TextIO = sys.stderr,
) -> int:
    """Run commands line by line; return the last nonzero exit code, else 0."""
    session = session if session is not None else Session()
    interactive = stdin.isatty()
    status = EXIT_OK
    while True:
        if interactive:
            print("dotline> ", end="", file=stdout, flush=True)
        line = stdin.readline()
        if not line:
            break
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if line in ("quit", "exit"):
            break
        try:
            argv = shlex.split(line)
        except ValueError as exc:
            _report(stderr, str(exc))
            status = EXIT_USAGE
            continue
        code = _run_command(session, argv, stdin, stdout, stderr, allow_repl=False)
        if code:
            status = code
    return status


def run(
    argv: list[str] | None = None,
    stdout: TextIO | None = None,
    stderr: TextIO | None = None,
    stdin: TextIO | None = None,
) -> int:
    """Execute one command line and return its exit code."""
    argv = sys.argv[1:] if argv is None else argv
    return _run_command(
        Session(),
        argv,
        stdin or sys.stdin,
        stdout or sys.stdout,
        stderr or sys.stderr,
        allow_repl=True,
    )


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
