"""Command-line interface.

Exit codes: 0 success, 1 usage or malformed input, 2 mathematical failure
(a witness is printed), 3 resource bound exceeded.
"""

from __future__ import annotations

import argparse
import logging
import sys
import time
from dataclasses import dataclass
from pathlib import Path

from . import analysis, constructions, fileio
from .config import BoundExceeded, max_points
from .constructions import ALPHA, ConstructionError, GroupAction
from .fieldcore import FieldError, field_of_order
from .semilinear import BUILTIN_GROUPS, GroupSpec, pgammal_order, read_group_name
from .subspaces import Subspace

EXIT_OK, EXIT_USAGE, EXIT_MATH, EXIT_BOUND = 0, 1, 2, 3

# (v, q, t) and the expected parameter tuple of each spread graph.
TABLE1 = (
    ((4, 2, 2), "(4,1,1,0;2)"),
    ((4, 3, 2), "(4,1,2,0;3)"),
    ((6, 2, 2), "(6,1,1,0;2)"),
    ((6, 2, 3), "(6,2,5,0;2)"),
    ((9, 2, 3), "(9,2,5,0;2)"),
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    command: str
    v: int | None = None
    q: int | None = None
    t: int | None = None
    group: str | None = None
    delta: str | None = None
    output: Path | None = None
    explain: bool = False
    long_running: bool = False
    threads: int = 1

    def __post_init__(self):
        for name in ("v", "q", "t"):
            val = getattr(self, name)
            if val is not None and val <= 0:
                raise UsageError(f"--{name} must be positive")
        if self.threads < 1:
            raise UsageError("--threads must be positive")

    def need(self, *names: str) -> None:
        missing = [n for n in names if getattr(self, n) is None]
        if missing:
            raise UsageError(f"{self.command} needs " + ", ".join(f"--{n}" for n in missing))

    @property
    def field(self):
        try:
            return field_of_order(self.q)
        except (FieldError, ValueError) as exc:
            raise UsageError(str(exc)) from exc


def _out(line: str = "") -> None:
    print(line)


def _emit(path: Path | None, text: str) -> None:
    if path is not None:
        fileio.write_text(path, text)
        _out(f"wrote {path}")


def _load_group(cfg: RunConfig) -> GroupSpec:
    cfg.need("group")
    src = cfg.group
    if Path(src).is_file():
        G = fileio.parse_group(fileio.read_text(src), name=Path(src).name)
        if cfg.v is not None and cfg.v != G.v:
            raise UsageError(f"group file is in dimension {G.v}, --v says {cfg.v}")
        cfg.v, cfg.q = G.v, G.field.q
        return G
    cfg.need("v", "q")
    try:
        return read_group_name(src, cfg.v, cfg.field, cfg.t)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _explain_group(act: GroupAction) -> None:
    chain = act.chain
    _out(f"group {act.group.name}: {len(act.group.generators)} generators on {act.n} points")
    _out(f"  order {act.order}; base {chain.base}; basic orbit sizes {chain.orbit_sizes()}")
    sizes = sorted((len(o) for o in act.stabilizer_orbits), reverse=True)
    _out(f"  stabilizer of point {ALPHA}: orbit sizes {sizes}")
    for i, S in enumerate(constructions.invariant_subspaces(act.stabilizer_orbits, ALPHA, act.table)):
        _out(f"  index:{i} invariant subspace of dimension {S.dim}")


def _parse_delta(spec: str, act: GroupAction) -> Subspace:
    T = act.table
    if spec == "full":
        return Subspace.full(T.v, T.field)
    if spec == "point":
        return T.point_subspace(ALPHA)
    orbits = act.stabilizer_orbits
    if spec.startswith("closure:"):
        try:
            pts = [int(s) for s in spec[len("closure:"):].split(",") if s]
        except ValueError as exc:
            raise UsageError(f"bad point list in {spec!r}") from exc
        if any(not 0 <= p < act.n for p in pts):
            raise UsageError(f"points must lie in [0,{act.n})")
        where = {x: i for i, o in enumerate(orbits) for x in o}
        ids = {where[ALPHA]} | {where[p] for p in pts}
        cands = [S for S in constructions.invariant_subspaces(orbits, ALPHA, T)
                 if ids <= {where[x] for x in T.points_of(S)}]
        return min(cands, key=lambda S: S.dim)
    if spec.startswith("index:"):
        cands = constructions.invariant_subspaces(orbits, ALPHA, T)
        try:
            return cands[int(spec[len("index:"):])]
        except (ValueError, IndexError) as exc:
            raise UsageError(f"{spec!r}: there are {len(cands)} invariant subspaces") from exc
    raise UsageError(f"unknown --delta {spec!r}; use full, point, closure:i,j or index:n")


def _print_classification(graph) -> analysis.Classification:
    c = analysis.classify(graph)
    _out(c.report())
    if graph.is_trivial():
        _out(f"k={c.k}, trivial")
    return c


def cmd_construct(cfg: RunConfig, kind: str, template: str = "symplectic") -> int:
    t0 = time.perf_counter()
    if kind == "spread":
        cfg.need("v", "q", "t")
        S = constructions.desarguesian_spread(cfg.v, cfg.field, cfg.t)
        graph = constructions.spread_graph(S)
        _out(f"spread: {len(S)} elements of dimension {S.t}")
    elif kind == "symplectic":
        cfg.need("v", "q")
        graph = constructions.symplectic_graph(cfg.v, cfg.field)
    elif kind == "qsru":
        cfg.need("v", "q", "t")
        S = constructions.desarguesian_spread(cfg.v, cfg.field, cfg.t)
        if template == "complete":
            tpl = constructions.complete_graph(cfg.t, cfg.field)
        else:
            tpl = constructions.symplectic_graph(cfg.t, cfg.field)
        graph = constructions.quasi_srg_union(S, tpl)
    elif kind in ("theorem2", "theorem3"):
        G = _load_group(cfg)
        act = GroupAction(G)
        if cfg.explain:
            _explain_group(act)
        delta = _parse_delta(cfg.delta or "full", act)
        if kind == "theorem2":
            design, report = constructions.theorem2_design(G, delta=delta, action=act)
            for line in report.lines():
                _out(line)
            _emit(cfg.output, fileio.format_design(design))
            return EXIT_OK
        graph, report = constructions.theorem3_graph(G, delta, action=act)
        for line in report.lines():
            _out(line)
    else:
        raise UsageError(f"unknown construction {kind!r}")
    _print_classification(graph)
    if cfg.explain:
        _out(f"elapsed {time.perf_counter() - t0:.3f}s")
    _emit(cfg.output, fileio.format_graph(graph))
    return EXIT_OK


def cmd_analyze(path: str, explain: bool = False) -> int:
    graph = fileio.parse_graph(fileio.read_text(path), name=Path(path).name)
    _print_classification(graph)
    cg = analysis.to_classical(graph)
    comps = cg.components()
    _out(
        f"classical: {cg.n} vertices, degree {int(cg.degrees[0])}, "
        f"{cg.edge_count()} edges, {len(comps)} components"
    )
    srg = cg.srg_parameters()
    if srg is not None:
        _out(f"classical srg{srg}".replace(", ", ","))
    if explain:
        _out(f"distinct neighborhoods: {len(set(graph.nbr))}")
    return EXIT_OK


def _witness_rows(S: Subspace) -> str:
    return "; ".join(" ".join(map(str, row)) for row in S.array.tolist())


def cmd_verify_design(path: str, t: int) -> int:
    D = fileio.parse_design(fileio.read_text(path))
    res = analysis.verify_design(D, t)
    _out(f"design {D.params}, {D.b} blocks, {'simple' if res.simple else 'repeated blocks'}")
    if res.ok:
        _out(f"t={t}: lambda = {res.lam}")
        return EXIT_OK
    _out(f"t={t}: not constant; subspace [{_witness_rows(res.witness)}] lies in {res.witness_count} blocks")
    return EXIT_MATH


def cmd_verify_gdd(cfg: RunConfig, path: str | None) -> int:
    cfg.need("v", "q", "t")
    S = constructions.desarguesian_spread(cfg.v, cfg.field, cfg.t)
    blocks = fileio.parse_design(fileio.read_text(path)).blocks if path else ()
    res = analysis.verify_gdd(S, blocks)
    if res.holds:
        _out(f"group divisible: lambda = {res.lam}")
        return EXIT_OK
    _out(f"not group divisible: 2-subspace [{_witness_rows(res.witness)}] {res.reason}")
    return EXIT_MATH


def cmd_classify_all(cfg: RunConfig) -> int:
    cfg.need("v", "q")
    res = analysis.classify_all_transitive_regular(cfg.v, cfg.field, cfg.long_running, cfg.threads)
    for line in res.lines():
        _out(line)
    return EXIT_OK


def cmd_table1(explain: bool = False) -> int:
    ok = True
    for (v, q, t), expected in TABLE1:
        t0 = time.perf_counter()
        S = constructions.desarguesian_spread(v, field_of_order(q), t)
        got = analysis.classify(constructions.spread_graph(S)).params_str()
        match = got == expected
        ok &= match
        line = f"v={v} q={q} t={t}: {got} expected {expected} {'ok' if match else 'MISMATCH'}"
        if explain:
            line += f" ({time.perf_counter() - t0:.2f}s)"
        _out(line)
    return EXIT_OK if ok else EXIT_MATH


def cmd_groups(cfg: RunConfig) -> int:
    for name in BUILTIN_GROUPS:
        line = name
        if cfg.v is not None and cfg.q is not None and cfg.explain:
            try:
                G = read_group_name(name.replace("(t)", f"({cfg.t})") if cfg.t else name, cfg.v, cfg.field, cfg.t)
                act = GroupAction(G)
                line += f": {G.name}, order {act.order}, transitive={act.is_transitive()}"
            except (ValueError, KeyError) as exc:
                line += f": unavailable ({exc})"
        _out(line)
    if cfg.v is not None and cfg.q is not None:
        _out(f"|PGammaL({cfg.v},{cfg.q})| = {pgammal_order(cfg.v, cfg.field)}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qgraph", description="Transitive q-ary graphs and designs over finite fields.", allow_abbrev=False)
    common = _Parser(add_help=False, allow_abbrev=False)
    common.add_argument("--explain", action="store_true", default=argparse.SUPPRESS,
                        help="print group and timing diagnostics")
    common.add_argument("--verbose", action="store_true", default=argparse.SUPPRESS,
                        help="log progress to stderr")
    p.add_argument("--explain", action="store_true", help="print group and timing diagnostics")
    p.add_argument("--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    _add = sub.add_parser

    def add_parser(name, **kw):
        return _add(name, parents=[common], allow_abbrev=False, **kw)

    sub.add_parser = add_parser

    def space(sp, t=True):
        sp.add_argument("--v", type=int)
        sp.add_argument("--q", type=int)
        if t:
            sp.add_argument("--t", type=int)

    c = sub.add_parser("construct", help="build a graph or design")
    c.add_argument("kind", choices=("spread", "symplectic", "theorem2", "theorem3", "qsru"))
    space(c)
    c.add_argument("--group", help="built-in group name or group file")
    c.add_argument("--delta", help="full, point, closure:i,j or index:n")
    c.add_argument("--template", choices=("symplectic", "complete"), default="symplectic")
    c.add_argument("-o", "--output", type=Path)

    a = sub.add_parser("analyze", help="classify a graph file")
    a.add_argument("path")

    d = sub.add_parser("verify-design", help="check a design file")
    d.add_argument("path")
    d.add_argument("--t", type=int, default=1, choices=(1, 2))

    g = sub.add_parser("verify-gdd", help="check spread + blocks for group divisibility")
    space(g)
    g.add_argument("path", nargs="?", help="design file with the blocks (default: no blocks)")

    k = sub.add_parser("classify-all", help="exhaustive search of tiny cases")
    space(k, t=False)
    k.add_argument("--long-running", action="store_true")
    k.add_argument("--threads", type=int, default=1)

    sub.add_parser("table1", help="reproduce the spread parameter table")

    gr = sub.add_parser("groups", help="list built-in groups")
    space(gr)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        max_points()
        cfg = RunConfig(
            args.command,
            v=getattr(args, "v", None),
            q=getattr(args, "q", None),
            t=getattr(args, "t", None) if args.command != "verify-design" else None,
            group=getattr(args, "group", None),
            delta=getattr(args, "delta", None),
            output=getattr(args, "output", None),
            explain=args.explain,
            long_running=getattr(args, "long_running", False),
            threads=getattr(args, "threads", 1),
        )
        if args.command == "construct":
            return cmd_construct(cfg, args.kind, args.template)
        if args.command == "analyze":
            return cmd_analyze(args.path, args.explain)
        if args.command == "verify-design":
            return cmd_verify_design(args.path, args.t)
        if args.command == "verify-gdd":
            return cmd_verify_gdd(cfg, args.path)
        if args.command == "classify-all":
            return cmd_classify_all(cfg)
        if args.command == "table1":
            return cmd_table1(args.explain)
        if args.command == "groups":
            return cmd_groups(cfg)
    except BoundExceeded as exc:
        print(f"bound exceeded: {exc}", file=sys.stderr)
        return EXIT_BOUND
    except fileio.FormatError as exc:
        print(f"malformed input: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ConstructionError, analysis.NotRegular) as exc:
        print(f"failed: {exc}", file=sys.stderr)
        witness = getattr(exc, "witness", None)
        if witness is not None:
            print(f"witness: {witness}")
        return EXIT_MATH
    except (UsageError, FieldError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
