"""Plain-text formats for graphs, designs and generator sets.

Every format is line based, UTF-8, with a ``key=value`` header.  Subspaces are
written as their RREF rows (one per line, entries space-separated) and closed
by a blank line.  Writers are deterministic, so ``write(read(text)) == text``.
"""

from __future__ import annotations

import re
from pathlib import Path

import numpy as np

from .fieldcore import FieldSpec, field_of_order
from .projective import build_point_table
from .semilinear import GroupSpec, SemilinearMap
from .structures import QaryGraph, SubspaceDesign
from .subspaces import Subspace, subspace_span


class FormatError(ValueError):
    """Malformed input; ``line`` is 1-based."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


# subspaces -------------------------------------------------------------------

def subspace_lines(S: Subspace) -> list[str]:
    return [" ".join(str(int(c)) for c in row) for row in S.array] + [""]


def format_subspace(S: Subspace) -> str:
    return "\n".join(subspace_lines(S)) + "\n"


class _Lines:
    def __init__(self, text: str):
        self.lines = text.split("\n")
        if self.lines and self.lines[-1] == "":
            self.lines.pop()
        self.pos = 0

    @property
    def lineno(self) -> int:
        return self.pos + 1

    def done(self) -> bool:
        return self.pos >= len(self.lines)

    def peek(self) -> str:
        return self.lines[self.pos]

    def next(self) -> str:
        if self.done():
            raise FormatError("unexpected end of file", self.lineno)
        s = self.lines[self.pos]
        self.pos += 1
        return s

    def fail(self, msg: str, back: int = 1):
        raise FormatError(msg, self.pos + 1 - back)


def _read_subspace(L: _Lines, v: int, field: FieldSpec) -> Subspace:
    rows = []
    while True:
        line = L.next()
        if line == "":
            break
        try:
            row = [int(tok) for tok in line.split()]
        except ValueError:
            L.fail(f"non-integer entry in {line!r}")
        if len(row) != v:
            L.fail(f"expected {v} entries, found {len(row)}")
        if any(not 0 <= c < field.q for c in row):
            L.fail(f"entry outside GF({field.q})")
        rows.append(row)
    S = subspace_span(np.array(rows, dtype=np.int64).reshape(-1, v), v, field)
    if S.dim != len(rows) or not np.array_equal(S.array, np.array(rows, dtype=np.int64).reshape(-1, v)):
        L.fail("rows are not in reduced row echelon form")
    return S


def read_subspaces(text: str, v: int, field: FieldSpec) -> list[Subspace]:
    L = _Lines(text)
    out = []
    while not L.done():
        out.append(_read_subspace(L, v, field))
    return out


# headers ---------------------------------------------------------------------

_KV = re.compile(r"(\w+)=(\S+)")


def _header(L: _Lines, magic: str, keys: tuple[str, ...]) -> dict[str, str]:
    if L.done():
        raise FormatError("empty file", 1)
    line = L.next()
    parts = line.split()
    if not parts or parts[0] != magic:
        L.fail(f"expected header starting with {magic!r}")
    kv = dict(_KV.findall(line))
    missing = [k for k in keys if k not in kv]
    if missing:
        L.fail(f"header lacks {', '.join(missing)}")
    return kv


def _int(kv: dict[str, str], key: str, L: _Lines) -> int:
    try:
        return int(kv[key])
    except ValueError:
        L.fail(f"{key}={kv[key]!r} is not an integer")


def _field(q: int, L: _Lines) -> FieldSpec:
    try:
        return field_of_order(q)
    except ValueError as exc:
        L.fail(str(exc))


def _modulus_line(field: FieldSpec) -> str:
    return "modulus " + " ".join(map(str, field.modulus))


def _check_modulus(L: _Lines, field: FieldSpec) -> None:
    line = L.next()
    if line != _modulus_line(field):
        L.fail(f"expected {_modulus_line(field)!r}")


# graphs ----------------------------------------------------------------------

def format_graph(graph: QaryGraph) -> str:
    k = graph.k
    out = [f"qgraph v={graph.v} q={graph.q} k={'none' if k is None else k}", _modulus_line(graph.field)]
    for x, S in enumerate(graph.nbr):
        out.append(f"nbr {x}:")
        out.extend(subspace_lines(S))
    return "\n".join(out) + "\n"


def parse_graph(text: str, name: str = "") -> QaryGraph:
    L = _Lines(text)
    kv = _header(L, "qgraph", ("v", "q", "k"))
    v, q = _int(kv, "v", L), _int(kv, "q", L)
    field = _field(q, L)
    _check_modulus(L, field)
    T = build_point_table(v, field)
    nbr = []
    for x in range(len(T)):
        if L.next() != f"nbr {x}:":
            L.fail(f"expected 'nbr {x}:'")
        nbr.append(_read_subspace(L, v, field))
    if not L.done():
        L.fail("trailing content after the last neighborhood", back=0)
    graph = QaryGraph(T, tuple(nbr), name=name)
    declared = kv["k"]
    actual = graph.k
    if declared != ("none" if actual is None else str(actual)):
        raise FormatError(f"header declares k={declared} but neighborhoods give k={actual}", 1)
    return graph


# designs ---------------------------------------------------------------------

def format_design(D: SubspaceDesign) -> str:
    out = [f"qdesign t={D.t} v={D.v} k={D.k} lambda={D.lam} q={D.q} b={D.b}", _modulus_line(D.field)]
    for B in D.blocks:
        out.extend(subspace_lines(B))
    return "\n".join(out) + "\n"


def parse_design(text: str) -> SubspaceDesign:
    L = _Lines(text)
    kv = _header(L, "qdesign", ("t", "v", "k", "lambda", "q", "b"))
    t, v, k, lam, q, b = (_int(kv, key, L) for key in ("t", "v", "k", "lambda", "q", "b"))
    field = _field(q, L)
    _check_modulus(L, field)
    blocks = []
    while not L.done():
        start = L.lineno
        B = _read_subspace(L, v, field)
        if B.dim != k:
            raise FormatError(f"block of dimension {B.dim}, header says k={k}", start)
        blocks.append(B)
    if len(blocks) != b:
        raise FormatError(f"header says b={b} but {len(blocks)} blocks follow", 1)
    return SubspaceDesign(v, field, tuple(blocks), t, k, lam)


# groups ----------------------------------------------------------------------

def format_group(G: GroupSpec) -> str:
    F = G.field
    out = [f"group v={G.v} q={F.q} e={F.e}"]
    for i, g in enumerate(G.generators):
        if i:
            out.append("")
        out.append(f"frob {g.f}")
        out.extend(" ".join(str(int(c)) for c in row) for row in g.A.entries)
    return "\n".join(out) + "\n"


def parse_group(text: str, name: str = "file") -> GroupSpec:
    L = _Lines(text)
    kv = _header(L, "group", ("v", "q", "e"))
    v, q, e = _int(kv, "v", L), _int(kv, "q", L), _int(kv, "e", L)
    field = _field(q, L)
    if field.e != e:
        L.fail(f"GF({q}) has degree {field.e}, header says e={e}")
    gens = []
    while not L.done():
        if gens:
            if L.next() != "":
                L.fail("expected a blank line between generators")
        line = L.next()
        m = re.fullmatch(r"frob (\d+)", line)
        if not m:
            L.fail("expected 'frob <i>'")
        f = int(m.group(1))
        if f >= e:
            L.fail(f"Frobenius exponent {f} must be below e={e}")
        rows = []
        for _ in range(v):
            line = L.next()
            try:
                row = [int(tok) for tok in line.split()]
            except ValueError:
                L.fail("non-integer matrix entry")
            if len(row) != v or any(not 0 <= c < q for c in row):
                L.fail(f"expected {v} entries in [0,{q})")
            rows.append(row)
        try:
            gens.append(SemilinearMap(np.array(rows, dtype=np.int64), f, field))
        except ValueError as exc:
            L.fail(str(exc))
    if not gens:
        raise FormatError("no generators", L.lineno)
    return GroupSpec(name, tuple(gens), field, v)


# paths -----------------------------------------------------------------------

def write_text(path: str | Path, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8")


def read_text(path: str | Path) -> str:
    return Path(path).read_text(encoding="utf-8")

