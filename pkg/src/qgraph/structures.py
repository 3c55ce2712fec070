"""Value types shared by the constructions and the analyzers."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .fieldcore import FieldSpec
from .projective import PointTable
from .subspaces import Subspace, q_number, span_codes


@dataclass(frozen=True, eq=False)
class QaryGraph:
    """A q-ary graph given by the neighborhood ``nbr[x]`` of every point ``x``.

    ``y`` is adjacent to ``x`` when ``y`` is a point of ``nbr[x]`` other than
    ``x``; the edges are the 2-subspaces ``x + y`` for such pairs.
    """

    table: PointTable
    nbr: tuple[Subspace, ...]
    name: str = ""

    def __post_init__(self):
        if len(self.nbr) != len(self.table):
            raise ValueError(f"need {len(self.table)} neighborhoods, got {len(self.nbr)}")
        for S in self.nbr:
            if S.v != self.table.v or S.field != self.table.field:
                raise ValueError("neighborhood lives in the wrong space")

    @property
    def v(self) -> int:
        return self.table.v

    @property
    def field(self) -> FieldSpec:
        return self.table.field

    @property
    def q(self) -> int:
        return self.table.field.q

    @property
    def n(self) -> int:
        return len(self.table)

    @cached_property
    def nbr_bits(self) -> tuple[int, ...]:
        return tuple(self.table.bits_of(S) for S in self.nbr)

    @cached_property
    def membership(self) -> np.ndarray:
        """Boolean matrix ``M[x, y] = (y in nbr[x])``, diagonal included."""
        M = np.zeros((self.n, self.n), dtype=bool)
        for x, S in enumerate(self.nbr):
            M[x, list(self.table.points_of(S))] = True
        M.flags.writeable = False
        return M

    @property
    def dims(self) -> set[int]:
        return {S.dim for S in self.nbr}

    @property
    def k(self) -> int | None:
        """``dim N(x) - 1`` when every neighborhood has the same dimension."""
        d = self.dims
        return next(iter(d)) - 1 if len(d) == 1 else None

    def adjacent(self, x: int, y: int) -> bool:
        return x != y and bool(self.nbr_bits[x] >> y & 1)

    def is_trivial(self) -> bool:
        return self.k in (0, self.v - 1)

    def edges(self) -> set[Subspace]:
        T = self.table
        out = set()
        for x, S in enumerate(self.nbr):
            for y in T.points_of(S):
                if y != x:
                    out.add(span_codes([int(T.codes[x]), int(T.codes[y])], self.v, self.field))
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, QaryGraph) and self.table == other.table and self.nbr == other.nbr

    def __hash__(self) -> int:
        return hash((self.table, self.nbr))


@dataclass(frozen=True)
class SubspaceDesign:
    """A multiset of equal-dimension blocks with declared ``t-(v,k,lam;q)`` parameters."""

    v: int
    field: FieldSpec
    blocks: tuple[Subspace, ...]
    t: int
    k: int
    lam: int

    def __post_init__(self):
        for B in self.blocks:
            if B.dim != self.k or B.v != self.v or B.field != self.field:
                raise ValueError(f"block {B} does not match declared k={self.k}, v={self.v}")

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def b(self) -> int:
        return len(self.blocks)

    def multiplicities(self) -> Counter:
        return Counter(self.blocks)

    def is_simple(self) -> bool:
        return all(m == 1 for m in self.multiplicities().values())

    @property
    def params(self) -> str:
        return f"{self.t}-({self.v},{self.k},{self.lam};{self.q})"


@dataclass(frozen=True)
class Spread:
    """A partition of the points of PG(v-1, q) into ``t``-subspaces.

    ``coords[i]`` (when present) is a ``t x v`` matrix whose rows are the images
    of the standard basis of GF(q)^t in element ``i``.
    """

    v: int
    field: FieldSpec
    t: int
    elements: tuple[Subspace, ...]
    coords: tuple[np.ndarray, ...] | None = field(default=None, compare=False, hash=False)

    def __post_init__(self):
        for E in self.elements:
            if E.dim != self.t:
                raise ValueError(f"spread element of dimension {E.dim}, expected {self.t}")

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def expected_size(self) -> int:
        return q_number(self.v, self.field.q) // q_number(self.t, self.field.q)


@dataclass
class ConstructionReport:
    """Diagnostics of one construction run."""

    construction: str
    group: str = ""
    group_order: int | None = None
    stabilizer_order: int | None = None
    delta_dim: int | None = None
    block_count: int | None = None
    params: str = ""
    trivial: bool = False
    elapsed: float = 0.0
    notes: list[str] = field(default_factory=list)

    def lines(self) -> list[str]:
        out = [f"construction: {self.construction}"]
        if self.group:
            out.append(f"group: {self.group}")
        if self.group_order is not None:
            out.append(f"|G| = {self.group_order}")
        if self.stabilizer_order is not None:
            out.append(f"|G_Delta| = {self.stabilizer_order}")
        if self.delta_dim is not None:
            out.append(f"dim Delta = {self.delta_dim}")
        if self.block_count is not None:
            out.append(f"blocks = {self.block_count}")
        if self.params:
            out.append(f"params: {self.params}")
        if self.trivial:
            out.append("trivial")
        out.extend(self.notes)
        return out
