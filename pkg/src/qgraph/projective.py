"""Points of PG(v-1, q): canonical indexing of the 1-subspaces of GF(q)^v."""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .config import BoundExceeded, max_points
from .fieldcore import FieldSpec
from .subspaces import Subspace, decode_rows, encode_rows, matmul, q_number

MAX_CODE_SPACE = 1 << 22


def normalize_point(x, field: FieldSpec) -> tuple[int, ...]:
    """Scale ``x`` so that its first nonzero coordinate is 1."""
    x = np.asarray(x, dtype=np.int64).reshape(-1)
    nz = np.flatnonzero(x)
    if nz.size == 0:
        raise ValueError("the zero vector is not a projective point")
    lead = int(x[nz[0]])
    if lead != 1:
        x = field.vmul(x, field.inv_table[lead])
    return tuple(int(c) for c in x)


def normalize_rows(V: np.ndarray, field: FieldSpec) -> np.ndarray:
    """Row-wise :func:`normalize_point`; rows must be nonzero."""
    V = np.asarray(V, dtype=np.int64)
    if field.q == 2:
        return V
    nonzero = V != 0
    if not nonzero.any(axis=1).all():
        raise ValueError("the zero vector is not a projective point")
    lead = V[np.arange(V.shape[0]), nonzero.argmax(axis=1)]
    return field.vmul(V, field.inv_table[lead][:, None])


class PointTable:
    """Sorted normalized representatives of the points of PG(v-1, q).

    Index ``i`` refers to ``reps[i]``; representatives are ordered
    lexicographically, which is also the order of their integer codes.
    """

    def __init__(self, v: int, field: FieldSpec):
        n = q_number(v, field.q)
        if n > max_points():
            raise BoundExceeded(f"PG({v - 1},{field.q}) has {n} points, above bound {max_points()}")
        if field.q**v > MAX_CODE_SPACE:
            raise BoundExceeded(f"GF({field.q})^{v} is too large to index")
        self.v = v
        self.field = field
        q = field.q
        codes = np.arange(1, q**v, dtype=np.int64)
        vecs = decode_rows(codes, v, q)
        lead = vecs[np.arange(len(codes)), (vecs != 0).argmax(axis=1)]
        keep = lead == 1
        self.codes = codes[keep]
        self.reps = vecs[keep]
        self.reps.flags.writeable = False
        self.codes.flags.writeable = False
        assert len(self.codes) == n
        self._index = np.full(q**v, -1, dtype=np.int64)
        self._index[self.codes] = np.arange(n)
        self._index.flags.writeable = False
        self._point_cache: dict[Subspace, tuple[int, ...]] = {}

    def __len__(self) -> int:
        return len(self.codes)

    def __eq__(self, other) -> bool:
        return isinstance(other, PointTable) and (self.v, self.field) == (other.v, other.field)

    def __hash__(self) -> int:
        return hash((self.v, self.field))

    def __repr__(self) -> str:
        return f"PointTable(v={self.v}, {self.field}, n={len(self)})"

    def rep(self, i: int) -> tuple[int, ...]:
        return tuple(int(c) for c in self.reps[i])

    def index(self, x) -> int:
        """Index of the point spanned by the nonzero vector ``x``."""
        x = normalize_point(x, self.field)
        if len(x) != self.v:
            raise ValueError(f"vector length {len(x)} != {self.v}")
        return int(self._index[encode_rows(np.array([x]), self.field.q)[0]])

    def indices_of_vectors(self, V: np.ndarray) -> np.ndarray:
        """Point indices of the nonzero rows of ``V`` (vectorized)."""
        N = normalize_rows(V, self.field)
        codes = np.asarray(encode_rows(N, self.field.q), dtype=np.int64)
        return self._index[codes]

    def point_subspace(self, i: int) -> Subspace:
        return Subspace(self.v, self.field, (int(self.codes[i]),))

    def points_of(self, S: Subspace) -> tuple[int, ...]:
        """Sorted indices of the points contained in ``S``."""
        if S.v != self.v or S.field != self.field:
            raise ValueError("subspace does not live in this point table's space")
        hit = self._point_cache.get(S)
        if hit is None:
            hit = _points_of(S, self)
            if len(self._point_cache) < 1 << 16:
                self._point_cache[S] = hit
        return hit

    def bits_of(self, S: Subspace) -> int:
        """Point set of ``S`` as an integer bitset (bit ``i`` for point ``i``)."""
        out = 0
        for i in self.points_of(S):
            out |= 1 << i
        return out


def _leading_one_coefficients(d: int, q: int) -> np.ndarray:
    blocks = []
    for i in range(d):
        free = d - 1 - i
        tail = decode_rows(np.arange(q**free, dtype=np.int64), free, q) if free else np.zeros((1, 0), dtype=np.int64)
        head = np.zeros((tail.shape[0], i + 1), dtype=np.int64)
        head[:, i] = 1
        blocks.append(np.hstack([head, tail]))
    return np.vstack(blocks)


def _points_of(S: Subspace, T: PointTable) -> tuple[int, ...]:
    if S.dim == 0:
        return ()
    q = T.field.q
    if q == 2:
        # RREF row combinations with first nonzero coefficient 1 are already normalized.
        codes = [0]
        for r in reversed(S.rows):
            codes = codes + [c ^ r for c in codes]
        return tuple(sorted(int(T._index[c]) for c in codes[1:]))
    C = _leading_one_coefficients(S.dim, q)
    V = matmul(C, S.array, T.field)
    codes = np.asarray(encode_rows(V, q), dtype=np.int64)
    return tuple(sorted(T._index[codes].tolist()))


def points_of_subspace(S: Subspace, T: PointTable) -> list[int]:
    return list(T.points_of(S))


@lru_cache(maxsize=64)
def _cached_table(v: int, field: FieldSpec) -> PointTable:
    return PointTable(v, field)


def build_point_table(v: int, field: FieldSpec) -> PointTable:
    """Shared point table; the point bound is rechecked on every call."""
    n = q_number(v, field.q)
    if n > max_points():
        raise BoundExceeded(f"PG({v - 1},{field.q}) has {n} points, above bound {max_points()}")
    return _cached_table(v, field)


def bits_to_indices(bits: int) -> list[int]:
    out = []
    i = 0
    while bits:
        if bits & 1:
            out.append(i)
        bits >>= 1
        i += 1
    return out


def indices_to_bits(indices) -> int:
    out = 0
    for i in indices:
        out |= 1 << int(i)
    return out
