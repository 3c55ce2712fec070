"""Linear algebra over GF(q) and canonical subspaces of GF(q)^v.

A vector of length ``v`` is *encoded* as the integer whose base-``q`` digits
are its coordinates, coordinate 0 being the most significant digit.  Integer
order is therefore lexicographic order, and over GF(2) the code is simply the
bit-packed row.  A :class:`Subspace` stores the codes of its reduced
row-echelon basis, so equality, hashing and ordering are structural.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np

from .config import MAX_SUBSPACES, BoundExceeded
from .fieldcore import FieldSpec


def q_number(n: int, q: int) -> int:
    """The Gaussian integer ``(q^n - 1) / (q - 1)``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return (q**n - 1) // (q - 1)


def gaussian_binomial(n: int, k: int, q: int) -> int:
    """Number of ``k``-dimensional subspaces of an ``n``-dimensional space over GF(q)."""
    if not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got k={k}, n={n}")
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


# encoding -------------------------------------------------------------------

def encode(vec: Sequence[int], q: int) -> int:
    code = 0
    for x in vec:
        code = code * q + int(x)
    return code


def decode(code: int, v: int, q: int) -> list[int]:
    out = [0] * v
    for i in range(v - 1, -1, -1):
        code, out[i] = divmod(code, q)
    return out


def _weights(v: int, q: int) -> np.ndarray:
    return q ** np.arange(v - 1, -1, -1, dtype=np.int64)


def encode_rows(M: np.ndarray, q: int) -> list[int]:
    M = np.asarray(M)
    v = M.shape[1]
    if v * np.log2(q) < 62:
        return (M.astype(np.int64) @ _weights(v, q)).tolist()
    return [encode(row, q) for row in M.tolist()]


def decode_rows(codes: Sequence[int], v: int, q: int) -> np.ndarray:
    if v * np.log2(q) < 62:
        c = np.asarray(codes, dtype=np.int64).reshape(-1, 1)
        return (c // _weights(v, q)) % q
    return np.array([decode(c, v, q) for c in codes], dtype=np.int64).reshape(-1, v)


# dense kernels --------------------------------------------------------------

def matmul(A: np.ndarray, B: np.ndarray, F: FieldSpec) -> np.ndarray:
    """Matrix product over ``F`` of integer-encoded arrays."""
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    if F.e == 1:
        return (A @ B) % F.p
    out = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    for k in range(A.shape[1]):
        out = F.vadd(out, F.vmul(A[:, k][:, None], B[k][None, :]))
    return out


def rref_array(M: np.ndarray, F: FieldSpec) -> np.ndarray:
    """Reduced row-echelon form with zero rows removed."""
    M = np.array(M, dtype=np.int64, copy=True)
    if M.ndim != 2:
        raise ValueError("expected a 2-d array")
    r, n = M.shape
    lead = 0
    for c in range(n):
        if lead == r:
            break
        nz = np.flatnonzero(M[lead:, c])
        if nz.size == 0:
            continue
        piv = lead + int(nz[0])
        if piv != lead:
            M[[lead, piv]] = M[[piv, lead]]
        pv = int(M[lead, c])
        if pv != 1:
            M[lead] = F.vmul(M[lead], F.inv_table[pv])
        f = M[:, c].copy()
        f[lead] = 0
        rows = np.flatnonzero(f)
        if rows.size:
            M[rows] = F.vsub(M[rows], F.vmul(f[rows][:, None], M[lead][None, :]))
        lead += 1
    return M[:lead]


def _rref_gf2(codes: Iterable[int]) -> tuple[int, ...]:
    basis: list[int] = []
    for r in codes:
        for b in basis:
            r = min(r, r ^ b)
        if r:
            basis.append(r)
            basis.sort(reverse=True)
    for i in range(len(basis) - 1, -1, -1):
        bit = basis[i].bit_length() - 1
        for j in range(i):
            if basis[j] >> bit & 1:
                basis[j] ^= basis[i]
    return tuple(basis)


def _pivots(R: np.ndarray) -> list[int]:
    return [int(np.flatnonzero(row)[0]) for row in R]


class MatrixGF:
    """An immutable matrix over a finite field."""

    __slots__ = ("entries", "field")

    def __init__(self, entries, field: FieldSpec):
        a = np.array(entries, dtype=np.int64, copy=True)
        if a.ndim == 1:
            a = a.reshape(1, -1) if a.size else a.reshape(0, 0)
        if a.ndim != 2:
            raise ValueError("matrix entries must be 2-dimensional")
        if a.size and (a.min() < 0 or a.max() >= field.q):
            raise ValueError(f"entries outside {field}")
        a.flags.writeable = False
        self.entries = a
        self.field = field

    @classmethod
    def identity(cls, n: int, field: FieldSpec) -> MatrixGF:
        return cls(np.eye(n, dtype=np.int64), field)

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    def __matmul__(self, other: MatrixGF) -> MatrixGF:
        if other.field != self.field:
            raise ValueError("field mismatch")
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.entries.shape} @ {other.entries.shape}")
        return MatrixGF(matmul(self.entries, other.entries, self.field), self.field)

    def frobenius(self, i: int) -> MatrixGF:
        return MatrixGF(self.field.vfrob(self.entries, i), self.field)

    def rref(self) -> MatrixGF:
        return rref(self)

    def rank(self) -> int:
        return rref_array(self.entries, self.field).shape[0]

    def inverse(self) -> MatrixGF:
        n = self.rows
        if n != self.cols:
            raise ValueError("only square matrices are invertible")
        aug = np.hstack([self.entries, np.eye(n, dtype=np.int64)])
        R = rref_array(aug, self.field)
        if R.shape[0] < n or not np.array_equal(R[:, :n], np.eye(n, dtype=np.int64)):
            raise ValueError("matrix is singular")
        return MatrixGF(R[:, n:], self.field)

    def tolist(self) -> list[list[int]]:
        return self.entries.tolist()

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, MatrixGF)
            and other.field == self.field
            and np.array_equal(self.entries, other.entries)
        )

    def __hash__(self) -> int:
        return hash((self.field, self.entries.shape, self.entries.tobytes()))

    def __repr__(self) -> str:
        return f"MatrixGF({self.tolist()}, {self.field})"


def rref(m: MatrixGF) -> MatrixGF:
    R = rref_array(m.entries, m.field)
    if R.shape[0] == 0:
        return MatrixGF(np.zeros((0, m.cols), dtype=np.int64), m.field)
    return MatrixGF(R, m.field)


# subspaces ------------------------------------------------------------------

@dataclass(frozen=True, order=True)
class Subspace:
    """A subspace of GF(q)^v held by the codes of its RREF basis rows.

    Build instances with :func:`subspace_span` (or :meth:`span`); the raw
    constructor trusts that ``rows`` is already canonical.
    """

    v: int
    field: FieldSpec
    rows: tuple[int, ...]

    @classmethod
    def span(cls, vectors, v: int, field: FieldSpec) -> Subspace:
        return subspace_span(vectors, v, field)

    @classmethod
    def zero(cls, v: int, field: FieldSpec) -> Subspace:
        return cls(v, field, ())

    @classmethod
    def full(cls, v: int, field: FieldSpec) -> Subspace:
        return cls(v, field, tuple(field.q ** (v - 1 - i) for i in range(v)))

    @property
    def dim(self) -> int:
        return len(self.rows)

    @property
    def q(self) -> int:
        return self.field.q

    @cached_property
    def array(self) -> np.ndarray:
        a = decode_rows(self.rows, self.v, self.field.q) if self.rows else np.zeros((0, self.v), dtype=np.int64)
        a.flags.writeable = False
        return a

    @property
    def basis(self) -> MatrixGF:
        return MatrixGF(self.array, self.field) if self.rows else MatrixGF(np.zeros((0, self.v)), self.field)

    @cached_property
    def pivots(self) -> tuple[int, ...]:
        return tuple(_pivots(self.array))

    def vectors(self) -> Iterator[tuple[int, ...]]:
        """Every vector of the subspace (``q^dim`` of them)."""
        for coeffs in itertools.product(range(self.field.q), repeat=self.dim):
            vec = np.zeros(self.v, dtype=np.int64)
            for c, row in zip(coeffs, self.array):
                vec = self.field.vadd(vec, self.field.vmul(c, row))
            yield tuple(int(x) for x in vec)

    def __add__(self, other: Subspace) -> Subspace:
        return subspace_sum(self, other)

    def __and__(self, other: Subspace) -> Subspace:
        return intersect(self, other)

    def __contains__(self, x) -> bool:
        if isinstance(x, Subspace):
            return contains(self, x)
        return contains_vector(self, x)

    def __repr__(self) -> str:
        return f"Subspace(v={self.v}, {self.field}, basis={self.array.tolist()})"


def _as_array(vectors, v: int) -> np.ndarray:
    a = np.asarray(vectors, dtype=np.int64)
    if a.size == 0:
        return np.zeros((0, v), dtype=np.int64)
    a = a.reshape(-1, v) if a.ndim == 1 else a
    if a.shape[1] != v:
        raise ValueError(f"vectors must have length {v}")
    return a


def _from_codes_gf2(codes: Iterable[int], v: int, F: FieldSpec) -> Subspace:
    return Subspace(v, F, _rref_gf2(codes))


def subspace_span(vectors, v: int, field: FieldSpec) -> Subspace:
    """Canonical subspace spanned by ``vectors`` (any iterable of length-``v`` rows)."""
    a = _as_array(vectors, v)
    if a.size and (a.min() < 0 or a.max() >= field.q):
        raise ValueError(f"entries outside {field}")
    if field.q == 2:
        return _from_codes_gf2(encode_rows(a, 2), v, field)
    R = rref_array(a, field)
    return Subspace(v, field, tuple(encode_rows(R, field.q)) if R.shape[0] else ())


def span_codes(codes: Iterable[int], v: int, field: FieldSpec) -> Subspace:
    """Span of vectors given by their integer codes."""
    if field.q == 2:
        return _from_codes_gf2(codes, v, field)
    codes = list(codes)
    return subspace_span(decode_rows(codes, v, field.q) if codes else [], v, field)


def _same_ambient(U: Subspace, W: Subspace) -> None:
    if U.v != W.v or U.field != W.field:
        raise ValueError(f"ambient mismatch: {U.v}/{U.field} vs {W.v}/{W.field}")


def subspace_sum(U: Subspace, W: Subspace) -> Subspace:
    _same_ambient(U, W)
    return span_codes(U.rows + W.rows, U.v, U.field)


def _zassenhaus(U: Subspace, W: Subspace) -> tuple[Subspace, Subspace]:
    _same_ambient(U, W)
    v, F, q = U.v, U.field, U.field.q
    if q == 2:
        shift = 1 << v
        R = _rref_gf2([u * shift + u for u in U.rows] + [w * shift for w in W.rows])
        s = tuple(r >> v for r in R if r >= shift)
        i = tuple(r for r in R if r < shift)
        return Subspace(v, F, s), Subspace(v, F, i)
    top = np.vstack([np.hstack([U.array, U.array]), np.hstack([W.array, np.zeros_like(W.array)])])
    R = rref_array(top, F) if top.shape[0] else np.zeros((0, 2 * v), dtype=np.int64)
    left = R[:, :v].any(axis=1)
    s = R[left, :v]
    i = R[~left, v:]
    return (
        Subspace(v, F, tuple(encode_rows(s, q)) if s.shape[0] else ()),
        Subspace(v, F, tuple(encode_rows(i, q)) if i.shape[0] else ()),
    )


def intersect(U: Subspace, W: Subspace) -> Subspace:
    s, i = _zassenhaus(U, W)
    assert s.dim + i.dim == U.dim + W.dim
    return i


def sum_and_intersection(U: Subspace, W: Subspace) -> tuple[Subspace, Subspace]:
    return _zassenhaus(U, W)


def contains_vector(U: Subspace, x) -> bool:
    x = np.asarray(x, dtype=np.int64).reshape(-1)
    if x.shape[0] != U.v:
        raise ValueError(f"vector length {x.shape[0]} != ambient dimension {U.v}")
    F = U.field
    if F.q == 2:
        c = encode(x, 2)
        for r in U.rows:
            if c >> (r.bit_length() - 1) & 1:
                c ^= r
        return c == 0
    for piv, row in zip(U.pivots, U.array):
        if x[piv]:
            x = F.vsub(x, F.vmul(x[piv], row))
    return not x.any()


def contains(U: Subspace, W: Subspace) -> bool:
    """True iff ``W`` is a subspace of ``U``."""
    _same_ambient(U, W)
    if W.dim > U.dim:
        return False
    if U.field.q == 2:
        return all(contains_vector_code_gf2(U, w) for w in W.rows)
    return all(contains_vector(U, w) for w in W.array)


def contains_vector_code_gf2(U: Subspace, c: int) -> bool:
    for r in U.rows:
        if c >> (r.bit_length() - 1) & 1:
            c ^= r
    return c == 0


def orthogonal_complement(U: Subspace) -> Subspace:
    """``{y : y . u = 0 for all u in U}`` for the standard dot product."""
    v, F = U.v, U.field
    piv = U.pivots
    free = [c for c in range(v) if c not in piv]
    R = U.array
    vecs = np.zeros((len(free), v), dtype=np.int64)
    for k, f in enumerate(free):
        vecs[k, f] = 1
        for i, p in enumerate(piv):
            vecs[k, p] = F.neg_table[R[i, f]]
    return subspace_span(vecs, v, F)


def _cell(v: int, k: int, piv: tuple[int, ...], q: int) -> Iterator[tuple[int, ...]]:
    pset = set(piv)
    free_cols = [[c for c in range(p + 1, v) if c not in pset] for p in piv]
    bases = [q ** (v - 1 - p) for p in piv]
    weights = [[q ** (v - 1 - c) for c in fc] for fc in free_cols]
    flat = [w for ws in weights for w in ws]
    owner = [i for i, ws in enumerate(weights) for _ in ws]
    for digits in itertools.product(range(q), repeat=len(flat)):
        rows = list(bases)
        for d, w, i in zip(digits, flat, owner):
            rows[i] += d * w
        yield tuple(rows)


def enumerate_k_subspaces(v: int, k: int, field: FieldSpec, bound: int = MAX_SUBSPACES) -> Iterator[Subspace]:
    """Yield every ``k``-subspace of GF(q)^v once, ordered by canonical basis codes."""
    if not 0 <= k <= v:
        raise ValueError(f"need 0 <= k <= v, got k={k}, v={v}")
    total = gaussian_binomial(v, k, field.q)
    if total > bound:
        raise BoundExceeded(f"{total} subspaces of dimension {k} exceed bound {bound}")
    cells = [_cell(v, k, piv, field.q) for piv in itertools.combinations(range(v), k)]
    for rows in heapq.merge(*cells):
        yield Subspace(v, field, rows)


__all__ = [
    "MatrixGF",
    "Subspace",
    "q_number",
    "gaussian_binomial",
    "rref",
    "rref_array",
    "matmul",
    "subspace_span",
    "span_codes",
    "subspace_sum",
    "intersect",
    "contains",
    "contains_vector",
    "orthogonal_complement",
    "enumerate_k_subspaces",
    "encode",
    "decode",
    "encode_rows",
    "decode_rows",
]
