"""Semilinear maps of GF(q)^v and generating sets for classical groups.

Vectors are rows and maps act on the right: ``(A, f)`` sends ``x`` to
``x^(sigma^f) A`` where ``sigma`` is the coordinatewise ``p``-power map.  With
this convention ``(A, f) * (B, g)`` means "first ``(A, f)``, then ``(B, g)``"
and equals ``(A^(sigma^g) B, f + g)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from .config import MAX_GROUP_ORDER, BoundExceeded
from .fieldcore import FieldSpec, make_field
from .projective import PointTable
from .subspaces import MatrixGF, Subspace, matmul, rref_array, subspace_span


class SemilinearMap:
    __slots__ = ("A", "f", "field")

    def __init__(self, A, f: int, field: FieldSpec):
        M = A if isinstance(A, MatrixGF) else MatrixGF(A, field)
        if M.rows != M.cols:
            raise ValueError("semilinear map needs a square matrix")
        if M.rank() != M.rows:
            raise ValueError("matrix is singular")
        self.A = M
        self.f = f % field.e
        self.field = field

    @classmethod
    def _trusted(cls, entries: np.ndarray, f: int, field: FieldSpec) -> SemilinearMap:
        g = object.__new__(cls)
        entries = np.asarray(entries, dtype=np.int64)
        entries.flags.writeable = False
        M = object.__new__(MatrixGF)
        M.entries = entries
        M.field = field
        g.A, g.f, g.field = M, f % field.e, field
        return g

    @classmethod
    def identity(cls, v: int, field: FieldSpec) -> SemilinearMap:
        return cls._trusted(np.eye(v, dtype=np.int64), 0, field)

    @property
    def v(self) -> int:
        return self.A.rows

    def one(self) -> SemilinearMap:
        return SemilinearMap.identity(self.v, self.field)

    def _check(self, other: SemilinearMap) -> None:
        if other.field != self.field or other.v != self.v:
            raise ValueError("semilinear maps over different spaces")

    def __mul__(self, other: SemilinearMap) -> SemilinearMap:
        self._check(other)
        A = self.field.vfrob(self.A.entries, other.f)
        return SemilinearMap._trusted(matmul(A, other.A.entries, self.field), self.f + other.f, self.field)

    def inverse(self) -> SemilinearMap:
        g = (-self.f) % self.field.e
        Ag = MatrixGF(self.field.vfrob(self.A.entries, g), self.field)
        return SemilinearMap._trusted(Ag.inverse().entries, g, self.field)

    def __pow__(self, n: int) -> SemilinearMap:
        base = self if n >= 0 else self.inverse()
        out = self.one()
        for _ in range(abs(n)):
            out = out * base
        return out

    def apply(self, V) -> np.ndarray:
        """Image of the row vectors ``V``."""
        V = np.asarray(V, dtype=np.int64)
        single = V.ndim == 1
        V = V.reshape(-1, self.v)
        out = matmul(self.field.vfrob(V, self.f), self.A.entries, self.field)
        return out[0] if single else out

    def apply_subspace(self, S: Subspace) -> Subspace:
        if S.v != self.v or S.field != self.field:
            raise ValueError("subspace does not live in this map's space")
        if S.dim == 0:
            return S
        return subspace_span(self.apply(S.array), self.v, self.field)

    def __eq__(self, other) -> bool:
        return isinstance(other, SemilinearMap) and self.f == other.f and self.A == other.A

    def __hash__(self) -> int:
        return hash((self.A, self.f))

    def __repr__(self) -> str:
        return f"SemilinearMap({self.A.tolist()}, frob={self.f}, {self.field})"


def compose(g: SemilinearMap, h: SemilinearMap) -> SemilinearMap:
    return g * h


def inverse(g: SemilinearMap) -> SemilinearMap:
    return g.inverse()


def identity(v: int, field: FieldSpec) -> SemilinearMap:
    return SemilinearMap.identity(v, field)


def proj_equal(g: SemilinearMap, h: SemilinearMap) -> bool:
    """True iff ``g`` and ``h`` differ by a nonzero scalar map."""
    g._check(h)
    if g.f != h.f:
        return False
    a, b = g.A.entries, h.A.entries
    i = np.flatnonzero(b.reshape(-1))[0]
    F = g.field
    a0, b0 = int(a.reshape(-1)[i]), int(b.reshape(-1)[i])
    if a0 == 0:
        return False
    c = F.mul(a0, F.inv(b0))
    return np.array_equal(a, F.vmul(b, c))


def act_on_point(g: SemilinearMap, i: int, T: PointTable) -> int:
    return int(T.indices_of_vectors(g.apply(T.reps[i : i + 1]))[0])


@dataclass(frozen=True)
class GroupSpec:
    """A named generating set of a subgroup of PGammaL(v, q)."""

    name: str
    generators: tuple[SemilinearMap, ...]
    field: FieldSpec
    v: int
    notes: dict = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        for g in self.generators:
            if g.v != self.v or g.field != self.field:
                raise ValueError(f"generator of {self.name} lives in the wrong space")

    def identity(self) -> SemilinearMap:
        return SemilinearMap.identity(self.v, self.field)

    def permutations(self, T: PointTable):
        return [to_permutation(g, T) for g in self.generators]


def to_permutation(g: SemilinearMap, T: PointTable):
    from .permgroup import Perm

    if g.v != T.v or g.field != T.field:
        raise ValueError("map and point table disagree on the space")
    return Perm(T.indices_of_vectors(g.apply(T.reps)))


# generator sets -------------------------------------------------------------

def _elementary(v: int, i: int, j: int, lam: int) -> np.ndarray:
    M = np.eye(v, dtype=np.int64)
    M[i, j] = lam
    return M


def _additive_basis(F: FieldSpec) -> list[int]:
    # Powers 1, w, ..., w^(e-1) of the primitive element span GF(q) over GF(p).
    return [F.pow(F.primitive_element, i) for i in range(F.e)]


def _signed_cycle(v: int, F: FieldSpec, det_one: bool) -> np.ndarray:
    M = np.zeros((v, v), dtype=np.int64)
    for i in range(v):
        M[i, (i + 1) % v] = 1
    if det_one and v % 2 == 0:
        M[v - 1, 0] = F.neg(1)
    return M


def gens_sl(v: int, field: FieldSpec) -> GroupSpec:
    """Transvections ``I + lam E_01`` over an additive basis plus a cycle of determinant 1."""
    gens = []
    if v >= 2:
        gens += [_elementary(v, 0, 1, lam) for lam in _additive_basis(field)]
        gens.append(_signed_cycle(v, field, det_one=True))
    maps = tuple(SemilinearMap(M, 0, field) for M in gens) or (SemilinearMap.identity(v, field),)
    return GroupSpec(f"SL({v},{field.q})", maps, field, v)


def gens_gl(v: int, field: FieldSpec) -> GroupSpec:
    """``gens_sl`` plus ``diag(w, 1, ..., 1)`` for a primitive element ``w``."""
    sl = gens_sl(v, field).generators if v >= 2 else ()
    gens = list(sl)
    if field.q > 2:
        D = np.eye(v, dtype=np.int64)
        D[0, 0] = field.primitive_element
        gens.append(SemilinearMap(D, 0, field))
    if not gens:
        gens = [SemilinearMap.identity(v, field)]
    return GroupSpec(f"GL({v},{field.q})", tuple(gens), field, v)


def symplectic_gram(v: int, field: FieldSpec) -> np.ndarray:
    """Gram matrix of ``B(x, y) = sum_i x_{2i} y_{2i+1} - x_{2i+1} y_{2i}``."""
    if v % 2:
        raise ValueError(f"symplectic forms need even dimension, got {v}")
    J = np.zeros((v, v), dtype=np.int64)
    for i in range(0, v, 2):
        J[i, i + 1] = 1
        J[i + 1, i] = field.neg(1)
    return J


def symplectic_form(x, y, field: FieldSpec) -> int:
    J = symplectic_gram(len(x), field)
    xJ = matmul(np.asarray(x).reshape(1, -1), J, field)
    return int(matmul(xJ, np.asarray(y).reshape(-1, 1), field)[0, 0])


def symplectic_transvection(u, lam: int, field: FieldSpec) -> np.ndarray:
    """Matrix of ``x -> x + lam B(x, u) u``."""
    u = np.asarray(u, dtype=np.int64).reshape(1, -1)
    v = u.shape[1]
    J = symplectic_gram(v, field)
    col = matmul(J, u.T, field)
    outer = matmul(col, u, field)
    return field.vadd(np.eye(v, dtype=np.int64), field.vmul(outer, lam))


def preserves_form(A: np.ndarray, field: FieldSpec) -> bool:
    J = symplectic_gram(A.shape[0], field)
    return np.array_equal(matmul(matmul(A, J, field), A.T, field), J)


def gens_sp(v: int, field: FieldSpec) -> GroupSpec:
    """Generators of Sp(v, q) for the hyperbolic-pairs alternating form."""
    if v % 2 or v < 2:
        raise ValueError(f"Sp needs even dimension >= 2, got {v}")
    basis = _additive_basis(field)
    e = np.eye(v, dtype=np.int64)
    mats = [symplectic_transvection(e[0], lam, field) for lam in basis]
    mats += [symplectic_transvection(e[1], lam, field) for lam in basis]
    if v >= 4:
        P = np.zeros((v, v), dtype=np.int64)
        for i in range(v):
            P[i, (i + 2) % v] = 1
        mats.append(P)
        mats.append(symplectic_transvection(e[1] + e[2], 1, field))
    for M in mats:
        assert preserves_form(M, field)
    return GroupSpec(f"Sp({v},{field.q})", tuple(SemilinearMap(M, 0, field) for M in mats), field, v)


def companion_matrix(poly: Sequence[int], field: FieldSpec) -> np.ndarray:
    """Row-convention companion matrix: ``x C`` is multiplication by ``t`` mod ``poly``."""
    v = len(poly) - 1
    C = np.zeros((v, v), dtype=np.int64)
    for i in range(v - 1):
        C[i, i + 1] = 1
    C[v - 1] = [field.neg(c) for c in poly[:v]]
    return C


def primitive_polynomial(v: int, field: FieldSpec) -> tuple[int, ...]:
    """Canonical primitive polynomial of degree ``v`` over ``field`` (lowest degree first).

    Over a prime field this is the Conway polynomial when the table has one;
    otherwise the least primitive monic polynomial in code order.
    """
    from .fieldcore import CONWAY

    if field.e == 1 and (field.p, v) in CONWAY:
        return CONWAY[(field.p, v)]
    q = field.q
    order = q**v - 1
    if order > 1 << 20:
        raise BoundExceeded(f"no primitive polynomial search for GF({q}^{v})")
    for code in range(q**v):
        low = [(code // q**i) % q for i in range(v)]
        if low[0] == 0:
            continue
        poly = tuple(low) + (1,)
        if _is_primitive(poly, field):
            return poly
    raise ValueError(f"no primitive polynomial of degree {v} over {field}")


def _is_primitive(poly: tuple[int, ...], field: FieldSpec) -> bool:
    v = len(poly) - 1
    C = companion_matrix(poly, field)
    q = field.q
    x = np.zeros((1, v), dtype=np.int64)
    x[0, 0] = 1
    start = x.copy()
    for k in range(1, q**v - 1):
        x = matmul(x, C, field)
        if np.array_equal(x, start):
            return False
    return True


def singer_generator(v: int, field: FieldSpec) -> SemilinearMap:
    return SemilinearMap(companion_matrix(primitive_polynomial(v, field), field), 0, field)


def frobenius_map(v: int, field: FieldSpec, i: int = 1) -> SemilinearMap:
    return SemilinearMap._trusted(np.eye(v, dtype=np.int64), i, field)


# field reduction ------------------------------------------------------------

def multiplication_matrix(a: int, big: FieldSpec) -> np.ndarray:
    """Matrix over GF(p) of ``y -> y a`` on GF(p^t) in the basis 1, x, ..., x^(t-1)."""
    t = big.e
    rows = [big.digits(big.mul(_x_power(big, k), a)) for k in range(t)]
    return np.array(rows, dtype=np.int64)


def _x_power(big: FieldSpec, k: int) -> int:
    return big.p**k


def frobenius_matrix(big: FieldSpec, i: int) -> np.ndarray:
    """Matrix over GF(p) of ``y -> y^(p^i)`` on GF(p^t)."""
    return np.array([big.digits(big.frobenius(_x_power(big, k), i % big.e)) for k in range(big.e)], dtype=np.int64)


def reduce_vectors(V: np.ndarray, big: FieldSpec) -> np.ndarray:
    """GF(p^t)^m vectors as GF(p)^(mt) vectors (coefficient blocks, constant term first)."""
    V = np.asarray(V, dtype=np.int64)
    t, p = big.e, big.p
    digits = (V[..., None] // (p ** np.arange(t))) % p
    return digits.reshape(*V.shape[:-1], V.shape[-1] * t)


def reduce_map(g: SemilinearMap, small: FieldSpec) -> SemilinearMap:
    big = g.field
    if big.p != small.q or small.e != 1:
        raise ValueError(f"field reduction maps GF(p^t) onto its prime field, not {small}")
    m, t = g.v, big.e
    M = np.zeros((m * t, m * t), dtype=np.int64)
    mult = {}
    for i in range(m):
        for j in range(m):
            a = int(g.A.entries[i, j])
            if a not in mult:
                mult[a] = multiplication_matrix(a, big)
            M[i * t : (i + 1) * t, j * t : (j + 1) * t] = mult[a]
    if g.f:
        Fr = np.kron(np.eye(m, dtype=np.int64), frobenius_matrix(big, g.f))
        M = matmul(Fr, M, small)
    return SemilinearMap(M, 0, small)


def field_reduction(group: GroupSpec, small: FieldSpec) -> GroupSpec:
    """Express a group over GF(p^t) in dimension m as a linear group over GF(p) in dimension mt."""
    gens = tuple(reduce_map(g, small) for g in group.generators)
    return GroupSpec(f"{group.name}->GF({small.q})^{group.v * group.field.e}", gens, small, group.v * group.field.e)


def gens_gammal(v: int, field: FieldSpec) -> GroupSpec:
    gl = gens_gl(v, field)
    gens = gl.generators + ((frobenius_map(v, field, 1),) if field.e > 1 else ())
    return GroupSpec(f"GammaL({v},{field.q})", gens, field, v)


def spread_stabilizer(v: int, field: FieldSpec, t: int) -> GroupSpec:
    """GammaL(v/t, q^t) acting on GF(q)^v by field reduction.

    It stabilizes the Desarguesian spread of ``t``-subspaces setwise.
    """
    if field.e != 1:
        raise ValueError("spread stabilizers are built over prime fields")
    if t < 1 or v % t:
        raise ValueError(f"t={t} must divide v={v}")
    big = make_field(field.p, t)
    G = field_reduction(gens_gammal(v // t, big), field)
    return GroupSpec(f"spread-stab({v},{field.q},t={t})", G.generators, field, v)


# enumeration ----------------------------------------------------------------

def pgammal_order(v: int, field: FieldSpec) -> int:
    q = field.q
    gl = 1
    for i in range(v):
        gl *= q**v - q**i
    return gl // (q - 1) * field.e


def enumerate_pgammal(v: int, field: FieldSpec, bound: int = MAX_GROUP_ORDER) -> Iterator[SemilinearMap]:
    """One representative per element of PGammaL(v, q).

    Invertible matrices come in lexicographic row order with the first row
    scaled to start with 1, crossed with every Frobenius exponent.
    """
    total = pgammal_order(v, field)
    if total > bound:
        raise BoundExceeded(f"|PGammaL({v},{field.q})| = {total} exceeds bound {bound}")
    q = field.q
    allvecs = np.array(list(itertools.product(range(q), repeat=v)), dtype=np.int64)[1:]
    first = allvecs[allvecs[np.arange(len(allvecs)), (allvecs != 0).argmax(axis=1)] == 1]

    def rows_after(prefix: list[np.ndarray]) -> Iterator[list[np.ndarray]]:
        if len(prefix) == v:
            yield prefix
            return
        cands = first if not prefix else allvecs
        R = rref_array(np.array(prefix), field) if prefix else None
        for row in cands:
            if R is not None and rref_array(np.vstack([R, row]), field).shape[0] == len(prefix):
                continue
            yield from rows_after(prefix + [row])

    for rows in rows_after([]):
        A = np.array(rows, dtype=np.int64)
        for f in range(field.e):
            yield SemilinearMap._trusted(A, f, field)


def read_group_name(name: str, v: int, field: FieldSpec, t: int | None = None) -> GroupSpec:
    """Built-in group by CLI name: gl, sl, sp, singer, spread-stab, pgammal."""
    if name == "gl":
        return gens_gl(v, field)
    if name == "sl":
        return gens_sl(v, field)
    if name == "sp":
        return gens_sp(v, field)
    if name == "singer":
        return GroupSpec(f"Singer({v},{field.q})", (singer_generator(v, field),), field, v)
    if name == "pgammal":
        return GroupSpec(f"PGammaL({v},{field.q})", gens_gammal(v, field).generators, field, v)
    if name.startswith("spread-stab"):
        if "(" in name:
            t = int(name[name.index("(") + 1 : name.index(")")])
        if t is None:
            raise ValueError("spread-stab needs t")
        return spread_stabilizer(v, field, t)
    raise ValueError(f"unknown group name {name!r}")


BUILTIN_GROUPS = ("gl", "sl", "sp", "singer", "spread-stab(t)", "pgammal")

