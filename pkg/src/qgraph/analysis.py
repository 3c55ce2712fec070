"""Regularity, (quasi-)strong regularity, designs and automorphisms of q-ary graphs."""

from __future__ import annotations

import itertools
import logging
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .config import MAX_GROUP_ORDER, BoundExceeded
from .fieldcore import FieldSpec
from .projective import build_point_table
from .semilinear import SemilinearMap, enumerate_pgammal, pgammal_order, to_permutation
from .structures import QaryGraph, Spread, SubspaceDesign
from .subspaces import (
    Subspace,
    enumerate_k_subspaces,
    intersect,
    matmul,
    orthogonal_complement,
    q_number,
    subspace_span,
)

log = logging.getLogger(__name__)


class NotRegular(ValueError):
    """Raised by :func:`check_regular`; ``witness`` is a point or a point pair."""

    def __init__(self, message: str, witness):
        super().__init__(message)
        self.witness = witness


# regularity -----------------------------------------------------------------

def check_regular(graph: QaryGraph) -> int:
    """Return ``k`` with every ``N(x)`` of dimension ``k + 1``, or raise with a witness."""
    M = graph.membership
    diag = np.flatnonzero(~M.diagonal())
    if diag.size:
        x = int(diag[0])
        raise NotRegular(f"point {x} is not in its own neighborhood", witness=x)
    asym = np.argwhere(M != M.T)
    if asym.size:
        x, y = (int(c) for c in asym[0])
        if not M[x, y]:
            x, y = y, x
        raise NotRegular(f"{y} in N({x}) but {x} not in N({y})", witness=(x, y))
    d0 = graph.nbr[0].dim
    for x, S in enumerate(graph.nbr):
        if S.dim != d0:
            raise NotRegular(f"dim N({x}) = {S.dim} but dim N(0) = {d0}", witness=x)
    return d0 - 1


# classification --------------------------------------------------------------

@dataclass
class Classification:
    v: int
    q: int
    k: int
    a_values: list[int]
    c_values: list[int]
    adjacent_pairs: int = 0

    @property
    def uniform(self) -> bool:
        """Common-neighbor count of adjacent pairs is constant (vacuous without edges)."""
        return len(self.a_values) <= 1

    @property
    def a(self) -> int | None:
        return self.a_values[0] if len(self.a_values) == 1 else None

    @property
    def grade(self) -> int | str:
        return len(self.c_values) if self.uniform else "not quasi-SRG-uniform"

    @property
    def srg(self) -> bool:
        return self.uniform and len(self.c_values) <= 1

    @property
    def params(self) -> tuple[int, ...]:
        a = [] if self.a is None else [self.a]
        return (self.v, self.k, *a, *self.c_values)

    def params_str(self) -> str:
        return "(" + ",".join(map(str, self.params)) + f";{self.q})"

    def report(self) -> str:
        a = self.a if self.uniform and self.a is not None else ("-" if self.uniform else "non-constant")
        c = "[" + ",".join(map(str, self.c_values)) + "]"
        return (
            f"regular k={self.k}; grade={self.grade}; a={a}; c={c}; "
            f"srg={str(self.srg).lower()}; params={self.params_str()}"
        )


def _distinct_neighborhoods(graph: QaryGraph) -> tuple[list[Subspace], np.ndarray]:
    ids: dict[Subspace, int] = {}
    idx = np.array([ids.setdefault(S, len(ids)) for S in graph.nbr], dtype=np.int64)
    return list(ids), idx


def intersection_dims(graph: QaryGraph) -> np.ndarray:
    """``D[x, y] = dim(N(x) & N(y))`` via one subspace intersection per pair of distinct neighborhoods."""
    uniq, idx = _distinct_neighborhoods(graph)
    m = len(uniq)
    D = np.zeros((m, m), dtype=np.int64)
    for i in range(m):
        D[i, i] = uniq[i].dim
        for j in range(i + 1, m):
            D[i, j] = D[j, i] = intersect(uniq[i], uniq[j]).dim
    return D[idx[:, None], idx[None, :]]


def common_neighbor_counts(graph: QaryGraph) -> np.ndarray:
    """``C[x, y] = |points(N(x) & N(y)) minus {x, y}|`` for ``x != y`` (diagonal unused)."""
    q = graph.q
    D = intersection_dims(graph)
    qn = np.array([q_number(d, q) for d in range(graph.v + 1)], dtype=np.int64)
    M = graph.membership
    # x lies in N(x) & N(y) iff x is in N(y); symmetric graphs drop both ends together.
    C = qn[D] - M.T.astype(np.int64) - M.astype(np.int64)
    # The same count on the classical shadow, from point-set intersections.
    Mi = M.astype(np.int64)
    shadow = Mi @ Mi.T
    if not np.array_equal(qn[D], shadow):
        x, y = (int(c) for c in np.argwhere(qn[D] != shadow)[0])
        raise AssertionError(f"subspace and point-set intersections disagree at ({x},{y})")
    return C


def classify(graph: QaryGraph) -> Classification:
    k = check_regular(graph)
    C = common_neighbor_counts(graph)
    M = graph.membership
    iu = np.triu_indices(graph.n, 1)
    adj = M[iu]
    vals = C[iu]
    a_values = sorted(set(vals[adj].tolist()), reverse=True)
    c_values = sorted(set(vals[~adj].tolist()), reverse=True)
    return Classification(graph.v, graph.q, k, a_values, c_values, int(adj.sum()))


# classical shadow ------------------------------------------------------------

@dataclass
class ClassicalGraph:
    n: int
    adjacency: np.ndarray

    def __post_init__(self):
        A = self.adjacency
        assert A.shape == (self.n, self.n)
        assert np.array_equal(A, A.T), "adjacency not symmetric"
        assert not A.diagonal().any(), "loops present"

    @property
    def degrees(self) -> np.ndarray:
        return self.adjacency.sum(axis=1)

    def edge_count(self) -> int:
        return int(self.adjacency.sum()) // 2

    def components(self) -> list[list[int]]:
        parent = list(range(self.n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for x, y in np.argwhere(np.triu(self.adjacency, 1)).tolist():
            rx, ry = find(x), find(y)
            if rx != ry:
                parent[max(rx, ry)] = min(rx, ry)
        groups: dict[int, list[int]] = {}
        for x in range(self.n):
            groups.setdefault(find(x), []).append(x)
        return sorted(groups.values())

    def srg_parameters(self) -> tuple[int, int, int, int] | None:
        """``(n, k, lambda, mu)`` counted from ``A @ A``; None unless strongly regular."""
        A = self.adjacency.astype(np.int64)
        deg = set(A.sum(axis=1).tolist())
        if len(deg) != 1:
            return None
        A2 = A @ A
        off = ~np.eye(self.n, dtype=bool)
        lam = set(A2[(A == 1) & off].tolist())
        mu = set(A2[(A == 0) & off].tolist())
        if len(lam) > 1 or len(mu) > 1:
            return None
        return (self.n, deg.pop(), lam.pop() if lam else 0, mu.pop() if mu else 0)


def to_classical(graph: QaryGraph) -> ClassicalGraph:
    k = check_regular(graph)
    A = graph.membership.copy()
    np.fill_diagonal(A, False)
    expected = q_number(k + 1, graph.q) - 1
    deg = A.sum(axis=1)
    bad = np.flatnonzero(deg != expected)
    assert bad.size == 0, f"vertex {int(bad[0])} has degree {int(deg[bad[0]])}, expected {expected}"
    return ClassicalGraph(graph.n, A)


# designs ---------------------------------------------------------------------

@dataclass
class DesignCheck:
    t: int
    lam: int | None
    counts: Counter
    witness: Subspace | None = None
    witness_count: int | None = None
    simple: bool = True

    @property
    def ok(self) -> bool:
        return self.lam is not None


@lru_cache(maxsize=None)
def _local_subspaces(k: int, t: int, field: FieldSpec) -> tuple[np.ndarray, ...]:
    return tuple(S.array for S in enumerate_k_subspaces(k, t, field))


def subspaces_inside(B: Subspace, t: int) -> list[Subspace]:
    """Every ``t``-subspace of ``B``."""
    if t > B.dim:
        return []
    return [subspace_span(matmul(L, B.array, B.field), B.v, B.field) for L in _local_subspaces(B.dim, t, B.field)]


def _containment_counts(blocks, t: int) -> Counter:
    counts: Counter = Counter()
    per_block: dict[Subspace, list[Subspace]] = {}
    for B in blocks:
        if B not in per_block:
            per_block[B] = subspaces_inside(B, t)
        counts.update(per_block[B])
    return counts


def verify_design(D: SubspaceDesign, t: int = 1) -> DesignCheck:
    """Count, for every ``t``-subspace, the blocks containing it (with multiplicity)."""
    if t not in (1, 2):
        raise ValueError("verification supports t = 1 and t = 2")
    simple = D.is_simple()
    counts = _containment_counts(D.blocks, t)
    seen = set()
    for L in enumerate_k_subspaces(D.v, t, D.field):
        c = counts.get(L, 0)
        seen.add(c)
        if len(seen) > 1:
            return DesignCheck(t, None, counts, witness=L, witness_count=c, simple=simple)
    lam = seen.pop() if seen else 0
    return DesignCheck(t, lam, counts, simple=simple)


@dataclass
class GddCheck:
    lam: int | None
    holds: bool
    witness: Subspace | None = None
    reason: str = ""


def verify_gdd(S: Spread, blocks) -> GddCheck:
    """Each 2-subspace lies in one spread element or in ``lam >= 1`` blocks, never both."""
    in_spread = _containment_counts(S.elements, 2)
    in_blocks = _containment_counts(blocks, 2)
    lam = None
    for L in enumerate_k_subspaces(S.v, 2, S.field):
        s, b = in_spread.get(L, 0), in_blocks.get(L, 0)
        if s > 1:
            return GddCheck(None, False, L, f"in {s} spread elements")
        if s == 1:
            if b:
                return GddCheck(None, False, L, f"in a spread element and in {b} blocks")
            continue
        if b == 0:
            return GddCheck(None, False, L, "in no spread element and no block")
        if lam is None:
            lam = b
        elif b != lam:
            return GddCheck(None, False, L, f"in {b} blocks, others in {lam}")
    return GddCheck(lam, True)


# automorphisms ---------------------------------------------------------------

def automorphism_witness(g: SemilinearMap, graph: QaryGraph) -> int | None:
    """First point ``x`` with ``N(x g) != N(x) g``, or None."""
    perm = to_permutation(g, graph.table).images
    for x, S in enumerate(graph.nbr):
        if g.apply_subspace(S) != graph.nbr[perm[x]]:
            return x
    return None


def is_automorphism(g: SemilinearMap, graph: QaryGraph) -> bool:
    return automorphism_witness(g, graph) is None


@lru_cache(maxsize=8)
def pgammal_permutations(v: int, field: FieldSpec, bound: int = MAX_GROUP_ORDER) -> np.ndarray:
    """Point permutations of every element of PGammaL(v, q), one row each."""
    T = build_point_table(v, field)
    rows = [to_permutation(g, T).images for g in enumerate_pgammal(v, field, bound)]
    P = np.array(rows, dtype=np.int64)
    P.flags.writeable = False
    return P


def automorphism_mask(graph: QaryGraph, perms: np.ndarray, chunk: int = 4096) -> np.ndarray:
    """Which rows of ``perms`` preserve the neighborhood relation.

    ``N(x) g`` and ``N(x g)`` are subspaces, so they agree exactly when their
    point sets do: ``M[x, y] == M[x g, y g]`` for all ``x, y``.
    """
    M = graph.membership
    out = np.empty(len(perms), dtype=bool)
    for s in range(0, len(perms), chunk):
        P = perms[s : s + chunk]
        out[s : s + chunk] = (M[P[:, :, None], P[:, None, :]] == M).all(axis=(1, 2))
    return out


@dataclass
class AutomorphismSummary:
    count: int
    group_order: int
    orbit_of_base: int
    n: int

    @property
    def transitive(self) -> bool:
        return self.orbit_of_base == self.n

    @property
    def full(self) -> bool:
        return self.count == self.group_order


def automorphisms_in_pgammal(graph: QaryGraph, bound: int = MAX_GROUP_ORDER) -> AutomorphismSummary:
    P = pgammal_permutations(graph.v, graph.field, bound)
    mask = automorphism_mask(graph, P)
    # The filtered elements form a group, so the orbit of 0 is just its images.
    orbit_size = len(set(P[mask, 0].tolist()))
    return AutomorphismSummary(int(mask.sum()), len(P), orbit_size, graph.n)


def transitive_automorphisms_exist(graph: QaryGraph, bound: int = MAX_GROUP_ORDER) -> bool:
    return automorphisms_in_pgammal(graph, bound).transitive


# exhaustive tiny-case search -------------------------------------------------

REQUIRED_TIER = {(3, 2)}
LONG_RUNNING_TIER = {(4, 2), (3, 3), (3, 4)}


def _subspace_bits(v: int, d: int, field: FieldSpec) -> list[tuple[int, Subspace]]:
    T = build_point_table(v, field)
    return [(T.bits_of(S), S) for S in enumerate_k_subspaces(v, d, field)]


def enumerate_regular_graphs(v: int, field: FieldSpec, k: int) -> list[QaryGraph]:
    """All ``k``-regular q-ary graphs on PG(v-1, q), by backtracking.

    Choosing ``N(x)`` forces ``x`` into ``N(y)`` for each ``y`` in it and out of
    ``N(y)`` for the rest; the point with the fewest surviving candidates is
    branched on next.
    """
    T = build_point_table(v, field)
    n = len(T)
    subs = _subspace_bits(v, k + 1, field)
    cands = [[i for i, (b, _) in enumerate(subs) if b >> x & 1] for x in range(n)]
    bits = [b for b, _ in subs]
    results: list[tuple[int, ...]] = []

    def viable(x: int, must_in: list[int], must_out: list[int]) -> list[int]:
        mi, mo = must_in[x], must_out[x]
        return [c for c in cands[x] if bits[c] & mi == mi and not bits[c] & mo]

    def search(choice: list[int | None], must_in: list[int], must_out: list[int]) -> None:
        best, best_opts = None, None
        for x in range(n):
            if choice[x] is not None:
                continue
            opts = viable(x, must_in, must_out)
            if not opts:
                return
            if best_opts is None or len(opts) < len(best_opts):
                best, best_opts = x, opts
                if len(opts) == 1:
                    break
        if best is None:
            results.append(tuple(choice))
            return
        xb = 1 << best
        for c in best_opts:
            b = bits[c]
            mi, mo = must_in[:], must_out[:]
            ok = True
            for y in range(n):
                if y == best:
                    continue
                if b >> y & 1:
                    mi[y] |= xb
                else:
                    mo[y] |= xb
                if choice[y] is not None and (bits[choice[y]] & xb) != (mi[y] & xb):
                    ok = False
                    break
            if ok:
                ch = choice[:]
                ch[best] = c
                search(ch, mi, mo)

    search([None] * n, [1 << x for x in range(n)], [0] * n)
    results.sort()
    return [QaryGraph(T, tuple(subs[c][1] for c in r), name=f"regular({v},{field.q},k={k})#{i}") for i, r in enumerate(results)]


def _alternating_forms(v: int, field: FieldSpec):
    """Nondegenerate alternating Gram matrices up to scalars (first nonzero entry 1)."""
    pos = [(i, j) for i in range(v) for j in range(i + 1, v)]
    for vals in itertools.product(range(field.q), repeat=len(pos)):
        nz = [x for x in vals if x]
        if not nz or nz[0] != 1:
            continue
        J = np.zeros((v, v), dtype=np.int64)
        for (i, j), a in zip(pos, vals):
            J[i, j] = a
            J[j, i] = field.neg_table[a]
        if subspace_span(J, v, field).dim == v:
            yield J


@lru_cache(maxsize=None)
def _polarity_graphs(v: int, field: FieldSpec) -> frozenset[tuple[Subspace, ...]]:
    if v % 2:
        return frozenset()
    T = build_point_table(v, field)
    out = set()
    for J in _alternating_forms(v, field):
        W = matmul(T.reps, J, field)
        out.add(tuple(orthogonal_complement(subspace_span(w, v, field)) for w in W))
    return frozenset(out)


def catalog_label(graph: QaryGraph) -> str:
    """Name a regular graph as empty, complete, spread, symplectic or other."""
    k = graph.k
    if k == 0:
        return "empty"
    if k == graph.v - 1:
        return "complete"
    T = graph.table
    if all(graph.nbr[y] == N for x, N in enumerate(graph.nbr) for y in T.points_of(N)):
        return f"spread(t={k + 1})"
    if graph.nbr in _polarity_graphs(graph.v, graph.field):
        return "symplectic"
    return "other"


@dataclass
class TierResult:
    k: int
    regular_count: int
    survivors: list[QaryGraph]
    full_group: list[QaryGraph]
    labels: Counter


@dataclass
class ExhaustiveResult:
    v: int
    q: int
    tiers: list[TierResult] = field(default_factory=list)

    @property
    def survivors(self) -> list[QaryGraph]:
        return [g for t in self.tiers for g in t.survivors]

    @property
    def nontrivial(self) -> list[QaryGraph]:
        return [g for g in self.survivors if not g.is_trivial()]

    def lines(self) -> list[str]:
        out = [f"exhaustive classification v={self.v} q={self.q}"]
        for t in self.tiers:
            labels = ", ".join(f"{n} {lab}" for lab, n in sorted(t.labels.items())) or "none"
            out.append(
                f"k={t.k}: {t.regular_count} regular, {len(t.survivors)} with transitive automorphisms "
                f"({labels}); {len(t.full_group)} invariant under all of PGammaL"
            )
        out.append(f"nontrivial survivors: {len(self.nontrivial)}")
        return out


def _tier(v: int, field: FieldSpec, k: int) -> TierResult:
    graphs = enumerate_regular_graphs(v, field, k)
    P = pgammal_permutations(v, field)
    survivors, full = [], []
    for g in graphs:
        mask = automorphism_mask(g, P)
        if len(set(P[mask, 0].tolist())) == g.n:
            survivors.append(g)
            if mask.all():
                full.append(g)
    labels = Counter(catalog_label(g) for g in survivors)
    log.info("v=%d q=%d k=%d: %d regular, %d survive", v, field.q, k, len(graphs), len(survivors))
    return TierResult(k, len(graphs), survivors, full, labels)


def classify_all_transitive_regular(
    v: int, field: FieldSpec, long_running: bool = False, threads: int = 1
) -> ExhaustiveResult:
    """Every regular q-ary graph on PG(v-1, q) admitting a point-transitive subgroup of PGammaL.

    Only (3, 2) runs by default; larger spaces need ``long_running``.
    """
    key = (v, field.q)
    if key not in REQUIRED_TIER and not long_running:
        raise BoundExceeded(f"(v,q)={key} is in the long-running tier; pass long_running=True")
    if pgammal_order(v, field) > MAX_GROUP_ORDER:
        raise BoundExceeded(f"|PGammaL({v},{field.q})| exceeds {MAX_GROUP_ORDER}")
    ks = list(range(v))
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            tiers = list(pool.map(_tier, [v] * len(ks), [field] * len(ks), ks))
    else:
        tiers = [_tier(v, field, k) for k in ks]
    return ExhaustiveResult(v, field.q, tiers)


__all__ = [
    "NotRegular",
    "Classification",
    "ClassicalGraph",
    "DesignCheck",
    "GddCheck",
    "check_regular",
    "classify",
    "to_classical",
    "verify_design",
    "verify_gdd",
    "is_automorphism",
    "automorphism_witness",
    "transitive_automorphisms_exist",
    "classify_all_transitive_regular",
]
