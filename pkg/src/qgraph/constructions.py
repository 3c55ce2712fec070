"""Transitive designs and q-ary graphs built from group actions.

The central routine is :func:`theorem3_graph`: given a group ``G`` transitive
on the points of PG(v-1, q) and a subspace ``Delta`` through the base point
``alpha`` that is invariant under the stabilizer ``P = G_alpha``, the images
``Delta g`` are the neighborhoods of a regular q-ary graph, provided the
adjacency they define is symmetric.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .fieldcore import FieldSpec, make_field
from .permgroup import (
    OrbitData,
    Perm,
    StabChain,
    all_orbits,
    group_order,
    orbit,
    schreier_sims,
    set_orbit,
    stabilizer_gens,
)
from .projective import PointTable, build_point_table
from .semilinear import (
    GroupSpec,
    SemilinearMap,
    reduce_vectors,
    symplectic_gram,
    to_permutation,
)
from .structures import ConstructionReport, QaryGraph, Spread, SubspaceDesign
from .subspaces import Subspace, matmul, orthogonal_complement, q_number, span_codes, subspace_span

log = logging.getLogger(__name__)

ALPHA = 0


class ConstructionError(Exception):
    """A construction's hypotheses fail; ``witness`` pins down where."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class NotTransitive(ConstructionError):
    pass


class NotInvariant(ConstructionError):
    pass


class NotASubspace(ConstructionError):
    pass


class SymmetryViolation(ConstructionError):
    pass


class DegenerateDesign(ConstructionError):
    pass


@dataclass
class ClassicalDesign:
    n: int
    blocks: list[tuple[int, ...]]
    k: int
    lam: int

    @property
    def params(self) -> str:
        return f"1-({self.n},{self.k},{self.lam})"


class GroupAction:
    """A :class:`GroupSpec` together with its permutation action on points."""

    def __init__(self, group: GroupSpec, table: PointTable | None = None):
        self.group = group
        self.table = table or build_point_table(group.v, group.field)
        self.perms = group.permutations(self.table)

    @property
    def n(self) -> int:
        return len(self.table)

    @cached_property
    def chain(self) -> StabChain:
        return schreier_sims(self.perms, self.n, base=[ALPHA])

    @property
    def order(self) -> int:
        return self.chain.order()

    @cached_property
    def base_orbit(self) -> OrbitData:
        return orbit(self.perms, ALPHA)

    def is_transitive(self) -> bool:
        return len(self.base_orbit) == self.n

    @cached_property
    def point_stabilizer(self) -> list[Perm]:
        return stabilizer_gens(self.perms, ALPHA)

    @cached_property
    def stabilizer_orbits(self) -> list[list[int]]:
        return all_orbits(self.point_stabilizer, self.n)

    def transversal(self) -> tuple[list[SemilinearMap], list[Perm]]:
        """Semilinear and permutation transversals ``u_b`` with ``alpha u_b = b``."""
        od = self.base_orbit
        gens = self.group.generators
        maps: dict[int, SemilinearMap] = {ALPHA: self.group.identity()}
        perms: dict[int, Perm] = {ALPHA: Perm.identity(self.n)}
        for b in od.orbit[1:]:
            gi, a = od.parent[b]
            maps[b] = maps[a] * gens[gi]
            perms[b] = perms[a] * self.perms[gi]
        order = sorted(maps)
        return [maps[b] for b in order], [perms[b] for b in order]


def _require_transitive(act: GroupAction) -> None:
    if not act.is_transitive():
        raise NotTransitive(
            f"{act.group.name} has an orbit of size {len(act.base_orbit)} on {act.n} points",
            witness=len(act.base_orbit),
        )


def _union_of_orbits(orbits: Sequence[Sequence[int]], reps: Iterable[int]) -> tuple[int, ...]:
    where = {x: i for i, o in enumerate(orbits) for x in o}
    chosen = {where[r] for r in reps}
    return tuple(sorted(x for i in chosen for x in orbits[i]))


def _span_of_points(points: Iterable[int], T: PointTable) -> Subspace:
    return span_codes((int(T.codes[i]) for i in points), T.v, T.field)


def _replication(blocks_pts: Sequence[Sequence[int]], n: int) -> np.ndarray:
    counts = np.zeros(n, dtype=np.int64)
    for pts in blocks_pts:
        counts[list(pts)] += 1
    return counts


# 1-designs from stabilizer orbits ------------------------------------------

def theorem1_design(gens: Sequence[Perm], alpha: int, orbit_reps: Sequence[int]) -> ClassicalDesign:
    """Classical 1-design whose blocks are the images of a union of point-stabilizer orbits.

    The group acts on one set (both roles coincide).  Replication is counted
    directly and compared with ``(|G_a| / |G_D|) * sum |a G_d|``.
    """
    n = gens[0].n
    if len(orbit(gens, alpha)) != n:
        raise NotTransitive("group is not transitive on the point set")
    P = stabilizer_gens(gens, alpha)
    orbits = all_orbits(P, n)
    where = {x: i for i, o in enumerate(orbits) for x in o}
    if len({where[r] for r in orbit_reps}) != len(orbit_reps):
        raise ValueError("orbit representatives must lie in distinct stabilizer orbits")
    delta = _union_of_orbits(orbits, orbit_reps)
    if len(delta) == n:
        raise DegenerateDesign(f"the union is the whole set: single block, design 1-({n},{n},1)")
    blocks = set_orbit(gens, delta)
    order = group_order(gens, n)
    stab_alpha = order // n
    stab_delta = order // len(blocks)
    orbit_sum = sum(len(orbit(stabilizer_gens(gens, d), alpha)) for d in orbit_reps)
    lam_formula = Fraction(stab_alpha, stab_delta) * orbit_sum
    counts = _replication(blocks, n)
    if len(set(counts.tolist())) != 1:
        raise ConstructionError("replication numbers are not constant", witness=counts.tolist())
    lam = int(counts[0])
    if lam != lam_formula:
        raise ConstructionError(f"counted lambda {lam} != formula {lam_formula}")
    if len(blocks) != Fraction(n * stab_alpha, stab_delta):
        raise ConstructionError("block count disagrees with m |G_a| / |G_D|")
    return ClassicalDesign(n, sorted(blocks), len(delta), lam)


# q-ary 1-designs from a transitive group -----------------------------------

def theorem2_design(
    group: GroupSpec,
    orbit_reps: Sequence[int] | None = None,
    delta: Subspace | None = None,
    P: Sequence[SemilinearMap] | None = None,
    action: GroupAction | None = None,
) -> tuple[SubspaceDesign, ConstructionReport]:
    """Transitive q-ary 1-design with base block a P-invariant subspace.

    ``P`` defaults to the stabilizer of the base point; explicit generators
    select any subgroup.  ``Delta`` is either given directly or as the union
    of the P-orbits of ``orbit_reps``.
    """
    t0 = time.perf_counter()
    act = action or GroupAction(group)
    T = act.table
    _require_transitive(act)
    if P is None:
        p_perms = act.point_stabilizer
        p_name = "stabilizer of alpha"
    else:
        p_perms = [to_permutation(g, T) for g in P]
        p_name = f"<{len(p_perms)} given generators>"
    orbits = all_orbits(p_perms, act.n)
    if delta is not None:
        pts = T.points_of(delta)
        if _union_of_orbits(orbits, pts) != pts:
            raise NotInvariant("Delta is not a union of P-orbits", witness=pts)
        D = delta
    else:
        if not orbit_reps:
            raise ValueError("need orbit representatives or Delta")
        pts = _union_of_orbits(orbits, orbit_reps)
        D = _span_of_points(pts, T)
        span_pts = T.points_of(D)
        if span_pts != pts:
            gap = sorted(set(span_pts) - set(pts))
            raise NotASubspace(
                f"union of {len(pts)} points spans a {D.dim}-space with {len(span_pts)} points",
                witness=gap,
            )
    blocks_pts = set_orbit(act.perms, pts)
    blocks = sorted(_span_of_points(b, T) for b in blocks_pts)
    order = act.order
    stab = order // len(blocks_pts)
    q, v, k = T.field.q, T.v, D.dim
    lam_formula = Fraction(order * (q**k - 1), stab * (q**v - 1))
    counts = _replication(blocks_pts, act.n)
    if len(set(counts.tolist())) != 1 or counts[0] != lam_formula:
        raise ConstructionError(
            f"replication counts {sorted(set(counts.tolist()))} disagree with formula {lam_formula}"
        )
    lam = int(counts[0])
    design = SubspaceDesign(v, T.field, tuple(blocks), 1, k, lam)
    report = ConstructionReport(
        "theorem2",
        group=act.group.name,
        group_order=order,
        stabilizer_order=stab,
        delta_dim=k,
        block_count=len(blocks),
        params=design.params,
        trivial=k in (0, v),
        elapsed=time.perf_counter() - t0,
        notes=[f"P = {p_name}", f"lambda formula = {lam_formula}"],
    )
    return design, report


# invariant subspaces ---------------------------------------------------------

def invariant_subspaces(orbits: Sequence[Sequence[int]], alpha: int, table: PointTable) -> list[Subspace]:
    """All subspaces through ``alpha`` whose point sets are unions of the given orbits."""
    where = {x: i for i, o in enumerate(orbits) for x in o}

    def close(ids: frozenset[int]) -> tuple[frozenset[int], Subspace]:
        while True:
            S = _span_of_points((x for i in ids for x in orbits[i]), table)
            grown = frozenset(where[x] for x in table.points_of(S))
            if grown == ids:
                return ids, S
            ids = grown

    start, S0 = close(frozenset([where[alpha]]))
    found = {start: S0}
    queue = [start]
    while queue:
        ids = queue.pop()
        for j in range(len(orbits)):
            if j in ids:
                continue
            nxt, S = close(ids | {j})
            if nxt not in found:
                found[nxt] = S
                queue.append(nxt)
    return sorted(found.values(), key=lambda S: (S.dim, S.rows))


# regular graphs from a transitive group ------------------------------------

def theorem3_graph(
    group: GroupSpec,
    delta: Subspace,
    action: GroupAction | None = None,
) -> tuple[QaryGraph, ConstructionReport]:
    """Regular q-ary graph with neighborhoods ``N(alpha g) = Delta g``."""
    t0 = time.perf_counter()
    act = action or GroupAction(group)
    T = act.table
    n = act.n
    _require_transitive(act)
    pts = T.points_of(delta)
    if ALPHA not in pts:
        raise ConstructionError("Delta must contain the base point", witness=ALPHA)
    pset = np.zeros(n, dtype=bool)
    pset[list(pts)] = True
    for p in act.point_stabilizer:
        if not pset[p.images[list(pts)]].all():
            bad = next(x for x in pts if not pset[p.images[x]])
            raise NotInvariant("Delta is not invariant under the point stabilizer", witness=(bad, int(p.images[bad])))

    maps, uperms = act.transversal()
    nbr = []
    for b, (u, pu) in enumerate(zip(maps, uperms)):
        assert pu.images[ALPHA] == b
        nbr.append(u.apply_subspace(delta))
    graph = QaryGraph(T, tuple(nbr), name=f"theorem3[{group.name}]")

    M = graph.membership
    asym = np.argwhere(M != M.T)
    # Set form of the symmetry condition: {b : alpha u_b^-1 in Delta} = Delta.
    back = np.array([int(np.flatnonzero(pu.images == ALPHA)[0]) for pu in uperms])
    set_form = tuple(np.flatnonzero(pset[back]).tolist())
    set_ok = set_form == tuple(pts)
    pair_ok = asym.size == 0
    notes = []
    if set_ok != pair_ok:
        msg = f"symmetry forms disagree: set form {set_ok}, pairwise form {pair_ok}"
        log.warning(msg)
        notes.append(msg)
    if not pair_ok:
        x, y = (int(c) for c in asym[0])
        raise SymmetryViolation(
            f"point {y} lies in N({x}) but {x} is not in N({y})" if M[x, y] else
            f"point {x} lies in N({y}) but {y} is not in N({x})",
            witness=(x, y),
        )
    distinct = len(set(nbr))
    stab = act.order // len(set_orbit(act.perms, pts))
    k = delta.dim - 1
    q = T.field.q
    report = ConstructionReport(
        "theorem3",
        group=group.name,
        group_order=act.order,
        stabilizer_order=stab,
        delta_dim=delta.dim,
        block_count=distinct,
        params=f"{k}-regular; neighborhood design 1-({T.v},{k + 1},{q_number(k + 1, q)};{q})",
        trivial=delta.dim in (1, T.v),
        elapsed=time.perf_counter() - t0,
        notes=notes,
    )
    return graph, report


def corollary1_roundtrip(graph: QaryGraph, group: GroupSpec) -> QaryGraph:
    """Rebuild ``graph`` from its base-point neighborhood under ``group``."""
    act = GroupAction(group, graph.table)
    rebuilt, _ = theorem3_graph(group, graph.nbr[ALPHA], action=act)
    return rebuilt


# examples -------------------------------------------------------------------

def complete_graph(v: int, field: FieldSpec) -> QaryGraph:
    T = build_point_table(v, field)
    return QaryGraph(T, (Subspace.full(v, field),) * len(T), name=f"complete({v},{field.q})")


def empty_graph(v: int, field: FieldSpec) -> QaryGraph:
    T = build_point_table(v, field)
    return QaryGraph(T, tuple(T.point_subspace(i) for i in range(len(T))), name=f"empty({v},{field.q})")


def symplectic_graph(v: int, field: FieldSpec) -> QaryGraph:
    """``N(x) = x^perp`` for the hyperbolic-pairs alternating form."""
    if v % 2:
        raise ValueError(f"symplectic graphs need even v, got {v}")
    T = build_point_table(v, field)
    W = matmul(T.reps, symplectic_gram(v, field), field)
    nbr = tuple(orthogonal_complement(subspace_span(w, v, field)) for w in W)
    return QaryGraph(T, nbr, name=f"symplectic({v},{field.q})")


def desarguesian_spread(v: int, field: FieldSpec, t: int) -> Spread:
    """Points of PG(v/t - 1, q^t) read as ``t``-subspaces of GF(q)^v."""
    if field.e != 1:
        raise ValueError("Desarguesian spreads are built over prime fields")
    if t < 2 or v % t:
        raise ValueError(f"need t >= 2 dividing v, got t={t}, v={v}")
    big = make_field(field.p, t)
    m = v // t
    Tb = build_point_table(m, big)
    xs = np.array([big.p**k for k in range(t)], dtype=np.int64)
    elements, coords = [], []
    for r in Tb.reps:
        Phi = reduce_vectors(big.vmul(xs[:, None], r[None, :]), big)
        Phi.flags.writeable = False
        coords.append(Phi)
        elements.append(subspace_span(Phi, v, field))
    S = Spread(v, field, t, tuple(elements), tuple(coords))
    _check_partition(S)
    return S


def _check_partition(S: Spread) -> None:
    T = build_point_table(S.v, S.field)
    seen = 0
    for E in S.elements:
        b = T.bits_of(E)
        if seen & b:
            raise ConstructionError("spread elements overlap", witness=E)
        seen |= b
    if seen != (1 << len(T)) - 1:
        raise ConstructionError("spread elements do not cover every point")


def spread_graph(S: Spread) -> QaryGraph:
    """``N(x)`` is the spread element through ``x``."""
    T = build_point_table(S.v, S.field)
    nbr: list[Subspace | None] = [None] * len(T)
    for E in S.elements:
        for x in T.points_of(E):
            nbr[x] = E
    return QaryGraph(T, tuple(nbr), name=f"spread({S.v},{S.field.q},t={S.t})")


def quasi_srg_union(S: Spread, template: QaryGraph) -> QaryGraph:
    """Copy ``template`` (a graph on GF(q)^t) into every spread element."""
    from .analysis import classify

    if template.v != S.t or template.field != S.field:
        raise ValueError(f"template lives in GF({template.q})^{template.v}, spread needs GF({S.field.q})^{S.t}")
    if S.coords is None:
        raise ValueError("spread has no coordinate maps")
    c = classify(template)
    if len(c.a_values) > 1 or len(c.c_values) > 1:
        raise ConstructionError(f"template is not strongly regular: {c.report()}")
    T = build_point_table(S.v, S.field)
    Tt = template.table
    nbr: list[Subspace | None] = [None] * len(T)
    for Phi in S.coords:
        images = T.indices_of_vectors(matmul(Tt.reps, Phi, S.field))
        for j, x in enumerate(images.tolist()):
            N = template.nbr[j]
            nbr[x] = subspace_span(matmul(N.array, Phi, S.field), S.v, S.field) if N.dim else Subspace.zero(S.v, S.field)
    return QaryGraph(T, tuple(nbr), name=f"qsru({S.v},{S.field.q},t={S.t})<{template.name}>")


def neighborhood_design(graph: QaryGraph) -> SubspaceDesign:
    """All neighborhoods as a multiset: a ``1-(v, k+1, [k+1]_q; q)`` design."""
    k = graph.k
    if k is None:
        raise ValueError(f"graph is not regular: neighborhood dimensions {sorted(graph.dims)}")
    lam = q_number(k + 1, graph.q)
    counts = _replication([graph.table.points_of(N) for N in graph.nbr], graph.n)
    if not (counts == lam).all():
        x = int(np.flatnonzero(counts != lam)[0])
        raise ConstructionError(f"point {x} lies in {counts[x]} neighborhoods, expected {lam}", witness=x)
    return SubspaceDesign(graph.v, graph.field, tuple(sorted(graph.nbr)), 1, k + 1, lam)


def spread_element_through(S: Spread, x: int) -> Subspace:
    T = build_point_table(S.v, S.field)
    return next(E for E in S.elements if x in T.points_of(E))
