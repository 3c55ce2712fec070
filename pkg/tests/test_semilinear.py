from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qgraph.config import BoundExceeded
from qgraph.constructions import desarguesian_spread
from qgraph.fieldcore import field_of_order, make_field
from qgraph.permgroup import Perm, group_order, is_transitive
from qgraph.projective import build_point_table
from qgraph.semilinear import (
    GroupSpec,
    SemilinearMap,
    act_on_point,
    compose,
    enumerate_pgammal,
    field_reduction,
    frobenius_map,
    gens_gammal,
    gens_gl,
    gens_sl,
    gens_sp,
    identity,
    inverse,
    pgammal_order,
    preserves_form,
    proj_equal,
    read_group_name,
    reduce_map,
    reduce_vectors,
    singer_generator,
    spread_stabilizer,
    symplectic_form,
    symplectic_gram,
    to_permutation,
)
from qgraph.subspaces import subspace_span

F2, F3, F4 = make_field(2), make_field(3), make_field(2, 2)


def random_map(data, v: int, F) -> SemilinearMap:
    """Uniform invertible matrix by rejection, seeded from hypothesis."""
    rng = np.random.default_rng(data.draw(st.integers(0, 2**32 - 1)))
    f = data.draw(st.integers(0, F.e - 1))
    while True:
        try:
            return SemilinearMap(rng.integers(0, F.q, size=(v, v)), f, F)
        except ValueError:
            continue


def naive_apply(g: SemilinearMap, x) -> list[int]:
    """x -> x^(sigma^f) A computed entry by entry."""
    F = g.field
    xs = [F.frobenius(int(c), g.f) for c in x]
    out = []
    for j in range(g.v):
        s = 0
        for i in range(g.v):
            s = F.add(s, F.mul(xs[i], int(g.A.entries[i, j])))
        out.append(s)
    return out


def test_singular_rejected():
    with pytest.raises(ValueError):
        SemilinearMap([[1, 1], [1, 1]], 0, F2)


@pytest.mark.parametrize("F,v", [(F4, 2), (F4, 3), (make_field(3, 2), 2), (F3, 3)])
@settings(max_examples=25, deadline=None)
@given(data=st.data())
def test_group_laws(F, v, data):
    g, h, k = (random_map(data, v, F) for _ in range(3))
    assert (g * h) * k == g * (h * k)
    assert proj_equal(g * inverse(g), identity(v, F))
    assert proj_equal(compose(g, g.inverse()), g.one())
    x = data.draw(st.lists(st.integers(0, F.q - 1), min_size=v, max_size=v))
    gx = naive_apply(g, x)
    assert g.apply(np.array([x]))[0].tolist() == gx
    assert (g * h).apply(np.array([x]))[0].tolist() == naive_apply(h, gx)
    assert (g**3) == g * g * g
    assert (g**-1) == g.inverse()


def test_scalar_is_projective_identity():
    assert proj_equal(SemilinearMap(np.eye(3, dtype=np.int64) * 2, 0, F3), identity(3, F3))
    assert not proj_equal(frobenius_map(2, F4), identity(2, F4))


@pytest.mark.parametrize("F,v", [(F4, 3), (F3, 3), (F2, 4)])
@settings(max_examples=15, deadline=None)
@given(data=st.data())
def test_action_is_a_homomorphism(F, v, data):
    T = build_point_table(v, F)
    g, h = random_map(data, v, F), random_map(data, v, F)
    pg, ph = to_permutation(g, T), to_permutation(h, T)
    assert to_permutation(g * h, T) == pg * ph
    assert to_permutation(g.inverse(), T) == pg.inverse()
    i = data.draw(st.integers(0, len(T) - 1))
    assert act_on_point(g * h, i, T) == act_on_point(h, act_on_point(g, i, T), T)
    assert act_on_point(g, act_on_point(g.inverse(), i, T), T) == i
    assert act_on_point(identity(v, F), i, T) == i


def test_faithful_on_points_exhaustive_3_2():
    T = build_point_table(3, F2)
    elems = list(enumerate_pgammal(3, F2))
    perms = [to_permutation(g, T) for g in elems]
    assert len(set(perms)) == len(elems) == 168
    for a in range(0, 168, 7):
        for b in range(168):
            assert proj_equal(elems[a], elems[b]) == (perms[a] == perms[b])


@pytest.mark.parametrize("v,q,n", [(3, 2, 168), (4, 2, 20160), (3, 4, 120960)])
def test_pgammal_enumeration_counts(v, q, n):
    F = field_of_order(q)
    assert pgammal_order(v, F) == n
    if n <= 20160:
        assert sum(1 for _ in enumerate_pgammal(v, F)) == n
    with pytest.raises(BoundExceeded):
        next(enumerate_pgammal(v, F, bound=n - 1))


def test_pgammal_3_4_distinct_points_sample():
    T = build_point_table(3, F4)
    seen = set()
    for i, g in enumerate(enumerate_pgammal(3, F4)):
        if i % 97 == 0:
            seen.add(to_permutation(g, T))
    assert len(seen) == len(range(0, 120960, 97))


def orders(G: GroupSpec) -> int:
    T = build_point_table(G.v, G.field)
    return group_order(G.permutations(T), len(T))


def test_linear_group_orders():
    assert orders(gens_gl(3, F2)) == 168
    assert orders(gens_gl(2, F2)) == 6 == orders(gens_sl(2, F2))
    assert orders(gens_sl(3, F4)) == 20160
    assert orders(gens_gl(3, F3)) == 5616
    assert orders(gens_gl(4, F2)) == 20160


def test_symplectic_group_orders():
    assert orders(gens_sp(4, F2)) == 720
    assert orders(gens_sp(2, F2)) == 6
    assert orders(gens_sp(4, F3)) == 25920
    assert orders(gens_sp(6, F2)) == 1451520
    assert orders(gens_sp(4, F4)) == 979200
    with pytest.raises(ValueError):
        gens_sp(3, F2)


@pytest.mark.parametrize("v,F", [(4, F2), (4, F3), (6, F2), (4, F4)])
def test_symplectic_generators_preserve_form(v, F):
    G = gens_sp(v, F)
    J = symplectic_gram(v, F)
    assert np.array_equal(J.T, F.vmul(J, F.neg(1)))
    e = np.eye(v, dtype=np.int64)
    for g in G.generators:
        assert preserves_form(g.A.entries, F)
        for i in range(v):
            for j in range(v):
                gi, gj = g.apply(e[i : i + 1])[0], g.apply(e[j : j + 1])[0]
                assert symplectic_form(gi, gj, F) == int(J[i, j])


@pytest.mark.parametrize("v,F,cycle", [(3, F2, 7), (4, F2, 15), (3, F3, 13), (2, F4, 5)])
def test_singer_cycles(v, F, cycle):
    T = build_point_table(v, F)
    p = to_permutation(singer_generator(v, F), T)
    assert p.order() == cycle == len(T)
    assert (p**cycle).is_identity()
    assert is_transitive([p], len(T))


def test_frobenius_map():
    assert frobenius_map(3, F2, 0) == identity(3, F2)
    f = frobenius_map(3, F4)
    assert f * f == identity(3, F4)
    T = build_point_table(3, F4)
    p = to_permutation(f, T)
    for i in range(len(T)):
        if all(c in (0, 1) for c in T.rep(i)):
            assert p(i) == i


def test_field_reduction_gammal_2_4():
    G = field_reduction(gens_gammal(2, F4), F2)
    T = build_point_table(4, F2)
    perms = G.permutations(T)
    assert is_transitive(perms, 15)
    assert group_order(perms, 15) == 360
    assert reduce_map(identity(2, F4), F2) == identity(4, F2)


def test_scalar_reduction_fixes_spread_elements():
    S = desarguesian_spread(4, F2, 2)
    x = SemilinearMap(np.eye(2, dtype=np.int64) * 2, 0, F4)
    g = reduce_map(x, F2)
    for E in S.elements:
        assert g.apply_subspace(E) == E


@pytest.mark.parametrize("big", [F4, make_field(2, 3), make_field(3, 2)])
@settings(max_examples=20, deadline=None)
@given(data=st.data())
def test_reduction_is_a_homomorphism(big, data):
    small = make_field(big.p)
    g, h = random_map(data, 2, big), random_map(data, 2, big)
    assert reduce_map(g * h, small) == reduce_map(g, small) * reduce_map(h, small)
    x = np.array([data.draw(st.lists(st.integers(0, big.q - 1), min_size=2, max_size=2))])
    assert np.array_equal(reduce_vectors(g.apply(x), big), reduce_map(g, small).apply(reduce_vectors(x, big)))


def test_reduction_needs_prime_target():
    with pytest.raises(ValueError):
        reduce_map(identity(2, make_field(2, 4)), F4)


@pytest.mark.parametrize(
    "v,q,t,order",
    [(4, 2, 2, 360), (4, 3, 2, 5760), (6, 2, 2, 362880), (6, 2, 3, 10584), (8, 2, 4, 244800), (9, 2, 3, 346139136)],
)
def test_spread_stabilizer_orders(v, q, t, order):
    G = spread_stabilizer(v, field_of_order(q), t)
    assert orders(G) == order


def test_group_names():
    assert read_group_name("sp", 4, F2).name == "Sp(4,2)"
    assert read_group_name("spread-stab(2)", 4, F2).v == 4
    assert read_group_name("spread-stab", 6, F2, t=3).name.startswith("spread-stab(6,2")
    assert len(read_group_name("singer", 3, F2).generators) == 1
    assert orders(read_group_name("pgammal", 3, F4)) == 120960
    with pytest.raises(ValueError):
        read_group_name("spread-stab", 4, F2)
    with pytest.raises(ValueError):
        read_group_name("nope", 4, F2)


def test_apply_subspace_matches_pointwise():
    g = gens_sp(4, F2).generators[-1]
    S = subspace_span([[1, 0, 0, 0], [0, 1, 1, 0]], 4, F2)
    T = build_point_table(4, F2)
    p = to_permutation(g, T)
    assert T.points_of(g.apply_subspace(S)) == p.image_of_set(T.points_of(S))
    assert isinstance(p, Perm)
