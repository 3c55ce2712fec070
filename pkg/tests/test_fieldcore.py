from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qgraph.fieldcore import CONWAY, FieldError, FieldElement, field_of_order, frobenius, inv, make_field

from oracles import PolyField

SMALL_ORDERS = [2, 3, 4, 5, 7, 8, 9, 11, 13, 16]


def test_prime_field_modulus_is_trivial():
    F = make_field(2, 1)
    assert F.q == 2 and F.modulus == (0, 1)


@pytest.mark.parametrize("p,e,modulus", [(2, 2, (1, 1, 1)), (3, 2, (2, 2, 1)), (2, 3, (1, 1, 0, 1)), (2, 4, (1, 1, 0, 0, 1))])
def test_canonical_moduli(p, e, modulus):
    F = make_field(p, e)
    assert F.modulus == modulus
    assert not PolyField(p, modulus).has_root()


def test_bad_fields():
    with pytest.raises(FieldError):
        make_field(4, 1)
    with pytest.raises(FieldError):
        make_field(17, 3)
    with pytest.raises(FieldError):
        make_field(2, 0)


def test_scalar_examples():
    F4, F3 = make_field(2, 2), make_field(3)
    assert F4.mul(2, 2) == 3
    assert F3.add(2, 2) == 1
    assert F4.frobenius(2, 1) == 3
    assert F4.frobenius(2, 0) == 2
    assert make_field(2).frobenius(1, 0) == 1
    for q in SMALL_ORDERS:
        assert field_of_order(q).inv(1) == 1


def test_inverse_of_zero_raises():
    with pytest.raises(ZeroDivisionError):
        make_field(3).inv(0)


def test_mixed_fields_rejected():
    a = FieldElement(1, make_field(2, 2))
    b = FieldElement(1, make_field(2))
    with pytest.raises(FieldError):
        a + b
    with pytest.raises(FieldError):
        FieldElement(4, make_field(2, 2))


def test_element_wrappers():
    F = make_field(2, 2)
    x = F.element(2)
    assert int(x * x) == 3
    assert int(inv(x) * x) == 1
    assert int(frobenius(x, 1)) == 3
    assert int(x / x) == 1 and int(-x) == 2 and int(x**3) == 1


@pytest.mark.parametrize("q", SMALL_ORDERS)
def test_tables_match_polynomial_oracle(q):
    F = field_of_order(q)
    O = PolyField(F.p, F.modulus)
    for a in range(q):
        assert F.neg(a) == O.neg(a)
        for b in range(q):
            assert F.add(a, b) == O.add(a, b)
            assert F.mul(a, b) == O.mul(a, b)


@pytest.mark.parametrize("q", SMALL_ORDERS)
def test_field_axioms_exhaustive(q):
    F = field_of_order(q)
    R = range(q)
    for a in R:
        assert F.add(a, 0) == a and F.mul(a, 1) == a
        assert F.add(a, F.neg(a)) == 0
        if a:
            assert F.mul(a, F.inv(a)) == 1
            assert F.inv(F.inv(a)) == a
        for b in R:
            assert F.add(a, b) == F.add(b, a)
            assert F.mul(a, b) == F.mul(b, a)
            for c in R:
                assert F.add(F.add(a, b), c) == F.add(a, F.add(b, c))
                assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
                assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))


@pytest.mark.parametrize("p,e", sorted(k for k in CONWAY if k[0] ** k[1] <= 512) + [(2, 1), (3, 1), (5, 1), (7, 1)])
def test_group_structure(p, e):
    F = make_field(p, e)
    q = F.q
    g = F.primitive_element
    powers = {F.pow(g, i) for i in range(q - 1)}
    assert powers == set(range(1, q))
    # additive group is elementary abelian: p * a = 0
    for a in range(q):
        s = 0
        for _ in range(p):
            s = F.add(s, a)
        assert s == 0


@pytest.mark.parametrize("q", [4, 8, 9, 16, 27, 25, 64])
def test_frobenius_is_automorphism_of_order_e(q):
    F = field_of_order(q)
    for a in range(q):
        x = a
        for _ in range(F.e):
            x = F.pow(x, F.p)
        assert x == a
        for b in range(0, q, max(1, q // 8)):
            assert F.frobenius(F.add(a, b), 1 % F.e) == F.add(F.frobenius(a, 1 % F.e), F.frobenius(b, 1 % F.e))
            assert F.frobenius(F.mul(a, b), 1 % F.e) == F.mul(F.frobenius(a, 1 % F.e), F.frobenius(b, 1 % F.e))


def test_frobenius_exponent_range():
    with pytest.raises(FieldError):
        make_field(2, 2).frobenius(1, 2)


@given(st.sampled_from([4, 8, 9, 16, 25, 27, 49, 1024, 2048]), st.data())
def test_vectorized_matches_scalar(q, data):
    import numpy as np

    F = field_of_order(q)
    a = data.draw(st.lists(st.integers(0, q - 1), min_size=1, max_size=20))
    b = data.draw(st.lists(st.integers(0, q - 1), min_size=len(a), max_size=len(a)))
    A, B = np.array(a), np.array(b)
    assert F.vadd(A, B).tolist() == [F.add(x, y) for x, y in zip(a, b)]
    assert F.vmul(A, B).tolist() == [F.mul(x, y) for x, y in zip(a, b)]
    assert F.vsub(A, B).tolist() == [F.sub(x, y) for x, y in zip(a, b)]


def test_large_field_uses_log_tables():
    F = make_field(2, 11)
    assert F.mul_table is None
    O = PolyField(2, F.modulus)
    for a, b in [(3, 1000), (2047, 2047), (1024, 2)]:
        assert F.mul(a, b) == O.mul(a, b)
