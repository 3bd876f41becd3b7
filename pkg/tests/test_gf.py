import cmath

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fqcover_cli.errors import (
    DegreeOutOfRange,
    DivisionByZero,
    FieldTooLarge,
    NoProperSubfield,
    NotPrime,
    ReducibleModulus,
)
from fqcover_cli.gf import (
    FieldCtx,
    field_of_order,
    is_irreducible,
    least_irreducible,
    make_field,
    multiplicative_generator,
)


def test_prime_field(gf5):
    assert gf5.q == 5
    assert gf5.add(3, 4) == 2
    assert gf5.mul(3, 4) == 2
    assert gf5.neg(2) == 3
    assert gf5.inv(2) == 3
    assert [gf5.trace(a) for a in range(5)] == [0, 1, 2, 3, 4]


def test_gf4_modulus_and_arithmetic(gf4):
    omega = 2
    assert gf4.modulus == (1, 1, 1)
    assert gf4.mul(omega, omega) == 3  # omega + 1
    assert gf4.add(omega, 1) == 3
    assert gf4.add(omega, omega) == 0
    assert [gf4.trace(a) for a in range(4)] == [0, 0, 1, 1]


def test_gf9_modulus(gf9):
    # x^2 + 1 is irreducible over F_3 since -1 is not a square
    assert gf9.modulus == (1, 0, 1)


def test_least_irreducible_skips_reducible():
    assert least_irreducible(2, 2) == (1, 1, 1)
    assert is_irreducible(2, least_irreducible(2, 3))
    assert not is_irreducible(2, (1, 0, 1))


def test_chi():
    gf5 = make_field(5)
    assert gf5.chi(0) == pytest.approx(1)
    assert gf5.chi(2) == pytest.approx(cmath.exp(4j * cmath.pi / 5))
    assert make_field(2, 2).chi(2) == pytest.approx(-1)


@pytest.mark.parametrize("p,n,error", [(4, 1, NotPrime), (1, 1, NotPrime), (2, 0, DegreeOutOfRange), (2, 21, FieldTooLarge)])
def test_make_field_errors(p, n, error):
    with pytest.raises(error):
        make_field(p, n)


def test_make_field_cap():
    with pytest.raises(FieldTooLarge):
        make_field(3, 3, cap=26)
    assert make_field(3, 3, cap=27).q == 27


def test_reducible_modulus_rejected():
    with pytest.raises(ReducibleModulus):
        FieldCtx(2, 2, (1, 0, 1))
    with pytest.raises(ReducibleModulus):
        FieldCtx(3, 2, (1, 0, 2))  # not monic


def test_inverse_of_zero(gf4):
    with pytest.raises(DivisionByZero):
        gf4.inv(0)
    with pytest.raises(ZeroDivisionError):
        gf4.inv(0)


@pytest.mark.parametrize("q,g", [(2, 1), (5, 2), (7, 3)])
def test_multiplicative_generator(q, g):
    F = field_of_order(q)
    assert multiplicative_generator(F) == g
    assert F.order(g) == q - 1


def test_order(gf5):
    assert gf5.order(1) == 1
    assert gf5.order(4) == 2
    assert gf5.order(2) == 4


def test_field_of_order():
    assert field_of_order(16).p == 2
    assert field_of_order(16).n == 4
    with pytest.raises(NotPrime):
        field_of_order(12)


def test_field_axioms(small_field):
    F = small_field
    e = F.elements
    a, b = e[:, None], e[None, :]

    assert np.array_equal(F.vadd(a, b), F.vadd(b, a))
    assert np.array_equal(F.vmul(a, b), F.vmul(b, a))
    assert np.all(F.vadd(e, F.vneg(e)) == 0)
    assert np.all(F.vmul(e[1:], F.vinv(e[1:])) == 1)
    for x in range(F.q):
        assert np.array_equal(F.vmul(x, F.vadd(a, b)), F.vadd(F.vmul(x, a), F.vmul(x, b)))
        assert np.array_equal(F.vmul(F.vmul(x, a), b), F.vmul(x, F.vmul(a, b)))


def test_trace_and_frobenius(small_field):
    F = small_field
    e = F.elements
    a, b = e[:, None], e[None, :]

    assert set(F.trace_table.tolist()) == set(range(F.p))
    assert np.array_equal(F.trace_table[F.vadd(a, b)], (F.trace_table[a] + F.trace_table[b]) % F.p)
    assert np.array_equal(F.vpow(F.vadd(a, b), F.p), F.vadd(F.vpow(a, F.p), F.vpow(b, F.p)))


def test_tables_agree_with_galois(small_field):
    F = small_field
    e = F.elements
    a, b = e[:, None], e[None, :]
    x, y = F.gf(a), F.gf(b)

    assert np.array_equal(F.vmul(a, b), np.asarray(x * y))
    assert np.array_equal(F.vadd(a, b), np.asarray(x + y))
    assert np.array_equal(F.trace_table, np.asarray(F.gf(e).field_trace()))
    assert F.gf(F.generator).multiplicative_order() == F.q - 1


def test_character_orthogonality(small_field):
    F = small_field
    for a in range(F.q):
        total = sum(F.chi(F.mul(a, t)) for t in range(F.q))
        expected = F.q if a == 0 else 0
        assert abs(total - expected) <= 1e-9 * F.q


def test_subfield(gf4, gf9):
    assert gf4.subfield(1).tolist() == [0, 1]
    assert gf9.subfield(1).tolist() == [0, 1, 2]
    assert gf9.subfield(2).size == 9
    with pytest.raises(NoProperSubfield):
        make_field(2, 3).subfield(2)


def test_tables_are_read_only(gf4):
    with pytest.raises(ValueError):
        gf4.trace_table[0] = 1


def test_descriptor(gf9):
    descriptor = gf9.descriptor()
    assert (descriptor.p, descriptor.n, descriptor.q) == (3, 2, 9)
    assert descriptor.modulus == [1, 0, 1]


def test_fields_are_cached():
    assert make_field(3, 2) is make_field(3, 2)


@given(st.integers(1, 15), st.integers(1, 15), st.integers(-20, 20))
def test_pow_matches_repeated_multiplication(a, b, e):
    F = make_field(2, 4)
    expected = 1
    base = a if e >= 0 else F.inv(a)
    for _ in range(abs(e)):
        expected = F.mul(expected, base)
    assert F.pow(a, e) == expected
    assert F.mul(F.pow(a, e), F.pow(b, e)) == F.pow(F.mul(a, b), e)
