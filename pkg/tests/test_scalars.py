import random

import pytest

from braidcalc.errors import DivisionByZero, FieldMismatch, RootOrderMismatch
from braidcalc.scalars import (
    Q,
    euler_phi,
    field_make,
    is_regular,
    is_regular_exact,
    q_binomial,
    q_factorial,
    q_int,
    root_order,
)


def test_field_construction_examples():
    f1 = field_make(1)
    assert f1.degree == 1 and f1.cyclotomic_polynomial == (Q(-1), Q(1))
    f4 = field_make(4)
    assert f4.degree == 2 and f4.cyclotomic_polynomial == (Q(1), Q(0), Q(1))
    f12 = field_make(12)
    assert f12.degree == euler_phi(12) == 4
    # divide X^12 - 1 by Phi_1 Phi_2 Phi_3 Phi_4 Phi_6 by hand: X^4 - X^2 + 1
    assert f12.cyclotomic_polynomial == (Q(1), Q(0), Q(-1), Q(0), Q(1))


def test_cyclotomic_polynomial_divides_x_m_minus_1():
    for m in (1, 2, 3, 4, 5, 6, 8, 9, 12, 15):
        f = field_make(m)
        z = f.gen
        assert (z ** m).is_one()
        assert f.degree == euler_phi(m)


def test_arithmetic_examples():
    f4 = field_make(4)
    z = f4.gen
    assert z * z == f4.from_rational(-1)
    assert f4.from_rational(2).inv() == f4.from_fraction(1, 2)
    f3 = field_make(3)
    w = f3.gen
    inv = (f3.one + w).inv()
    assert inv == -w
    assert ((f3.one + w) * inv).is_one()


def test_division_errors():
    f4 = field_make(4)
    with pytest.raises(DivisionByZero):
        f4.one / f4.zero
    with pytest.raises(DivisionByZero):
        f4.zero.inv()
    with pytest.raises(FieldMismatch):
        f4.one + field_make(3).one


def test_field_axioms_randomized():
    rng = random.Random(7)
    f = field_make(12)

    def rand_scalar():
        return f.scalar([Q(rng.randint(-4, 4), rng.randint(1, 3))
                         for _ in range(f.degree)])

    for _ in range(120):
        a, b, c = rand_scalar(), rand_scalar(), rand_scalar()
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a + b == b + a
        assert a * b == b * a
        if not a.is_zero():
            assert (a * a.inv()).is_one()
            assert a ** -2 == (a * a).inv()


def test_q_int_telescoping():
    f = field_make(12)
    rng = random.Random(3)
    candidates = [f.gen ** k for k in range(12)] + [f.from_rational(2),
                                                    f.from_fraction(-3, 2)]
    for q in candidates:
        if q.is_zero():
            continue
        for n in (1, 2, 3, 5, 8):
            assert q_int(n, q) * (q - f.one) == q ** n - f.one
    del rng


def test_q_int_values():
    f1 = field_make(1)
    assert q_int(3, f1.one) == f1.from_rational(3)
    f4 = field_make(4)
    assert q_int(2, f4.from_rational(-1)).is_zero()


def test_q_binomial_matches_factorial_quotient():
    f = field_make(12)
    for q in (f.from_rational(2), f.gen, f.gen ** 5, f.from_fraction(1, 2)):
        for n in range(7):
            for i in range(n + 1):
                denom = q_factorial(i, q) * q_factorial(n - i, q)
                if denom.is_zero():
                    continue
                assert q_binomial(n, i, q) == q_factorial(n, q) / denom


def test_q_binomial_at_root_of_unity():
    f4 = field_make(4)
    z = f4.gen
    assert q_binomial(4, 2, z).is_zero()
    # all inner Gaussian binomials at a primitive n-th root vanish
    f5 = field_make(5)
    for i in range(1, 5):
        assert q_binomial(5, i, f5.gen).is_zero()
    assert q_binomial(5, 0, f5.gen).is_one()


def test_regularity_and_root_order():
    f4 = field_make(4)
    assert is_regular(f4.one, 10)
    assert not is_regular(f4.gen, 10)
    assert root_order(f4.gen) == 4
    assert root_order(f4.from_rational(-1)) == 2
    assert root_order(f4.from_rational(2)) is None
    assert is_regular_exact(f4.from_rational(2))
    assert is_regular_exact(f4.one)
    assert not is_regular_exact(f4.from_rational(-1))
    # odd m still sees -1, whose order exceeds m
    f3 = field_make(3)
    assert root_order(f3.from_rational(-1)) == 2


def test_root_order_consistency():
    f12 = field_make(12)
    for k in range(12):
        q = f12.gen ** k
        n = root_order(q)
        assert n is not None
        assert (q ** n).is_one()
        if n > 1:
            assert q_int(n, q) * (q - f12.one) == f12.zero
            for j in range(1, n):
                assert not q_int(j, q).is_zero() or not is_regular_exact(q)


def test_primitive_roots_listing():
    f12 = field_make(12)
    roots = f12.primitive_roots(4)
    assert len(roots) == 2
    for r in roots:
        assert root_order(r) == 4
    with pytest.raises(RootOrderMismatch):
        f12.root_of_unity(5)
    assert f12.root_of_unity(2) == f12.from_rational(-1)
    f1 = field_make(1)
    assert f1.primitive_roots(2)[0] == f1.from_rational(-1)
