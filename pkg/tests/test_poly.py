"""Polynomial and Laurent-polynomial arithmetic."""

import random
from fractions import Fraction

import pytest

from cupbound.fields import FieldSpec
from cupbound.poly import (LaurentPoly, Poly, laurent_normalize, poly_divmod,
                           poly_gcd, poly_xgcd, root_multiplicity)


Q = FieldSpec.rationals()
F5 = FieldSpec.prime(5)


def _rand_poly(spec, rng, maxdeg=5):
    d = rng.randrange(maxdeg + 1)
    if spec.kind == "rationals":
        coeffs = [Fraction(rng.randrange(-5, 6)) for _ in range(d + 1)]
    else:
        coeffs = [spec.from_code(rng.randrange(spec.order))
                  for _ in range(d + 1)]
    return Poly(spec, coeffs)


def test_normalization_strips_leading_zeros():
    p = Poly.from_ints(Q, [1, 2, 0, 0])
    assert p.degree == 1
    assert Poly.from_ints(Q, [0, 0]).is_zero()
    assert Poly.zero(Q).degree == -1


@pytest.mark.parametrize("spec", [Q, F5], ids=repr)
def test_ring_axioms_and_evaluation(spec):
    rng = random.Random(3)
    for _ in range(25):
        f, g, h = (_rand_poly(spec, rng) for _ in range(3))
        assert (f + g) - g == f
        assert f * g == g * f
        assert f * (g + h) == f * g + f * h
        a = (Fraction(rng.randrange(-3, 4)) if spec.kind == "rationals"
             else spec.from_code(rng.randrange(spec.order)))
        assert (f * g)(a) == spec.mul(f(a), g(a))
        assert (f + g)(a) == spec.add(f(a), g(a))


@pytest.mark.parametrize("spec", [Q, F5], ids=repr)
def test_divmod_identity(spec):
    rng = random.Random(11)
    for _ in range(40):
        f = _rand_poly(spec, rng, 6)
        g = _rand_poly(spec, rng, 3)
        if g.is_zero():
            continue
        q, r = poly_divmod(f, g)
        assert q * g + r == f
        assert r.degree < g.degree


def test_gcd_and_xgcd():
    x = Poly.x(Q)
    one = Poly.one(Q)
    f = (x - one) * (x - one) * (x + one)
    g = (x - one) * x
    d = poly_gcd(f, g)
    assert d == x - one
    d2, s, t = poly_xgcd(f, g)
    assert d2 == d
    assert s * f + t * g == d


def test_root_multiplicity():
    x = Poly.x(Q)
    one = Poly.one(Q)
    f = (x - one) * (x - one) * (x + one)
    assert root_multiplicity(f, Fraction(1)) == 2
    assert root_multiplicity(f, Fraction(-1)) == 1
    assert root_multiplicity(f, Fraction(2)) == 0


def test_compose_shift_recenters():
    rng = random.Random(5)
    for _ in range(20):
        f = _rand_poly(Q, rng, 5)
        g = f.compose_shift(Fraction(1))
        for a in (Fraction(0), Fraction(2), Fraction(-1, 3)):
            assert g(a) == f(a + 1)


def test_monic_and_valuation():
    f = Poly.from_ints(Q, [0, 0, 2, 4])
    assert f.valuation() == 2
    assert f.monic().lead == Fraction(1)
    with pytest.raises(ValueError):
        Poly.zero(Q).valuation()


def test_laurent_normal_form_and_arithmetic():
    t2 = LaurentPoly.t_power(Q, -2)
    p = LaurentPoly(Poly.from_ints(Q, [0, 1]), 0)   # T
    prod = t2 * p
    assert prod.val == -1 and prod.poly.is_one()
    s = prod + LaurentPoly.one(Q)
    assert s.val == -1
    assert s(Fraction(2)) == Fraction(3, 2)
    assert (s - s).is_zero()
    assert LaurentPoly.t_power(Q, 3).is_unit()
    assert not s.is_unit()


def test_laurent_as_poly_and_normalize():
    f = LaurentPoly(Poly.from_ints(Q, [2, 2]), -1)  # 2/T + 2
    with pytest.raises(ValueError):
        f.as_poly()
    unit, norm = laurent_normalize(f)
    assert unit.is_unit()
    assert norm.coeffs[0] == Fraction(1) and norm.lead == Fraction(1)
    assert unit * LaurentPoly(norm) == f
    with pytest.raises(ValueError):
        laurent_normalize(LaurentPoly.zero(Q))
