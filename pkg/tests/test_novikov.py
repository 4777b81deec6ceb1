"""Generic twisted dimensions, jump points, and genericity tests."""

from fractions import Fraction

import pytest

from cupbound.complexes import FlatBundle, IntegralCocycle
from cupbound.corpus import build
from cupbound.fields import FieldSpec
from cupbound.novikov import field_roots, novikov_numbers, xi_generic_test
from cupbound.poly import Poly


Q = FieldSpec.rationals()
F4 = FieldSpec.extension(2, 2)
F5 = FieldSpec.prime(5)


def test_field_roots_rationals():
    x = Poly.x(Q)
    one = Poly.one(Q)
    two = Poly.const(Q, Fraction(2))
    f = (two * x - one) * (x + one + one + one) * (x * x + one)
    roots, cofactor = field_roots(f, Q)
    assert dict(roots) == {Fraction(1, 2): 1, Fraction(-3): 1}
    assert cofactor == x * x + one
    g = (x - one) * (x - one)
    roots, cofactor = field_roots(g, Q)
    assert roots == [(Fraction(1), 2)]
    assert cofactor.is_one()


def test_field_roots_finite_field():
    x = Poly.x(F5)
    f = x * x + Poly.one(F5)            # splits: (-1) is a square mod 5
    roots, cof = field_roots(f, F5)
    assert sorted(a for a, _ in roots) == [2, 3]
    assert cof.is_one()
    g = x * x + Poly.const(F5, 2)       # -2 = 3 is not a square mod 5
    roots, cof = field_roots(g, F5)
    assert roots == [] and cof.degree == 2
    with pytest.raises(ValueError):
        field_roots(Poly.zero(F5), F5)


def test_circle_report():
    sp = build("circle")
    rep = novikov_numbers(sp.X, sp.xi, spec=Q)
    assert [d.b for d in rep.degrees] == [0, 0]
    assert rep.degrees[0].jump_roots == []
    assert rep.degrees[1].jump_roots == [(Fraction(1), 1)]
    assert [repr(f) for f in rep.degrees[1].torsion] == ["T + -1"]
    assert rep.jump_set(0) == [(Fraction(1), 1)]
    assert rep.checked_at is not None
    assert rep.dims_at(Fraction(1)) == [1, 1]
    assert rep.dims_at(rep.checked_at) == [0, 0]


def test_torus_report():
    sp = build("torus2")
    rep = novikov_numbers(sp.X, sp.xi, spec=Q)
    assert [d.b for d in rep.degrees] == [0, 0, 0]
    assert rep.degrees[1].jump_roots == [(Fraction(1), 1)]
    assert rep.degrees[2].jump_roots == [(Fraction(1), 1)]
    assert rep.jump_set(1) == [(Fraction(1), 2)]
    assert rep.dims_at(Fraction(1)) == [1, 2, 1]


def test_surface_report():
    sp = build("surface2")
    rep = novikov_numbers(sp.X, sp.xi, spec=Q)
    assert [d.b for d in rep.degrees] == [0, 2, 0]
    assert rep.dims_at(Fraction(1)) == [1, 4, 1]
    assert rep.dims_at(Fraction(7)) == [0, 2, 0]


def test_handle_sum_report_over_f4():
    sp = build("rp3_handle")
    rep = novikov_numbers(sp.X, sp.xi, spec=F4)
    assert [d.b for d in rep.degrees] == [0, 1, 1, 0]
    one = F4.one()
    assert rep.degrees[1].jump_roots == [(one, 1)]
    assert rep.degrees[3].jump_roots == [(one, 1)]
    omega = F4.from_code(2)   # a primitive cube root of unity
    assert F4.pow(omega, 3) == one and omega != one
    assert rep.dims_at(omega) == [0, 1, 1, 0]
    assert rep.dims_at(one) == [1, 2, 2, 1]


def test_rootless_factors_reported_symbolically():
    sp = build("circle")
    rot = [[Fraction(0), Fraction(-1)], [Fraction(1), Fraction(0)]]
    R = FlatBundle(Q, sp.X, 2, {(0, 1): rot}, None, "rot")
    rep = novikov_numbers(sp.X, sp.xi, F=R)
    assert [d.b for d in rep.degrees] == [0, 0]
    assert rep.degrees[1].jump_roots == []
    assert [repr(f) for f in rep.degrees[1].symbolic] == ["T^2 + 1"]
    assert rep.dims_at(Fraction(2)) == [0, 0]


def test_invalid_input_rejected():
    sp = build("torus2")
    bad = IntegralCocycle({(0, 1): 1})  # breaks the triangle condition
    assert bad.violations(sp.X)
    with pytest.raises(ValueError):
        novikov_numbers(sp.X, bad, spec=Q)


def test_genericity_zero_class_is_vacuous():
    sp = build("rp2")
    res = xi_generic_test(sp.X, IntegralCocycle({}),
                          FlatBundle.trivial(Q, sp.X), Q)
    assert bool(res) and res.witness is None


def test_genericity_witness_on_handle_sum():
    sp = build("rp3_handle")
    triv = FlatBundle.trivial(F4, sp.X)
    res = xi_generic_test(sp.X, sp.xi, triv, F4)
    assert not res
    degree, factor = res.witness
    assert degree == 1
    assert F4.is_zero(factor(F4.one()))
    omega = sp.make_bundle("omega^xi", F4)
    assert bool(xi_generic_test(sp.X, sp.xi, omega, F4))


def test_genericity_of_scaled_monodromy_on_surface():
    sp = build("surface2")
    triv = FlatBundle.trivial(Q, sp.X)
    assert not xi_generic_test(sp.X, sp.xi, triv, Q)
    two = FlatBundle.rank1(Q, sp.X, sp.xi, Fraction(2))
    assert bool(xi_generic_test(sp.X, sp.xi, two, Q))
    assert bool(xi_generic_test(sp.X, -sp.xi, two, Q))
