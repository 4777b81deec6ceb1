"""Field arithmetic: axioms, codes, parsing, roots of unity."""

import random
from fractions import Fraction

import pytest

from cupbound.fields import (FieldError, FieldSpec, field_make,
                             minimal_extension_with_root, root_of_unity)


SPECS = [FieldSpec.rationals(), FieldSpec.prime(2), FieldSpec.prime(5),
         FieldSpec.extension(2, 2), FieldSpec.extension(3, 2),
         FieldSpec.extension(2, 4)]


def _samples(spec, rng, k=12):
    if spec.kind == "rationals":
        return [Fraction(rng.randrange(-9, 10), rng.randrange(1, 7))
                for _ in range(k)]
    return [spec.from_code(rng.randrange(spec.order)) for _ in range(k)]


@pytest.mark.parametrize("spec", SPECS, ids=repr)
def test_field_axioms(spec):
    rng = random.Random(7)
    xs = _samples(spec, rng)
    zero, one = spec.zero(), spec.one()
    for a in xs:
        assert spec.add(a, zero) == a
        assert spec.mul(a, one) == a
        assert spec.is_zero(spec.add(a, spec.neg(a)))
        if not spec.is_zero(a):
            assert spec.mul(a, spec.inv(a)) == one
        for b in xs:
            assert spec.add(a, b) == spec.add(b, a)
            assert spec.mul(a, b) == spec.mul(b, a)
            for c in xs[:4]:
                lhs = spec.mul(a, spec.add(b, c))
                rhs = spec.add(spec.mul(a, b), spec.mul(a, c))
                assert lhs == rhs


@pytest.mark.parametrize("spec", SPECS[1:], ids=repr)
def test_code_roundtrip_and_order(spec):
    seen = set()
    for code in range(spec.order):
        a = spec.from_code(code)
        assert spec.code(a) == code
        seen.add(a)
    assert len(seen) == spec.order
    assert spec.from_code(0) == spec.zero()
    assert spec.from_code(1) == spec.one()


def test_extension_modulus_is_irreducible():
    # the generator of F_9 satisfies an irreducible quadratic: no element
    # of F_3 is a root of it
    spec = FieldSpec.extension(3, 2)
    f = spec.modulus
    for c in range(3):
        acc = 0
        for k, coeff in enumerate(f):
            acc = (acc + coeff * pow(c, k, 3)) % 3
        assert acc != 0


def test_frobenius_in_extension():
    spec = FieldSpec.extension(2, 4)
    for code in range(spec.order):
        a = spec.from_code(code)
        assert spec.pow(a, spec.order) == a


def test_parse_and_format_roundtrip():
    for s, kind in [("Q", "rationals"), ("5", "prime"), ("2^2", "extension"),
                    ("3^3", "extension")]:
        spec = FieldSpec.parse(s)
        assert spec.kind == kind
        for code in ([0, 1] if spec.kind == "rationals"
                     else range(spec.order)):
            a = (Fraction(code) if spec.kind == "rationals"
                 else spec.from_code(code))
            assert spec.parse_elem(spec.format(a)) == a


def test_invalid_fields_rejected():
    with pytest.raises(FieldError):
        FieldSpec.prime(4)
    with pytest.raises(FieldError):
        FieldSpec.extension(6, 2)
    with pytest.raises(FieldError):
        field_make("extension", 2, 0)
    with pytest.raises(FieldError):
        field_make("weird")


def test_elem_wrapper_operators():
    spec = FieldSpec.prime(7)
    a, b = spec.elem(3), spec.elem(5)
    assert (a + b).value == 1
    assert (a * b).value == 1
    assert (a - b).value == 5
    assert (a / b).value == spec.mul(3, spec.inv(5))
    assert (-a).value == 4
    assert (a ** 6).value == 1
    assert bool(a) and not bool(spec.elem(0))
    with pytest.raises(FieldError):
        a + FieldSpec.prime(5).elem(1)


def test_roots_of_unity():
    F4 = FieldSpec.extension(2, 2)
    w = root_of_unity(F4, 3)
    assert w is not None
    assert (w ** 3).value == F4.one() and w.value != F4.one()
    assert root_of_unity(FieldSpec.rationals(), 2).value == Fraction(-1)
    assert root_of_unity(FieldSpec.rationals(), 3) is None
    assert root_of_unity(FieldSpec.prime(2), 2) is None


def test_minimal_extension_with_root():
    spec = minimal_extension_with_root(2, 3)
    assert spec.order == 4
    assert minimal_extension_with_root(2, 2) is None  # char divides n
    spec = minimal_extension_with_root(5, 3)
    assert (spec.order - 1) % 3 == 0
