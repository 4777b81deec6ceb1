"""Smith normal form over Euclidean domains and PID module decompositions."""

import random
from fractions import Fraction

import pytest

from cupbound.fields import FieldSpec
from cupbound.pidmod import (IntRing, ModuleDecomposition, PolyRing,
                             cohomology_modules, dims_at, kernel_basis_pid,
                             smith_normal_form, snf_laurent)
from cupbound.poly import LaurentPoly, Poly, poly_divmod


Q = FieldSpec.rationals()
F5 = FieldSpec.prime(5)


def _matmul(ring, A, B):
    return [[_dot(ring, row, [B[k][j] for k in range(len(B))])
             for j in range(len(B[0]))] for row in A]


def _dot(ring, u, v):
    acc = ring.zero
    for a, b in zip(u, v):
        acc = ring.add(acc, ring.mul(a, b))
    return acc


def test_integer_snf_diagonal_swap():
    res = smith_normal_form(IntRing(), [[2, 0], [0, 3]])
    assert res.factors == [1, 6]


def test_integer_snf_divisibility_and_transforms():
    ring = IntRing()
    M = [[2, 4, 4], [-6, 6, 12], [10, -4, -16]]
    res = smith_normal_form(ring, M, transforms="UV")
    for a, b in zip(res.factors, res.factors[1:]):
        assert b % a == 0
    D = _matmul(ring, _matmul(ring, res.U, M), res.V)
    for i in range(3):
        for j in range(3):
            expect = res.factors[i] if (i == j and i < len(res.factors)) else 0
            assert D[i][j] == expect
    # V and Vinv are mutually inverse
    VV = _matmul(ring, res.V, res.Vinv)
    assert VV == [[1 if i == j else 0 for j in range(3)] for i in range(3)]


@pytest.mark.parametrize("spec", [Q, F5], ids=repr)
def test_poly_snf_random_transform_identity(spec):
    rng = random.Random(23)
    ring = PolyRing(spec)
    for _ in range(12):
        m, n = rng.randrange(1, 5), rng.randrange(1, 5)
        M = [[Poly(spec, [spec.from_int(rng.randrange(-2, 3))
                          for _ in range(rng.randrange(3))])
              for _ in range(n)] for _ in range(m)]
        res = smith_normal_form(ring, M, transforms="UV")
        D = _matmul(ring, _matmul(ring, res.U, M), res.V)
        for i in range(m):
            for j in range(n):
                if i == j and i < len(res.factors):
                    assert D[i][j] == res.factors[i]
                    assert res.factors[i].lead == spec.one()  # canonical
                else:
                    assert D[i][j].is_zero()
        for a, b in zip(res.factors, res.factors[1:]):
            assert poly_divmod(b, a)[1].is_zero()


def test_poly_snf_known_invariant_factors():
    x = Poly.x(Q)
    one = Poly.one(Q)
    zero = Poly.zero(Q)
    # diag(x, x(x-1)) is already in normal form up to sorting
    res = smith_normal_form(PolyRing(Q), [[x * (x - one), zero], [zero, x]])
    assert res.factors == [x, x * (x - one)]


def test_snf_laurent_clears_valuations():
    x = Poly.x(Q)
    one = Poly.one(Q)
    M = [[LaurentPoly(x - one, -3), LaurentPoly.zero(Q)],
         [LaurentPoly.zero(Q), LaurentPoly(x, 2)]]
    res = snf_laurent(Q, M)
    # T^k unit factors are stripped: x alone is a unit of k[T, T^-1]
    assert res.factors == [Poly.one(Q), x - one]


def test_kernel_basis_pid():
    x = Poly.x(Q)
    one = Poly.one(Q)
    M = [[x, x * x, Poly.zero(Q)]]
    basis = kernel_basis_pid(Q, M, 3)
    assert len(basis) == 2
    ring = PolyRing(Q)
    for col in basis:
        img = _dot(ring, M[0], col)
        assert img.is_zero()
    assert kernel_basis_pid(Q, [], 2) == [[one, Poly.zero(Q)],
                                          [Poly.zero(Q), one]]


def _complex_from_ints(spec, sizes, mats):
    """Dense integer matrices -> sparse Poly differentials."""
    diffs = []
    for M in mats:
        rows = []
        for r in M:
            rows.append({j: Poly.from_ints(spec, v if isinstance(v, list)
                                           else [v])
                         for j, v in enumerate(r) if v})
        diffs.append(rows)
    return diffs


def test_cohomology_modules_free_and_torsion():
    # 0 -> k[T]^2 --(T-1, 0)--> k[T] -> 0 : H^0 free 1, H^1 torsion (T-1)
    spec = Q
    diffs = _complex_from_ints(spec, [2, 1], [[[[-1, 1], 0]]])
    decs = cohomology_modules(diffs, [2, 1], spec)
    assert decs[0].free_rank == 1 and decs[0].invariant_factors == []
    assert decs[1].free_rank == 0
    assert [repr(f) for f in decs[1].invariant_factors] == ["T + -1"]


def test_dims_at_universal_coefficients():
    spec = Q
    diffs = _complex_from_ints(spec, [2, 1], [[[[-1, 1], 0]]])
    decs = cohomology_modules(diffs, [2, 1], spec)
    # at the torsion root both degrees gain one dimension
    assert dims_at(decs, Fraction(1), spec) == [2, 1]
    assert dims_at(decs, Fraction(2), spec) == [1, 0]


def test_module_dim_at_single_degree():
    dec = ModuleDecomposition(1, 2, [Poly.from_ints(Q, [-1, 1])])
    assert dec.dim_at(Fraction(1)) == 3
    assert dec.dim_at(Fraction(5)) == 2


def test_composition_check_rejects_bad_complex():
    spec = Q
    # d1 d0 != 0: both maps are the identity
    one = Poly.one(spec)
    diffs = [[{0: one}], [{0: one}]]
    with pytest.raises(ValueError):
        cohomology_modules(diffs, [1, 1, 1], spec)
