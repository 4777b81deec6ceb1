"""Shared helpers for the test suite: random inputs and identity checks."""

from fractions import Fraction
from math import gcd

from cupbound import linalg
from cupbound.complexes import IntegralCocycle, SimplicialComplex
from cupbound.cuplen import deformation_differential, psi_product
from cupbound.fields import FieldSpec


def random_two_complex(rng, nv=8):
    """Seeded random 2-complex with a random integral 1-cocycle.

    The cocycle is drawn from the full solution space of the triangle
    condition (an integer-scaled rational kernel vector), so nontrivial
    classes occur whenever the complex has them -- not just coboundaries.
    """
    edges = [(u, v) for u in range(nv) for v in range(u + 1, nv)
             if rng.random() < 0.45]
    eset = set(edges)
    tris = [(u, v, w)
            for u in range(nv) for v in range(u + 1, nv)
            for w in range(v + 1, nv)
            if (u, v) in eset and (u, w) in eset and (v, w) in eset
            and rng.random() < 0.6]
    X = SimplicialComplex(nv, [(v,) for v in range(nv)] + edges + tris)
    z = random_cocycle(X, rng)
    return X, z


def random_cocycle(X, rng):
    """Random integral cocycle: integer-scaled element of the rational
    kernel of the triangle-condition matrix."""
    Q = FieldSpec.rationals()
    edges = X.edges
    eidx = {e: i for i, e in enumerate(edges)}
    rows = []
    for (u, v, w) in X.simplices(2):
        row = [Fraction(0)] * len(edges)
        row[eidx[(v, w)]] += 1
        row[eidx[(u, w)]] -= 1
        row[eidx[(u, v)]] += 1
        rows.append(row)
    basis = linalg.kernel_basis(Q, rows, len(edges))
    vec = [Fraction(0)] * len(edges)
    for b in basis:
        c = rng.randint(-2, 2)
        if c:
            vec = [x + c * y for x, y in zip(vec, b)]
    denom = 1
    for x in vec:
        denom = denom * x.denominator // gcd(denom, x.denominator)
    vals = {}
    for e, x in zip(edges, vec):
        w = int(x * denom)
        if w:
            vals[e] = w
    z = IntegralCocycle(vals)
    assert z.violations(X) == []
    return z


def random_cochain_pair(cut, spec, rng, p, pp):
    """Random cochain pairs of the cylinder model in degrees (p, pp)."""
    def rand(n):
        return [linalg.random_elem(spec, rng) for _ in range(n)]

    c = ((rand(cut.N.count(p)), p), (rand(cut.V.count(p - 1)), p - 1))
    cp = ((rand(cut.N.count(pp)), pp), (rand(cut.V.count(pp - 1)), pp - 1))
    return c, cp


def leibniz_holds(cut, spec, rng, t, p=1, pp=1):
    """Product rule of the cylinder model: the differential of a product
    equals (d c) * c' + (-1)^p c * (d' c') with the conjugate parameter
    t' = (1+t)^{-1} - 1 on the second factor.  Checked entrywise."""
    c, cp = random_cochain_pair(cut, spec, rng, p, pp)
    one = spec.one()
    tprime = spec.sub(spec.inv(spec.add(one, t)), one)
    lhs = deformation_differential(cut, psi_product(cut, c, cp, t), t)
    r1 = psi_product(cut, deformation_differential(cut, c, t), cp, t)
    r2 = psi_product(cut, c, deformation_differential(cut, cp, tprime), t)
    sgn = one if p % 2 == 0 else spec.neg(one)
    for comp in (0, 1):
        rhs = [spec.add(a, spec.mul(sgn, b))
               for a, b in zip(r1[comp][0], r2[comp][0])]
        if any(not spec.is_zero(spec.sub(a, b))
               for a, b in zip(lhs[comp][0], rhs)):
            return False
    return True
