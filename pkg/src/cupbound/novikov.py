"""Novikov numbers, jump points, and genericity of rank-1 twist families.

b_q(xi) is the free rank over the Laurent ring of the tau^xi-twisted
cohomology module; jump points are the roots of its torsion invariant
factors.  Factors with no roots in the working field are reported
symbolically rather than silently dropped.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .complexes import FlatBundle, IntegralCocycle, SimplicialComplex, twisted_complex, validate
from .fields import FieldSpec
from .poly import Poly, poly_divmod, root_multiplicity


def field_roots(f: Poly, spec: FieldSpec):
    """Roots of f in the field with multiplicities, plus the rootless
    cofactor (monic; equal to one when f splits)."""
    if f.is_zero():
        raise ValueError("zero polynomial")
    roots = []
    g = f.monic()
    if spec.kind == "rationals":
        candidates = _rational_candidates(g)
    else:
        candidates = list(spec.elements())
    for a in candidates:
        if g.is_const():
            break
        e = root_multiplicity(g, a)
        if e:
            roots.append((a, e))
            lin = Poly(spec, (spec.neg(a), spec.one()))
            for _ in range(e):
                g = poly_divmod(g, lin)[0]
    return roots, g.monic()


def _rational_candidates(g: Poly):
    """Rational root candidates p/q from the cleared-denominator coeffs."""
    denom = 1
    for c in g.coeffs:
        denom = denom * c.denominator // _gcd(denom, c.denominator)
    ints = [int(c * denom) for c in g.coeffs]
    while ints and ints[0] == 0:
        ints = ints[1:]
    if not ints:
        return [Fraction(0)]
    a0, an = abs(ints[0]), abs(ints[-1])
    ps, qs = _divisors(a0), _divisors(an)
    cands = {Fraction(0)}
    for p in ps:
        for q in qs:
            cands.add(Fraction(p, q))
            cands.add(Fraction(-p, q))
    return sorted(cands)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def _divisors(n):
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.extend((d, n // d))
        d += 1
    return sorted(set(out))


@dataclass
class DegreeReport:
    q: int
    b: int                       # Novikov number = generic dimension
    torsion: list                # invariant factors (normalized monic Poly)
    jump_roots: list             # (raw value, total multiplicity over factors)
    symbolic: list               # rootless cofactors of degree >= 1


@dataclass
class NovikovReport:
    spec: FieldSpec
    degrees: list
    decompositions: list
    checked_at: object = None    # explicit non-jump point used for the check

    def jump_set(self, q: int):
        """Jump points affecting dim H^q: roots from degrees q and q+1."""
        vals = {}
        for qq in (q, q + 1):
            if 0 <= qq < len(self.degrees):
                for a, e in self.degrees[qq].jump_roots:
                    vals[a] = vals.get(a, 0) + e
        return sorted(vals.items(), key=lambda p: _root_key(self.spec, p[0]))

    def dims_at(self, a):
        from .pidmod import dims_at
        return dims_at(self.decompositions, a, self.spec)


def _root_key(spec, a):
    if spec.kind == "rationals":
        return (float(a),)
    return (spec.code(a),)


def novikov_numbers(X: SimplicialComplex, z: IntegralCocycle,
                    F: FlatBundle = None, spec: FieldSpec = None,
                    _complex=None) -> NovikovReport:
    """Novikov numbers and jump data of the family a^xi (x) F."""
    if _complex is not None:
        C = _complex
        spec = C.spec
    else:
        if spec is None:
            spec = F.spec if F is not None else FieldSpec.rationals()
        diag = validate(X, z, [F] if F is not None else [])
        if not diag.ok:
            raise ValueError(f"invalid input: {diag.issues[0]}")
        bundle = FlatBundle.laurent(spec, X, z)
        if F is not None:
            bundle = bundle.tensor(F)
        C = twisted_complex(X, bundle)
    decs = C.modules()
    degrees = []
    for dec in decs:
        roots = {}
        symbolic = []
        for f in dec.invariant_factors:
            rs, cof = field_roots(f, spec)
            for a, e in rs:
                roots[a] = roots.get(a, 0) + e
            if cof.degree >= 1:
                symbolic.append(cof)
        degrees.append(DegreeReport(
            dec.degree, dec.free_rank, list(dec.invariant_factors),
            sorted(roots.items(), key=lambda p: _root_key(spec, p[0])),
            symbolic))
    report = NovikovReport(spec, degrees, decs)
    report.checked_at = _verify_generic_point(report, C)
    return report


def _verify_generic_point(report: NovikovReport, C):
    """Find an explicit non-jump point and confirm dims there = free ranks."""
    spec = report.spec
    jumps = set()
    for d in report.degrees:
        jumps.update(a for a, _ in d.jump_roots)
    a = _fresh_point(spec, jumps)
    if a is None:
        return None  # tiny field exhausted by jump points; nothing to verify
    dims = C.evaluate(a).cohomology_dims()
    expected = [d.b for d in report.degrees]
    if dims != expected:
        raise AssertionError(
            f"generic check failed at {spec.format(a)}: {dims} != {expected}")
    return a


def _fresh_point(spec, avoid):
    if spec.kind == "rationals":
        n = 2
        while Fraction(n) in avoid:
            n += 1
        return Fraction(n)
    for code in range(2, spec.order):
        a = spec.from_code(code)
        if a not in avoid:
            return a
    return None


@dataclass
class GenericityResult:
    ok: bool
    witness: tuple = None        # (degree, offending factor) when not ok

    def __bool__(self):
        return self.ok


def xi_generic_test(X: SimplicialComplex, z: IntegralCocycle,
                    F: FlatBundle, spec: FieldSpec = None) -> GenericityResult:
    """Is F generic along the rank-1 slice a^xi?  True iff tau = 1 is not a
    root of any torsion factor of the tau^xi (x) F module (then dim H(X;F)
    already equals the generic dimension of the family).

    This tests the one-parameter slice of the full bundle variety; for
    rank-1 classes the slice is the whole family.
    """
    if spec is None:
        spec = F.spec
    if z.is_zero():
        return GenericityResult(True)
    bundle = FlatBundle.laurent(spec, X, z).tensor(F)
    decs = twisted_complex(X, bundle).modules()
    one = spec.one()
    for dec in decs:
        for f in dec.invariant_factors:
            if spec.is_zero(f(one)):
                return GenericityResult(False, (dec.degree, f))
    return GenericityResult(True)
