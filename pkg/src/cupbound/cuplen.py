"""Cup products with local coefficients, the cut-model product, and
cup-length lower bounds on the number of critical points.

The cup product of cochains is front-face/back-face with the second
factor transported to the leading vertex along its own bundle:

    (u cup v)(v0..v_{p+q}) = u(v0..v_p) (x) g_F(v0, v_p) v(v_p..v_{p+q}).

cuplength_massey chains survivor classes: W_2 is spanned by products of
two survivors, then each further factor comes from positive-degree
cohomology of the supplied bundles; the longest nonzero chain length m
certifies m - 1 critical points for any closed 1-form in the class.

cuplength_generic works over k[tau]: the first factor is twisted by
tau^xi, the second by tau^-xi, so products land in an untwisted complex
with polynomial coefficients; nonvanishing is a polynomial identity,
valid for all parameter values outside an explicit finite root set.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from . import linalg
from .complexes import (CutPresentation, FlatBundle, IntegralCocycle,
                        SimplicialComplex, _pullback_matrix, twisted_complex,
                        validate)
from .fields import FieldSpec
from .massey import survivors_from_complex
from .novikov import field_roots, xi_generic_test
from .poly import LaurentPoly, Poly, poly_gcd


# ---------------------------------------------------------------------------
# cup product


def _identity_rows(spec, d):
    return [[spec.one() if i == j else spec.zero() for j in range(d)]
            for i in range(d)]


def cup(X: SimplicialComplex, u, p: int, Fu: FlatBundle,
        v, q: int, Fv: FlatBundle):
    """Front/back cup product of field-valued cochains; returns the product
    cochain (length count(p+q) * rank) and its bundle Fu (x) Fv."""
    spec = Fu.spec
    if Fv.spec != spec:
        raise ValueError("mismatched base fields")
    ru, rv = Fu.rank, Fv.rank
    Fw = Fu.tensor(Fv)
    d = p + q
    out = [spec.zero()] * (X.count(d) * ru * rv)
    for si, s in enumerate(X.simplices(d)):
        front, back = s[:p + 1], s[p:]
        fi, bi = X.index(front), X.index(back)
        uf = u[fi * ru:(fi + 1) * ru]
        vb = v[bi * rv:(bi + 1) * rv]
        T = Fv.matrix(s[0], s[p]) if p else _identity_rows(spec, rv)
        tv = [_dot(spec, T[r], vb) for r in range(rv)]
        base = si * ru * rv
        for a in range(ru):
            ua = uf[a]
            if spec.is_zero(ua):
                continue
            for b in range(rv):
                out[base + a * rv + b] = spec.mul(ua, tv[b])
    return out, Fw


def _dot(spec, row, vec):
    acc = spec.zero()
    for x, y in zip(row, vec):
        acc = spec.add(acc, spec.mul(x, y))
    return acc


def cup_laurent(X: SimplicialComplex, u, p: int, Fu: FlatBundle,
                v, q: int, Fv: FlatBundle):
    """Cup product of LaurentPoly-valued cochains of tau-twisted bundles;
    the transport of the second factor contributes tau^{z_v(v0, v_p)}."""
    spec = Fu.spec
    ru, rv = Fu.rank, Fv.rank
    Fw = Fu.tensor(Fv)
    d = p + q
    zero = LaurentPoly.zero(spec)
    out = [zero] * (X.count(d) * ru * rv)
    for si, s in enumerate(X.simplices(d)):
        front, back = s[:p + 1], s[p:]
        fi, bi = X.index(front), X.index(back)
        uf = u[fi * ru:(fi + 1) * ru]
        vb = v[bi * rv:(bi + 1) * rv]
        T = Fv.matrix(s[0], s[p]) if p else _identity_rows(spec, rv)
        tw = LaurentPoly.t_power(spec, Fv.exponent(s[0], s[p])) if p else None
        base = si * ru * rv
        for b in range(rv):
            tvb = zero
            for c in range(rv):
                if not spec.is_zero(T[b][c]) and not vb[c].is_zero():
                    tvb = tvb + vb[c] * LaurentPoly.const(spec, T[b][c])
            if tw is not None and not tvb.is_zero():
                tvb = tvb * tw
            for a in range(ru):
                if not uf[a].is_zero():
                    out[base + a * rv + b] = uf[a] * tvb
    return out, Fw


# ---------------------------------------------------------------------------
# cut-model product


def psi_product(cut: CutPresentation, c, cp, t):
    """Product on the cylinder complex at parameter t != -1:

        psi_t((a, b) (x) (a', b')) =
            (a cup a',
             (-1)^|a| (1+t) i-*(a) cup b'  +  b cup i+*(a'))

    for rank-1 coefficient data; degrees |(a, b)| = (p, p-1)."""
    spec = cut.bundle().spec
    if cut.bundle().rank != 1:
        raise ValueError("cut-model product implemented for rank-1 bundles")
    tval = getattr(t, "value", t)
    unit = spec.add(spec.one(), tval)
    if spec.is_zero(unit):
        raise ValueError("parameter t = -1 makes the deformation unit vanish")
    (alpha, p), (beta, _) = c
    (alphap, pp), (betap, _) = cp
    FN = cut.F0
    FV = _fv(cut)
    aa, _ = cup(cut.N, alpha, p, FN, alphap, pp, FN)
    ima = _pull(cut, cut.iminus, p, alpha, compose_sigma=False)
    ipa = _pull(cut, cut.iplus, pp, alphap, compose_sigma=True)
    left, _ = cup(cut.V, ima, p, FV, betap, pp - 1, FV)
    right, _ = cup(cut.V, beta, p - 1, FV, ipa, pp, FV)
    sgn = spec.one() if p % 2 == 0 else spec.neg(spec.one())
    coef = spec.mul(sgn, unit)
    mixed = [spec.add(spec.mul(coef, x), y) for x, y in zip(left, right)]
    return (aa, p + pp), (mixed, p + pp - 1)


def _fv(cut):
    from .complexes import _restrict_bundle
    return _restrict_bundle(cut)


def _pull(cut, emb, q, vec, compose_sigma):
    spec = cut.bundle().spec
    rows = _pullback_matrix(cut, emb, q, compose_sigma)
    out = []
    for row in rows:
        acc = spec.zero()
        for j, v in row.items():
            acc = spec.add(acc, spec.mul(v, vec[j]))
        out.append(acc)
    return out


def deformation_differential(cut: CutPresentation, c, t):
    """delta_t(alpha, beta) on the cylinder complex at tau = 1 + t."""
    spec = cut.bundle().spec
    tval = getattr(t, "value", t)
    unit = spec.add(spec.one(), tval)
    (alpha, p), (beta, _) = c
    CN = twisted_complex(cut.N, cut.F0)
    CV = twisted_complex(cut.V, _fv(cut))
    da = (_apply_rows(spec, CN.diffs[p], alpha)
          if p < len(CN.diffs) else [])
    ipa = _pull(cut, cut.iplus, p, alpha, compose_sigma=True)
    ima = _pull(cut, cut.iminus, p, alpha, compose_sigma=False)
    seam = [spec.sub(x, spec.mul(unit, y)) for x, y in zip(ipa, ima)]
    if p - 1 < len(CV.diffs) and p >= 1:
        db = _apply_rows(spec, CV.diffs[p - 1], beta)
        seam = [spec.sub(x, y) for x, y in zip(seam, db)]
    return (da, p + 1), (seam, p)


def _apply_rows(spec, rows, vec):
    out = []
    for row in rows:
        acc = spec.zero()
        for j, v in row.items():
            if not spec.is_zero(vec[j]):
                acc = spec.add(acc, spec.mul(v, vec[j]))
        out.append(acc)
    return out


# ---------------------------------------------------------------------------
# cup-length reports


@dataclass
class WitnessFactor:
    label: str
    degree: int
    bundle: str
    cochain: list = None
    bundle_ref: object = None    # FlatBundle, for re-verification only


@dataclass
class CupLengthReport:
    m: int
    critical_bound: int
    mode: str
    witness: list = dc_field(default_factory=list)
    excluded: list = dc_field(default_factory=list)   # parameter values to avoid
    notes: list = dc_field(default_factory=list)

    def degrees(self):
        return [w.degree for w in self.witness]


def _bundle_key(F: FlatBundle):
    mats = tuple(sorted((e, tuple(map(tuple, M))) for e, M in F.mats.items()))
    return (F.rank, mats)


def cohomology_basis(X: SimplicialComplex, F: FlatBundle, q: int):
    """Cocycle representatives of a basis of H^q(X; F)."""
    spec = F.spec
    C = twisted_complex(X, F)
    if q < 0 or q >= len(C.sizes):
        return []
    n = C.sizes[q]
    dq = C.dense(q) if q < len(C.diffs) else []
    kernel = (linalg.kernel_basis(spec, dq, n) if dq
              else [[spec.one() if i == j else spec.zero() for j in range(n)]
                    for i in range(n)])
    B = linalg.Subspace(spec, n)
    if q >= 1:
        prev = C.dense(q - 1)
        for j in range(C.sizes[q - 1]):
            B.add([prev[i][j] for i in range(n)])
    return [vec for vec in kernel if B.add(vec)]


class _ClassSpan:
    """Span of cohomology classes in a fixed (degree, bundle) slot, stored
    as cochains reduced modulo coboundaries."""

    def __init__(self, X, F, q):
        spec = F.spec
        self.q = q
        self.F = F
        n = X.count(q) * F.rank
        self.space = linalg.Subspace(spec, n)
        C = twisted_complex(X, F)
        if q >= 1 and q - 1 < len(C.diffs):
            prev = C.dense(q - 1)
            for j in range(C.sizes[q - 1]):
                self.space.add([prev[i][j] for i in range(n)])
        self.base = self.space.dim
        self.members = []   # (cochain, trail) for witness back-tracking

    def add(self, vec, trail):
        if self.space.add(vec):
            self.members.append((list(vec), trail))
            return True
        return False

    @property
    def dim(self):
        return self.space.dim - self.base


def _survivor_sets(X, z, spec, strict_dual, Cp=None):
    from .massey import _laurent_complex
    if Cp is None:
        Cp, _ = _laurent_complex(X, z, spec=spec)
    firsts, seconds = {}, {}
    for q in range(X.dim + 1):
        firsts[q] = survivors_from_complex(Cp, q)
    if strict_dual and not z.is_zero():
        Cm, _ = _laurent_complex(X, -z, spec=spec)
        for q in range(X.dim + 1):
            seconds[q] = survivors_from_complex(Cm, q)
    else:
        seconds = firsts
    return firsts, seconds


def cuplength_massey(X: SimplicialComplex, z: IntegralCocycle,
                     extra_bundles=(), spec: FieldSpec = None,
                     strict_dual: bool = False,
                     _complex=None) -> CupLengthReport:
    """Certified lower bound m for the xi-cup-length: two survivor factors,
    then factors from positive-degree cohomology of the trivial and the
    supplied bundles; critical_bound = max(m-1, 0)."""
    if spec is None:
        spec = extra_bundles[0].spec if extra_bundles else FieldSpec.rationals()
    diag = validate(X, z, list(extra_bundles))
    if not diag.ok:
        raise ValueError(f"invalid input: {diag.issues[0]}")
    firsts, seconds = _survivor_sets(X, z, spec, strict_dual, Cp=_complex)
    triv = FlatBundle.trivial(spec, X)
    mode = "massey" + ("/strict-dual" if strict_dual else "")
    have_survivors = any(s.dim for s in firsts.values())
    if not have_survivors:
        return CupLengthReport(0, 0, mode,
                               notes=["no survivor classes in any degree"])
    # W_2: products of two survivors (both factors carry the trivial bundle)
    spans = {}
    for p, s1 in firsts.items():
        for q, s2 in seconds.items():
            if p + q > X.dim:
                continue
            for i1, v1 in enumerate(s1.vectors):
                for i2, v2 in enumerate(s2.vectors):
                    w, Fw = cup(X, v1, p, triv, v2, q, triv)
                    trail = [WitnessFactor(f"survivor[{p}][{i1}]", p,
                                           "trivial", v1, triv),
                             WitnessFactor(f"survivor*[{q}][{i2}]", q,
                                           "trivial", v2, triv)]
                    _span_for(spans, X, Fw, p + q).add(w, trail)
    return _iterate_spans(X, z, spans, extra_bundles, triv, spec, mode,
                          field_path=True)


def _span_for(spans, X, F, q):
    key = (q, _bundle_key(F))
    if key not in spans:
        spans[key] = _ClassSpan(X, F, q)
    return spans[key]


def _iterate_spans(X, z, spans, extra_bundles, triv, spec, mode,
                   field_path=True, laurent_state=None):
    """Shared W-iteration: multiply the current span layer by positive-degree
    cohomology classes of the trivial + extra bundles."""
    bundles = [("trivial", triv)] + [(b.name or f"extra{i}", b)
                                     for i, b in enumerate(extra_bundles)]
    hclasses = []
    for bname, F in bundles:
        for q in range(1, X.dim + 1):
            for i, h in enumerate(cohomology_basis(X, F, q)):
                hclasses.append((f"H^{q}({bname})[{i}]", q, F, h))
    layer = spans
    best = None
    steps = 0
    while any(sp.dim for sp in layer.values()):
        best = layer
        nxt = {}
        for (q, _), sp in layer.items():
            if sp.dim == 0:
                continue
            for w, trail in sp.members:
                for hname, hq, Fh, h in hclasses:
                    if q + hq > X.dim:
                        continue
                    if field_path:
                        prod, Fw = cup(X, w, q, sp.F, h, hq, Fh)
                    else:
                        hl = [LaurentPoly.const(spec, x) for x in h]
                        prod, Fw = cup_laurent(X, w, q, sp.F, hl, hq, Fh)
                    new_trail = trail + [WitnessFactor(hname, hq,
                                                       Fh.name or "bundle",
                                                       h, Fh)]
                    if field_path:
                        _span_for(nxt, X, Fw, q + hq).add(prod, new_trail)
                    else:
                        _laurent_span_for(nxt, X, Fw, q + hq,
                                          laurent_state).add(prod, new_trail)
        layer = nxt
        steps += 1
    if best is None:
        return CupLengthReport(1, 0, mode,
                               notes=["survivors exist but all pairwise "
                                      "products vanish; no bound"])
    m = 2 + (steps - 1)
    if not z.is_zero() and m > X.dim:
        raise AssertionError(
            f"cup-length bound {m} exceeds dim X = {X.dim} for nonzero xi")
    witness = _first_witness(best)
    report = CupLengthReport(m, max(m - 1, 0), mode, witness=witness)
    report._final_layer = best
    _verify_witness(X, spec, witness, field_path, report)
    return report


def _first_witness(layer):
    for key in sorted(layer, key=lambda k: (k[0], repr(k[1]))):
        sp = layer[key]
        if sp.dim:
            return list(sp.members[0][1])
    return []


def _verify_witness(X, spec, witness, field_path, report):
    """Recompute the witness product from raw cochains and confirm the
    class is nonzero (independent reduction path)."""
    if not witness:
        return
    if not field_path or any(w.cochain is None or w.bundle_ref is None
                             for w in witness):
        report.notes.append("witness verified within the k[tau] reduction")
        return
    w, F, q = list(witness[0].cochain), witness[0].bundle_ref, witness[0].degree
    for factor in witness[1:]:
        w, F = cup(X, w, q, F, factor.cochain, factor.degree,
                   factor.bundle_ref)
        q += factor.degree
    n = X.count(q) * F.rank
    B = linalg.Subspace(spec, n)
    C = twisted_complex(X, F)
    if q >= 1 and q - 1 < len(C.diffs):
        prev = C.dense(q - 1)
        for j in range(C.sizes[q - 1]):
            B.add([prev[i][j] for i in range(n)])
    if not B.add(w):
        raise AssertionError("witness product re-verification found a "
                             "vanishing class")
    report.notes.append("witness product re-verified nonzero")


# ---------------------------------------------------------------------------
# generic-bundle mode over k[tau]


class _LaurentSpan:
    """Span over k(tau) of class coordinates (Poly entries), fraction-free."""

    def __init__(self, spec, n):
        self.spec = spec
        self.n = n
        self.rows = []      # (pivot, Poly vector)
        self.members = []

    def _reduce(self, vec):
        spec = self.spec
        for piv, row in self.rows:
            if piv < len(vec) and not vec[piv].is_zero():
                a, b = row[piv], vec[piv]
                vec = [x * a - row[i] * b for i, x in enumerate(vec)]
        return _content_normalize(spec, vec)

    def add_vector(self, vec):
        vec = self._reduce(list(vec))
        for piv in range(len(vec)):
            if not vec[piv].is_zero():
                self.rows.append((piv, vec))
                self.rows.sort(key=lambda r: r[0])
                return True
        return False

    @property
    def dim(self):
        return len(self.rows)


def _content_normalize(spec, vec):
    g = None
    for p in vec:
        if not p.is_zero():
            g = p if g is None else poly_gcd(g, p)
    if g is None or g.degree <= 0:
        return vec
    from .poly import poly_divmod
    return [poly_divmod(p, g)[0] if not p.is_zero() else p for p in vec]


class _LaurentClassSpan:
    """Class span for Poly-valued cochains in an untwisted ambient complex:
    coboundaries are constant, so classes project coefficient-wise."""

    def __init__(self, X, F, q):
        spec = F.spec
        self.q = q
        self.F = F
        self.spec = spec
        n = X.count(q) * F.rank
        self.cobounds = linalg.Subspace(spec, n)
        C = twisted_complex(X, _field_part(F, X))
        if q >= 1 and q - 1 < len(C.diffs):
            prev = C.dense(q - 1)
            for j in range(C.sizes[q - 1]):
                self.cobounds.add([prev[i][j] for i in range(n)])
        self.span = _LaurentSpan(spec, n)
        self.members = []

    def project(self, vec):
        """Reduce each tau-coefficient against the coboundary subspace."""
        spec = self.spec
        polys = [_as_poly(spec, x) for x in vec]
        deg = max((p.degree for p in polys), default=-1)
        out = [Poly.zero(spec)] * len(polys)
        for k in range(deg + 1):
            coeff = [(p.coeffs[k] if k <= p.degree else spec.zero())
                     for p in polys]
            red = self.cobounds.reduce(coeff)
            out = [o + Poly(spec, (spec.zero(),) * k + (c,))
                   for o, c in zip(out, red)]
        return out

    def add(self, vec, trail):
        proj = self.project(vec)
        if self.span.add_vector(proj):
            self.members.append((list(vec), trail))
            return True
        return False

    @property
    def dim(self):
        return self.span.dim


def _as_poly(spec, x):
    if isinstance(x, LaurentPoly):
        if x.val < 0:
            raise ValueError("negative tau-valuation after clearing")
        return x.as_poly()
    if isinstance(x, Poly):
        return x
    return Poly.const(spec, x)


def _field_part(F: FlatBundle, X) -> FlatBundle:
    return FlatBundle(F.spec, X, F.rank, F.mats, None, F.name)


def _laurent_span_for(spans, X, F, q, _state=None):
    key = (q, _bundle_key(F))
    if key not in spans:
        spans[key] = _LaurentClassSpan(X, F, q)
    return spans[key]


def _clear_valuation(spec, vec):
    """Multiply a LaurentPoly vector by tau^N so every entry is polynomial."""
    shift = 0
    for x in vec:
        if isinstance(x, LaurentPoly) and not x.is_zero():
            shift = min(shift, x.val)
    if shift == 0:
        return vec
    t = LaurentPoly.t_power(spec, -shift)
    return [x * t if isinstance(x, LaurentPoly) and not x.is_zero() else x
            for x in vec]


def _laurent_kernel_classes(X, z, F, spec):
    """Per degree: generators of H^q over k[tau] as unrescaled Laurent
    cochains of the tau^z (x) F system, modulo nothing (kernel gens)."""
    bundle = FlatBundle.laurent(spec, X, z)
    if F is not None:
        bundle = bundle.tensor(F)
    C = twisted_complex(X, bundle)
    out = {}
    u = C.potential
    rank = C.rank
    for q in range(X.dim + 1):
        cols = C.kernel_basis(q)
        gens = []
        for col in cols:
            vec = []
            for i, p in enumerate(col):
                lead = X.simplices(q)[i // rank][0]
                vec.append(LaurentPoly(p, -u[lead]))
            gens.append(vec)
        out[q] = (gens, bundle)
    return out


def cuplength_generic(X: SimplicialComplex, z: IntegralCocycle,
                      E1: FlatBundle, E2: FlatBundle, extra_bundles=(),
                      spec: FieldSpec = None) -> CupLengthReport:
    """Lower bound via generic-bundle products over k[tau]: first factor
    from the tau^xi (x) E1 family, second from tau^-xi (x) E2; the product
    is untwisted with polynomial coefficients and its class is nonzero for
    every parameter outside the reported excluded roots."""
    if spec is None:
        spec = E1.spec
    diag = validate(X, z, [E1, E2, *extra_bundles])
    if not diag.ok:
        raise ValueError(f"invalid input: {diag.issues[0]}")
    g1 = xi_generic_test(X, z, E1, spec)
    if not g1:
        raise ValueError(f"E1 is not xi-generic in degree {g1.witness[0]}")
    g2 = xi_generic_test(X, -z, E2, spec)
    if not g2:
        raise ValueError(f"E2 is not xi-generic in degree {g2.witness[0]}")
    mode = "generic-bundle"
    triv = FlatBundle.trivial(spec, X)
    fam1 = _laurent_kernel_classes(X, z, E1, spec)
    fam2 = _laurent_kernel_classes(X, -z, E2, spec)
    excluded = _family_jump_roots(X, z, E1, E2, spec)
    spans = {}
    for p, (gens1, B1) in fam1.items():
        for q, (gens2, B2) in fam2.items():
            if p + q > X.dim:
                continue
            for i1, v1 in enumerate(gens1):
                for i2, v2 in enumerate(gens2):
                    w, Fw = cup_laurent(X, v1, p, B1, v2, q, B2)
                    if Fw.twist is not None and Fw.twist.values:
                        raise AssertionError("twists failed to cancel")
                    w = _clear_valuation(spec, w)
                    trail = [WitnessFactor(f"H^{p}(tau^xi(x)E1)[{i1}]", p,
                                           E1.name or "E1", None),
                             WitnessFactor(f"H^{q}(tau^-xi(x)E2)[{i2}]", q,
                                           E2.name or "E2", None)]
                    _laurent_span_for(spans, X, Fw, p + q).add(w, trail)
    report = _iterate_spans(X, z, spans, extra_bundles, triv, spec, mode,
                            field_path=False)
    if report.m >= 2:
        report.excluded = excluded
        report.notes.append(
            "bound holds for all monodromy parameters except the excluded roots")
        _generic_excluded_from_witness(X, spec, report._final_layer, report)
    return report


def _family_jump_roots(X, z, E1, E2, spec):
    """Parameter values where either twisted family degenerates."""
    from .massey import _laurent_complex
    roots = []
    for zz, F in ((z, E1), (-z, E2)):
        bundle = FlatBundle.laurent(spec, X, zz)
        if F is not None:
            bundle = bundle.tensor(F)
        decs = twisted_complex(X, bundle).modules()
        for dec in decs:
            for f in dec.invariant_factors:
                for a, _ in field_roots(f, spec)[0]:
                    if a not in roots:
                        roots.append(a)
    return roots


def _generic_excluded_from_witness(X, spec, spans, report):
    """Add the roots where the witness product class itself evaluates into
    the coboundaries: common roots of the projected class coordinates."""
    for sp in spans.values():
        if isinstance(sp, _LaurentClassSpan) and sp.members:
            proj = sp.project(sp.members[0][0])
            g = None
            for p in proj:
                if not p.is_zero():
                    g = p if g is None else poly_gcd(g, p)
            if g is not None and g.degree >= 1:
                for a, _ in field_roots(g, spec)[0]:
                    if a not in report.excluded:
                        report.excluded.append(a)
            break
