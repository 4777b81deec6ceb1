"""Spectral pages of the one-parameter twist family, survivor classes,
and chain-level page differentials.

The twisted complex over k[tau] is recentered at tau = 1 (t = tau - 1),
where it restricts to the untwisted complex of X.  Its spectral pages are
computed two independent ways:

  * from the module decomposition: with m_j(i) the multiplicity of
    (tau - 1) in the j-th invariant factor of H^i over k[tau],

        dim E_r^i  = free(i) + #{j : m_j(i) >= r} + #{j : m_j(i+1) >= r}
        rank d_r^i = #{j : m_j(i+1) = r}

  * at the chain level: writing delta = sum_k t^k delta_k, an order-r
    cycle is a tuple (c_0, .., c_{r-1}) with

        sum_{a+b=l} delta_a(c_b) = 0   for l = 0 .. r-1,

    E_r^i is the space of achievable c_0 modulo
    im(delta_0) + {next-order defects of order-(r-1) cycles one degree
    down}, and d_r sends a cycle to its own next-order defect.

A class of H^i(X;k) survives to E_infinity iff it is in the image of
evaluation at tau = 1 from H^i(X; tau^xi); survivor bases carry truncated
k[t]-lifts as machine-checkable certificates.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import linalg
from .complexes import (CutPresentation, FlatBundle, GluedSpace,
                        IntegralCocycle, SimplicialComplex, TwistedComplex,
                        edge_vector, glue, twisted_complex, validate)
from .fields import FieldSpec
from .poly import Poly, root_multiplicity


@dataclass
class SpectralPage:
    r: int
    dims: list        # dim E_r^i per degree i
    d_ranks: list     # rank d_r^i per degree i (last entry always 0)
    stabilized: bool = False

    def __repr__(self):
        tag = " (stable)" if self.stabilized else ""
        return f"SpectralPage(r={self.r}, dims={self.dims}, d_ranks={self.d_ranks}{tag})"


def pages_from_modules(decs, spec: FieldSpec, max_page: int = None):
    """Pages of the family recentered at tau = 1, from the k[tau] modules."""
    one = spec.one()
    mults = []
    for dec in decs:
        mults.append(sorted(root_multiplicity(f, one)
                            for f in dec.invariant_factors))
    n = len(decs)
    big = max((m for ms in mults for m in ms), default=0)
    last = big + 1 if max_page is None else min(big + 1, max_page)
    pages = []
    for r in range(1, last + 1):
        dims, ranks = [], []
        for i in range(n):
            here = mults[i]
            above = mults[i + 1] if i + 1 < n else []
            dims.append(decs[i].free_rank
                        + sum(1 for m in here if m >= r)
                        + sum(1 for m in above if m >= r))
            ranks.append(sum(1 for m in above if m == r))
        pages.append(SpectralPage(r, dims, ranks, stabilized=(r > big)))
    return pages


def _laurent_complex(X, z, F=None, spec=None):
    if spec is None:
        spec = F.spec if F is not None else FieldSpec.rationals()
    diag = validate(X, z, [F] if F is not None else [])
    if not diag.ok:
        raise ValueError(f"invalid input: {diag.issues[0]}")
    bundle = FlatBundle.laurent(spec, X, z)
    if F is not None:
        bundle = bundle.tensor(F)
    return twisted_complex(X, bundle), spec


def spectral_pages(X: SimplicialComplex, z: IntegralCocycle, F: FlatBundle = None,
                   spec: FieldSpec = None, max_page: int = None):
    """Pages E_r of the tau^xi (x) F family, emitted until stabilization."""
    C, spec = _laurent_complex(X, z, F, spec)
    return pages_from_modules(C.modules(), spec, max_page)


# ---------------------------------------------------------------------------
# chain level


def recentered_layers(C: TwistedComplex):
    """Coefficient matrices of delta = sum_k t^k delta_k at t = tau - 1.

    Returns per degree q a dict {k: sparse rows of delta_k over the field};
    degrees past the top map to an empty dict.
    """
    if C.ring != "poly":
        raise ValueError("recentering needs a k[tau] complex")
    spec = C.spec
    one = spec.one()
    layers = []
    for q in range(len(C.sizes)):
        out = {}
        if q < len(C.diffs):
            for i, row in enumerate(C.diffs[q]):
                for j, p in row.items():
                    for k, c in enumerate(p.compose_shift(one).coeffs):
                        if not spec.is_zero(c):
                            mat = out.setdefault(
                                k, [dict() for _ in range(C.sizes[q + 1])])
                            mat[i][j] = c
        layers.append(out)
    return layers


def _layer_rows(layers, q, k, nrows):
    mat = layers[q].get(k)
    return mat if mat is not None else None


def _apply(spec, rows, vec):
    out = []
    for row in rows:
        acc = spec.zero()
        for j, v in row.items():
            if not spec.is_zero(vec[j]):
                acc = spec.add(acc, spec.mul(v, vec[j]))
        out.append(acc)
    return out


class _ChainEngine:
    """Joint-system computations for the recentered deformation."""

    def __init__(self, C: TwistedComplex):
        self.spec = C.spec
        self.sizes = list(C.sizes)
        self.layers = recentered_layers(C)
        self._cycles = {}

    def _target(self, q):
        return self.sizes[q + 1] if q + 1 < len(self.sizes) else 0

    def cycle_basis(self, q, m):
        """Kernel basis of the order-m system in degree q: vectors of
        length m * dim C^q holding (c_0, .., c_{m-1})."""
        key = (q, m)
        if key in self._cycles:
            return self._cycles[key]
        spec, n, nt = self.spec, self.sizes[q], self._target(q)
        if nt == 0 or not self.layers[q]:
            basis = []
            for b in range(m * n):
                v = [spec.zero()] * (m * n)
                v[b] = spec.one()
                basis.append(v)
            self._cycles[key] = basis
            return basis
        rows = []
        for l in range(m):
            for i in range(nt):
                row = [spec.zero()] * (m * n)
                for k, mat in self.layers[q].items():
                    b = l - k
                    if 0 <= b < m:
                        for j, v in mat[i].items():
                            col = b * n + j
                            row[col] = spec.add(row[col], v)
                rows.append(row)
        basis = linalg.kernel_basis(spec, rows, m * n)
        self._cycles[key] = basis
        return basis

    def defect(self, q, vec, m):
        """Order-m coefficient of delta applied to (c_0..c_{m-1}): the
        element sum_{k>=1} delta_k(c_{m-k}) of C^{q+1}."""
        spec, n = self.spec, self.sizes[q]
        nt = self._target(q)
        out = [spec.zero()] * nt
        blocks = len(vec) // n if n else 0
        for k, mat in self.layers[q].items():
            b = m - k
            if k >= 1 and 0 <= b < blocks:
                piece = _apply(spec, mat, vec[b * n:(b + 1) * n])
                out = [spec.add(x, y) for x, y in zip(out, piece)]
        return out

    def denominator(self, q, r):
        """Subspace of C^q killed in E_r: im(delta_0) plus order-(r-1)
        defects from degree q-1."""
        spec = self.spec
        D = linalg.Subspace(spec, self.sizes[q])
        if q >= 1:
            n_prev = self.sizes[q - 1]
            mat0 = self.layers[q - 1].get(0)
            if mat0 is not None:
                for j in range(n_prev):
                    e = [spec.zero()] * n_prev
                    e[j] = spec.one()
                    D.add(_apply(spec, mat0, e))
            if r >= 2:
                for u in self.cycle_basis(q - 1, r - 1):
                    D.add(self.defect(q - 1, u, r - 1))
        return D

    def page(self, r):
        """(dims, d_ranks) of E_r."""
        dims, ranks = [], []
        for q in range(len(self.sizes)):
            cyc = self.cycle_basis(q, r)
            n = self.sizes[q]
            # dim E_r^q = dim(Zhat + D) - dim D
            D = self.denominator(q, r)
            dims.append(sum(1 for u in cyc if D.add(u[:n])))
            # rank d_r^q = growth of D^{q+1} by the defects of Z^q_r
            if q + 1 < len(self.sizes):
                Dn = self.denominator(q + 1, r)
                ranks.append(sum(1 for u in cyc
                                 if Dn.add(self.defect(q, u, r))))
            else:
                ranks.append(0)
        return dims, ranks


def chain_pages(C: TwistedComplex, max_page: int):
    """Pages computed from chain-level joint systems (independent oracle
    for pages_from_modules); emits pages r = 1..max_page."""
    eng = _ChainEngine(C)
    pages = []
    for r in range(1, max_page + 1):
        dims, ranks = eng.page(r)
        pages.append(SpectralPage(r, dims, ranks))
    if pages and all(v == 0 for v in pages[-1].d_ranks):
        pages[-1].stabilized = True
    return pages


@dataclass
class DrResult:
    r: int
    obstructed_at: int = None    # first unsolvable lifting step, if any
    value: list = None           # defect vector in C^{degree+1}
    zero_in_page: bool = None    # True iff the class vanishes in E_r^{degree+1}
    lift: list = None            # solved coefficients (c_0, .., c_{r-1})

    def __repr__(self):
        if self.obstructed_at is not None:
            return f"DrResult(obstructed at step {self.obstructed_at})"
        state = "zero" if self.zero_in_page else "nonzero"
        return f"DrResult(d_{self.r} class {state} in E_{self.r})"


def chain_level_dr(X: SimplicialComplex, z: IntegralCocycle, v, r: int,
                   F: FlatBundle = None, spec: FieldSpec = None,
                   degree: int = None) -> DrResult:
    """d_r of the cocycle v in C^i(X;k): solve the lifting equations
    sum_{a+b=l} delta_a(c_b) = 0 (c_0 = v) for l = 1..r-1, then return the
    order-r defect and whether it vanishes in E_r; an unsolvable step s
    reports obstruction (v already dies on page s)."""
    C, spec = _laurent_complex(X, z, F, spec)
    return chain_level_dr_complex(C, v, r, degree=degree)


def chain_level_dr_complex(C: TwistedComplex, v, r: int,
                           degree: int = None) -> DrResult:
    spec = C.spec
    vec = [getattr(x, "value", x) for x in v]
    if degree is None:
        cands = [q for q, n in enumerate(C.sizes) if n == len(vec)]
        if len(cands) != 1:
            raise ValueError("ambiguous degree; pass degree explicitly")
        degree = cands[0]
    eng = _ChainEngine(C)
    q, n = degree, C.sizes[degree]
    nt = eng._target(q)
    mat0 = eng.layers[q].get(0)
    if mat0 is not None and any(not spec.is_zero(x) for x in _apply(spec, mat0, vec)):
        raise ValueError("v is not a cocycle")
    lift = [vec]
    for step in range(1, r):
        # all lifting equations up to this step, solved jointly
        sol = _joint_lift(eng, q, vec, step)
        if sol is None:
            return DrResult(r, obstructed_at=step)
        lift = sol
    full = []
    for c in lift:
        full.extend(c)
    w = eng.defect(q, full, r)
    D = eng.denominator(q + 1, r) if q + 1 < len(C.sizes) else None
    zero = (D.contains(w) if D is not None
            else all(spec.is_zero(x) for x in w))
    return DrResult(r, value=w, zero_in_page=zero, lift=lift)


def _joint_lift(eng, q, vec, upto):
    """Solve all lifting equations l = 1..upto jointly for (c_1..c_upto);
    returns [c_0..c_upto] or None."""
    spec, n, nt = eng.spec, eng.sizes[q], eng._target(q)
    rows, rhs = [], []
    for l in range(1, upto + 1):
        for i in range(nt):
            row = [spec.zero()] * (upto * n)
            for k, mat in eng.layers[q].items():
                b = l - k
                if 1 <= b <= upto:
                    for j, v in mat[i].items():
                        col = (b - 1) * n + j
                        row[col] = spec.add(row[col], v)
            rows.append(row)
            kk = eng.layers[q].get(l)
            val = spec.zero()
            if kk is not None:
                val = _apply(spec, [kk[i]], vec)[0]
            rhs.append(spec.neg(val))
    sol = linalg.solve(spec, rows, rhs)
    if sol is None:
        return None
    out = [list(vec)]
    for b in range(upto):
        out.append(sol[b * n:(b + 1) * n])
    return out


# ---------------------------------------------------------------------------
# survivors


@dataclass
class SurvivorBasis:
    degree: int
    vectors: list        # cocycle representatives over k, echelon-independent
    certificates: list   # per vector: truncated t-coefficient vectors (c_0..)
    ambient_dim: int     # dim H^degree(X;k)
    lift_order: int

    @property
    def dim(self):
        return len(self.vectors)


def survivors(X: SimplicialComplex, z: IntegralCocycle, degree: int,
              F: FlatBundle = None, spec: FieldSpec = None,
              _complex: TwistedComplex = None) -> SurvivorBasis:
    """Basis of the image of H^degree(X; tau^xi (x) F) -> H^degree(X;k)
    under evaluation at tau = 1 (the classes surviving every page), with
    truncated k[t]-lift certificates."""
    if _complex is not None:
        C, spec = _complex, _complex.spec
    else:
        C, spec = _laurent_complex(X, z, F, spec)
    return survivors_from_complex(C, degree)


def survivors_from_complex(C: TwistedComplex, degree: int) -> SurvivorBasis:
    spec = C.spec
    one = spec.one()
    q = degree
    if q < 0 or q >= len(C.sizes):
        return SurvivorBasis(q, [], [], 0, 0)
    kernel_cols = C.kernel_basis(q)
    # coboundaries at tau = 1
    B = linalg.Subspace(spec, C.sizes[q])
    if q >= 1:
        for j in range(C.sizes[q - 1]):
            col = [spec.zero()] * C.sizes[q]
            for i, row in enumerate(C.diffs[q - 1]):
                p = row.get(j)
                if p is not None:
                    col[i] = p(one)
            B.add(col)
    b_dim = B.dim
    ambient = C.sizes[q] - b_dim - _rank_at_one(C, q)
    order = _lift_order(C, q)
    reps, certs = [], []
    for col in kernel_cols:
        at_one = [p(one) for p in col]
        if B.add(at_one):
            reps.append(at_one)
            certs.append(_truncated_lift(spec, col, order))
    return SurvivorBasis(q, reps, certs, ambient, order)


def _rank_at_one(C, q):
    if q >= len(C.diffs):
        return 0
    spec = C.spec
    one = spec.one()
    rows = []
    for row in C.diffs[q]:
        rows.append({j: v for j, v in
                     ((j, p(one)) for j, p in row.items())
                     if not spec.is_zero(v)})
    dense = [[r.get(j, spec.zero()) for j in range(C.sizes[q])] for r in rows]
    return linalg.rank(spec, dense)


def _lift_order(C, q):
    """Stabilization order 1 + max multiplicity of (tau - 1) among the
    invariant factors of degrees q and q+1."""
    decs = C.modules()
    one = C.spec.one()
    big = 0
    for qq in (q, q + 1):
        if 0 <= qq < len(decs):
            for f in decs[qq].invariant_factors:
                big = max(big, root_multiplicity(f, one))
    return big + 1


def _truncated_lift(spec, col, order):
    """First `order` t-coefficients of the kernel column recentered at
    tau = 1 + t; an exact lift, so every truncation satisfies the lifting
    equations to its length."""
    one = spec.one()
    shifted = [p.compose_shift(one) for p in col]
    coeffs = []
    for k in range(order):
        coeffs.append([(p.coeffs[k] if k <= p.degree else spec.zero())
                       for p in shifted])
    return coeffs


def certificate_defects(X: SimplicialComplex, z: IntegralCocycle, cert,
                        F: FlatBundle = None, spec: FieldSpec = None,
                        degree: int = None):
    """Residuals of the lifting equations for a truncated certificate:
    list over l = 0..len(cert)-1 of sum_{a+b=l} delta_a(c_b); all zero iff
    the certificate is valid to its stated order."""
    C, spec = _laurent_complex(X, z, F, spec)
    n = len(cert[0])
    cands = [qq for qq, s in enumerate(C.sizes) if s == n]
    q = degree if degree is not None else cands[0]
    if q not in cands:
        raise ValueError("certificate length does not match the degree")
    eng = _ChainEngine(C)
    out = []
    for l in range(len(cert)):
        nt = eng._target(q)
        acc = [spec.zero()] * nt
        for k, mat in eng.layers[q].items():
            b = l - k
            if 0 <= b < len(cert):
                piece = _apply(spec, mat, cert[b])
                acc = [spec.add(x, y) for x, y in zip(acc, piece)]
        out.append(acc)
    return out


# ---------------------------------------------------------------------------
# support criterion


@dataclass
class SupportCertificate:
    degree: int
    vector: list          # the cocycle on the glued space
    lift: list            # k[tau]-cocycle of the twisted complex (Poly entries)
    note: str = "support disjoint from the seam"


def support_criterion(cut: CutPresentation, c, degree: int,
                      spec: FieldSpec = None):
    """Sufficient survivor test: a cocycle on the glued space whose support
    avoids the seam lifts verbatim to a k[tau]-cocycle of the twisted
    complex.  Returns a SupportCertificate, or None when some supporting
    simplex touches the seam (inconclusive, not a refutation)."""
    if spec is None:
        spec = cut.bundle().spec if cut.F0 is not None else FieldSpec.rationals()
    glued = cut if isinstance(cut, GluedSpace) else glue(cut)
    X, z, seam = glued.X, glued.z, glued.seam_vertices
    if isinstance(c, IntegralCocycle):
        if degree != 1:
            raise ValueError("an integral cocycle is a degree-1 cochain")
        c = edge_vector(spec, X, c)
    vec = [getattr(x, "value", x) for x in c]
    if len(vec) != X.count(degree):
        raise ValueError("cochain length does not match the glued space")
    C = twisted_complex(X, FlatBundle.laurent(spec, X, z))
    # cocycle check at tau = 1
    one = spec.one()
    if degree < len(C.diffs):
        for row in C.diffs[degree]:
            acc = spec.zero()
            for j, p in row.items():
                acc = spec.add(acc, spec.mul(p(one), vec[j]))
            if not spec.is_zero(acc):
                raise ValueError("c is not a cocycle")
    for i, s in enumerate(X.simplices(degree)):
        if not spec.is_zero(vec[i]) and any(v in seam for v in s):
            return None
    # lift: rescale by the vertex potential of the k[tau] basis
    u = C.potential
    lift = []
    for i, s in enumerate(X.simplices(degree)):
        if spec.is_zero(vec[i]):
            lift.append(Poly.zero(spec))
        else:
            lift.append(Poly(spec, (spec.zero(),) * u[s[0]] + (vec[i],)))
    if degree < len(C.diffs):
        for row in C.diffs[degree]:
            acc = Poly.zero(spec)
            for j, p in row.items():
                acc = acc + p * lift[j]
            if not acc.is_zero():
                raise AssertionError("seam-avoiding lift failed to close")
    return SupportCertificate(degree, vec, lift)
