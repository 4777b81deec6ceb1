"""Simplicial complexes, integral 1-cocycles, flat bundles, and the twisted
and deformation cochain complexes built from them.

Cochains are ordered-simplicial: a q-cochain assigns to each q-simplex
(written with strictly increasing vertices) a vector in the fiber over its
leading vertex.  The coboundary twists only the leading face:

    (delta c)(v0..v_{q+1}) = g(v0 v1) * c(v1..v_{q+1})
                             + sum_{i>=1} (-1)^i c(v0..v_i^..v_{q+1})

so that delta^2 = 0 is exactly edge flatness of the bundle.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import linalg
from .fields import FieldElem, FieldSpec
from .poly import LaurentPoly, Poly


class SimplicialComplex:
    """Finite abstract simplicial complex with vertices 0..n-1.

    Simplices are stored per dimension as sorted tuples in lexicographic
    order; indices into those lists are the coordinates used by every
    cochain and matrix in the library.
    """

    def __init__(self, n_vertices: int, simplices):
        self.n_vertices = n_vertices
        by_dim = {}
        for s in simplices:
            t = tuple(s)
            if list(t) != sorted(set(t)):
                raise ValueError(f"simplex {t} is not strictly increasing")
            if t and (t[0] < 0 or t[-1] >= n_vertices):
                raise ValueError(f"simplex {t} has out-of-range vertices")
            by_dim.setdefault(len(t) - 1, set()).add(t)
        self.by_dim = {d: sorted(by_dim.get(d, ())) for d in sorted(by_dim)}
        if 0 not in self.by_dim or len(self.by_dim[0]) != n_vertices:
            # vertices are always implicitly present
            self.by_dim[0] = [(v,) for v in range(n_vertices)]
            self.by_dim = {d: self.by_dim[d] for d in sorted(self.by_dim)}
        self._index = {d: {s: i for i, s in enumerate(lst)}
                       for d, lst in self.by_dim.items()}

    @classmethod
    def from_facets(cls, n_vertices: int, facets):
        """Close the given simplices downward under taking faces."""
        from itertools import combinations
        closure = set()
        for f in facets:
            t = tuple(sorted(set(f)))
            for k in range(1, len(t) + 1):
                closure.update(combinations(t, k))
        return cls(n_vertices, closure)

    @property
    def dim(self) -> int:
        return max(self.by_dim)

    def simplices(self, d: int):
        return self.by_dim.get(d, [])

    def count(self, d: int) -> int:
        return len(self.by_dim.get(d, ()))

    def index(self, simplex) -> int:
        t = tuple(simplex)
        return self._index[len(t) - 1][t]

    def has(self, simplex) -> bool:
        t = tuple(simplex)
        return t in self._index.get(len(t) - 1, ())

    @property
    def edges(self):
        return self.by_dim.get(1, [])

    def euler_characteristic(self) -> int:
        return sum((-1) ** d * len(lst) for d, lst in self.by_dim.items())

    def closure_violations(self):
        """Faces missing from the complex (empty iff closed)."""
        out = []
        for d, lst in self.by_dim.items():
            if d == 0:
                continue
            for s in lst:
                for i in range(len(s)):
                    f = s[:i] + s[i + 1:]
                    if not self.has(f):
                        out.append((s, f))
        return out

    def __repr__(self):
        counts = ", ".join(f"{len(l)}x{d}" for d, l in self.by_dim.items())
        return f"SimplicialComplex({self.n_vertices} vertices; {counts})"


class IntegralCocycle:
    """Integer weights on oriented edges (u < v); z(v,u) = -z(u,v)."""

    def __init__(self, values):
        self.values = {e: int(w) for e, w in values.items() if w}

    def __call__(self, u: int, v: int) -> int:
        if u < v:
            return self.values.get((u, v), 0)
        return -self.values.get((v, u), 0)

    def is_zero(self) -> bool:
        return not self.values

    def __neg__(self):
        return IntegralCocycle({e: -w for e, w in self.values.items()})

    def scaled(self, c: int):
        return IntegralCocycle({e: c * w for e, w in self.values.items()})

    def content(self) -> int:
        """gcd of all values (0 for the zero cocycle)."""
        from math import gcd
        g = 0
        for w in self.values.values():
            g = gcd(g, w)
        return g

    def violations(self, X: SimplicialComplex):
        """Triangles where z(vw) - z(uw) + z(uv) != 0."""
        bad = []
        for (u, v, w) in X.simplices(2):
            if self(v, w) - self(u, w) + self(u, v) != 0:
                bad.append((u, v, w))
        return bad

    def __repr__(self):
        return f"IntegralCocycle({self.values})"


def edge_vector(spec: FieldSpec, X: SimplicialComplex, z: IntegralCocycle):
    """The degree-1 cochain of z over the field, indexed like X.edges."""
    return [spec.from_int(z(*e)) for e in X.edges]


def _matinv(spec: FieldSpec, M):
    n = len(M)
    aug = [list(M[i]) + [spec.one() if j == i else spec.zero()
                         for j in range(n)] for i in range(n)]
    R, pivots = linalg.rref(spec, aug)
    if pivots != list(range(n)):
        raise ValueError("singular bundle matrix")
    return [row[n:] for row in R]


def _matmat(spec, A, B):
    return linalg.matmul(spec, A, B)


def _identity(spec, d):
    return [[spec.one() if i == j else spec.zero() for j in range(d)]
            for i in range(d)]


def _kron(spec, A, B):
    da, db = len(A), len(B)
    out = []
    for i in range(da):
        for k in range(db):
            out.append([spec.mul(A[i][j], B[k][l])
                        for j in range(da) for l in range(db)])
    return out


class FlatBundle:
    """Local system of rank d given by edge matrices over the base field,
    optionally tensored with the Laurent line tau^z.

    mats[(u, v)] (u < v) transports the fiber at v to the fiber at u along
    the oriented edge; reversal uses the inverse.  When twist is set the
    full transport is tau^{z(uv)} * mats[(u,v)] over k[tau, tau^-1].
    """

    def __init__(self, spec: FieldSpec, X: SimplicialComplex, rank: int,
                 mats, twist: IntegralCocycle = None, name: str = ""):
        self.spec = spec
        self.X = X
        self.rank = rank
        self.mats = mats  # dict edge -> matrix, identity when absent
        self.twist = twist
        self.name = name

    @classmethod
    def trivial(cls, spec, X, rank=1, name="trivial"):
        return cls(spec, X, rank, {}, None, name)

    @classmethod
    def rank1(cls, spec, X, z: IntegralCocycle, a, name=""):
        """g(uv) = a^{z(uv)} over the base field; a invertible."""
        value = getattr(a, "value", a)
        if spec.is_zero(value):
            raise ValueError("monodromy base must be invertible")
        mats = {}
        for e in X.edges:
            w = z(*e)
            if w:
                mats[e] = [[spec.pow(value, w)]]
        return cls(spec, X, 1, mats, None, name or "a^xi")

    @classmethod
    def laurent(cls, spec, X, z: IntegralCocycle, name="tau^xi"):
        """The universal line tau^z over k[tau, tau^-1]."""
        return cls(spec, X, 1, {}, z, name)

    def matrix(self, u: int, v: int):
        """Field part of the transport along the oriented edge u -> v."""
        if u < v:
            M = self.mats.get((u, v))
            return M if M is not None else _identity(self.spec, self.rank)
        M = self.mats.get((v, u))
        return (_identity(self.spec, self.rank) if M is None
                else _matinv(self.spec, M))

    def exponent(self, u: int, v: int) -> int:
        return self.twist(u, v) if self.twist is not None else 0

    def tensor(self, other: "FlatBundle", name="") -> "FlatBundle":
        if other.spec != self.spec or other.X is not self.X:
            raise ValueError("tensor factors must share field and space")
        if self.twist is not None and other.twist is not None:
            zs = dict(self.twist.values)
            for e, w in other.twist.values.items():
                zs[e] = zs.get(e, 0) + w
            twist = IntegralCocycle(zs)
        else:
            twist = self.twist or other.twist
        mats = {}
        for e in set(self.mats) | set(other.mats):
            mats[e] = _kron(self.spec, self.matrix(*e), other.matrix(*e))
        rank = self.rank * other.rank
        if not mats and rank == 1:
            mats = {}
        return FlatBundle(self.spec, self.X, rank, mats, twist,
                          name or f"{self.name}(x){other.name}")

    def flatness_violations(self):
        bad = []
        spec = self.spec
        for (u, v, w) in self.X.simplices(2):
            left = self.matrix(u, w)
            right = _matmat(spec, self.matrix(u, v), self.matrix(v, w))
            if left != right:
                bad.append((u, v, w))
        if self.twist is not None:
            bad.extend(self.twist.violations(self.X))
        return bad

    def __repr__(self):
        kind = "Laurent" if self.twist is not None else "field"
        return f"FlatBundle({self.name or 'unnamed'}, rank {self.rank}, {kind})"


@dataclass
class Diagnostics:
    ok: bool
    issues: list


def validate(X: SimplicialComplex, z: IntegralCocycle = None,
             bundles=()) -> Diagnostics:
    """Check closure of X, the cocycle condition for z, and bundle flatness."""
    issues = []
    for s, f in X.closure_violations():
        issues.append(f"missing face {f} of simplex {s}")
    if z is not None:
        for e in z.values:
            if not X.has(e):
                issues.append(f"cocycle value on missing edge {e}")
        for t in z.violations(X):
            issues.append(f"cocycle condition fails on triangle {t}")
    for F in bundles:
        for t in F.flatness_violations():
            issues.append(f"bundle {F.name or '?'} not flat on {t}")
    return Diagnostics(not issues, issues)


class TwistedComplex:
    """A finite cochain complex over the base field or over k[tau].

    diffs[q] is the matrix of delta_q : C^q -> C^{q+1} stored as sparse rows
    (dict col -> entry); entries are raw field values (ring "field") or
    Poly (ring "poly").  sizes[q] = dim C^q.
    """

    def __init__(self, spec: FieldSpec, ring: str, sizes, diffs,
                 X: SimplicialComplex = None, rank: int = 1,
                 potential=None, laurent_origin: bool = False):
        self.spec = spec
        self.ring = ring  # "field" or "poly"
        self.sizes = list(sizes)
        self.diffs = diffs
        self.X = X
        self.rank = rank
        self.potential = potential  # vertex rescaling exponents, if any
        self.laurent_origin = laurent_origin

    @property
    def top(self) -> int:
        return len(self.sizes) - 1

    def dense(self, q: int):
        """delta_q as a dense list-of-rows matrix."""
        if q < 0 or q >= len(self.diffs):
            return []
        zero = Poly.zero(self.spec) if self.ring == "poly" else self.spec.zero()
        n = self.sizes[q]
        return [[row.get(j, zero) for j in range(n)] for row in self.diffs[q]]

    def check_d2(self) -> bool:
        for q in range(len(self.diffs) - 1):
            if not self._d2_zero(q):
                return False
        return True

    def _d2_zero(self, q: int) -> bool:
        A, B = self.diffs[q + 1], self.diffs[q]
        if self.ring == "poly":
            zero = Poly.zero(self.spec)
            for row in A:
                acc = {}
                for j, a in row.items():
                    for l, b in B[j].items():
                        acc[l] = acc.get(l, zero) + a * b
                if any(not v.is_zero() for v in acc.values()):
                    return False
            return True
        spec = self.spec
        for row in A:
            acc = {}
            for j, a in row.items():
                for l, b in B[j].items():
                    acc[l] = spec.add(acc.get(l, spec.zero()), spec.mul(a, b))
            if any(not spec.is_zero(v) for v in acc.values()):
                return False
        return True

    def evaluate(self, a) -> "TwistedComplex":
        """Substitute tau = a; returns a complex over the base field."""
        if self.ring == "field":
            return self
        value = getattr(a, "value", a)
        if self.laurent_origin and self.spec.is_zero(value):
            raise ValueError("evaluation at 0 is undefined for Laurent twists")
        spec = self.spec
        diffs = []
        for mat in self.diffs:
            rows = []
            for row in mat:
                out = {}
                for j, p in row.items():
                    v = p(value)
                    if not spec.is_zero(v):
                        out[j] = v
                rows.append(out)
            diffs.append(rows)
        return TwistedComplex(spec, "field", self.sizes, diffs,
                              self.X, self.rank)

    def cohomology_dims(self):
        """Per-degree dims over the field (ring 'field' only)."""
        if self.ring != "field":
            raise ValueError("dims over k[tau] need cohomology_modules")
        out = []
        for q in range(len(self.sizes)):
            rq = linalg.rank(self.spec, self.dense(q)) if q < len(self.diffs) else 0
            rp = (linalg.rank(self.spec, self.dense(q - 1))
                  if 0 < q <= len(self.diffs) else 0)
            out.append(self.sizes[q] - rq - rp)
        return out

    def pid_snf(self):
        """Memoized SNF (with V transforms) of each differential over k[tau]."""
        from .pidmod import chain_snf
        if self.ring != "poly":
            raise ValueError("PID normal forms need a k[tau] complex")
        if not hasattr(self, "_pid_snf"):
            self._pid_snf = chain_snf(self.diffs, self.sizes, self.spec)
        return self._pid_snf

    def kernel_basis(self, q: int):
        """Basis of ker(delta_q) over k[tau], as dense Poly columns."""
        from .poly import Poly
        res = self.pid_snf()[q] if q < len(self.sizes) else None
        n = self.sizes[q]
        if res is None:
            zero, one = Poly.zero(self.spec), Poly.one(self.spec)
            return [[one if i == j else zero for i in range(n)]
                    for j in range(n)]
        return [[res.V[i][j] for i in range(n)]
                for j in range(res.rank, n)]

    def modules(self, over_laurent=None):
        from .pidmod import cohomology_modules
        if self.ring != "poly":
            raise ValueError("module decomposition needs a k[tau] complex")
        if over_laurent is None:
            over_laurent = self.laurent_origin
        key = bool(over_laurent)
        if not hasattr(self, "_modules_cache"):
            self._modules_cache = {}
        if key not in self._modules_cache:
            self._modules_cache[key] = cohomology_modules(
                self.diffs, self.sizes, self.spec, over_laurent=over_laurent,
                snfs=self.pid_snf())
        return self._modules_cache[key]


def _vertex_potential(X: SimplicialComplex, z: IntegralCocycle):
    """Nonnegative exponents u(v) with z(ab) + u(b) - u(a) >= 0 on every
    ascending edge; u is 0 wherever possible and vanishes on sources.

    Rescaling the basis cochain at a simplex by tau^{u(leading vertex)}
    clears negative tau-powers from the coboundary; the rescaling is the
    identity at tau = 1.
    """
    u = [0] * X.n_vertices
    in_edges = {v: [] for v in range(X.n_vertices)}
    for (a, b) in X.edges:
        in_edges[b].append(a)
    for b in range(X.n_vertices):
        req = 0
        for a in in_edges[b]:
            req = max(req, u[a] - z(a, b))
        u[b] = req
    return u


def twisted_complex(X: SimplicialComplex, F: FlatBundle) -> TwistedComplex:
    """Cochain complex of X with coefficients in F.

    Field bundles give a complex over k.  Bundles with a tau^z twist give a
    complex over k[tau]: a vertex-potential basis rescaling (identity at
    tau = 1) clears the negative exponents of the Laurent transport.
    """
    bad = F.flatness_violations()
    if bad:
        raise ValueError(f"bundle not flat on {bad[0]}")
    spec, d = F.spec, F.rank
    poly = F.twist is not None
    u = _vertex_potential(X, F.twist) if poly else None
    sizes = [X.count(q) * d for q in range(X.dim + 1)]
    diffs = []
    for q in range(X.dim):
        rows = [dict() for _ in range(sizes[q + 1])]
        for si, s in enumerate(X.simplices(q + 1)):
            for i in range(len(s)):
                f = s[:i] + s[i + 1:]
                fi = X.index(f)
                if i == 0:
                    M = F.matrix(s[0], s[1])
                    if poly:
                        e = F.exponent(s[0], s[1]) + u[s[1]] - u[s[0]]
                        assert e >= 0
                        _add_block(spec, rows, si, fi, d, M, e)
                    else:
                        _add_block(spec, rows, si, fi, d, M, None)
                else:
                    sign = spec.one() if i % 2 == 0 else spec.neg(spec.one())
                    _add_scalar_block(spec, rows, si, fi, d, sign,
                                      0 if poly else None)
        diffs.append(rows)
    return TwistedComplex(spec, "poly" if poly else "field", sizes, diffs,
                          X, d, potential=u, laurent_origin=poly)


def _add_block(spec, rows, si, fi, d, M, exponent):
    for r in range(d):
        for c in range(d):
            v = M[r][c]
            if spec.is_zero(v):
                continue
            entry = (Poly(spec, (spec.zero(),) * exponent + (v,))
                     if exponent is not None else v)
            _accum(spec, rows[si * d + r], fi * d + c, entry)


def _add_scalar_block(spec, rows, si, fi, d, sign, exponent):
    for r in range(d):
        entry = (Poly(spec, (spec.zero(),) * exponent + (sign,))
                 if exponent is not None else sign)
        _accum(spec, rows[si * d + r], fi * d + r, entry)


def _accum(spec, row, col, entry):
    old = row.get(col)
    if old is None:
        row[col] = entry
        return
    new = old + entry if isinstance(entry, Poly) else spec.add(old, entry)
    if (new.is_zero() if isinstance(new, Poly) else spec.is_zero(new)):
        del row[col]
    else:
        row[col] = new


@dataclass
class CutPresentation:
    """X cut along a bicollared subcomplex V: a complex N with two disjoint
    embeddings i_-, i_+ : V -> N and a fiber identification sigma over V."""

    N: SimplicialComplex
    V: SimplicialComplex
    iplus: dict    # V-vertex -> N-vertex
    iminus: dict
    F0: FlatBundle = None          # field bundle on N; trivial rank 1 if None
    sigma: dict = field(default_factory=dict)  # V-vertex -> matrix; identity if absent

    def bundle(self) -> FlatBundle:
        if self.F0 is None:
            raise ValueError("cut presentation has no bundle attached")
        return self.F0

    def with_field(self, spec: FieldSpec) -> "CutPresentation":
        return CutPresentation(self.N, self.V, self.iplus, self.iminus,
                               FlatBundle.trivial(spec, self.N), self.sigma)

    def sigma_matrix(self, spec, v: int):
        m = self.sigma.get(v)
        return m if m is not None else _identity(spec, self.bundle().rank)

    def violations(self):
        out = []
        for name, emb in (("i+", self.iplus), ("i-", self.iminus)):
            if len(set(emb.values())) != len(emb):
                out.append(f"{name} is not injective")
            for d in range(self.V.dim + 1):
                for s in self.V.simplices(d):
                    img = tuple(emb[v] for v in s)
                    if list(img) != sorted(img):
                        out.append(f"{name} not order-preserving on {s}")
                    elif not self.N.has(img):
                        out.append(f"{name}({s}) = {img} missing from N")
        overlap = set(self.iplus.values()) & set(self.iminus.values())
        if overlap:
            out.append(f"images of i+ and i- meet at {sorted(overlap)}")
        if self.F0 is not None:
            spec = self.F0.spec
            out.extend(f"F0 not flat on {t}"
                       for t in self.F0.flatness_violations())
            # sigma must intertwine the transported bundles over V-edges
            for (a, b) in self.V.edges:
                gp = self.F0.matrix(self.iplus[a], self.iplus[b])
                gm = self.F0.matrix(self.iminus[a], self.iminus[b])
                lhs = _matmat(spec, self.sigma_matrix(spec, a), gp)
                rhs = _matmat(spec, gm, self.sigma_matrix(spec, b))
                if lhs != rhs:
                    out.append(f"sigma not flat over V-edge {(a, b)}")
        return out


def _pullback_matrix(cut: CutPresentation, emb, q: int, compose_sigma: bool):
    """Matrix of C^q(N) -> C^q(V), alpha -> alpha(emb(.)), with values
    moved to the i- fiber by sigma when compose_sigma is set."""
    spec = cut.bundle().spec
    d = cut.bundle().rank
    rows = [dict() for _ in range(cut.V.count(q) * d)]
    for vi, s in enumerate(cut.V.simplices(q)):
        img = tuple(emb[v] for v in s)
        ni = cut.N.index(img)
        M = (cut.sigma_matrix(spec, s[0]) if compose_sigma
             else _identity(spec, d))
        for r in range(d):
            for c in range(d):
                if not spec.is_zero(M[r][c]):
                    rows[vi * d + r][ni * d + c] = M[r][c]
    return rows


def deformation_complex(cut: CutPresentation) -> TwistedComplex:
    """The cylinder complex over k[tau]:

        C^q = C^q(N)[tau] (+) C^{q-1}(V)[tau]
        delta(alpha, beta) = (delta_N alpha,
                              (sigma o i+* - tau i-*) alpha - delta_V beta).

    Evaluation at tau = a computes the a-twisted cohomology of the glued
    space; tau = 0 computes the relative cohomology of (N, boundary_+).
    """
    bad = cut.violations()
    if bad:
        raise ValueError(f"invalid cut presentation: {bad[0]}")
    spec = cut.bundle().spec
    d = cut.bundle().rank
    CN = twisted_complex(cut.N, cut.F0)
    FV = _restrict_bundle(cut)
    CV = twisted_complex(cut.V, FV)
    dN, dV = cut.N.dim, cut.V.dim
    top = max(dN, dV + 1)
    nN = [cut.N.count(q) * d for q in range(top + 1)]
    nV = [cut.V.count(q) * d for q in range(top + 1)]
    sizes = [nN[q] + (nV[q - 1] if q >= 1 else 0) for q in range(top + 1)]
    tau = Poly.x(spec)
    one = Poly.one(spec)
    diffs = []
    for q in range(top):
        rows = [dict() for _ in range(sizes[q + 1])]
        # N block: delta_N, promoted to k[tau]
        if q < len(CN.diffs):
            for i, row in enumerate(CN.diffs[q]):
                for j, v in row.items():
                    rows[i][j] = Poly.const(spec, v)
        # seam block: sigma i+* - tau i-*
        pplus = _pullback_matrix(cut, cut.iplus, q, compose_sigma=True)
        pminus = _pullback_matrix(cut, cut.iminus, q, compose_sigma=False)
        for i in range(nV[q]):
            tgt = rows[nN[q + 1] + i]
            for j, v in pplus[i].items():
                _accum(spec, tgt, j, Poly.const(spec, v))
            for j, v in pminus[i].items():
                _accum(spec, tgt, j, tau.scale(spec.neg(v)))
        # V block: -delta_{V}^{q-1}
        if q >= 1 and q - 1 < len(CV.diffs):
            for i, row in enumerate(CV.diffs[q - 1]):
                for j, v in row.items():
                    _accum(spec, rows[nN[q + 1] + i], nN[q] + j,
                           Poly.const(spec, spec.neg(v)))
        diffs.append(rows)
    C = TwistedComplex(spec, "poly", sizes, diffs, rank=d,
                       laurent_origin=False)
    if not C.check_d2():
        raise AssertionError("deformation complex differential does not square to zero")
    return C


def _restrict_bundle(cut: CutPresentation) -> FlatBundle:
    """F0 pulled back to V along i- (the fiber convention of the seam map)."""
    spec = cut.bundle().spec
    mats = {}
    for (a, b) in cut.V.edges:
        M = cut.F0.matrix(cut.iminus[a], cut.iminus[b])
        if M != _identity(spec, cut.F0.rank):
            mats[(a, b)] = M
    return FlatBundle(spec, cut.V, cut.F0.rank, mats, None, "F0|V")


def evaluate(C: TwistedComplex, a) -> TwistedComplex:
    """Evaluation at tau = a (a = 0 allowed for deformation complexes)."""
    return C.evaluate(a)


def boundary_condition_complex(cut: CutPresentation, a) -> TwistedComplex:
    """The subcomplex {alpha in C^*(N) : a * i-^*(alpha) = sigma i+^*(alpha)},
    in a deterministic echelon basis.  Quasi-isomorphic to the deformation
    complex evaluated at a; used as an independent oracle."""
    value = getattr(a, "value", a)
    spec = cut.bundle().spec
    if spec.is_zero(value):
        raise ValueError("boundary condition complex needs a != 0")
    d = cut.bundle().rank
    CN = twisted_complex(cut.N, cut.F0)
    top = cut.N.dim
    bases = []
    for q in range(top + 1):
        nq = cut.N.count(q) * d
        pplus = _pullback_matrix(cut, cut.iplus, q, compose_sigma=True)
        pminus = _pullback_matrix(cut, cut.iminus, q, compose_sigma=False)
        rows = []
        for i in range(cut.V.count(q) * d):
            row = [spec.zero()] * nq
            for j, v in pplus[i].items():
                row[j] = spec.add(row[j], v)
            for j, v in pminus[i].items():
                row[j] = spec.sub(row[j], spec.mul(value, v))
            rows.append(row)
        bases.append(linalg.kernel_basis(spec, rows, nq))
    sizes = [len(b) for b in bases]
    diffs = []
    for q in range(top):
        rows = [dict() for _ in range(sizes[q + 1])]
        if bases[q] and bases[q + 1]:
            big = [list(col) for col in zip(*bases[q + 1])]  # columns = basis
            for bi, vec in enumerate(bases[q]):
                img = _apply_sparse(spec, CN.diffs[q], vec)
                coords = linalg.solve(spec, big, img)
                if coords is None:
                    raise AssertionError("boundary-condition subspace not preserved")
                for ci, c in enumerate(coords):
                    if not spec.is_zero(c):
                        rows[ci][bi] = c
        else:
            for bi, vec in enumerate(bases[q]):
                img = _apply_sparse(spec, CN.diffs[q], vec)
                if any(not spec.is_zero(v) for v in img):
                    raise AssertionError("boundary-condition subspace not preserved")
        diffs.append(rows)
    return TwistedComplex(spec, "field", sizes, diffs, rank=d)


def _apply_sparse(spec, mat, vec):
    out = []
    for row in mat:
        acc = spec.zero()
        for j, v in row.items():
            if not spec.is_zero(vec[j]):
                acc = spec.add(acc, spec.mul(v, vec[j]))
        out.append(acc)
    return out


@dataclass
class GluedSpace:
    """Result of regluing a cut presentation: the closed space, the seam
    cocycle dual to V, and bookkeeping for the support criterion."""

    X: SimplicialComplex
    z: IntegralCocycle
    vertex_map: dict          # N-vertex -> X-vertex
    seam_vertices: set        # X-vertices on the image of V


def glue(cut: CutPresentation) -> GluedSpace:
    """Reglue N along i_-(v) ~ i_+(v).

    The seam cocycle is the image of the coboundary of the indicator
    function of i_+(V) in N; after the identification it represents the
    class dual to V (its integral over a loop counts signed seam crossings).
    """
    bad = [v for v in cut.violations() if "sigma" not in v and "F0" not in v]
    if bad:
        raise ValueError(f"invalid cut presentation: {bad[0]}")
    parent = list(range(cut.N.n_vertices))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for v in cut.iplus:
        a, b = find(cut.iplus[v]), find(cut.iminus[v])
        if a != b:
            parent[max(a, b)] = min(a, b)
    reps = sorted({find(v) for v in range(cut.N.n_vertices)})
    relabel = {r: i for i, r in enumerate(reps)}
    vmap = {v: relabel[find(v)] for v in range(cut.N.n_vertices)}

    simplices = set()
    for dlist in cut.N.by_dim.values():
        for s in dlist:
            img = tuple(sorted(vmap[v] for v in s))
            if len(set(img)) != len(s):
                raise ValueError(f"gluing degenerates simplex {s}")
            simplices.add(img)
    X = SimplicialComplex(len(reps), simplices)

    plus_img = set(cut.iplus.values())
    f = {v: (1 if v in plus_img else 0) for v in range(cut.N.n_vertices)}
    zvals = {}
    for (p, q) in cut.N.edges:
        w = f[p] - f[q]
        a, b = vmap[p], vmap[q]
        e, val = ((a, b), w) if a < b else ((b, a), -w)
        if e in zvals and zvals[e] != val:
            raise ValueError(f"inconsistent seam weights on glued edge {e}")
        zvals[e] = val
    z = IntegralCocycle(zvals)
    seam = {vmap[v] for v in plus_img} | {vmap[v] for v in cut.iminus.values()}
    diag = validate(X, z)
    if not diag.ok:
        raise AssertionError(f"glued space invalid: {diag.issues[0]}")
    return GluedSpace(X, z, vmap, seam)
