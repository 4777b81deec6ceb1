"""Smith normal form over Euclidean domains and PID cohomology modules.

The SNF kernel is generic over a ring adapter (polynomials over an exact
field, Laurent polynomials via valuation clearing, the integers) and uses a
deterministic pivot rule: minimal norm, then first position in row-major
order.  Matrices are stored as sparse rows (dict col -> entry) so the large
3-manifold complexes stay tractable.
"""

from __future__ import annotations

from dataclasses import dataclass

from .fields import FieldSpec
from .poly import LaurentPoly, Poly, poly_divmod


class PolyRing:
    """k[T] as a Euclidean domain; canonical associates are monic."""

    def __init__(self, spec: FieldSpec):
        self.spec = spec
        self.zero = Poly.zero(spec)
        self.one = Poly.one(spec)

    def is_zero(self, a):
        return a.is_zero()

    def is_unit(self, a):
        return a.degree == 0

    def norm(self, a):
        return a.degree

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def divmod(self, a, b):
        return poly_divmod(a, b)

    def canonical(self, a):
        if a.is_zero():
            return self.one, a
        u = Poly.const(self.spec, a.lead)
        return u, a.monic()

    def unit_inv(self, u):
        return Poly.const(self.spec, self.spec.inv(u.coeffs[0]))


class IntRing:
    """Z; canonical associates are nonnegative."""

    zero = 0
    one = 1

    def is_zero(self, a):
        return a == 0

    def is_unit(self, a):
        return a in (1, -1)

    def norm(self, a):
        return abs(a)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def divmod(self, a, b):
        return divmod(a, b)

    def canonical(self, a):
        if a < 0:
            return -1, -a
        return 1, a


class _SparseMat:
    """Row-sparse matrix with a column occupancy index."""

    def __init__(self, ring, rows, nrows, ncols):
        self.ring = ring
        self.nrows = nrows
        self.ncols = ncols
        self.rows = rows  # list of dict col -> nonzero entry
        self.colidx = [set() for _ in range(ncols)]
        for i, row in enumerate(rows):
            for j in row:
                self.colidx[j].add(i)

    def get(self, i, j):
        return self.rows[i].get(j, self.ring.zero)

    def set(self, i, j, v):
        if self.ring.is_zero(v):
            if j in self.rows[i]:
                del self.rows[i][j]
                self.colidx[j].discard(i)
        else:
            if j not in self.rows[i]:
                self.colidx[j].add(i)
            self.rows[i][j] = v

    def swap_rows(self, i, k):
        if i == k:
            return
        for j in set(self.rows[i]) | set(self.rows[k]):
            self.colidx[j].discard(i)
            self.colidx[j].discard(k)
        self.rows[i], self.rows[k] = self.rows[k], self.rows[i]
        for j in self.rows[i]:
            self.colidx[j].add(i)
        for j in self.rows[k]:
            self.colidx[j].add(k)

    def swap_cols(self, j, l):
        if j == l:
            return
        for i in self.colidx[j] | self.colidx[l]:
            row = self.rows[i]
            a, b = row.pop(j, None), row.pop(l, None)
            if b is not None:
                row[j] = b
            if a is not None:
                row[l] = a
        self.colidx[j], self.colidx[l] = self.colidx[l], self.colidx[j]

    def row_axpy(self, i, k, q):
        """row_i -= q * row_k."""
        ring = self.ring
        for j, v in list(self.rows[k].items()):
            self.set(i, j, ring.sub(self.get(i, j), ring.mul(q, v)))

    def col_axpy(self, j, l, q):
        """col_j -= q * col_l."""
        ring = self.ring
        for i in list(self.colidx[l]):
            self.set(i, j, ring.sub(self.get(i, j), ring.mul(q, self.rows[i][l])))

    def scale_row(self, i, u):
        for j, v in list(self.rows[i].items()):
            self.rows[i][j] = self.ring.mul(u, v)

    def scale_col(self, j, u):
        for i in list(self.colidx[j]):
            self.rows[i][j] = self.ring.mul(u, self.rows[i][j])

    def dense(self):
        z = self.ring.zero
        return [[self.rows[i].get(j, z) for j in range(self.ncols)]
                for i in range(self.nrows)]


@dataclass
class SNFResult:
    """U @ M @ V = diag(factors) padded with zeros; factors canonical."""

    factors: list
    rank: int
    U: list = None
    V: list = None
    Vinv: list = None
    det_u: object = None
    det_v: object = None


def _find_pivot(mat, k):
    """Minimal-norm entry in the trailing submatrix, first in row-major order."""
    ring = mat.ring
    best = None
    for i in range(k, mat.nrows):
        for j in sorted(c for c in mat.rows[i] if c >= k):
            nm = ring.norm(mat.rows[i][j])
            if best is None or nm < best[0]:
                best = (nm, i, j)
                if nm == 0:
                    return best
    return best


def smith_normal_form(ring, matrix, nrows=None, ncols=None,
                      transforms="none") -> SNFResult:
    """Deterministic SNF over a Euclidean domain.

    matrix: list of dense rows or list of sparse dict rows.
    transforms: "none", "V" (V and Vinv), or "UV" (everything).
    """
    if nrows is None:
        nrows = len(matrix)
    if ncols is None:
        ncols = len(matrix[0]) if matrix and not isinstance(matrix[0], dict) else (
            max((max(r) for r in matrix if r), default=-1) + 1)
    rows = []
    for r in matrix:
        if isinstance(r, dict):
            rows.append({j: v for j, v in r.items() if not ring.is_zero(v)})
        else:
            rows.append({j: v for j, v in enumerate(r) if not ring.is_zero(v)})
    mat = _SparseMat(ring, rows, nrows, ncols)

    want_u = transforms == "UV"
    want_v = transforms in ("V", "UV")
    U = [{i: ring.one} for i in range(nrows)] if want_u else None
    # V stored as rows of V^T (i.e. columns of V); Vinv as plain rows
    Vt = [{j: ring.one} for j in range(ncols)] if want_v else None
    Vinv = [{j: ring.one} for j in range(ncols)] if want_v else None
    det_u, det_v = ring.one, ring.one

    def u_axpy(i, k, q):
        if want_u:
            for j, v in list(U[k].items()):
                nv = ring.sub(U[i].get(j, ring.zero), ring.mul(q, v))
                if ring.is_zero(nv):
                    U[i].pop(j, None)
                else:
                    U[i][j] = nv

    def v_axpy(j, l, q):
        # col_j -= q col_l on V; row_l += q row_j on Vinv
        if want_v:
            for r, v in list(Vt[l].items()):
                nv = ring.sub(Vt[j].get(r, ring.zero), ring.mul(q, v))
                if ring.is_zero(nv):
                    Vt[j].pop(r, None)
                else:
                    Vt[j][r] = nv
            for r, v in list(Vinv[j].items()):
                nv = ring.add(Vinv[l].get(r, ring.zero), ring.mul(q, v))
                if ring.is_zero(nv):
                    Vinv[l].pop(r, None)
                else:
                    Vinv[l][r] = nv

    k = 0
    limit = min(nrows, ncols)
    while k < limit:
        found = _find_pivot(mat, k)
        if found is None:
            break
        _, pi, pj = found
        mat.swap_rows(k, pi)
        if want_u and pi != k:
            U[k], U[pi] = U[pi], U[k]
            det_u = ring.neg(det_u)
        mat.swap_cols(k, pj)
        if want_v and pj != k:
            Vt[k], Vt[pj] = Vt[pj], Vt[k]
            Vinv[k], Vinv[pj] = Vinv[pj], Vinv[k]
            det_v = ring.neg(det_v)

        pivot = mat.get(k, k)
        dirty = False
        for i in sorted(mat.colidx[k]):
            if i <= k:
                continue
            q, r = ring.divmod(mat.rows[i][k], pivot)
            if not ring.is_zero(q):
                mat.row_axpy(i, k, q)
                u_axpy(i, k, q)
            if not ring.is_zero(r):
                dirty = True
        for j in sorted(mat.rows[k]):
            if j <= k:
                continue
            q, r = ring.divmod(mat.rows[k][j], pivot)
            if not ring.is_zero(q):
                mat.col_axpy(j, k, q)
                v_axpy(j, k, q)
            if not ring.is_zero(r):
                dirty = True
        if dirty:
            continue  # smaller-norm remainders appeared; re-pick pivot
        if len(mat.colidx[k] - {k}) or len(set(mat.rows[k]) - {k}):
            continue
        # divisibility sweep: pivot must divide the rest of the submatrix
    # (done lazily: fold an offending row into row k and restart the pivot)
        offender = None
        for i in range(k + 1, mat.nrows):
            for j, v in mat.rows[i].items():
                if j > k and not ring.is_zero(ring.divmod(v, pivot)[1]):
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            mat.row_axpy(k, offender, ring.neg(ring.one))
            u_axpy(k, offender, ring.neg(ring.one))
            continue
        u, canon = ring.canonical(pivot)
        if not ring.is_zero(ring.sub(u, ring.one)):
            uinv = ring.unit_inv(u) if hasattr(ring, "unit_inv") else (
                1 if u == 1 else -1)
            mat.scale_row(k, uinv)
            if want_u:
                for j in list(U[k]):
                    U[k][j] = ring.mul(uinv, U[k][j])
                det_u = ring.mul(det_u, uinv)
        k += 1

    factors = []
    for i in range(limit):
        d = mat.get(i, i)
        if ring.is_zero(d):
            break
        factors.append(d)
    res = SNFResult(factors=factors, rank=len(factors),
                    det_u=det_u, det_v=det_v)
    if want_u:
        res.U = [[U[i].get(j, ring.zero) for j in range(nrows)]
                 for i in range(nrows)]
    if want_v:
        res.V = [[Vt[j].get(i, ring.zero) for j in range(ncols)]
                 for i in range(ncols)]
        res.Vinv = [[Vinv[i].get(j, ring.zero) for j in range(ncols)]
                    for i in range(ncols)]
    return res


def snf_field(spec: FieldSpec, matrix):
    """SNF over a field: invariant factors are 1s, count = rank."""
    from . import linalg
    raw = [[getattr(v, "value", v) for v in row] for row in matrix]
    return linalg.rank(spec, raw)


def snf_laurent(spec: FieldSpec, matrix):
    """SNF over k[T, T^-1]: clear valuations, run k[T], normalize factors.

    matrix entries are LaurentPoly.  Returns the Laurent-canonical invariant
    factors (monic, valuation 0, nonunit factors only come last).
    """
    nrows = len(matrix)
    ncols = len(matrix[0]) if matrix else 0
    cleared = []
    for row in matrix:
        shift = 0
        vals = [e.val for e in row if not e.is_zero()]
        if vals:
            shift = -min(0, min(vals))
        cleared.append([LaurentPoly(e.poly, e.val + shift).as_poly()
                        for e in row])
    ring = PolyRing(spec)
    res = smith_normal_form(ring, cleared, nrows, ncols)
    res.factors = [_laurent_canonical(f) for f in res.factors]
    return res


def _laurent_canonical(f: Poly) -> Poly:
    """Strip T-power unit factors: monic with nonzero constant term."""
    if f.is_zero():
        return f
    v = f.valuation()
    return Poly(f.spec, f.coeffs[v:]).monic()


@dataclass
class ModuleDecomposition:
    """H^q over a PID: free part plus a divisibility chain of torsion factors."""

    degree: int
    free_rank: int
    invariant_factors: list  # monic nonunit Poly, each dividing the next
    over_laurent: bool = False

    def dim_at(self, a) -> int:
        """dim of H^degree evaluated at T = a (torsion contribution only
        from this degree; use dims_at for the full UCT count)."""
        spec = self._spec()
        cnt = sum(1 for f in self.invariant_factors
                  if spec is not None and spec.is_zero(f(a)))
        return self.free_rank + cnt

    def _spec(self):
        return self.invariant_factors[0].spec if self.invariant_factors else None


def chain_snf(differentials, sizes, spec: FieldSpec):
    """SNF with V-transforms of each differential; None where a map is
    absent or empty.  Shared by module decomposition and kernel bases."""
    ring = PolyRing(spec)
    out = []
    for q in range(len(sizes)):
        dq = differentials[q] if q < len(differentials) else None
        if dq is None or not dq:
            out.append(None)
        else:
            out.append(smith_normal_form(ring, dq, len(dq), sizes[q],
                                         transforms="V"))
    return out


def cohomology_modules(differentials, sizes, spec: FieldSpec,
                       over_laurent=False, snfs=None):
    """Module decompositions of H^q = ker d_q / im d_{q-1} over k[T].

    differentials[q]: matrix (rows of Poly, possibly dict-sparse) of
    d_q : C^q -> C^{q+1}; sizes[q] = rank of C^q.  differentials may omit
    the top map (treated as zero).
    """
    ring = PolyRing(spec)
    top = len(sizes) - 1
    decomps = []
    if snfs is None:
        snfs = chain_snf(differentials, sizes, spec)
    kernels = {}   # degree -> (SNF or None, kernel dimension)
    for q in range(top + 1):
        res = snfs[q]
        nq = sizes[q]
        ker_dim = nq if res is None else nq - res.rank
        kernels[q] = (res, ker_dim)
    for q in range(top + 1):
        nq = sizes[q]
        res, ker_dim = kernels[q]
        dprev = differentials[q - 1] if q >= 1 and q - 1 < len(differentials) else None
        if dprev is None or q == 0 or not dprev:
            y = []
        else:
            # coordinates of im d_{q-1} in the kernel basis of d_q
            cols_prev = sizes[q - 1]
            a_cols = _dense_cols(dprev, nq, cols_prev, ring)
            if res is None:
                # kernel basis is the identity; coordinates are the entries
                y = [[a_cols[c][i] for c in range(cols_prev)]
                     for i in range(nq)]
            else:
                vinv = res.Vinv
                y = []
                for i in range(nq):
                    if i < res.rank:
                        # sanity: these coordinates must vanish (d^2 = 0)
                        row = _row_times_cols(ring, vinv[i], a_cols)
                        if any(not ring.is_zero(v) for v in row):
                            raise ValueError("differentials do not compose to zero")
                    else:
                        y.append(_row_times_cols(ring, vinv[i], a_cols))
        if y:
            yres = smith_normal_form(ring, y, len(y), len(y[0]))
            tor = [f for f in yres.factors if not ring.is_unit(f)]
            free = ker_dim - yres.rank
        else:
            tor = []
            free = ker_dim
        if over_laurent:
            tor = [_laurent_canonical(f) for f in tor]
            tor = [f for f in tor if not ring.is_unit(f)]
        decomps.append(ModuleDecomposition(q, free, tor, over_laurent))
    return decomps


def _dense_cols(matrix, nrows, ncols, ring):
    """Columns of matrix as dense lists; matrix rows may be dicts or lists."""
    cols = [[ring.zero] * nrows for _ in range(ncols)]
    for i, row in enumerate(matrix):
        items = row.items() if isinstance(row, dict) else enumerate(row)
        for j, v in items:
            if not ring.is_zero(v):
                cols[j][i] = v
    return cols


def _row_times_cols(ring, row, cols):
    out = []
    nz = [(j, v) for j, v in enumerate(row) if not ring.is_zero(v)]
    for col in cols:
        acc = ring.zero
        for j, v in nz:
            c = col[j]
            if not ring.is_zero(c):
                acc = ring.add(acc, ring.mul(v, c))
        out.append(acc)
    return out


def kernel_basis_pid(spec: FieldSpec, matrix, ncols):
    """Free-module basis of ker(matrix) over k[T], as a list of columns."""
    ring = PolyRing(spec)
    if not matrix:
        basis = []
        for i in range(ncols):
            v = [ring.zero] * ncols
            v[i] = ring.one
            basis.append(v)
        return basis
    res = smith_normal_form(ring, matrix, len(matrix), ncols, transforms="V")
    return [[res.V[i][j] for i in range(ncols)]
            for j in range(res.rank, ncols)]


def dims_at(decomps, a, spec: FieldSpec = None):
    """Per-degree dims of the evaluated cohomology via universal coefficients.

    dim H^q(a) = free_rank(q) + #{factors of degree q vanishing at a}
               + #{factors of degree q+1 vanishing at a}.
    """
    value = getattr(a, "value", a)
    out = []
    for q, dec in enumerate(decomps):
        if dec.over_laurent and spec is not None and spec.is_zero(value):
            raise ValueError("evaluation at 0 is not defined over k[T,T^-1]")
        d = dec.free_rank
        d += _vanish_count(dec, value)
        if q + 1 < len(decomps):
            d += _vanish_count(decomps[q + 1], value)
        out.append(d)
    return out


def _vanish_count(dec: ModuleDecomposition, value) -> int:
    cnt = 0
    for f in dec.invariant_factors:
        if f.spec.is_zero(f(value)):
            cnt += 1
    return cnt
