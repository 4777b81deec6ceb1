"""Exact dense linear algebra over a FieldSpec.

Matrices are lists of rows of raw field values.  Finite fields with small
order (or any prime field) get a vectorized numpy backend working on integer
codes; the rationals and exotic extensions use a plain Python path.  All
routines are deterministic: pivots are always the first nonzero entry.
"""

from __future__ import annotations

import numpy as np

from .fields import FieldSpec

_TABLE_LIMIT = 256  # largest field order for full add/mul code tables


class _Backend:
    """Vectorized row operations on integer-coded matrices."""

    def __init__(self, spec: FieldSpec):
        self.spec = spec
        q = spec.order
        self.kind = "python"
        if q is None:
            return
        if spec.kind == "prime" and spec.p < (1 << 20):
            self.kind = "prime"
        elif spec.p == 2 and q <= (1 << 16):
            self.kind = "char2"
            self._build_tables(xor_add=True)
        elif q <= _TABLE_LIMIT:
            self.kind = "table"
            self._build_tables(xor_add=False)

    def _build_tables(self, xor_add: bool):
        spec, q = self.spec, self.spec.order
        elems = [spec.from_code(c) for c in range(q)]
        mul = np.zeros((q, q), dtype=np.int64)
        for i, a in enumerate(elems):
            for j, b in enumerate(elems):
                mul[i, j] = spec.code(spec.mul(a, b))
        self.MUL = mul
        self.INV = np.array([0] + [spec.code(spec.inv(a)) for a in elems[1:]],
                            dtype=np.int64)
        if not xor_add:
            sub = np.zeros((q, q), dtype=np.int64)
            for i, a in enumerate(elems):
                for j, b in enumerate(elems):
                    sub[i, j] = spec.code(spec.sub(a, b))
            self.SUB = sub

    # -- code conversion -------------------------------------------------

    def encode(self, rows):
        spec = self.spec
        if spec.kind == "prime":
            return np.array([[v % spec.p for v in row] for row in rows],
                            dtype=np.int64).reshape(len(rows), -1)
        return np.array([[spec.code(v) for v in row] for row in rows],
                        dtype=np.int64).reshape(len(rows), -1)

    def decode_row(self, row):
        spec = self.spec
        if spec.kind == "prime":
            return [int(v) for v in row]
        return [spec.from_code(int(v)) for v in row]

    # -- vectorized ops ---------------------------------------------------

    def scale_row(self, row, c):
        if self.kind == "prime":
            return row * c % self.spec.p
        return self.MUL[c][row]

    def inv_code(self, c):
        if self.kind == "prime":
            return pow(int(c), self.spec.p - 2, self.spec.p)
        return int(self.INV[c])

    def eliminate(self, A, col, prow):
        """A[i] -= col[i] * prow for all i (col[pivot] preset to 0)."""
        if self.kind == "prime":
            return (A - col[:, None] * prow[None, :]) % self.spec.p
        prod = self.MUL[col[:, None], prow[None, :]]
        if self.kind == "char2":
            return A ^ prod
        return self.SUB[A, prod]


_backends: dict = {}


def _backend(spec: FieldSpec) -> _Backend:
    b = _backends.get(spec)
    if b is None:
        b = _backends[spec] = _Backend(spec)
    return b


def _rref_codes(bk: _Backend, A):
    m, n = A.shape
    pivots = []
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = np.nonzero(A[r:, c])[0]
        if len(nz) == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            A[[r, i]] = A[[i, r]]
        piv = int(A[r, c])
        if piv != 1:
            A[r] = bk.scale_row(A[r], bk.inv_code(piv))
        col = A[:, c].copy()
        col[r] = 0
        if np.any(col):
            A = bk.eliminate(A, col, A[r].copy())
        pivots.append(c)
        r += 1
    return A, pivots


def _rref_python(spec: FieldSpec, rows):
    M = [list(row) for row in rows]
    m = len(M)
    n = len(M[0]) if m else 0
    pivots = []
    r = 0
    for c in range(n):
        if r == m:
            break
        i = next((k for k in range(r, m) if not spec.is_zero(M[k][c])), None)
        if i is None:
            continue
        M[r], M[i] = M[i], M[r]
        inv = spec.inv(M[r][c])
        if inv != spec.one():
            M[r] = [spec.mul(inv, v) for v in M[r]]
        prow = M[r]
        for k in range(m):
            if k == r or spec.is_zero(M[k][c]):
                continue
            f = M[k][c]
            M[k] = [spec.sub(v, spec.mul(f, pv)) for v, pv in zip(M[k], prow)]
        pivots.append(c)
        r += 1
    return M, pivots


def rref(spec: FieldSpec, rows):
    """Reduced row echelon form: (rows, pivot_columns)."""
    if not rows or not rows[0]:
        return [list(r) for r in rows], []
    bk = _backend(spec)
    if bk.kind == "python":
        return _rref_python(spec, rows)
    A, pivots = _rref_codes(bk, bk.encode(rows))
    return [bk.decode_row(A[i]) for i in range(A.shape[0])], pivots


def rank(spec: FieldSpec, rows) -> int:
    if not rows or not rows[0]:
        return 0
    bk = _backend(spec)
    if bk.kind == "python":
        return len(_rref_python(spec, rows)[1])
    return len(_rref_codes(bk, bk.encode(rows))[1])


def kernel_basis(spec: FieldSpec, rows, ncols=None):
    """Basis of {x : M x = 0} as a list of raw-value vectors."""
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    if not rows:
        one, zero = spec.one(), spec.zero()
        return [[one if j == i else zero for j in range(ncols)]
                for i in range(ncols)]
    R, pivots = rref(spec, rows)
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    zero, one = spec.zero(), spec.one()
    basis = []
    for f in free:
        v = [zero] * ncols
        v[f] = one
        for r, c in enumerate(pivots):
            v[c] = spec.neg(R[r][f])
        basis.append(v)
    return basis


def solve(spec: FieldSpec, rows, b):
    """One solution of M x = b, or None if inconsistent."""
    n = len(rows[0]) if rows else 0
    if not rows:
        return None if any(not spec.is_zero(v) for v in b) else []
    aug = [list(row) + [bv] for row, bv in zip(rows, b)]
    R, pivots = rref(spec, aug)
    for r in range(len(pivots), len(R)):
        if not spec.is_zero(R[r][n]):
            return None
    if pivots and pivots[-1] == n:
        return None
    x = [spec.zero()] * n
    for r, c in enumerate(pivots):
        x[c] = R[r][n]
    return x


def matvec(spec: FieldSpec, rows, x):
    out = []
    for row in rows:
        acc = spec.zero()
        for a, b in zip(row, x):
            if not (spec.is_zero(a) or spec.is_zero(b)):
                acc = spec.add(acc, spec.mul(a, b))
        out.append(acc)
    return out


def matmul(spec: FieldSpec, A, B):
    if not A or not B:
        return []
    n = len(B[0])
    Bt = list(zip(*B))
    return [[_dot(spec, row, Bt[j]) for j in range(n)] for row in A]


def _dot(spec, u, v):
    acc = spec.zero()
    for a, b in zip(u, v):
        if not (spec.is_zero(a) or spec.is_zero(b)):
            acc = spec.add(acc, spec.mul(a, b))
    return acc


class Subspace:
    """Incrementally built subspace of k^n kept in reduced echelon form."""

    def __init__(self, spec: FieldSpec, dim_ambient: int):
        self.spec = spec
        self.n = dim_ambient
        self.rows = []    # echelon rows, leading coefficient 1
        self.pivots = []  # pivot column per row, strictly increasing order kept

    @property
    def dim(self) -> int:
        return len(self.rows)

    def reduce(self, vec):
        """Residual of vec modulo the subspace."""
        spec = self.spec
        v = list(vec)
        for row, p in zip(self.rows, self.pivots):
            c = v[p]
            if spec.is_zero(c):
                continue
            for j in range(p, self.n):
                v[j] = spec.sub(v[j], spec.mul(c, row[j]))
        return v

    def contains(self, vec) -> bool:
        spec = self.spec
        return all(spec.is_zero(c) for c in self.reduce(vec))

    def add(self, vec) -> bool:
        """Insert vec; returns True if the dimension grew."""
        spec = self.spec
        v = self.reduce(vec)
        p = next((j for j in range(self.n) if not spec.is_zero(v[j])), None)
        if p is None:
            return False
        inv = spec.inv(v[p])
        v = [spec.mul(inv, c) for c in v]
        # keep existing rows reduced against the new one
        for i, row in enumerate(self.rows):
            c = row[p]
            if not spec.is_zero(c):
                self.rows[i] = [spec.sub(a, spec.mul(c, b))
                                for a, b in zip(row, v)]
        k = next((i for i, q in enumerate(self.pivots) if q > p),
                 len(self.pivots))
        self.rows.insert(k, v)
        self.pivots.insert(k, p)
        return True

    def basis(self):
        return [list(r) for r in self.rows]


def random_elem(spec: FieldSpec, rng):
    """Seeded pseudo-random raw field value."""
    if spec.kind == "rationals":
        from fractions import Fraction
        return Fraction(rng.randrange(-20, 21), rng.randrange(1, 11))
    return spec.from_code(rng.randrange(spec.order))


def random_nonzero(spec: FieldSpec, rng):
    while True:
        v = random_elem(spec, rng)
        if not spec.is_zero(v):
            return v
