"""Univariate polynomials and Laurent polynomials over an exact field.

Poly coefficients are raw field values, lowest degree first, with a nonzero
leading coefficient unless the polynomial is zero.  LaurentPoly adds a
valuation offset (lowest exponent, possibly negative).
"""

from __future__ import annotations

from .fields import FieldSpec


class Poly:
    __slots__ = ("spec", "coeffs")

    def __init__(self, spec: FieldSpec, coeffs):
        n = len(coeffs)
        while n > 0 and spec.is_zero(coeffs[n - 1]):
            n -= 1
        self.spec = spec
        self.coeffs = tuple(coeffs[:n])

    @staticmethod
    def zero(spec):
        return Poly(spec, ())

    @staticmethod
    def one(spec):
        return Poly(spec, (spec.one(),))

    @staticmethod
    def const(spec, c):
        return Poly(spec, (c,))

    @staticmethod
    def x(spec):
        return Poly(spec, (spec.zero(), spec.one()))

    @staticmethod
    def from_ints(spec, ints):
        return Poly(spec, tuple(spec.from_int(n) for n in ints))

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_one(self) -> bool:
        return len(self.coeffs) == 1 and self.coeffs[0] == self.spec.one()

    def is_const(self) -> bool:
        return len(self.coeffs) <= 1

    @property
    def lead(self):
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __eq__(self, other):
        return (isinstance(other, Poly) and other.spec == self.spec
                and other.coeffs == self.coeffs)

    def __hash__(self):
        return hash((self.spec, self.coeffs))

    def __add__(self, other):
        K = self.spec
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = K.add(out[i], c)
        return Poly(K, out)

    def __neg__(self):
        K = self.spec
        return Poly(K, tuple(K.neg(c) for c in self.coeffs))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        K = self.spec
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly(K, ())
        if len(a) == 1 and len(b) == 1:
            return Poly(K, (K.mul(a[0], b[0]),))
        out = [K.zero()] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if K.is_zero(x):
                continue
            for j, y in enumerate(b):
                out[i + j] = K.add(out[i + j], K.mul(x, y))
        return Poly(K, out)

    def scale(self, c):
        K = self.spec
        if K.is_zero(c):
            return Poly(K, ())
        return Poly(K, tuple(K.mul(c, x) for x in self.coeffs))

    def shift(self, k: int) -> "Poly":
        """Multiply by x^k, k >= 0."""
        if not self.coeffs:
            return self
        return Poly(self.spec, (self.spec.zero(),) * k + self.coeffs)

    def __call__(self, a):
        """Evaluate at a raw field value by Horner's rule."""
        K = self.spec
        acc = K.zero()
        for c in reversed(self.coeffs):
            acc = K.add(K.mul(acc, a), c)
        return acc

    def monic(self) -> "Poly":
        if not self.coeffs:
            return self
        return self.scale(self.spec.inv(self.lead))

    def valuation(self) -> int:
        """Multiplicity of the root 0; degree of the lowest nonzero term."""
        if not self.coeffs:
            raise ValueError("zero polynomial")
        K = self.spec
        for i, c in enumerate(self.coeffs):
            if not K.is_zero(c):
                return i
        raise AssertionError

    def compose_shift(self, a) -> "Poly":
        """Substitute x -> x + a (recentering)."""
        K = self.spec
        out = Poly.zero(K)
        xa = Poly(K, (a, K.one()))
        for c in reversed(self.coeffs):
            out = out * xa + Poly.const(K, c)
        return out

    def __repr__(self):
        if not self.coeffs:
            return "0"
        K = self.spec
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if K.is_zero(c):
                continue
            cs = K.format(c)
            if i == 0:
                terms.append(cs)
            else:
                var = "T" if i == 1 else f"T^{i}"
                if cs == "1":
                    terms.append(var)
                elif "+" in cs or "-" in cs[1:]:
                    terms.append(f"({cs})*{var}")
                else:
                    terms.append(f"{cs}*{var}")
        return " + ".join(terms)


def poly_divmod(f: Poly, g: Poly):
    """Exact long division: f = q*g + r with deg r < deg g."""
    if g.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    K = f.spec
    if f.degree < g.degree:
        return Poly.zero(K), f
    ginv = K.inv(g.lead)
    r = list(f.coeffs)
    q = [K.zero()] * (len(f.coeffs) - len(g.coeffs) + 1)
    gc = g.coeffs
    for i in range(len(r) - len(gc), -1, -1):
        c = K.mul(r[i + len(gc) - 1], ginv)
        if K.is_zero(c):
            continue
        q[i] = c
        for j, y in enumerate(gc):
            r[i + j] = K.sub(r[i + j], K.mul(c, y))
    return Poly(K, q), Poly(K, r)


def poly_gcd(f: Poly, g: Poly) -> Poly:
    """Monic gcd."""
    while not g.is_zero():
        f, g = g, poly_divmod(f, g)[1]
    return f.monic()


def poly_xgcd(f: Poly, g: Poly):
    """Extended Euclid: (d, s, t) with s*f + t*g = d, d monic gcd."""
    K = f.spec
    r0, r1 = f, g
    s0, s1 = Poly.one(K), Poly.zero(K)
    t0, t1 = Poly.zero(K), Poly.one(K)
    while not r1.is_zero():
        q, r = poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0.is_zero():
        return r0, s0, t0
    c = K.inv(r0.lead)
    return r0.scale(c), s0.scale(c), t0.scale(c)


def root_multiplicity(f: Poly, a) -> int:
    """Largest e with (x-a)^e dividing f; a is a raw value or FieldElem."""
    if f.is_zero():
        raise ValueError("zero polynomial has no root multiplicity")
    value = getattr(a, "value", a)
    K = f.spec
    lin = Poly(K, (K.neg(value), K.one()))
    e = 0
    while True:
        q, r = poly_divmod(f, lin)
        if not r.is_zero():
            return e
        f, e = q, e + 1


class LaurentPoly:
    """f(T) = T^val * poly(T); val may be negative.

    Normalized so the stored poly has a nonzero constant term (zero is
    stored as poly 0, val 0).
    """

    __slots__ = ("poly", "val")

    def __init__(self, poly: Poly, val: int = 0):
        if poly.is_zero():
            self.poly, self.val = poly, 0
            return
        v = poly.valuation()
        if v:
            poly = Poly(poly.spec, poly.coeffs[v:])
        self.poly = poly
        self.val = val + v

    @staticmethod
    def zero(spec):
        return LaurentPoly(Poly.zero(spec))

    @staticmethod
    def one(spec):
        return LaurentPoly(Poly.one(spec))

    @staticmethod
    def const(spec, c):
        return LaurentPoly(Poly.const(spec, c))

    @staticmethod
    def t_power(spec, k: int):
        return LaurentPoly(Poly.one(spec), k)

    @property
    def spec(self):
        return self.poly.spec

    def is_zero(self):
        return self.poly.is_zero()

    def is_unit(self):
        """Units of k[T,T^-1] are c*T^k."""
        return self.poly.degree == 0

    def __eq__(self, other):
        return (isinstance(other, LaurentPoly) and other.poly == self.poly
                and other.val == self.val)

    def __hash__(self):
        return hash((self.poly, self.val))

    def __add__(self, other):
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        v = min(self.val, other.val)
        return LaurentPoly(self.poly.shift(self.val - v)
                           + other.poly.shift(other.val - v), v)

    def __neg__(self):
        return LaurentPoly(-self.poly, self.val)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        return LaurentPoly(self.poly * other.poly, self.val + other.val)

    def __call__(self, a):
        """Evaluate at a nonzero raw field value."""
        K = self.spec
        base = self.poly(a)
        return K.mul(base, K.pow(a, self.val))

    def as_poly(self) -> Poly:
        if self.val < 0:
            raise ValueError("negative valuation; not a polynomial")
        return self.poly.shift(self.val)

    def __repr__(self):
        if self.is_zero():
            return "0"
        if self.val == 0:
            return repr(self.poly)
        return f"T^{self.val}*({self.poly!r})"


def laurent_normalize(f: LaurentPoly):
    """Split f = unit * normalized with normalized monic of valuation 0.

    The decomposition is unique: units of k[T,T^-1] are c*T^k.
    """
    if f.is_zero():
        raise ValueError("cannot normalize the zero Laurent polynomial")
    K = f.spec
    lead = f.poly.lead
    unit = LaurentPoly(Poly.const(K, lead), f.val)
    return unit, f.poly.monic()
