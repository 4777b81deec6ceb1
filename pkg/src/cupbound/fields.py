"""Exact base fields: prime fields F_p, extensions F_{p^m}, and the rationals.

Elements are stored in canonical raw form (int residue, coefficient tuple,
or Fraction) and manipulated through the owning FieldSpec.  A thin FieldElem
wrapper provides operator syntax for library users; the linear-algebra
kernels work on raw values for speed.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    # deterministic Miller-Rabin for n < 3.3e24
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if a >= n:
            continue
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


# -- F_p[x] helpers on plain coefficient tuples (low degree first) ----------

def _fp_trim(c):
    i = len(c)
    while i > 0 and c[i - 1] == 0:
        i -= 1
    return tuple(c[:i])


def _fp_add(a, b, p):
    n = max(len(a), len(b))
    a = a + (0,) * (n - len(a))
    b = b + (0,) * (n - len(b))
    return _fp_trim([(x + y) % p for x, y in zip(a, b)])


def _fp_mul(a, b, p):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _fp_trim(out)


def _fp_divmod(a, b, p):
    if not b:
        raise ZeroDivisionError("division by zero polynomial over F_p")
    binv = pow(b[-1], p - 2, p)
    r = list(a)
    q = [0] * max(0, len(a) - len(b) + 1)
    for i in range(len(a) - len(b), -1, -1):
        c = r[i + len(b) - 1] * binv % p
        if c:
            q[i] = c
            for j, y in enumerate(b):
                r[i + j] = (r[i + j] - c * y) % p
    return _fp_trim(q), _fp_trim(r)


def _fp_powmod(a, e, mod, p):
    result = (1,)
    base = _fp_divmod(a, mod, p)[1]
    while e:
        if e & 1:
            result = _fp_divmod(_fp_mul(result, base, p), mod, p)[1]
        base = _fp_divmod(_fp_mul(base, base, p), mod, p)[1]
        e >>= 1
    return result


def _fp_gcd(a, b, p):
    while b:
        a, b = b, _fp_divmod(a, b, p)[1]
    if a:
        inv = pow(a[-1], p - 2, p)
        a = tuple(x * inv % p for x in a)
    return a


def _fp_is_irreducible_bruteforce(f, p):
    """Trial division by every monic polynomial of degree 1..deg(f)//2."""
    m = len(f) - 1
    for d in range(1, m // 2 + 1):
        for code in range(p ** d):
            g = _decode_poly(code, d, p) + (1,)
            if not _fp_divmod(f, g, p)[1]:
                return False
    return True


def _fp_is_irreducible_ddf(f, p):
    """Distinct-degree style test: x^(p^m) == x mod f and
    gcd(x^(p^(m/q)) - x, f) == 1 for each prime q | m."""
    m = len(f) - 1
    x = (0, 1)
    if _fp_powmod(x, p ** m, f, p) != _fp_divmod(x, f, p)[1]:
        return False
    q, primes = m, []
    d = 2
    while d * d <= q:
        if q % d == 0:
            primes.append(d)
            while q % d == 0:
                q //= d
        d += 1
    if q > 1:
        primes.append(q)
    for q in primes:
        h = _fp_add(_fp_powmod(x, p ** (m // q), f, p),
                    tuple(-c % p for c in x), p)
        if _fp_gcd(h, f, p):
            return False
    return True


def _decode_poly(code, length, p):
    coeffs = []
    for _ in range(length):
        coeffs.append(code % p)
        code //= p
    return tuple(coeffs)


@lru_cache(maxsize=None)
def _least_irreducible(p: int, m: int):
    """Lexicographically least monic irreducible of degree m over F_p.

    Candidates x^m + sum(c_i x^i) are enumerated by the base-p code of
    (c_0, ..., c_{m-1}), so the choice is reproducible bit-for-bit.
    """
    if m == 1:
        return (0, 1)
    check = _fp_is_irreducible_bruteforce if m <= 16 else _fp_is_irreducible_ddf
    for code in range(p ** m):
        f = _decode_poly(code, m, p) + (1,)
        if check(f, p):
            return f
    raise RuntimeError("no irreducible polynomial found")  # unreachable


class FieldError(ValueError):
    pass


class FieldSpec:
    """An exact base field: F_p, F_{p^m}, or Q.

    Raw element forms: int residue in [0, p) for prime fields, a tuple of m
    residues (coefficients of the generator, constant first) for extensions,
    and Fraction for the rationals.
    """

    __slots__ = ("kind", "p", "m", "modulus")

    def __init__(self, kind, p=None, m=None, modulus=None):
        self.kind = kind
        self.p = p
        self.m = m
        self.modulus = modulus

    # -- construction --------------------------------------------------

    @staticmethod
    def rationals() -> "FieldSpec":
        return FieldSpec("rationals")

    @staticmethod
    def prime(p: int) -> "FieldSpec":
        if not _is_prime(p):
            raise FieldError(f"{p} is not prime")
        return FieldSpec("prime", p=p, m=1)

    @staticmethod
    def extension(p: int, m: int) -> "FieldSpec":
        if not _is_prime(p):
            raise FieldError(f"{p} is not prime")
        if m < 1:
            raise FieldError("extension degree must be >= 1")
        if m == 1:
            return FieldSpec.prime(p)
        return FieldSpec("extension", p=p, m=m, modulus=_least_irreducible(p, m))

    @staticmethod
    def parse(s: str) -> "FieldSpec":
        """Parse the CLI field syntax: "Q", "2", "2^2", "5^3"."""
        s = s.strip()
        if s == "Q":
            return FieldSpec.rationals()
        if "^" in s:
            ps, ms = s.split("^", 1)
            return FieldSpec.extension(int(ps), int(ms))
        return FieldSpec.prime(int(s))

    def __repr__(self):
        if self.kind == "rationals":
            return "Q"
        if self.kind == "prime":
            return f"F_{self.p}"
        return f"F_{self.p}^{self.m}"

    def __eq__(self, other):
        return (isinstance(other, FieldSpec) and self.kind == other.kind
                and self.p == other.p and self.m == other.m)

    def __hash__(self):
        return hash((self.kind, self.p, self.m))

    @property
    def order(self):
        """Field size, or None for Q."""
        if self.kind == "rationals":
            return None
        return self.p ** self.m

    @property
    def char(self) -> int:
        return 0 if self.kind == "rationals" else self.p

    # -- raw arithmetic -------------------------------------------------

    def zero(self):
        if self.kind == "rationals":
            return Fraction(0)
        if self.kind == "prime":
            return 0
        return (0,) * self.m

    def one(self):
        if self.kind == "rationals":
            return Fraction(1)
        if self.kind == "prime":
            return 1
        return (1,) + (0,) * (self.m - 1)

    def from_int(self, n: int):
        if self.kind == "rationals":
            return Fraction(n)
        if self.kind == "prime":
            return n % self.p
        return (n % self.p,) + (0,) * (self.m - 1)

    def is_zero(self, a) -> bool:
        if self.kind == "extension":
            return not any(a)
        return a == 0

    def add(self, a, b):
        if self.kind == "prime":
            return (a + b) % self.p
        if self.kind == "rationals":
            return a + b
        return tuple((x + y) % self.p for x, y in zip(a, b))

    def neg(self, a):
        if self.kind == "prime":
            return -a % self.p
        if self.kind == "rationals":
            return -a
        return tuple(-x % self.p for x in a)

    def sub(self, a, b):
        if self.kind == "prime":
            return (a - b) % self.p
        if self.kind == "rationals":
            return a - b
        return tuple((x - y) % self.p for x, y in zip(a, b))

    def mul(self, a, b):
        if self.kind == "prime":
            return a * b % self.p
        if self.kind == "rationals":
            return a * b
        prod = _fp_mul(a, b, self.p)
        rem = _fp_divmod(prod, self.modulus, self.p)[1]
        return rem + (0,) * (self.m - len(rem))

    def inv(self, a):
        if self.is_zero(a):
            raise ZeroDivisionError("inverse of zero field element")
        if self.kind == "prime":
            return pow(a, self.p - 2, self.p)
        if self.kind == "rationals":
            return 1 / a
        # extended Euclid in F_p[x]
        r0, r1 = self.modulus, _fp_trim(a)
        s0, s1 = (), (1,)
        while r1:
            q, r = _fp_divmod(r0, r1, self.p)
            r0, r1 = r1, r
            s0, s1 = s1, _fp_add(s0, tuple(-c % self.p for c in _fp_mul(q, s1, self.p)), self.p)
        lead_inv = pow(r0[-1], self.p - 2, self.p)
        s0 = tuple(c * lead_inv % self.p for c in s0)
        return s0 + (0,) * (self.m - len(s0))

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e: int):
        if e < 0:
            return self.pow(self.inv(a), -e)
        result = self.one()
        while e:
            if e & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            e >>= 1
        return result

    # -- enumeration and codes (finite fields) --------------------------

    def code(self, a) -> int:
        """Integer code of an element; the canonical element order."""
        if self.kind == "prime":
            return a
        if self.kind == "extension":
            return sum(c * self.p ** i for i, c in enumerate(a))
        raise FieldError("rationals are not enumerable")

    def from_code(self, code: int):
        if self.kind == "prime":
            return code
        if self.kind == "extension":
            return _decode_poly(code, self.m, self.p)
        raise FieldError("rationals are not enumerable")

    def elements(self):
        """All elements in canonical (code) order; finite fields only."""
        for code in range(self.order):
            yield self.from_code(code)

    # -- element strings -------------------------------------------------

    def format(self, a) -> str:
        if self.kind == "rationals":
            return str(a)
        if self.kind == "prime":
            return str(a)
        if not any(a):
            return "0"
        terms = []
        for i in range(self.m - 1, -1, -1):
            c = a[i]
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                var = "t" if i == 1 else f"t^{i}"
                terms.append(var if c == 1 else f"{c}*{var}")
        return "+".join(terms)

    def parse_elem(self, s: str):
        s = s.strip().replace(" ", "")
        if self.kind == "rationals":
            return Fraction(s)
        if self.kind == "prime":
            return int(s) % self.p
        coeffs = [0] * self.m
        for term in s.replace("-", "+-").split("+"):
            if not term:
                continue
            neg = term.startswith("-")
            if neg:
                term = term[1:]
            if "t" in term:
                cpart, _, epart = term.partition("t")
                c = int(cpart.rstrip("*")) if cpart.rstrip("*") else 1
                e = int(epart[1:]) if epart.startswith("^") else 1
            else:
                c, e = int(term), 0
            if e >= self.m:
                raise FieldError(f"exponent {e} too large for {self!r}")
            coeffs[e] = (coeffs[e] + (-c if neg else c)) % self.p
        return tuple(coeffs)

    def elem(self, value) -> "FieldElem":
        """Wrap a raw value / int / string as a FieldElem."""
        if isinstance(value, FieldElem):
            if value.spec != self:
                raise FieldError("element from a different field")
            return value
        if isinstance(value, str):
            return FieldElem(self, self.parse_elem(value))
        if isinstance(value, int):
            return FieldElem(self, self.from_int(value))
        return FieldElem(self, value)


class FieldElem:
    """A field element tied to its FieldSpec; immutable, canonical form."""

    __slots__ = ("spec", "value")

    def __init__(self, spec: FieldSpec, value):
        self.spec = spec
        self.value = value

    def _coerce(self, other):
        if isinstance(other, FieldElem):
            if other.spec != self.spec:
                raise FieldError("mixed fields in arithmetic")
            return other.value
        if isinstance(other, int):
            return self.spec.from_int(other)
        return NotImplemented

    def __add__(self, other):
        v = self._coerce(other)
        return FieldElem(self.spec, self.spec.add(self.value, v))

    __radd__ = __add__

    def __sub__(self, other):
        v = self._coerce(other)
        return FieldElem(self.spec, self.spec.sub(self.value, v))

    def __rsub__(self, other):
        v = self._coerce(other)
        return FieldElem(self.spec, self.spec.sub(v, self.value))

    def __mul__(self, other):
        v = self._coerce(other)
        return FieldElem(self.spec, self.spec.mul(self.value, v))

    __rmul__ = __mul__

    def __truediv__(self, other):
        v = self._coerce(other)
        return FieldElem(self.spec, self.spec.div(self.value, v))

    def __neg__(self):
        return FieldElem(self.spec, self.spec.neg(self.value))

    def __pow__(self, e):
        return FieldElem(self.spec, self.spec.pow(self.value, e))

    def __eq__(self, other):
        if isinstance(other, int):
            return self.value == self.spec.from_int(other)
        return (isinstance(other, FieldElem) and other.spec == self.spec
                and other.value == self.value)

    def __hash__(self):
        return hash((self.spec, self.value))

    def __bool__(self):
        return not self.spec.is_zero(self.value)

    def __repr__(self):
        return self.spec.format(self.value)


def field_make(kind: str, p: int = None, m: int = None) -> FieldSpec:
    """Build a validated FieldSpec.

    kind is one of "rationals", "prime", "extension"; the extension modulus
    is the lexicographically least monic irreducible of degree m over F_p.
    """
    if kind == "rationals":
        return FieldSpec.rationals()
    if kind == "prime":
        return FieldSpec.prime(p)
    if kind == "extension":
        return FieldSpec.extension(p, m)
    raise FieldError(f"unknown field kind {kind!r}")


def root_of_unity(spec: FieldSpec, n: int):
    """Least element a != 1 with a^n = 1, or None if the field has none."""
    if n < 1:
        raise FieldError("n must be positive")
    if n == 1:
        return None
    if spec.kind == "rationals":
        return spec.elem(-1) if n % 2 == 0 else None
    for code in range(2, spec.order):
        a = spec.from_code(code)
        if spec.pow(a, n) == spec.one():
            return FieldElem(spec, a)
    # code 0 is zero, code 1 is one; -1 may sort below 2 only for F_2
    return None


def minimal_extension_with_root(p: int, n: int, max_m: int = 32):
    """Smallest F_{p^m} containing a nontrivial n-th root of unity.

    Returns the FieldSpec, or None when n is a power of the characteristic
    (then 1 is the only n-th root in any extension).
    """
    k = n
    while k % p == 0:
        k //= p
    if k == 1:
        return None
    for m in range(1, max_m + 1):
        if (p ** m - 1) % k == 0 and k > 1:
            return field_make("prime", p) if m == 1 else field_make("extension", p, m)
    return None
