"""Exact arithmetic in the cubic field Q(t), t = cbrt(m).

Elements are stored as ``(a + b*t + c*t**2) / d`` with integer coefficients in
canonical form (``d > 0``, ``gcd(a, b, c, d) == 1``).  Because ``1, t, t**2``
are linearly independent over Q when m is not a cube, equality is a tuple
comparison and the zero test is exact.  Signs (and therefore floors and
orderings) are decided by evaluating the element over a certified dyadic
enclosure of t that is refined until the answer is unambiguous.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational

from ._bigint import Z, gcd, icbrt
from .errors import CubeError, DivisionByZero, MixedField, ZeroDenominator

__all__ = [
    "CubicNumber",
    "RationalInterval",
    "make",
    "add",
    "sub",
    "neg",
    "mul",
    "invert",
    "sign",
    "floor",
    "cbrt_bounds",
    "lemma_zveza_check",
    "is_cube",
]

SIGN_START_GUARD = 32
FLOOR_GUARD = 64


@lru_cache(maxsize=None)
def is_cube(m: int) -> bool:
    m = int(m)
    if m < 0:
        return is_cube(-m)
    r = int(icbrt(m))
    return r * r * r == m


def check_modulus(m) -> int:
    """Return m as an int, raising CubeError unless m >= 2 is a noncube."""
    m = int(m)
    if m < 2:
        raise CubeError(f"m must be an integer >= 2, got {m}")
    if is_cube(m):
        raise CubeError(f"m must not be a perfect cube, got {m}")
    return m


# ---------------------------------------------------------------------------
# Certified enclosures of cbrt(m)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RationalInterval:
    """Closed interval [lo, hi] with exact rational endpoints."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def __contains__(self, x) -> bool:
        return self.lo <= x <= self.hi

    def __add__(self, other):
        if isinstance(other, RationalInterval):
            return RationalInterval(self.lo + other.lo, self.hi + other.hi)
        return RationalInterval(self.lo + other, self.hi + other)

    __radd__ = __add__

    def __neg__(self):
        return RationalInterval(-self.hi, -self.lo)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, RationalInterval):
            other = RationalInterval(Fraction(other), Fraction(other))
        products = (self.lo * other.lo, self.lo * other.hi,
                    self.hi * other.lo, self.hi * other.hi)
        return RationalInterval(min(products), max(products))

    __rmul__ = __mul__

    def reciprocal(self) -> "RationalInterval":
        if self.lo <= 0 <= self.hi:
            raise DivisionByZero("reciprocal of an interval containing 0")
        return RationalInterval(1 / self.hi, 1 / self.lo)

    def floor(self):
        """Common floor of every point in the interval, or None if ambiguous."""
        f = self.lo.numerator // self.lo.denominator
        if self.hi.numerator // self.hi.denominator == f:
            return f
        return None


class _RootCache:
    """Highest-precision value of floor(cbrt(m) * 2**k) computed so far, per m.

    A coarser enclosure is obtained by shifting: floor(floor(x*2**K) / 2**(K-k))
    equals floor(x*2**k), so every request below the cached precision is free.
    """

    def __init__(self):
        self._lock = threading.Lock()
        self._best: dict[int, tuple[int, object]] = {}

    def scaled_root(self, m: int, k: int):
        with self._lock:
            hit = self._best.get(m)
            if hit is not None and hit[0] >= k:
                K, T = hit
                return T >> (K - k)
            # grow geometrically so a slowly rising demand costs O(log) roots
            K = k if hit is None else max(k, 2 * hit[0])
            T = icbrt(Z(m) << (3 * K))
            self._best[m] = (K, T)
            return T >> (K - k)


_ROOTS = _RootCache()


def _scaled_root(m: int, k: int):
    """floor(cbrt(m) * 2**k), so cbrt(m) lies strictly inside (T, T+1) / 2**k."""
    return _ROOTS.scaled_root(m, k)


def cbrt_bounds(m: int, bits: int) -> RationalInterval:
    """Certified enclosure lo < cbrt(m) < hi with hi - lo = 2**-bits.

    Enclosures for increasing ``bits`` are nested, since they are the dyadic
    truncations of one and the same real number.
    """
    m = check_modulus(m)
    if bits < 1:
        raise ValueError("bits must be >= 1")
    T = int(_scaled_root(m, bits))
    lo = Fraction(T, 1 << bits)
    hi = Fraction(T + 1, 1 << bits)
    if not (lo ** 3 < m < hi ** 3):
        raise AssertionError(f"uncertified cube-root enclosure for m={m}")
    return RationalInterval(lo, hi)


def _scaled_bounds(m, a, b, c, k):
    """Bounds (lo, hi) with lo < (a + b*t + c*t**2) * 4**k < hi.

    The inequalities are strict whenever (b, c) != (0, 0), because t is
    irrational and so lies strictly inside its dyadic enclosure.
    """
    T = _scaled_root(m, k)
    T1 = T + 1
    base = Z(a) << (2 * k)
    lo = hi = base
    if b:
        bk = Z(b) << k
        if b > 0:
            lo += bk * T
            hi += bk * T1
        else:
            lo += bk * T1
            hi += bk * T
    if c:
        if c > 0:
            lo += c * (T * T)
            hi += c * (T1 * T1)
        else:
            lo += c * (T1 * T1)
            hi += c * (T * T)
    return lo, hi


def _precision(b, c, guard: int) -> int:
    return max(int(abs(b)).bit_length(), int(abs(c)).bit_length()) + guard


def _sign_raw(m: int, a, b, c) -> int:
    """Exact sign of a + b*t + c*t**2."""
    if not b and not c:
        return (a > 0) - (a < 0)
    guard = SIGN_START_GUARD
    while True:
        lo, hi = _scaled_bounds(m, a, b, c, _precision(b, c, guard))
        if lo >= 0:
            return 1
        if hi <= 0:
            return -1
        guard *= 2


def _floor_raw(m: int, a, b, c, d) -> int:
    if not b and not c:
        return int(a // d)
    k = _precision(b, c, FLOOR_GUARD)
    lo, _ = _scaled_bounds(m, a, b, c, k)
    f = lo // (Z(d) << (2 * k))
    while _sign_raw(m, a - f * d, b, c) < 0:
        f -= 1
    while _sign_raw(m, a - (f + 1) * d, b, c) >= 0:
        f += 1
    return int(f)


# ---------------------------------------------------------------------------
# Field elements
# ---------------------------------------------------------------------------

def _canonical(a, b, c, d):
    if d < 0:
        a, b, c, d = -a, -b, -c, -d
    g = d
    for x in (c, b, a):
        if g == 1:
            break
        g = gcd(g, x)
    if g != 1:
        a, b, c, d = a // g, b // g, c // g, d // g
    return a, b, c, d


class CubicNumber:
    """Immutable element (a + b*t + c*t**2)/d of Q(cbrt(m))."""

    __slots__ = ("m", "_a", "_b", "_c", "_d", "_hash")

    def __init__(self, m, a=0, b=0, c=0, d=1):
        m = check_modulus(m)
        if d == 0:
            raise ZeroDenominator("denominator must be nonzero")
        self._set(m, *_canonical(Z(a), Z(b), Z(c), Z(d)))

    def _set(self, m, a, b, c, d):
        self.m = m
        self._a, self._b, self._c, self._d = a, b, c, d
        self._hash = None

    @classmethod
    def _from(cls, m, a, b, c, d):
        """Build from unreduced coefficients, skipping the modulus check."""
        if d == 0:
            raise ZeroDenominator("denominator must be nonzero")
        obj = object.__new__(cls)
        obj._set(m, *_canonical(a, b, c, d))
        return obj

    @classmethod
    def rational(cls, m, value) -> "CubicNumber":
        value = Fraction(value)
        return cls(m, value.numerator, 0, 0, value.denominator)

    @classmethod
    def root(cls, m) -> "CubicNumber":
        """t = cbrt(m)."""
        return cls(m, 0, 1, 0, 1)

    # coefficient access -------------------------------------------------
    @property
    def a(self) -> int:
        return int(self._a)

    @property
    def b(self) -> int:
        return int(self._b)

    @property
    def c(self) -> int:
        return int(self._c)

    @property
    def d(self) -> int:
        return int(self._d)

    @property
    def coefficients(self) -> tuple[int, int, int, int]:
        return self.a, self.b, self.c, self.d

    def is_zero(self) -> bool:
        return not (self._a or self._b or self._c)

    def is_rational(self) -> bool:
        return not (self._b or self._c)

    def __repr__(self):
        return f"CubicNumber(m={self.m}, a={self.a}, b={self.b}, c={self.c}, d={self.d})"

    def __str__(self):
        num = f"{self.a} + {self.b}*t + {self.c}*t^2"
        return f"({num})/{self.d}" if self._d != 1 else f"({num})"

    # coercion -------------------------------------------------------------
    def _coerce(self, other) -> "CubicNumber":
        if isinstance(other, CubicNumber):
            if other.m != self.m:
                raise MixedField(f"cannot combine Q(cbrt({self.m})) with Q(cbrt({other.m}))")
            return other
        if isinstance(other, (int, Rational)):
            other = Fraction(other)
            return CubicNumber._from(self.m, Z(other.numerator), Z(0), Z(0), Z(other.denominator))
        return NotImplemented

    # arithmetic -------------------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        d1, d2 = self._d, other._d
        if d1 == d2:
            return CubicNumber._from(self.m, self._a + other._a, self._b + other._b,
                                     self._c + other._c, d1)
        return CubicNumber._from(self.m,
                                 self._a * d2 + other._a * d1,
                                 self._b * d2 + other._b * d1,
                                 self._c * d2 + other._c * d1,
                                 d1 * d2)

    __radd__ = __add__

    def __neg__(self):
        obj = object.__new__(CubicNumber)
        obj._set(self.m, -self._a, -self._b, -self._c, self._d)
        return obj

    def __pos__(self):
        return self

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        m = self.m
        a1, b1, c1 = self._a, self._b, self._c
        a2, b2, c2 = other._a, other._b, other._c
        # t**3 = m, t**4 = m*t
        a = a1 * a2 + m * (b1 * c2 + c1 * b2)
        b = a1 * b2 + b1 * a2 + m * (c1 * c2)
        c = a1 * c2 + b1 * b2 + c1 * a2
        return CubicNumber._from(m, a, b, c, self._d * other._d)

    __rmul__ = __mul__

    def norm_numerator(self):
        """N(a, b, c) = a^3 + m b^3 + m^2 c^3 - 3 m a b c (the norm is this / d^3)."""
        a, b, c, m = self._a, self._b, self._c, self.m
        return a * a * a + m * b * b * b + m * m * c * c * c - 3 * m * a * b * c

    def inverse(self) -> "CubicNumber":
        if self.is_zero():
            raise DivisionByZero("inverse of zero")
        a, b, c, m = self._a, self._b, self._c, self.m
        n = self.norm_numerator()
        assert n != 0, "nonzero element with zero norm: m is a cube?"
        d = self._d
        return CubicNumber._from(m, d * (a * a - m * b * c), d * (m * c * c - a * b),
                                 d * (b * b - a * c), n)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return self.inverse() ** (-e)
        result = CubicNumber._from(self.m, Z(1), Z(0), Z(0), Z(1))
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    # comparison -------------------------------------------------------------
    def sign(self) -> int:
        return _sign_raw(self.m, self._a, self._b, self._c)

    def floor(self) -> int:
        return _floor_raw(self.m, self._a, self._b, self._c, self._d)

    __floor__ = floor

    def __eq__(self, other):
        if isinstance(other, CubicNumber):
            return (self.m == other.m and self._a == other._a and self._b == other._b
                    and self._c == other._c and self._d == other._d)
        if isinstance(other, (int, Rational)):
            other = Fraction(other)
            return (not self._b and not self._c and self._a == other.numerator
                    and self._d == other.denominator)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            if self.is_rational():
                self._hash = hash(Fraction(int(self._a), int(self._d)))
            else:
                self._hash = hash((self.m, self._a, self._b, self._c, self._d))
        return self._hash

    def _cmp(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return None
        return (self - other).sign()

    def __lt__(self, other):
        s = self._cmp(other)
        return NotImplemented if s is None else s < 0

    def __le__(self, other):
        s = self._cmp(other)
        return NotImplemented if s is None else s <= 0

    def __gt__(self, other):
        s = self._cmp(other)
        return NotImplemented if s is None else s > 0

    def __ge__(self, other):
        s = self._cmp(other)
        return NotImplemented if s is None else s >= 0

    def __bool__(self):
        return not self.is_zero()

    def enclosure(self, bits: int = 64) -> RationalInterval:
        """Rational interval containing the value, of width about 2**-bits."""
        a, b, c, d = self._a, self._b, self._c, self._d
        if not b and not c:
            v = Fraction(int(a), int(d))
            return RationalInterval(v, v)
        k = _precision(b, c, bits + 2)
        lo, hi = _scaled_bounds(self.m, a, b, c, k)
        den = int(d) << (2 * k)
        return RationalInterval(Fraction(int(lo), den), Fraction(int(hi), den))

    def __float__(self):
        e = self.enclosure(60)
        return float((e.lo + e.hi) / 2)


# ---------------------------------------------------------------------------
# Functional surface
# ---------------------------------------------------------------------------

def make(m: int, a: int, b: int, c: int, d: int) -> CubicNumber:
    return CubicNumber(m, a, b, c, d)


def _same_field(x: CubicNumber, y: CubicNumber):
    if x.m != y.m:
        raise MixedField(f"cannot combine Q(cbrt({x.m})) with Q(cbrt({y.m}))")


def add(x: CubicNumber, y: CubicNumber) -> CubicNumber:
    _same_field(x, y)
    return x + y


def sub(x: CubicNumber, y: CubicNumber) -> CubicNumber:
    _same_field(x, y)
    return x - y


def neg(x: CubicNumber) -> CubicNumber:
    return -x


def mul(x: CubicNumber, y: CubicNumber) -> CubicNumber:
    _same_field(x, y)
    return x * y


def invert(x: CubicNumber) -> CubicNumber:
    return x.inverse()


def sign(x: CubicNumber) -> int:
    return x.sign()


def floor(x: CubicNumber) -> int:
    return x.floor()


def lemma_zveza_check(p: int, q: int, m: int) -> bool:
    """Check both product identities linking p/q - cbrt(m) and m*q/p - cbrt(m)**2.

    The identities hold symbolically for every p, q >= 1; evaluating them
    exactly guards the field arithmetic against regressions.
    """
    if p < 1 or q < 1:
        raise ValueError("p and q must be positive")
    t = CubicNumber.root(m)
    t2 = t * t
    qp = Fraction(q, p)
    pq = Fraction(p, q)
    lhs1 = m * qp - t2
    rhs1 = -qp * t2 * (pq - t)
    lhs2 = (m * qp - t2) * (p * p)
    rhs2 = -pq * t2 * (pq - t) * (q * q)
    return lhs1 == rhs1 and lhs2 == rhs2
