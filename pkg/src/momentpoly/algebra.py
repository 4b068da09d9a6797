"""Exact and high-precision arithmetic: integers, rationals, dense
univariate polynomials, and reals with an explicit working precision.

Polynomials are dense lists of Fractions indexed by the power of the
variable (called k throughout, since almost every polynomial here is a
polynomial in the moment exponent k).
"""

from __future__ import annotations

import math
from contextlib import contextmanager
from fractions import Fraction

import gmpy2
from gmpy2 import mpfr

DEFAULT_PRECISION = 256


def binomial(n: int, m: int) -> int:
    """Binomial coefficient C(n, m), extended to negative n.

    For m < 0 the value is 0.  For n >= 0 this is the usual coefficient
    (0 when m > n).  For n < 0 we use the falling-factorial convention
    C(n, m) = n(n-1)...(n-m+1)/m!, so e.g. C(-3, 2) = 6.
    """
    if m < 0:
        return 0
    if n >= 0:
        return math.comb(n, m) if m <= n else 0
    num = 1
    for i in range(m):
        num *= n - i
    return num // math.factorial(m)


def falling_factorial(x, n: int):
    """x(x-1)...(x-n+1) for an integer, Fraction or Poly x; n = 0 gives 1."""
    if n < 0:
        raise ValueError("falling_factorial needs n >= 0")
    if isinstance(x, Poly):
        result = Poly.one()
        for i in range(n):
            result = result * (x - i)
        return result
    result = 1
    for i in range(n):
        result *= x - i
    return result


class Poly:
    """Dense univariate polynomial over Fraction.

    Coefficient i is the coefficient of k^i.  The zero polynomial stores
    an empty coefficient list; no trailing zeros are kept.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [c if isinstance(c, Fraction) else Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @staticmethod
    def zero() -> "Poly":
        return Poly(())

    @staticmethod
    def one() -> "Poly":
        return Poly((1,))

    @staticmethod
    def x() -> "Poly":
        """The identity polynomial k."""
        return Poly((0, 1))

    @staticmethod
    def const(c) -> "Poly":
        return Poly((c,))

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self == Poly.const(other)
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [Fraction(0)] * (n - len(self.coeffs))
        for i, c in enumerate(other.coeffs):
            a[i] += c
        return Poly(a)

    __radd__ = __add__

    def __neg__(self):
        return Poly([-c for c in self.coeffs])

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return Poly.zero()
            return Poly([c * other for c in self.coeffs])
        if not isinstance(other, Poly):
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return Poly.zero()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return Poly([c / scalar for c in self.coeffs])

    def __pow__(self, n: int):
        result = Poly.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __call__(self, at):
        return poly_eval(self, at)

    def __repr__(self):
        if self.is_zero():
            return "Poly(0)"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c:
                parts.append(f"{c}*k^{i}" if i else f"{c}")
        return "Poly(" + " + ".join(parts) + ")"


def divmod_poly(num: Poly, den: Poly):
    """Exact rational polynomial division with remainder."""
    if den.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    r = list(num.coeffs)
    d = den.coeffs
    q = [Fraction(0)] * max(len(r) - len(d) + 1, 0)
    while len(r) >= len(d):
        c = r[-1] / d[-1]
        pos = len(r) - len(d)
        q[pos] = c
        for i, dc in enumerate(d):
            r[pos + i] -= c * dc
        while r and r[-1] == 0:
            r.pop()
        if not any(r):
            r = []
    return Poly(q), Poly(r)


def poly_eval(p: Poly, at):
    """Horner evaluation, returning the kind of `at`: exact for int or
    Fraction arguments, precision-carrying for mpfr or PrecReal."""
    if isinstance(at, PrecReal):
        with gmpy2.context(precision=at.precision):
            return PrecReal(poly_eval(p, at.value))
    if not p.coeffs:
        if isinstance(at, mpfr):
            return mpfr(0)
        return Fraction(0)
    if isinstance(at, mpfr):
        acc = mpfr(0)
        for c in reversed(p.coeffs):
            acc = acc * at + mpfr(c.numerator) / mpfr(c.denominator)
        return acc
    acc = Fraction(0)
    for c in reversed(p.coeffs):
        acc = acc * at + c
    return acc


def interpolate(points) -> Poly:
    """Unique polynomial through the given (abscissa, value) pairs.

    Newton's divided differences in exact rational arithmetic.  Raises
    ValueError("degenerate nodes") on a repeated abscissa.
    """
    pts = [(Fraction(x), Fraction(y)) for x, y in points]
    if not pts:
        raise ValueError("need at least one point")
    xs = [x for x, _ in pts]
    if len(set(xs)) != len(xs):
        raise ValueError("degenerate nodes")
    # divided difference table, built in place
    coef = [y for _, y in pts]
    n = len(pts)
    for level in range(1, n):
        for i in range(n - 1, level - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - level])
    # expand the Newton form
    result = Poly.zero()
    basis = Poly.one()
    for i in range(n):
        result = result + basis * coef[i]
        basis = basis * (Poly.x() - xs[i])
    return result


def binomial_poly(shift: int, m: int) -> Poly:
    """C(k + shift, m) as a polynomial in k: (k+shift)(k+shift-1).../m!."""
    p = falling_factorial(Poly.x() + shift, m)
    return p / Fraction(math.factorial(m))


# ---------------------------------------------------------------------------
# precision reals


@contextmanager
def workprec(bits: int):
    """Context manager running gmpy2 arithmetic at the given precision."""
    with gmpy2.context(precision=bits):
        yield


def to_mpfr(x, bits: int) -> mpfr:
    """Convert int/Fraction/str/float to mpfr at an explicit precision."""
    with gmpy2.context(precision=bits):
        if isinstance(x, Fraction):
            return mpfr(x.numerator) / mpfr(x.denominator)
        return mpfr(x)


def mpfr_to_sci(x: mpfr, digits: int) -> str:
    """Scientific-notation decimal string with the given significant digits."""
    if gmpy2.is_nan(x):
        return "nan"
    if x == 0:
        return "0." + "0" * (digits - 1) + "e+00"
    mant, exp, _ = x.digits(10, digits)
    sign = ""
    if mant.startswith("-"):
        sign, mant = "-", mant[1:]
    # digits() gives value = 0.mant * 10^exp
    e = exp - 1
    return f"{sign}{mant[0]}.{mant[1:]}e{e:+03d}"


def mpfr_to_hex(x: mpfr) -> str:
    """Lossless serialization: base-16 mantissa @ exponent : precision."""
    if x == 0:
        return f"0@0:{x.precision}"
    mant, exp, prec = x.digits(16)
    return f"{mant}@{exp}:{prec}"


def mpfr_from_hex(s: str) -> mpfr:
    body, prec = s.rsplit(":", 1)
    mant, exp = body.split("@")
    bits = int(prec)
    # the sign stays inside the parsed literal: arithmetic (even unary
    # minus) would round the value to the ambient context precision
    sign = ""
    if mant.startswith("-"):
        sign, mant = "-", mant[1:]
    if mant == "0":
        return mpfr(0, bits)
    return gmpy2.mpfr(sign + "0." + mant + "@" + exp, bits, 16)


class PrecReal:
    """Real number carrying an explicit working precision in bits.

    Arithmetic runs at the minimum of the operand precisions and the
    result is tagged with that precision; nothing is reduced silently.
    """

    __slots__ = ("value",)

    def __init__(self, value, precision: int = DEFAULT_PRECISION):
        if isinstance(value, mpfr):
            self.value = value
        else:
            self.value = to_mpfr(value, precision)

    @property
    def precision(self) -> int:
        return self.value.precision

    def _binop(self, other, op):
        if isinstance(other, PrecReal):
            bits = min(self.precision, other.precision)
            o = other.value
        else:
            bits = self.precision
            o = other
        with gmpy2.context(precision=bits):
            return PrecReal(op(self.value, o))

    def __add__(self, other):
        return self._binop(other, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binop(other, lambda a, b: a - b)

    def __rsub__(self, other):
        return self._binop(other, lambda a, b: b - a)

    def __mul__(self, other):
        return self._binop(other, lambda a, b: a * b)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self._binop(other, lambda a, b: a / b)

    def __neg__(self):
        with gmpy2.context(precision=self.precision):
            return PrecReal(-self.value)

    def __abs__(self):
        with gmpy2.context(precision=self.precision):
            return PrecReal(abs(self.value))

    def __eq__(self, other):
        if isinstance(other, PrecReal):
            return self.value == other.value
        return self.value == other

    def __lt__(self, other):
        return self.value < (other.value if isinstance(other, PrecReal) else other)

    def __float__(self):
        return float(self.value)

    def to_sci(self, digits: int = 19) -> str:
        return mpfr_to_sci(self.value, digits)

    def __repr__(self):
        return f"PrecReal({self.to_sci()}, bits={self.precision})"


def rational_str(q: Fraction) -> str:
    """Serialize a rational as "num/den" (den always positive)."""
    return f"{q.numerator}/{q.denominator}"


def rational_from_str(s: str) -> Fraction:
    num, _, den = s.partition("/")
    return Fraction(int(num), int(den) if den else 1)
