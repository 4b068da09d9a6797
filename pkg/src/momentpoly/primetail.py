"""Prime generation and prime-sum acceleration.

Direct summation stops at a cutoff P; the remainder of each coefficient
is re-expanded in powers of q = p^(-1/2) and the resulting sums
sum_{p>P} p^(-m/2) (log p)^w are evaluated through derivatives of the
prime zeta function P(s) = sum_n mu(n)/n log zeta(ns).
"""

from __future__ import annotations

import math

import gmpy2
import mpmath
from gmpy2 import mpfr

from .algebra import workprec


def prime_sieve(limit: int):
    """Primes up to and including limit."""
    if limit < 2:
        return []
    sieve = bytearray([1]) * (limit + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, int(limit**0.5) + 1):
        if sieve[i]:
            sieve[i * i:: i] = bytearray(len(sieve[i * i:: i]))
    return [i for i in range(2, limit + 1) if sieve[i]]


def mobius_sieve(limit: int):
    """mu(0..limit) as a list."""
    mu = [1] * (limit + 1)
    mu[0] = 0
    primes = prime_sieve(limit)
    for p in primes:
        for m in range(p, limit + 1, p):
            mu[m] = -mu[m]
        pp = p * p
        for m in range(pp, limit + 1, pp):
            mu[m] = 0
    return mu


def from_mpmath(x, bits: int) -> mpfr:
    """Exact conversion of an mpmath float to mpfr."""
    sign, man, exp, _ = x._mpf_
    if man == 0:
        return mpfr(0, bits)
    with gmpy2.context(precision=bits + 8):
        return mpfr(-man if sign else man) * mpfr(2) ** exp


# ---------------------------------------------------------------------------
# truncated series in q (and in q with an auxiliary coefficient parameter)


class QSeries:
    """Dense truncated power series in q over mpfr (or exact) scalars."""

    __slots__ = ("order", "c")

    def __init__(self, order: int, coeffs=None):
        self.order = order
        self.c = [0] * (order + 1)
        if coeffs is not None:
            for i, v in enumerate(coeffs[: order + 1]):
                self.c[i] = v

    @staticmethod
    def scalar(order, value):
        s = QSeries(order)
        s.c[0] = value
        return s

    @staticmethod
    def gen(order):
        s = QSeries(order)
        if order >= 1:
            s.c[1] = 1
        return s

    def __bool__(self):
        return any(self.c)

    def copy(self):
        s = QSeries(self.order)
        s.c = list(self.c)
        return s

    def __add__(self, other):
        s = self.copy()
        if isinstance(other, QSeries):
            for i, v in enumerate(other.c):
                if v:
                    s.c[i] = s.c[i] + v
        else:
            s.c[0] = s.c[0] + other
        return s

    __radd__ = __add__

    def __neg__(self):
        s = QSeries(self.order)
        s.c = [-v if v else 0 for v in self.c]
        return s

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, QSeries):
            if not other:
                return QSeries(self.order)
            s = QSeries(self.order)
            s.c = [v * other if v else 0 for v in self.c]
            return s
        out = QSeries(self.order)
        for i, a in enumerate(self.c):
            if not a:
                continue
            for j in range(self.order + 1 - i):
                b = other.c[j]
                if b:
                    out.c[i + j] = out.c[i + j] + a * b
        return out

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        s = QSeries(self.order)
        s.c = [v / scalar if v else 0 for v in self.c]
        return s

    def shift(self, n: int):
        """Multiply by q^n."""
        s = QSeries(self.order)
        for i, v in enumerate(self.c):
            if v and i + n <= self.order:
                s.c[i + n] = v
        return s

    def recip(self):
        """1/self; the constant term must be invertible."""
        c0 = self.c[0]
        out = QSeries(self.order)
        inv0 = 1 / c0
        out.c[0] = inv0
        for n in range(1, self.order + 1):
            acc = 0
            for i in range(1, n + 1):
                if self.c[i] and out.c[n - i]:
                    acc = acc + self.c[i] * out.c[n - i]
            out.c[n] = -inv0 * acc if acc else 0
        return out

    def log(self):
        """log(self) for a series with positive constant term."""
        c0 = self.c[0]
        u = self / c0
        u.c[0] = 0
        out = QSeries(self.order)
        out.c[0] = gmpy2.log(c0) if isinstance(c0, mpfr) else math.log(c0)
        power = None
        for m in range(1, self.order + 1):
            power = u if power is None else power * u
            if not power:
                break
            sign = 1 if m % 2 else -1
            for i, v in enumerate(power.c):
                if v:
                    out.c[i] = out.c[i] + (v if sign == 1 else -v) / m
        return out

    @staticmethod
    def binom_inv_power(order: int, k: int, sign: int, bits: int):
        """(1 - sign*q)^(-k) as a q-series."""
        out = QSeries(order)
        with workprec(bits):
            acc = mpfr(1)
            out.c[0] = acc
            for m in range(1, order + 1):
                acc = acc * (k + m - 1) / m
                out.c[m] = acc * (sign**m)
        return out

    def __repr__(self):
        return f"QSeries({[float(v) if v else 0 for v in self.c[:6]]}...)"


class QTSeries:
    """Truncated series in q and an auxiliary parameter t (per-prime a(p)).

    Used only for the elliptic tail templates; t always rides along with
    at least one power of q.
    """

    __slots__ = ("qorder", "torder", "terms")

    def __init__(self, qorder: int, torder: int, terms=None):
        self.qorder = qorder
        self.torder = torder
        self.terms = dict(terms) if terms else {}

    @staticmethod
    def scalar(qorder, torder, value):
        s = QTSeries(qorder, torder)
        if value:
            s.terms[(0, 0)] = value
        return s

    def _add_term(self, key, v):
        if not v:
            return
        qe, te = key
        if qe > self.qorder or te > self.torder:
            return
        cur = self.terms.get(key)
        new = v if cur is None else cur + v
        if new:
            self.terms[key] = new
        elif cur is not None:
            del self.terms[key]

    def __bool__(self):
        return bool(self.terms)

    def copy(self):
        return QTSeries(self.qorder, self.torder, self.terms)

    def __add__(self, other):
        s = self.copy()
        if isinstance(other, QTSeries):
            for key, v in other.terms.items():
                s._add_term(key, v)
        else:
            s._add_term((0, 0), other)
        return s

    __radd__ = __add__

    def __neg__(self):
        return QTSeries(self.qorder, self.torder, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, QTSeries):
            if not other:
                return QTSeries(self.qorder, self.torder)
            return QTSeries(self.qorder, self.torder,
                            {k: v * other for k, v in self.terms.items()})
        out = QTSeries(self.qorder, self.torder)
        for (q1, t1), a in self.terms.items():
            for (q2, t2), b in other.terms.items():
                if q1 + q2 <= self.qorder and t1 + t2 <= self.torder:
                    out._add_term((q1 + q2, t1 + t2), a * b)
        return out

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return QTSeries(self.qorder, self.torder,
                        {k: v / scalar for k, v in self.terms.items()})

    def recip(self):
        c0 = self.terms.get((0, 0))
        if not c0:
            raise ZeroDivisionError("QTSeries reciprocal needs a constant term")
        u = self / c0
        del u.terms[(0, 0)]
        out = QTSeries.scalar(self.qorder, self.torder, 1 / c0)
        power = None
        acc = QTSeries.scalar(self.qorder, self.torder, 1)
        for m in range(1, self.qorder + 1):
            power = u if power is None else power * u
            if not power:
                break
            sign = 1 if m % 2 == 0 else -1
            acc = acc + (power if sign == 1 else -power)
        return acc * (1 / c0)

    def log(self):
        c0 = self.terms.get((0, 0))
        if not c0:
            raise ValueError("QTSeries log needs a constant term")
        u = self / c0
        del u.terms[(0, 0)]
        out = QTSeries.scalar(self.qorder, self.torder,
                              gmpy2.log(c0) if isinstance(c0, mpfr) else math.log(c0))
        power = None
        for m in range(1, self.qorder + 1):
            power = u if power is None else power * u
            if not power:
                break
            sign = 1 if m % 2 else -1
            out = out + (power if sign == 1 else -power) / m
        return out


# ---------------------------------------------------------------------------
# log-zeta jets and the prime zeta function

_DIRECT_X_THRESHOLD = 30.0


def zeta_log_jet(x2: int, order: int, bits: int) -> list:
    """[d^j/dx^j log zeta(x)] for j = 0..order at x = x2/2."""
    x = x2 / 2
    if x <= 1:
        raise ValueError("need x > 1")
    if x >= _DIRECT_X_THRESHOLD:
        return _zeta_log_jet_direct(x2, order, bits)
    return _zeta_log_jet_mpmath(x2, order, bits)


def _zeta_log_jet_direct(x2: int, order: int, bits: int) -> list:
    # log zeta(x) = sum over prime powers p^e of p^(-e x)/e, so the j-th
    # derivative is sum (-e log p)^j p^(-e x) / e
    with workprec(bits + 32):
        x = mpfr(x2) / 2
        bound = 2 ** ((bits + 48) / float(x))
        out = [mpfr(0) for _ in range(order + 1)]
        for p in prime_sieve(int(bound) + 1):
            logp = gmpy2.log(mpfr(p))
            e = 1
            pe = p
            while pe <= bound:
                base = gmpy2.exp(-x * e * logp) / e
                factor = -e * logp
                term = base
                out[0] += term
                for j in range(1, order + 1):
                    term = term * factor
                    out[j] += term
                e += 1
                pe *= p
        return out


def _zeta_log_jet_mpmath(x2: int, order: int, bits: int) -> list:
    with mpmath.workprec(bits + 48):
        x = mpmath.mpf(x2) / 2
        derivs = [mpmath.zeta(x, derivative=j) for j in range(order + 1)]
    with workprec(bits + 32):
        taylor = [from_mpmath(d, bits + 32) / math.factorial(j)
                  for j, d in enumerate(derivs)]
        # series log of the local Taylor expansion of zeta
        t0 = taylor[0]
        u = [c / t0 for c in taylor]
        u[0] = mpfr(0)
        logc = [mpfr(0) for _ in range(order + 1)]
        logc[0] = gmpy2.log(t0)
        power = list(u)
        for m in range(1, order + 1):
            if m > 1:
                power = _useries_mul(power, u, order)
            sign = 1 if m % 2 else -1
            for i in range(order + 1):
                if power[i]:
                    logc[i] += (power[i] if sign == 1 else -power[i]) / m
        return [logc[j] * math.factorial(j) for j in range(order + 1)]


def _useries_mul(a, b, order):
    out = [0] * (order + 1)
    for i, av in enumerate(a):
        if not av:
            continue
        for j in range(order + 1 - i):
            if b[j]:
                out[i + j] = out[i + j] + av * b[j]
    return [v if v else mpfr(0) for v in out]


def prime_zeta_derivatives(s2: int, order: int, bits: int, jet_provider=None) -> list:
    """[P^(w)(s)] for w = 0..order at s = s2/2, via Moebius inversion."""
    if s2 <= 2:
        raise ValueError("prime zeta needs s > 1")
    jet_provider = jet_provider or zeta_log_jet
    nmax = max(2, int((2 * (bits + 64)) // s2) + 1)
    mu = mobius_sieve(nmax)
    with workprec(bits + 32):
        out = [mpfr(0) for _ in range(order + 1)]
        for n in range(1, nmax + 1):
            if mu[n] == 0:
                continue
            jet = jet_provider(n * s2, order, bits)
            npow = mpfr(1)
            for w in range(order + 1):
                # d^w/ds^w log zeta(n s) = n^w (log zeta)^(w)(n s)
                out[w] += mu[n] * npow * jet[w] / n
                npow = npow * n
        return out


class TailTables:
    """sum_{p > cutoff} p^(-m/2) (log p)^w for the needed (m, w) grid."""

    def __init__(self, cutoff: int, max_m: int, max_w: int, bits: int, cache=None):
        self.cutoff = cutoff
        self.max_m = max_m
        self.max_w = max_w
        self.bits = bits
        self._cache = cache
        self._tails = {}
        self._finite = None

    def _finite_table(self):
        if self._finite is not None:
            return self._finite
        table = {}
        with workprec(self.bits + 32):
            for m in range(3, self.max_m + 1):
                for w in range(self.max_w + 1):
                    table[(m, w)] = mpfr(0)
            for p in prime_sieve(self.cutoff):
                pm = mpfr(p)
                qq = 1 / gmpy2.sqrt(pm)
                logp = gmpy2.log(pm)
                logpw = [mpfr(1)]
                for w in range(1, self.max_w + 1):
                    logpw.append(logpw[-1] * logp)
                qpow = qq * qq
                for m in range(3, self.max_m + 1):
                    qpow = qpow * qq
                    for w in range(self.max_w + 1):
                        table[(m, w)] += qpow * logpw[w]
        self._finite = table
        return table

    def tail(self, m: int, w: int) -> mpfr:
        """Tail sum for exponent p^(-m/2), log-power w; needs m >= 3."""
        if m < 3:
            raise ValueError("tail sums require p exponent < -1")
        key = (m, w)
        if key in self._tails:
            return self._tails[key]
        cache_key = f"{m}_{w}_{self.cutoff}_{self.bits}"
        if self._cache is not None:
            hit = self._cache.get("prime_tails", cache_key)
            if hit is not None:
                from .algebra import mpfr_from_hex

                val = mpfr_from_hex(hit)
                self._tails[key] = val
                return val
        derivs = prime_zeta_derivatives(m, w, self.bits)
        with workprec(self.bits + 32):
            total = derivs[w] if w % 2 == 0 else -derivs[w]
            val = total - self._finite_table()[(m, w)]
        self._tails[key] = val
        if self._cache is not None:
            from .algebra import mpfr_to_hex

            self._cache.put("prime_tails", cache_key, mpfr_to_hex(val))
        return val
