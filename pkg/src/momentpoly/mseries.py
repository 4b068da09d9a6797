"""Truncated multivariate power series over a pluggable coefficient type.

Coefficients only need +, -, * (with each other and with ints), / by an
int, and == 0; exact rationals, polynomials in k, mpfr reals and
q-series all qualify.  Truncation is by total degree, with optional
per-variable caps to keep extractions small.
"""

from __future__ import annotations

import math
from itertools import combinations

from .partitions import Partition


class MultiSeries:
    __slots__ = ("num_vars", "max_total", "caps", "terms")

    def __init__(self, num_vars: int, max_total: int, terms=None, caps=None):
        self.num_vars = num_vars
        self.max_total = max_total
        self.caps = tuple(caps) if caps is not None else None
        self.terms = {}
        if terms:
            for e, c in terms.items():
                self._add_term(e, c)

    # -- construction helpers

    @staticmethod
    def constant(num_vars: int, max_total: int, value, caps=None) -> "MultiSeries":
        s = MultiSeries(num_vars, max_total, caps=caps)
        if not _is_zero(value):
            s.terms[(0,) * num_vars] = value
        return s

    @staticmethod
    def univariate(coeffs, var: int, num_vars: int, max_total: int, caps=None) -> "MultiSeries":
        """Series sum_a coeffs[a] * z_var^a embedded in num_vars variables."""
        s = MultiSeries(num_vars, max_total, caps=caps)
        for a, c in enumerate(coeffs):
            e = [0] * num_vars
            e[var] = a
            s._add_term(tuple(e), c)
        return s

    @staticmethod
    def pair_substituted(coeffs, i: int, j: int, num_vars: int, max_total: int, caps=None) -> "MultiSeries":
        """Series g(z_i + z_j) for univariate g given by coeffs (i may equal j)."""
        s = MultiSeries(num_vars, max_total, caps=caps)
        for a, c in enumerate(coeffs):
            if _is_zero(c):
                continue
            if i == j:
                e = [0] * num_vars
                e[i] = a
                s._add_term(tuple(e), c * (2**a))
                continue
            for b in range(a + 1):
                e = [0] * num_vars
                e[i] = b
                e[j] = a - b
                s._add_term(tuple(e), c * math.comb(a, b))
        return s

    def _fits(self, e) -> bool:
        if sum(e) > self.max_total:
            return False
        if self.caps is not None and any(x > c for x, c in zip(e, self.caps)):
            return False
        return True

    def _add_term(self, e, c):
        if not self._fits(e) or _is_zero(c):
            return
        cur = self.terms.get(e)
        if cur is None:
            self.terms[e] = c
        else:
            new = cur + c
            if _is_zero(new):
                del self.terms[e]
            else:
                self.terms[e] = new

    def _like(self) -> "MultiSeries":
        return MultiSeries(self.num_vars, self.max_total, caps=self.caps)

    def copy(self) -> "MultiSeries":
        s = self._like()
        s.terms = dict(self.terms)
        return s

    def constant_term(self):
        return self.terms.get((0,) * self.num_vars, 0)

    def coefficient(self, e):
        return self.terms.get(tuple(e), 0)

    # -- arithmetic

    def __add__(self, other):
        if isinstance(other, MultiSeries):
            self._check_shape(other)
            s = self.copy()
            for e, c in other.terms.items():
                s._add_term(e, c)
            return s
        s = self.copy()
        s._add_term((0,) * self.num_vars, other)
        return s

    __radd__ = __add__

    def __neg__(self):
        s = self._like()
        s.terms = {e: -c for e, c in self.terms.items()}
        return s

    def __sub__(self, other):
        if isinstance(other, MultiSeries):
            return self + (-other)
        return self + (-other)

    def scale(self, factor) -> "MultiSeries":
        s = self._like()
        if _is_zero(factor):
            return s
        s.terms = {e: c * factor for e, c in self.terms.items()}
        return s

    def __mul__(self, other):
        if not isinstance(other, MultiSeries):
            return self.scale(other)
        return ms_mul(self, other)

    __rmul__ = __mul__

    def _check_shape(self, other):
        if self.num_vars != other.num_vars or self.max_total != other.max_total:
            raise ValueError("mismatched series shapes")

    def __repr__(self):
        items = sorted(self.terms.items())[:8]
        body = ", ".join(f"{e}:{c}" for e, c in items)
        more = "" if len(self.terms) <= 8 else f", ... ({len(self.terms)} terms)"
        return f"MultiSeries[{self.num_vars} vars, T={self.max_total}]({body}{more})"


def _is_zero(c) -> bool:
    try:
        return c == 0
    except TypeError:
        return False


def _div_int(c, n: int):
    """Divide a coefficient by an integer, exactly for int coefficients."""
    from fractions import Fraction

    if isinstance(c, int):
        return Fraction(c, n)
    return c / n


def ms_mul(a: MultiSeries, b: MultiSeries) -> MultiSeries:
    """Truncated product; shapes must match."""
    a._check_shape(b)
    out = a._like()
    if a.caps is None and b.caps is not None:
        out.caps = b.caps
    bt = list(b.terms.items())
    for e1, c1 in a.terms.items():
        s1 = sum(e1)
        for e2, c2 in bt:
            if s1 + sum(e2) > out.max_total:
                continue
            e = tuple(x + y for x, y in zip(e1, e2))
            out._add_term(e, c1 * c2)
    return out


def ms_log(f: MultiSeries) -> MultiSeries:
    """Logarithm of a series with constant term exactly 1."""
    if f.constant_term() != 1:
        raise ValueError("log normalization")
    u = f - 1
    out = f._like()
    power = None
    for m in range(1, f.max_total + 1):
        power = u if power is None else ms_mul(power, u)
        if not power.terms:
            break
        sign = 1 if m % 2 == 1 else -1
        for e, c in power.terms.items():
            out._add_term(e, _div_int(c if sign == 1 else -c, m))
    return out


def ms_exp(f: MultiSeries) -> MultiSeries:
    """Exponential of a series with constant term 0."""
    if not _is_zero(f.constant_term()):
        raise ValueError("exp needs zero constant term")
    out = MultiSeries.constant(f.num_vars, f.max_total, 1, caps=f.caps)
    power = None
    fact = 1
    for m in range(1, f.max_total + 1):
        power = f if power is None else ms_mul(power, f)
        if not power.terms:
            break
        fact *= m
        for e, c in power.terms.items():
            out._add_term(e, _div_int(c, fact))
    return out


def assert_symmetric(f: MultiSeries, samples: int = 20):
    """Spot-check invariance under variable transpositions."""
    if f.num_vars < 2:
        return
    swaps = list(combinations(range(f.num_vars), 2))
    checked = 0
    for e, c in sorted(f.terms.items()):
        for i, j in swaps:
            if e[i] == e[j]:
                continue
            se = list(e)
            se[i], se[j] = se[j], se[i]
            mirror = f.terms.get(tuple(se), 0)
            if not _is_zero(c - mirror):
                raise ValueError(f"series not symmetric at {e} <-> {tuple(se)}")
            checked += 1
            if checked >= samples:
                return


def extract_mlambda(f: MultiSeries, lam: Partition):
    """Coefficient of the monomial symmetric function m_lambda in a
    symmetric series: read off the single monomial z^lambda."""
    if lam.length > f.num_vars:
        raise ValueError("partition longer than the number of variables")
    assert_symmetric(f)
    return f.coefficient(lam.padded(f.num_vars))


def monomial_orbit(lam: Partition, num_vars: int):
    """Distinct exponent tuples of m_lambda in num_vars variables."""
    if lam.length > num_vars:
        return
    base = lam.padded(num_vars)
    seen = set()

    def rec(remaining, prefix):
        if not remaining:
            yield tuple(prefix)
            return
        used = set()
        for idx, v in enumerate(remaining):
            if v in used:
                continue
            used.add(v)
            yield from rec(remaining[:idx] + remaining[idx + 1:], prefix + [v])

    for e in rec(list(base), []):
        if e not in seen:
            seen.add(e)
            yield e
