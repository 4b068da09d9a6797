"""Symmetric-function compression for the prime-side log expansions.

A symmetric series in any number of variables, truncated above total
degree R, is stored as a polynomial in the power sums pi_1..pi_R.
Monomials in the pi's are indexed by the partitions of weight <= R, so
an element is just a flat coefficient list; that keeps per-prime work a
few thousand scalar operations instead of a full multivariate product.

Elements are plain lists indexed by partition id.  Coefficients may be
mpfr numbers, exact rationals, or truncated q-series; they only need
+, *, / by int, and truthiness.
"""

from __future__ import annotations

import math
from functools import lru_cache

from .partitions import partitions_up_to


class PowerSumRing:
    """Index tables for polynomials in power sums, truncated by weight."""

    def __init__(self, max_weight: int):
        self.max_weight = max_weight
        self.parts = [p.parts for p in partitions_up_to(max_weight)]
        self.index = {p: i for i, p in enumerate(self.parts)}
        self.weights = [sum(p) for p in self.parts]
        self.size = len(self.parts)

        # ordered index pairs (i, j) with nonzero weights whose product
        # monomial still fits; product of pi-monomials is multiset union
        self.triples = []
        for i, pi in enumerate(self.parts):
            if not pi:
                continue
            wi = self.weights[i]
            for j, pj in enumerate(self.parts):
                if not pj or wi + self.weights[j] > max_weight:
                    continue
                tgt = self.index[tuple(sorted(pi + pj, reverse=True))]
                self.triples.append((i, j, tgt))

        # removing one largest part: id -> (parent id, part, multiplicity)
        self.exp_rec = [None] * self.size
        for i, pi in enumerate(self.parts):
            if not pi:
                continue
            a = pi[0]
            parent = self.index[pi[1:]]
            mult = pi.count(a)
            self.exp_rec[i] = (parent, a, mult)

    def zero(self) -> list:
        return [0] * self.size

    def one(self) -> list:
        e = self.zero()
        e[0] = 1
        return e

    def mul(self, A: list, B: list) -> list:
        out = self.zero()
        a0, b0 = A[0], B[0]
        if a0:
            for idx in range(self.size):
                if B[idx]:
                    out[idx] = out[idx] + a0 * B[idx]
        if b0:
            for idx in range(1, self.size):
                if A[idx]:
                    out[idx] = out[idx] + A[idx] * b0
        for i, j, t in self.triples:
            if A[i] and B[j]:
                out[t] = out[t] + A[i] * B[j]
        return out

    def add_into(self, A: list, B: list, factor=1):
        for idx in range(self.size):
            if B[idx]:
                A[idx] = A[idx] + B[idx] * factor

    def exp_linear(self, lin_coeffs: dict) -> list:
        """exp(sum_a lin_coeffs[a] * pi_a) via the product formula.

        The coefficient at pi-monomial mu is prod_a c_a^{m_a} / m_a!.
        """
        out = self.zero()
        out[0] = 1
        for i in range(1, self.size):
            parent, a, mult = self.exp_rec[i]
            c = lin_coeffs.get(a, 0)
            if c and out[parent]:
                out[i] = out[parent] * c / mult
            else:
                out[i] = 0
        return out

    def log_from_unit(self, A: list) -> list:
        """log of an element whose constant entry is exactly 1.

        The constant slot of the result is 0; callers add the log of any
        prior normalization themselves.
        """
        w = list(A)
        w[0] = 0
        out = self.zero()
        power = w
        for m in range(1, self.max_weight + 1):
            if m > 1:
                power = self.mul(power, w)
            if not any(power[i] for i in range(self.size)):
                break
            sign = 1 if m % 2 else -1
            for idx in range(1, self.size):
                if power[idx]:
                    out[idx] = out[idx] + (power[idx] if sign == 1 else -power[idx]) / m
        return out

    def exp_zero(self, A: list) -> list:
        """exp of an element with zero constant entry."""
        out = self.zero()
        out[0] = 1
        power = None
        fact = 1
        for m in range(1, self.max_weight + 1):
            power = A if power is None else self.mul(power, A)
            if not any(power[i] for i in range(self.size)):
                break
            fact *= m
            for idx in range(self.size):
                if power[idx]:
                    out[idx] = out[idx] + power[idx] / fact
        return out

    def add_pair_distribution(self, acc: list, coeffs, k: int, include_diagonal: bool):
        """Accumulate sum over index pairs of g(z_i + z_j) for univariate g.

        coeffs[a] is the degree-a coefficient of g; the pair range is
        i <= j when include_diagonal else i < j, out of k variables.
        The degree-0 coefficient lands in the constant slot with the
        pair count as its multiplier.
        """
        npairs = k * (k + 1) // 2 if include_diagonal else k * (k - 1) // 2
        if coeffs[0]:
            acc[0] = acc[0] + npairs * coeffs[0]
        for a in range(1, min(len(coeffs), self.max_weight + 1)):
            c = coeffs[a]
            if not c:
                continue
            diag = 2 ** (a - 1)
            # (1/2) sum_b C(a,b) pi_b pi_{a-b}  +/-  2^(a-1) pi_a
            for b in range(a + 1):
                cb = c * math.comb(a, b)
                if b == 0 or b == a:
                    # pi_0 = k
                    ida = self.index[(a,)]
                    acc[ida] = acc[ida] + cb * k / 2
                else:
                    mono = tuple(sorted((b, a - b), reverse=True))
                    idm = self.index[mono]
                    acc[idm] = acc[idm] + cb / 2
            ida = self.index[(a,)]
            if include_diagonal:
                acc[ida] = acc[ida] + c * diag
            else:
                acc[ida] = acc[ida] - c * diag

    def add_linear(self, acc: list, coeffs, factor=1, count=1):
        """Accumulate factor * sum over count variables of g(z_i).

        coeffs[a] is the degree-a coefficient of the univariate g; the
        degree-0 part lands in the constant slot multiplied by count.
        """
        if coeffs[0]:
            acc[0] = acc[0] + coeffs[0] * factor * count
        for a in range(1, min(len(coeffs), self.max_weight + 1)):
            if coeffs[a]:
                ida = self.index[(a,)]
                acc[ida] = acc[ida] + coeffs[a] * factor


@lru_cache(maxsize=None)
def power_to_monomial(max_weight: int):
    """Expansion of every pi-monomial in the monomial-symmetric basis.

    Returns a list parallel to PowerSumRing(max_weight).parts; entry i is
    a dict partition-tuple -> integer coefficient with p_mu = sum c m_lam.
    """
    ring = PowerSumRing(max_weight)
    out = []
    for mu in ring.parts:
        exp = {(): 1}
        for r in mu:
            exp = _mult_by_power(exp, r)
        out.append(exp)
    return out


def _mult_by_power(exp: dict, r: int) -> dict:
    """Multiply an m-basis expansion by the power sum p_r.

    m_lam * p_r picks up, for each distinct part value v of lam, the
    partition with one v replaced by v+r weighted by the multiplicity of
    v+r in the result, plus lam with r appended weighted by the
    multiplicity of r.
    """
    new = {}
    for lam, c in exp.items():
        seen = set()
        for pos, v in enumerate(lam):
            if v in seen:
                continue
            seen.add(v)
            merged = tuple(sorted(lam[:pos] + (v + r,) + lam[pos + 1:], reverse=True))
            mult = merged.count(v + r)
            new[merged] = new.get(merged, 0) + c * mult
        appended = tuple(sorted(lam + (r,), reverse=True))
        new[appended] = new.get(appended, 0) + c * appended.count(r)
    return new


def element_to_mlambda(ring: PowerSumRing, elem: list, max_length: int) -> dict:
    """Convert a pi-polynomial to monomial-symmetric coefficients.

    Only partitions of length <= max_length survive (the element is read
    as a symmetric function of max_length variables).  The constant slot
    maps to the empty partition.
    """
    rows = power_to_monomial(ring.max_weight)
    out = {}
    for idx in range(ring.size):
        c = elem[idx]
        if not c:
            continue
        for lam, r in rows[idx].items():
            if len(lam) > max_length:
                continue
            out[lam] = out.get(lam, 0) + c * r
    return out
