"""The combinatorial polynomials N_lambda(k): signed sums over row
arrangements of P_alpha(k) times falling-factorial products, plus the
direct reciprocal-factorial determinant route usable at a fixed k.

An arrangement places the nonzero parts of lambda into |lambda| slots
(slot 1 = bottom row of the matrix); slot m carries the falling factor
(k+m-1)_{u_m}.  Arrangements whose matrix has two identical rows drop
out; the rest normalize, by adjacent swaps, to a partition alpha with a
sign.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .algebra import Poly, falling_factorial
from .detkernel import p_lambda
from .partitions import Partition, _det_fraction


@dataclass(frozen=True)
class Arrangement:
    """Slot values u_1..u_{|lambda|}, bottom row first."""

    u: tuple

    @property
    def i_of_u(self) -> int:
        """Smallest i with u_j = 0 for all j > i."""
        last = 0
        for idx, val in enumerate(self.u, start=1):
            if val:
                last = idx
        return last


@dataclass(frozen=True)
class NormalizedArrangement:
    alpha: Partition | None  # None marks a vanishing arrangement
    sign: int

    @property
    def vanishing(self) -> bool:
        return self.alpha is None


def enumerate_arrangements(lam: Partition):
    """All distinct length-|lambda| sequences of the parts of lambda padded
    with zeros, in descending lexicographic order."""
    if lam.length == 0:
        raise ValueError("lambda must be nonempty")
    slots = lam.weight
    values = lam.parts + (0,) * (slots - lam.length)
    counts = {}
    for v in values:
        counts[v] = counts.get(v, 0) + 1
    distinct = sorted(counts, reverse=True)

    out = []

    def rec(prefix):
        if len(prefix) == slots:
            out.append(Arrangement(tuple(prefix)))
            return
        for v in distinct:
            if counts[v]:
                counts[v] -= 1
                prefix.append(v)
                rec(prefix)
                prefix.pop()
                counts[v] += 1

    rec([])
    return out


def _has_identical_rows(u) -> bool:
    # rows m and m' coincide exactly when u_{m'} - u_m = m' - m
    n = len(u)
    for m in range(n):
        for mp in range(m + 1, n):
            if u[mp] - u[m] == mp - m:
                return True
    return False


def normalize(arr: Arrangement) -> NormalizedArrangement:
    """Sort an arrangement into a partition by adjacent swaps.

    A swap of adjacent slots (m, m+1) with u_m < u_{m+1} replaces them by
    (u_{m+1}-1, u_m+1) and flips the sign; u_{m+1} = u_m + 1 means two
    identical matrix rows, i.e. a vanishing term.
    """
    u = list(arr.u)
    if _has_identical_rows(u):
        return NormalizedArrangement(None, 0)
    sign = 1
    changed = True
    while changed:
        changed = False
        for m in range(len(u) - 1):
            if u[m] < u[m + 1]:
                if u[m + 1] == u[m] + 1:
                    return NormalizedArrangement(None, 0)
                u[m], u[m + 1] = u[m + 1] - 1, u[m] + 1
                sign = -sign
                changed = True
    alpha = Partition(tuple(v for v in u if v))
    return NormalizedArrangement(alpha, sign)


def normalize_random_order(arr: Arrangement, rng) -> NormalizedArrangement:
    """Same cascade but resolving eligible swaps in random order.

    Used to check that the result does not depend on the swap order.
    """
    u = list(arr.u)
    if _has_identical_rows(u):
        return NormalizedArrangement(None, 0)
    sign = 1
    while True:
        spots = [m for m in range(len(u) - 1) if u[m] < u[m + 1]]
        if not spots:
            break
        m = rng.choice(spots)
        if u[m + 1] == u[m] + 1:
            return NormalizedArrangement(None, 0)
        u[m], u[m + 1] = u[m + 1] - 1, u[m] + 1
        sign = -sign
    alpha = Partition(tuple(v for v in u if v))
    return NormalizedArrangement(alpha, sign)


@lru_cache(maxsize=None)
def _n_lambda_cached(parts: tuple) -> Poly:
    lam = Partition(parts)
    if lam.length == 0:
        return Poly.one()
    total = Poly.zero()
    k = Poly.x()
    for arr in enumerate_arrangements(lam):
        norm = normalize(arr)
        if norm.vanishing:
            continue
        term = norm.sign * p_lambda(norm.alpha)
        for m, um in enumerate(arr.u, start=1):
            if um:
                term = term * falling_factorial(k + (m - 1), um)
        total = total + term
    return total


def n_lambda(lam: Partition) -> Poly:
    """N_lambda(k) as an exact polynomial of degree at most 2|lambda|."""
    return _n_lambda_cached(lam.parts)


def n_lambda_direct(lam: Partition, k: int) -> Fraction:
    """N_lambda(k) at a specific k >= 1 from reciprocal-factorial
    determinants, independent of the P_alpha route."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if lam.length == 0:
        return Fraction(1)
    prefactor = Fraction(-1, 2) ** (k * (k - 1) // 2) * Fraction(2) ** lam.weight
    for j in range(k):
        prefactor *= Fraction(math.factorial(k + j), math.factorial(2 * j))
    total = Fraction(0)
    for arr in enumerate_arrangements(lam):
        i_u = arr.i_of_u
        if i_u > k:
            continue
        if _has_identical_rows(arr.u):
            continue
        total += _arrangement_det(arr.u, k)
    return prefactor * total


def _arrangement_det(u, k: int) -> Fraction:
    """det( 1/(2k - i - 2j + 2 - d_i)! ) with d filled from u bottom-up.

    Row i (from the top) has d_i = 0 above the bottom block and
    d_i = u_{k-i+1} inside it; 1/negative! is 0.
    """
    rows = []
    for i in range(1, k + 1):
        m = k - i + 1  # bottom-up slot index
        d = u[m - 1] if m <= len(u) else 0
        row = []
        for j in range(1, k + 1):
            a = 2 * k - i - 2 * j + 2 - d
            row.append(Fraction(0) if a < 0 else Fraction(1, math.factorial(a)))
        rows.append(row)
    return _det_fraction(rows)
