"""Determinants of shifted binomial coefficients and the polynomials
P_lambda(k) extracted from their two generating-function forms.

The extraction target is a coefficient of the form [y^(lambda+delta)]
of Vandermonde(y) * (product of linear pair factors) * (product of
univariate factors whose Taylor coefficients are polynomials in k).
Expanding the Vandermonde as a signed sum over permutations leaves a
small residual exponent vector per permutation; the pair/univariate
part is then extracted by a memoized walk over the pair factors.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .algebra import Poly, binomial, binomial_poly
from .partitions import Partition


@dataclass(frozen=True)
class DetResult:
    value: int
    k: int
    lam: Partition


def d_lambda_bruteforce(lam: Partition, k: int) -> int:
    """Exact k x k determinant det C(2k - i - lam_{k-i+1}, 2k - 2j).

    lam is zero-padded to length k, so l(lam) <= k is required.
    """
    if lam.length > k:
        raise ValueError("partition longer than k")
    pad = lam.padded(k)
    rows = []
    for i in range(1, k + 1):
        top = 2 * k - i - pad[k - i]  # pad[k-i] is lam_{k-i+1}
        rows.append([binomial(top, 2 * k - 2 * j) for j in range(1, k + 1)])
    return _det_bareiss(rows)


def _det_bareiss(rows) -> int:
    """Fraction-free Bareiss determinant of an integer matrix."""
    m = [list(r) for r in rows]
    n = len(m)
    sign = 1
    prev = 1
    for col in range(n - 1):
        if m[col][col] == 0:
            pivot = next((r for r in range(col + 1, n) if m[r][col] != 0), None)
            if pivot is None:
                return 0
            m[col], m[pivot] = m[pivot], m[col]
            sign = -sign
        for r in range(col + 1, n):
            for c in range(col + 1, n):
                m[r][c] = (m[r][c] * m[col][col] - m[r][col] * m[col][c]) // prev
            m[r][col] = 0
        prev = m[col][col]
    return sign * m[n - 1][n - 1]


def _vandermonde_perms(targets):
    """Signed exponent residuals target - (m - sigma(i)) over permutations.

    Yields (sign, residual tuple) for every permutation sigma of 1..m
    with all residuals non-negative.  Positions are filled from the most
    constrained end to prune early.
    """
    m = len(targets)
    order = sorted(range(m), key=lambda i: targets[i])
    used = [False] * (m + 1)
    assignment = [0] * m

    def rec(pos):
        if pos == m:
            # parity of the permutation i -> assignment[i]
            sign = 1
            seen = [False] * m
            for i in range(m):
                if seen[i]:
                    continue
                j = i
                clen = 0
                while not seen[j]:
                    seen[j] = True
                    j = assignment[j] - 1
                    clen += 1
                if clen % 2 == 0:
                    sign = -sign
            yield sign, tuple(targets[i] - (m - assignment[i]) for i in range(m))
            return
        i = order[pos]
        for v in range(1, m + 1):
            if not used[v] and targets[i] - (m - v) >= 0:
                used[v] = True
                assignment[i] = v
                yield from rec(pos + 1)
                used[v] = False

    yield from rec(0)


def _extract(targets, pair_sign: int, univ_coeff) -> Poly:
    """Coefficient of y^targets in Vandermonde * pairs * univariates.

    pair factors are (1 + pair_sign*(y_i + y_j)) over i < j; univ_coeff(e)
    gives the degree-e Taylor coefficient (a Poly in k) of each
    univariate factor.
    """
    m = len(targets)
    pairs = [(i, j) for i in range(m) for j in range(i + 1, m)]
    memo = {}

    def walk(t, residual):
        if t == len(pairs):
            out = Poly.one()
            for e in residual:
                out = out * univ_coeff(e)
                if out.is_zero():
                    break
            return out
        key = (t, residual)
        hit = memo.get(key)
        if hit is not None:
            return hit
        i, j = pairs[t]
        acc = walk(t + 1, residual)
        if pair_sign:
            if residual[i] > 0:
                r2 = residual[:i] + (residual[i] - 1,) + residual[i + 1:]
                acc = acc + pair_sign * walk(t + 1, r2)
            if residual[j] > 0:
                r2 = residual[:j] + (residual[j] - 1,) + residual[j + 1:]
                acc = acc + pair_sign * walk(t + 1, r2)
        memo[key] = acc
        return acc

    total = Poly.zero()
    for sign, residual in _vandermonde_perms(tuple(targets)):
        total = total + sign * walk(0, residual)
    return total


@lru_cache(maxsize=None)
def _p_lambda_y_cached(parts: tuple) -> Poly:
    lam = Partition(parts)
    m = lam.length
    if m == 0:
        return Poly.one()
    targets = [lam.part(i) + m - i for i in range(1, m + 1)]

    @lru_cache(maxsize=None)
    def univ(e):
        # coefficient of y^e in (1-y)^(-k-m): C(k+m+e-1, e) as a Poly in k
        return binomial_poly(m + e - 1, e)

    return _extract(targets, -1, univ)


@lru_cache(maxsize=None)
def _p_lambda_z_cached(parts: tuple) -> Poly:
    lam = Partition(parts)
    mu = lam.conjugate()
    n = mu.length  # = lam_1
    if n == 0:
        return Poly.one()
    targets = [mu.part(i) + n - i for i in range(1, n + 1)]

    @lru_cache(maxsize=None)
    def univ(e):
        # coefficient of z^e in (1+2z)(1+z)^(k-n)
        p = binomial_poly(-n, e)
        if e >= 1:
            p = p + 2 * binomial_poly(-n, e - 1)
        return p

    return _extract(targets, +1, univ)


def p_lambda_y(lam: Partition) -> Poly:
    """P_lambda(k) from the length-many-variable extraction."""
    return _p_lambda_y_cached(lam.parts)


def p_lambda_z(lam: Partition) -> Poly:
    """P_lambda(k) from the conjugate extraction in lam_1 variables."""
    return _p_lambda_z_cached(lam.parts)


def p_lambda(lam: Partition) -> Poly:
    """P_lambda(k) by whichever extraction uses fewer variables."""
    if lam.length == 0:
        return Poly.one()
    if lam.length <= lam.part(1):
        return p_lambda_y(lam)
    return p_lambda_z(lam)


def p_lambda_interpolated(lam: Partition) -> Poly:
    """Test oracle: interpolate P_lambda from brute-force determinants.

    Samples |lambda|+1 admissible k values, divides out the power of 2,
    and interpolates exactly.
    """
    k0 = max(lam.length, lam.part(1), 1)
    points = []
    for k in range(k0, k0 + lam.weight + 1):
        det = d_lambda_bruteforce(lam, k)
        e = k * (k - 1) // 2 - lam.weight
        ratio = Fraction(det, 2**e) if e >= 0 else Fraction(det * 2**-e)
        points.append((k, ratio))
    from .algebra import interpolate

    return interpolate(points)
