import math
from fractions import Fraction

import gmpy2
from gmpy2 import mpfr

from momentpoly.algebra import poly_eval, to_mpfr, workprec
from momentpoly.arithfactors import (ELLIPTIC_11A, arithmetic_factor, b_coeffs,
                                     elliptic_an, elliptic_ap,
                                     elliptic_ap_point_count)
from momentpoly.cache import ConstantCache
from momentpoly.detkernel import p_lambda
from momentpoly.moments import _factorial_ratio, c_coeff
from momentpoly.nlambda import enumerate_arrangements, normalize
from momentpoly.partitions import enumerate_partitions
from momentpoly.primetail import prime_sieve

CC = ConstantCache(persistent=False)


def brute_force_affine_count(p):
    return sum(1 for x in range(p) for y in range(p)
               if (y * y + y) % p == (x * x * x - x * x) % p)


def test_a1_is_one():
    assert elliptic_an(10)[1] == 1


def test_a2_by_exhaustive_point_count():
    assert elliptic_ap(2) == 2 - brute_force_affine_count(2) == -2


def test_point_count_equals_eta_below_100():
    for p in prime_sieve(100):
        assert elliptic_ap(p) == elliptic_ap_point_count(p), p


def test_point_count_exhaustive_oracle_small():
    for p in (3, 5, 7, 13, 17):
        assert elliptic_ap_point_count(p) == p - brute_force_affine_count(p)


def test_special_fiber_value():
    assert elliptic_ap(11) == 1
    assert elliptic_ap_point_count(11) == 1


def test_hecke_multiplicativity():
    an = elliptic_an(300)
    for m in range(2, 300):
        for n in range(2, 300 // m + 1):
            if math.gcd(m, n) == 1:
                assert an[m * n] == an[m] * an[n], (m, n)


def test_hasse_bound():
    for p in prime_sieve(1000):
        if p == 11:
            continue
        assert elliptic_ap_point_count(p) ** 2 <= 4 * p, p


def test_prime_power_recursion():
    # a(p^2) = a(p)^2 - p for good primes (weight-2 Hecke relation)
    an = elliptic_an(1000)
    for p in (2, 3, 5, 7, 13, 17, 19, 23, 29, 31):
        assert an[p * p] == an[p] ** 2 - p, p


def elliptic_c_via_arrangements(r, k, bits, table, ak):
    """Route through the explicit arrangement sum with shifted arguments.

    Independent of the packaged polynomial route: uses P_alpha(k-1) and
    falling factorials (k+i(u)-2)_{u_i} ... (k-1)_{u_1} directly.
    """
    from momentpoly.algebra import falling_factorial

    with workprec(bits + 32):
        total = mpfr(0)
        for lam in enumerate_partitions(r):
            if lam.length == 0:
                total += table.values[()].value
                continue
            inner = Fraction(0)
            for arr in enumerate_arrangements(lam):
                norm = normalize(arr)
                if norm.vanishing:
                    continue
                term = Fraction(norm.sign) * poly_eval(p_lambda(norm.alpha), k - 1)
                for m, um in enumerate(arr.u, start=1):
                    if um:
                        term *= falling_factorial(k + m - 2, um)
                inner += term
            if inner == 0:
                continue
            if lam.parts in table.values:
                total += table.values[lam.parts].value * to_mpfr(inner, bits + 32)
        pref = Fraction(2) ** (k + (k - 1) * (k - 2) // 2 - r) * _factorial_ratio(k, 1)
        return to_mpfr(pref, bits + 32) * ak.value * total


def test_route_consistency_arrangements_vs_polynomial():
    bits = 192
    for k in (2, 3, 4):
        table = b_coeffs(ELLIPTIC_11A, k, 3, bits, cutoff=2000, cache=CC)
        ak = arithmetic_factor(ELLIPTIC_11A, k, bits, cutoff=2000, cache=CC)
        for r in range(0, min(4, ELLIPTIC_11A.degree(k) + 1)):
            via_poly = c_coeff(ELLIPTIC_11A, r, k, bits, cutoff=2000, cache=CC)
            via_arr = elliptic_c_via_arrangements(r, k, bits, table, ak)
            with workprec(bits + 32):
                err = max(abs(table.err_bound.value), mpfr(2) ** (-bits // 2))
                assert abs(via_poly.value - via_arr) <= \
                    abs(via_arr) * mpfr(1e-20) + err, (k, r)


def test_c0_identity_times_arith_factor():
    # the 2-power factorial identity times a_k gives the leading coefficient
    bits = 192
    for k in range(1, 7):
        ak = arithmetic_factor(ELLIPTIC_11A, k, bits, cutoff=2000, cache=CC)
        from momentpoly.moments import c0

        lead = c0(ELLIPTIC_11A, k, bits, cutoff=2000, cache=CC)
        rhs = Fraction(2) ** ((k + 1) * k // 2)
        for j in range(k):
            rhs *= Fraction(math.factorial(j), math.factorial(2 * j))
        with workprec(bits + 32):
            expect = to_mpfr(rhs, bits + 32) * ak.value
            assert abs(lead.value - expect) < abs(expect) * mpfr(2) ** (-bits + 16)
