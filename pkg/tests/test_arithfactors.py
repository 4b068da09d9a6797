import math

import gmpy2
import mpmath
import pytest
from gmpy2 import mpfr

from momentpoly.algebra import workprec
from momentpoly.arithfactors import (ELLIPTIC_11A, QUADRATIC_MINUS,
                                     QUADRATIC_PLUS, FamilySpec, PrecisionError,
                                     _f_ratio_numeric, arithmetic_factor,
                                     b11_oracle, b1_oracle, b_coeffs,
                                     gamma_log_coeffs, gamma_series,
                                     local_factor_log_series, prime_sum,
                                     prime_sum_pi, stieltjes,
                                     zeta_log_coeffs, zeta_product_series)
from momentpoly.cache import ConstantCache
from momentpoly.mseries import assert_symmetric
from momentpoly.primetail import from_mpmath

CC = ConstantCache(persistent=False)
BITS = 192


def test_family_parsing():
    assert FamilySpec.from_name("qd-plus").gamma_parity == 0
    assert FamilySpec.from_name("qd-minus").gamma_parity == 1
    assert FamilySpec.from_name("e11").is_elliptic
    assert FamilySpec.from_name("e11").conductor == 11
    with pytest.raises(ValueError):
        FamilySpec.from_name("cubic")
    assert QUADRATIC_PLUS.degree(4) == 10
    assert ELLIPTIC_11A.degree(4) == 6


def test_stieltjes_requires_small_n():
    with pytest.raises(ValueError):
        stieltjes(21, 100, CC)


def test_gamma_series_linear_coefficients():
    # -(1/2) log pi + (1/2) psi(1/4 + a/2) for the quadratic families
    for fam, arg in ((QUADRATIC_PLUS, "0.25"), (QUADRATIC_MINUS, "0.75")):
        g = gamma_series(fam, 6, BITS, CC)
        with mpmath.workprec(BITS + 16):
            expect = -mpmath.log(mpmath.pi) / 2 + mpmath.psi(0, mpmath.mpf(arg)) / 2
        with workprec(BITS + 16):
            got = g.coefficient((1,))
            assert abs(got - from_mpmath(expect, BITS)) < mpfr(2) ** (-BITS + 12)
    # elliptic: constant term vanishes after normalizing at the center
    ge = gamma_series(ELLIPTIC_11A, 6, BITS, CC)
    assert ge.constant_term() == 0


def test_zeta_log_series_base():
    # zeta(1+s)s = 1 + g0 s - g1 s^2 + ... so its log starts g0 s + ...
    c = zeta_log_coeffs(4, BITS, CC)
    with workprec(BITS + 16):
        g0 = stieltjes(0, BITS, CC).value
        g1 = stieltjes(1, BITS, CC).value
        assert abs(c[1] - g0) < mpfr(2) ** (-BITS + 10)
        # expansion of log(1 + g0 s - g1 s^2 + ...) at order 2
        expect2 = -g1 - g0 * g0 / 2
        assert abs(c[2] - expect2) < mpfr(2) ** (-BITS + 10)


def test_zeta_product_series_cases():
    empty = zeta_product_series(3, 0, 4, BITS, QUADRATIC_PLUS, CC)
    assert not empty.terms
    # l = 1 coefficient of z_1 collects (k+1) gamma_0 across the pair range
    k = 5
    zs = zeta_product_series(k, 1, 3, BITS, QUADRATIC_PLUS, CC)
    with workprec(BITS + 16):
        g0 = stieltjes(0, BITS, CC).value
        assert abs(zs.coefficient((1,)) - (k + 1) * g0) < mpfr(2) ** (-BITS + 12)
    # elliptic pair range drops the diagonal: coefficient is (k-1) gamma_0
    ze = zeta_product_series(k, 1, 3, BITS, ELLIPTIC_11A, CC)
    with workprec(BITS + 16):
        assert abs(ze.coefficient((1,)) - (k - 1) * g0) < mpfr(2) ** (-BITS + 12)


def test_local_factor_rejects_composites():
    with pytest.raises(ValueError):
        local_factor_log_series(QUADRATIC_PLUS, 10, 1, 1, 3, BITS)


def test_local_factor_linear_coefficient_structure():
    # z_1 coefficient at p = 3, k = 1: ((k+1)/(p-1) + f_1(p)) log p
    k, p = 1, 3
    s = local_factor_log_series(QUADRATIC_PLUS, p, k, 1, 3, BITS)
    with workprec(BITS + 16):
        q = 1 / gmpy2.sqrt(mpfr(p))
        expect = ((k + 1) / mpfr(p - 1) + _f_ratio_numeric(1, k, q)) * gmpy2.log(mpfr(p))
        assert abs(s.coefficient((1,)) - expect) < mpfr(2) ** (-BITS + 16)


def test_local_factor_constant_sums_to_arith_value():
    # constant term is the local log factor; the direct product over primes
    # matches a_k up to the analytic tail beyond the cutoff
    k = 2
    with workprec(BITS + 16):
        total = mpfr(0)
        from momentpoly.primetail import prime_sieve

        for p in prime_sieve(2000):
            total += local_factor_log_series(QUADRATIC_PLUS, p, k, 1, 2,
                                             BITS).constant_term()
        ak = arithmetic_factor(QUADRATIC_PLUS, k, BITS, cutoff=2000, cache=CC)
        gap = abs(gmpy2.exp(total) - ak.value)
        assert gap < mpfr(1e-4)  # the tail past 2000 is of order 1e-5
        assert gap > mpfr(1e-9)  # and genuinely present


def test_elliptic_special_prime_linear_coefficient():
    # derivative of -log(1 + 11^(-1-z)) at 0 is log(11) / (11 (1 + 1/11))
    s = local_factor_log_series(ELLIPTIC_11A, 11, 1, 1, 3, BITS)
    with workprec(BITS + 16):
        inv11 = mpfr(1) / 11
        expect = gmpy2.log(mpfr(11)) * inv11 / (1 + inv11)
        # the pair range i<j is empty at k=1, so only the special factor remains
        assert abs(s.coefficient((1,)) - expect) < mpfr(2) ** (-BITS + 12)


def test_prime_sum_constant_reproduces_arithmetic_values():
    # a_1 and a_2 derived from the printed leading coefficients
    with workprec(300):
        a1 = arithmetic_factor(QUADRATIC_MINUS, 1, 256, cache=CC)
        ref1 = mpfr("0.3522211004995827732", 256) * 2
        assert abs(a1.value - ref1) / ref1 < mpfr(1e-15)
        a2 = arithmetic_factor(QUADRATIC_PLUS, 2, 256, cache=CC)
        ref2 = mpfr("1.238375103096108452e-02", 256) * 24
        assert abs(a2.value - ref2) / ref2 < mpfr(1e-15)


def test_prime_sum_surface_and_symmetry():
    res = prime_sum(QUADRATIC_PLUS, 2, 2, 3, BITS, cutoff=500, cache=CC)
    assert_symmetric(res.series)
    assert res.cutoff == 500
    with workprec(BITS):
        assert res.err_bound < mpfr(1e-12)
    # constant term of the l-variable surface equals log a_k
    ps = prime_sum_pi(QUADRATIC_PLUS, 2, 3, BITS, cutoff=500, cache=CC)
    with workprec(BITS):
        assert res.series.constant_term() == ps.log_ak


def test_prime_sum_stable_under_cutoff_doubling():
    ps1 = prime_sum_pi(QUADRATIC_PLUS, 2, 2, BITS, cutoff=2000, cache=CC)
    ps2 = prime_sum_pi(QUADRATIC_PLUS, 2, 2, BITS, cutoff=4000, cache=CC)
    with workprec(BITS + 16):
        for idx in range(ps1.ring.size):
            gap = abs(ps1.totals[idx] - ps2.totals[idx])
            bound = abs(ps1.errs[idx]) + abs(ps2.errs[idx]) + mpfr(2) ** (-BITS + 20)
            assert gap <= bound, idx


def test_b_coeffs_basics():
    tab = b_coeffs(QUADRATIC_MINUS, 1, 2, BITS, cache=CC)
    assert tab.values[()].value == 1  # exactly
    assert tab.tail_method == "prime-zeta"
    # inverting the printed coefficients: b_(1) = c(1,1) / (c(0,1) N_(1)(1))
    with workprec(BITS + 16):
        expect = mpfr("0.6175500336140218316", BITS) / (
            mpfr("0.3522211004995827732", BITS) * 2)
        assert abs(tab.values[(1,)].value - expect) < mpfr(1e-14)
    # partitions longer than k carry no monomial
    assert (1, 1) not in tab.values


def test_b_closed_form_oracles_match_pipeline():
    for k in (1, 2, 3, 4):
        for fam, parity in ((QUADRATIC_PLUS, 0), (QUADRATIC_MINUS, 1)):
            tab = b_coeffs(fam, k, 2, 256, cache=CC)
            b1 = b1_oracle(k, parity, 256, cache=CC)
            with workprec(280):
                assert abs(tab.values[(1,)].value - b1.value) / abs(b1.value) \
                    < mpfr(1e-10), (fam, k)
                if k >= 2:
                    b11 = b11_oracle(k, parity, 256, cache=CC)
                    got = tab.values[(1, 1)].value
                    assert abs(got - b11.value) / abs(b11.value) < mpfr(1e-10)


def test_f_ratio_tail_sanity():
    # f_1 decays at least like p^(-1/2) (in fact like 1/p)
    with workprec(160):
        prev = None
        for p in (101, 1009, 10007):
            q = 1 / gmpy2.sqrt(mpfr(p))
            val = abs(_f_ratio_numeric(1, 3, q)) * gmpy2.sqrt(mpfr(p))
            if prev is not None:
                assert val < prev
            prev = val
        assert prev < mpfr("0.1")


def test_prime_sum_precision_error():
    with pytest.raises(PrecisionError) as exc:
        prime_sum(QUADRATIC_PLUS, 2, 1, 2, BITS, cutoff=500, cache=CC,
                  min_digits=200)
    assert exc.value.achievable_digits is not None
