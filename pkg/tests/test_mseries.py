import math
import random
from fractions import Fraction

import pytest

from momentpoly.algebra import Poly, binomial_poly
from momentpoly.mseries import (MultiSeries, assert_symmetric, extract_mlambda,
                                monomial_orbit, ms_exp, ms_log, ms_mul)
from momentpoly.partitions import Partition


def uni(coeffs, var, n, t):
    return MultiSeries.univariate(coeffs, var, n, t)


def test_mul_examples():
    one_plus = uni([1, 1], 0, 1, 2)
    one_minus = uni([1, -1], 0, 1, 2)
    prod = ms_mul(one_plus, one_minus)
    assert prod.terms == {(0,): 1, (2,): -1}
    a = uni([1, 1], 0, 2, 1)
    b = uni([1, 1], 1, 2, 1)
    prod = ms_mul(a, b)  # truncation drops the cross term
    assert prod.terms == {(0, 0): 1, (1, 0): 1, (0, 1): 1}


def test_mul_shape_mismatch():
    with pytest.raises(ValueError):
        ms_mul(MultiSeries(1, 2), MultiSeries(2, 2))


def test_log_examples():
    # 1/(1-t) = 1 + t + t^2 + t^3
    f = uni([Fraction(1)] * 4, 0, 1, 3)
    lg = ms_log(f)
    assert lg.terms == {(1,): Fraction(1), (2,): Fraction(1, 2), (3,): Fraction(1, 3)}


def test_log_needs_unit_constant():
    with pytest.raises(ValueError, match="log normalization"):
        ms_log(uni([2, 1], 0, 1, 2))


def test_exp_examples():
    f = uni([0, 1], 0, 1, 3)
    ex = ms_exp(f)
    assert ex.terms == {(0,): 1, (1,): Fraction(1), (2,): Fraction(1, 2),
                        (3,): Fraction(1, 6)}
    with pytest.raises(ValueError):
        ms_exp(uni([1, 1], 0, 1, 2))


def test_log_exp_round_trip():
    rng = random.Random(3)
    for _ in range(10):
        n, t = rng.choice([(1, 6), (2, 5), (3, 4)])
        f = MultiSeries(n, t)
        f._add_term((0,) * n, Fraction(1))
        for _ in range(8):
            e = tuple(rng.randrange(0, t + 1) for _ in range(n))
            if 0 < sum(e) <= t:
                f._add_term(e, Fraction(rng.randrange(-5, 6), rng.randrange(1, 5)))
        assert ms_exp(ms_log(f)).terms == f.terms
        g = f - 1
        assert ms_log(ms_exp(g) ).terms == g.terms


def test_ring_axioms_random():
    rng = random.Random(5)
    def rand_series(n, t):
        f = MultiSeries(n, t)
        for _ in range(10):
            e = tuple(rng.randrange(0, t + 1) for _ in range(n))
            if sum(e) <= t:
                f._add_term(e, Fraction(rng.randrange(-4, 5)))
        return f
    for n, t in [(2, 5), (4, 4), (3, 8)]:
        a, b, c = (rand_series(n, t) for _ in range(3))
        assert ms_mul(ms_mul(a, b), c).terms == ms_mul(a, ms_mul(b, c)).terms
        assert ms_mul(a, b + c).terms == (ms_mul(a, b) + ms_mul(a, c)).terms


def test_extract_mlambda_examples():
    # exactly the monomial basis element for (2,1) in two variables
    f = MultiSeries(2, 3, {(2, 1): 1, (1, 2): 1})
    assert extract_mlambda(f, Partition((2, 1))) == 1
    # (z1+z2)^2 = m_(2) + 2 m_(1,1)
    s = uni([0, 1], 0, 2, 2) + uni([0, 1], 1, 2, 2)
    sq = ms_mul(s, s)
    assert extract_mlambda(sq, Partition((1, 1))) == 2
    assert extract_mlambda(sq, Partition((2,))) == 1
    # e^{z1} e^{z2}: coefficient of m_(2) is 1/2
    e = ms_mul(ms_exp(uni([0, Fraction(1)], 0, 2, 3)),
               ms_exp(uni([0, Fraction(1)], 1, 2, 3)))
    assert extract_mlambda(e, Partition((2,))) == Fraction(1, 2)


def test_extract_rejects_long_partition_and_asymmetric():
    f = MultiSeries(2, 3, {(1, 0): 1})
    with pytest.raises(ValueError, match="longer"):
        extract_mlambda(f, Partition((1, 1, 1)))
    with pytest.raises(ValueError, match="symmetric"):
        assert_symmetric(f)


def test_symmetry_orbit_consistency():
    # symmetric by construction: coefficient equals every orbit member's
    f = MultiSeries(3, 4)
    lam = Partition((2, 1))
    for e in monomial_orbit(lam, 3):
        f._add_term(e, Fraction(5))
    assert extract_mlambda(f, lam) == 5
    orbit = list(monomial_orbit(lam, 3))
    assert len(orbit) == 6
    vals = {f.coefficient(e) for e in orbit}
    assert vals == {Fraction(5)}


def test_exp_of_scaled_variable_sum_partial_sums():
    # exp((x/2)(z1+z2)) truncated at n = k(k+1)/2 = 3: the degree-n part
    # is (x/2)^n (z1+z2)^n / n!
    half_x = Fraction(1, 2)  # stand-in for x/2 with x = 1
    t = 3
    s = uni([0, half_x], 0, 2, t) + uni([0, half_x], 1, 2, t)
    ex = ms_exp(s)
    for n in range(t + 1):
        for b in range(n + 1):
            got = ex.coefficient((b, n - b))
            expect = half_x**n * Fraction(math.comb(n, b), math.factorial(n))
            assert got == expect, (n, b)


def test_theorem_extraction_reproduces_weight_two_row():
    # two-variable coefficient extraction must reproduce (1/2)(k-1)(k+2)
    m = 2
    t = 3
    vdm = MultiSeries(m, t, {(1, 0): 1, (0, 1): -1})
    pair = MultiSeries(m, t, {(0, 0): 1, (1, 0): -1, (0, 1): -1})
    f = ms_mul(vdm, pair)
    for var in range(m):
        coeffs = [binomial_poly(m + e - 1, e) for e in range(t + 1)]
        f = ms_mul(f, MultiSeries.univariate(coeffs, var, m, t))
    got = f.coefficient((2, 1))  # exponents lambda + delta for (1,1)
    k = Poly.x()
    assert got == (k - 1) * (k + 2) / Fraction(2)
