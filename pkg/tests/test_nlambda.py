import random
from fractions import Fraction

from momentpoly.algebra import Poly, divmod_poly, interpolate, poly_eval
from momentpoly.nlambda import (Arrangement, enumerate_arrangements, n_lambda,
                                n_lambda_direct, normalize,
                                normalize_random_order)
from momentpoly.reftables import nlambda_table
from momentpoly.partitions import Partition, enumerate_partitions, r_lambda


def test_enumerate_arrangements_examples():
    assert [a.u for a in enumerate_arrangements(Partition((1,)))] == [(1,)]
    arrs = enumerate_arrangements(Partition((2, 1, 1)))
    assert len(arrs) == 12  # multiset {2,1,1,0} over 4 slots
    assert len({a.u for a in arrs}) == 12
    # weight 2, two slots, no padding zeros left over
    assert [a.u for a in enumerate_arrangements(Partition((1, 1)))] == [(1, 1)]


def test_normalize_examples():
    n = normalize(Arrangement((2, 1, 1, 0)))
    assert n.alpha == Partition((2, 1, 1)) and n.sign == 1
    n = normalize(Arrangement((0, 2, 1, 1)))
    assert n.alpha == Partition((1, 1, 1, 1)) and n.sign == -1
    assert normalize(Arrangement((1, 2))).vanishing  # adjacent identical rows


def test_normalize_confluence():
    rng = random.Random(11)
    for w in range(1, 7):
        for lam in enumerate_partitions(w):
            for arr in enumerate_arrangements(lam):
                ref = normalize(arr)
                for _ in range(4):
                    alt = normalize_random_order(arr, rng)
                    assert alt.vanishing == ref.vanishing
                    if not ref.vanishing:
                        assert alt.alpha == ref.alpha and alt.sign == ref.sign


def test_n_lambda_examples():
    k = Poly.x()
    assert n_lambda(Partition(())) == Poly.one()
    assert n_lambda(Partition((1,))) == k * (k + 1)
    assert n_lambda(Partition((2,))).is_zero()
    expected = k * (k - 1) * (k - 2) * (k + 3) * (k + 2) * (k + 1)
    assert n_lambda(Partition((2, 1, 1))) == expected


def test_n_lambda_direct_examples():
    assert n_lambda_direct(Partition((1,)), 2) == 6
    assert n_lambda_direct(Partition((2,)), 3) == 0
    assert n_lambda_direct(Partition((1, 1)), 3) == 60


def test_route_equality_by_interpolation():
    for w in range(1, 5):
        for lam in enumerate_partitions(w):
            pts = [(k, n_lambda_direct(lam, k)) for k in range(1, 2 * w + 2)]
            assert interpolate(pts) == n_lambda(lam), lam


def test_route_equality_spot_checks_weight_6():
    for lam, k in [(Partition((3, 2, 1)), 4), (Partition((2, 2, 2)), 5),
                   (Partition((6,)), 3), (Partition((1,) * 6), 7)]:
        assert n_lambda_direct(lam, k) == poly_eval(n_lambda(lam), k)


def test_table_reproduction():
    for lam, n_over_r, r, raw in nlambda_table():
        assert n_lambda(lam) == n_over_r * r, raw
        assert r_lambda(lam) == r, raw


def test_degree_and_repetition_divisor():
    for w in range(1, 8):
        for lam in enumerate_partitions(w):
            n = n_lambda(lam)
            assert n.degree <= 2 * lam.weight
            q, rem = divmod_poly(n, r_lambda(lam))
            assert rem.is_zero(), lam


def test_vanishing_below_support():
    # every term carries P_alpha and falling factorials that kill k < i(u),
    # so the direct evaluation at small k matches the polynomial there too
    lam = Partition((2, 2))
    for k in (1, 2, 3):
        assert n_lambda_direct(lam, k) == poly_eval(n_lambda(lam), k)


def test_structural_zero_above_bottom_block():
    # a nonzero entry in the first k - |lambda| rows forces two identical
    # rows, so the reciprocal-factorial determinant vanishes
    import math

    from momentpoly.partitions import _det_fraction

    for k, d in [(5, (0, 2, 0, 0, 0)), (6, (1, 0, 0, 1, 0, 0)),
                 (6, (0, 0, 2, 0, 0, 0))]:
        weight = sum(x for x in d if x)
        assert any(d[u] for u in range(k - weight))  # violates the support
        rows = []
        for i in range(1, k + 1):
            row = []
            for j in range(1, k + 1):
                a = 2 * k - 1 - (i - 1) - 2 * (j - 1) - d[i - 1]
                row.append(Fraction(0) if a < 0 else Fraction(1, math.factorial(a)))
            rows.append(row)
        assert _det_fraction(rows) == 0, (k, d)
