import math

from momentpoly.algebra import Poly
from momentpoly.partitions import (Partition, chi_degree, conjugate,
                                   enumerate_partitions, partitions_up_to,
                                   r_lambda)


def brute_force_partitions(n):
    """Oracle: collect sorted tuples summing to n by direct recursion."""
    if n == 0:
        return {()}
    out = set()
    def rec(rest, maxpart, acc):
        if rest == 0:
            out.add(tuple(acc))
            return
        for p in range(1, min(rest, maxpart) + 1):
            rec(rest - p, p, acc + [p])
    rec(n, n, [])
    return out


def test_enumerate_examples():
    assert [p.parts for p in enumerate_partitions(0)] == [()]
    assert len(list(enumerate_partitions(4))) == 5
    assert len(list(enumerate_partitions(7))) == 15


def test_enumerate_matches_oracle_and_order():
    for n in range(9):
        got = [p.parts for p in enumerate_partitions(n)]
        assert set(got) == brute_force_partitions(n)
        assert got == sorted(got, reverse=True)  # reverse lexicographic
        assert len(got) == len(set(got))


def test_conjugate_examples():
    assert conjugate(Partition((2, 1, 1))).parts == (3, 1)
    assert conjugate(Partition(())).parts == ()
    assert conjugate(Partition((3, 2, 1))).parts == (3, 2, 1)


def test_conjugate_involution_and_length():
    for n in range(13):
        for lam in enumerate_partitions(n):
            assert conjugate(conjugate(lam)) == lam
            if lam.length:
                assert conjugate(lam).length == lam.part(1)


def test_r_lambda_table_rows():
    k = Poly.x()
    assert r_lambda(Partition((1,))) == k
    assert r_lambda(Partition((1, 1))) == k * (k - 1) / 2
    assert r_lambda(Partition((2, 1, 1))) == k * (k - 1) * (k - 2) / 2


def count_syt(shape):
    """Oracle: count standard Young tableaux by filling cells in order."""
    cells = [(i, j) for i, row in enumerate(shape) for j in range(row)]
    n = len(cells)
    count = 0
    def rec(filled, nxt):
        nonlocal count
        if nxt == n + 1:
            count += 1
            return
        for (i, j) in cells:
            if (i, j) in filled:
                continue
            if j > 0 and (i, j - 1) not in filled:
                continue
            if i > 0 and (i - 1, j) not in filled:
                continue
            filled.add((i, j))
            rec(filled, nxt + 1)
            filled.remove((i, j))
    rec(set(), 1)
    return count


def test_chi_degree_examples():
    assert chi_degree(Partition((1,))) == 1
    assert chi_degree(Partition((2, 1))) == count_syt((2, 1)) == 2
    assert chi_degree(Partition((2, 2))) == count_syt((2, 2)) == 2
    assert chi_degree(Partition(())) == 1


def test_chi_degree_burnside():
    for n in range(1, 9):
        total = sum(chi_degree(lam) ** 2 for lam in enumerate_partitions(n))
        assert total == math.factorial(n)


def test_text_round_trip():
    lam = Partition((4, 2, 1))
    assert Partition.from_text(lam.text()) == lam
    assert Partition.from_text("").parts == ()
