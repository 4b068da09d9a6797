from fractions import Fraction

import gmpy2
import pytest
from gmpy2 import mpfr

from momentpoly.algebra import workprec
from momentpoly.arithfactors import ELLIPTIC_11A, QUADRATIC_MINUS, QUADRATIC_PLUS
from momentpoly.cache import ConstantCache
from momentpoly.moments import (averaged_polynomial, averaged_transform, c0,
                                c_coeff, identity_checks, q_polynomial,
                                residue_oracle)

CC = ConstantCache(persistent=False)
BITS = 256


def rel_dev(a, b, bits=300):
    with workprec(bits):
        return float(abs(a - b) / abs(b))


def test_c0_values():
    v1 = c0(QUADRATIC_MINUS, 1, BITS, cache=CC)
    assert rel_dev(v1.value, mpfr("3.522211004995827732e-01", 300)) < 1e-15
    v3 = c0(QUADRATIC_PLUS, 3, BITS, cache=CC)
    assert rel_dev(v3.value, mpfr("1.528376099282021425e-05", 300)) < 1e-15


def test_c0_same_for_both_signs_bitwise():
    for k in (1, 2, 3):
        a = c0(QUADRATIC_PLUS, k, BITS, cache=CC)
        b = c0(QUADRATIC_MINUS, k, BITS, cache=CC)
        assert a.value == b.value


def test_c_coeff_table_spot_values():
    cases = [
        (QUADRATIC_MINUS, 1, 1, "6.175500336140218316e-01"),
        (QUADRATIC_PLUS, 2, 2, "-4.030985462971436450e-01"),
        (QUADRATIC_MINUS, 3, 2, "-1.398953902867718369e-01"),
    ]
    for fam, r, k, ref in cases:
        got = c_coeff(fam, r, k, BITS, cache=CC)
        assert rel_dev(got.value, mpfr(ref, 300)) < 1e-14, (fam, r, k)


def test_c_coeff_range_check():
    with pytest.raises(ValueError):
        c_coeff(QUADRATIC_PLUS, 4, 1, BITS, cache=CC)


def test_q_polynomial_shapes():
    q1 = q_polynomial(QUADRATIC_MINUS, 1, BITS, cache=CC)
    assert q1.degree == 1 and len(q1.coefficients) == 2 and not q1.partial
    assert q1.density_factor == "3/pi^2"
    q3 = q_polynomial(QUADRATIC_PLUS, 3, BITS, cache=CC)
    assert len(q3.coefficients) == 7
    e1 = q_polynomial(ELLIPTIC_11A, 1, BITS, cutoff=2000, cache=CC)
    assert e1.degree == 0 and len(e1.coefficients) == 1
    assert e1.density_factor == "15/(11*pi^2)"
    q5 = q_polynomial(QUADRATIC_PLUS, 5, BITS, cache=CC)
    assert q5.partial and len(q5.coefficients) == 11  # r <= 10 of degree 15
    # leading coefficient strictly positive
    assert q1.coefficients[0].value > 0


def test_averaged_transform_examples():
    # Q = x
    poly, rem = averaged_transform([Fraction(0), Fraction(1)])
    assert poly == [Fraction(-1), Fraction(1)] and rem == 1
    # Q = 1
    poly, rem = averaged_transform([Fraction(1)])
    assert poly == [Fraction(1)] and rem == -1
    # Q = x^2
    poly, rem = averaged_transform([0, 0, Fraction(1)])
    assert poly == [Fraction(2), Fraction(-2), Fraction(1)] and rem == -2


def test_averaged_polynomial_preserves_degree_and_lead():
    q = q_polynomial(QUADRATIC_MINUS, 2, BITS, cache=CC)
    avg, rem = averaged_polynomial(q)
    assert avg.degree == q.degree
    assert avg.coefficients[0].value == q.coefficients[0].value
    # spot value: averaged r=1 coefficient is c1 - deg * c0
    with workprec(300):
        expect = q.coefficients[1].value - q.degree * q.coefficients[0].value
        assert abs(avg.coefficients[1].value - expect) < mpfr(2) ** -240


def test_identity_checks_exact():
    results = identity_checks(30)
    assert len(results) == 30
    assert all(r["quadratic"] and r["elliptic"] for r in results)
    assert results[0]["value"] == Fraction(1, 2)
    assert results[1]["value"] == Fraction(1, 24)


def test_residue_oracle_k1_both_signs():
    for fam in (QUADRATIC_MINUS, QUADRATIC_PLUS):
        oracle = residue_oracle(fam, 1, BITS, cache=CC)
        assembled = q_polynomial(fam, 1, BITS, cache=CC)
        for r in range(2):
            dev = rel_dev(oracle.coefficients[r].value,
                          assembled.coefficients[r].value)
            assert dev < 1e-10, (fam, r)


def test_residue_oracle_matches_printed_column_k2():
    from momentpoly.reftables import c_table

    oracle = residue_oracle(QUADRATIC_PLUS, 2, BITS, cache=CC)
    refs = c_table("plus")[2]
    for r, ref in enumerate(refs):
        assert rel_dev(oracle.coefficients[r].value, mpfr(ref, 300)) < 1e-14, r
    # the leading oracle coefficient is the closed-form leading term
    lead = c0(QUADRATIC_PLUS, 2, BITS, cache=CC)
    assert rel_dev(oracle.coefficients[0].value, lead.value) < 1e-30


def test_residue_oracle_rejects_large_k():
    with pytest.raises(ValueError):
        residue_oracle(QUADRATIC_PLUS, 4, BITS, cache=CC)


def test_residue_oracle_elliptic_small():
    for k in (2, 3):
        oracle = residue_oracle(ELLIPTIC_11A, k, 192, cutoff=2000, cache=CC)
        assembled = q_polynomial(ELLIPTIC_11A, k, 192, cutoff=2000, cache=CC)
        for r in range(ELLIPTIC_11A.degree(k) + 1):
            dev = rel_dev(oracle.coefficients[r].value,
                          assembled.coefficients[r].value)
            assert dev < 1e-9, (k, r)
