"""Final assembly of the moment polynomials: leading coefficients,
lower-order coefficients, the local-average transform, exact identity
checks, and a small-k multivariate-residue oracle that recomputes every
coefficient without the determinant combinatorics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import gmpy2
from gmpy2 import mpfr

from .algebra import PrecReal, poly_eval, to_mpfr, workprec
from .arithfactors import (
    DEFAULT_CUTOFF,
    GUARD_BITS,
    BCoeffTable,
    FamilySpec,
    _NumOps,
    _QSeriesOps,
    _QTSeriesOps,
    _local_series_unitlog,
    _qt_fold_mean,
    b_coeffs,
    elliptic_ap,
    gamma_log_coeffs,
    get_tail_tables,
    prime_sum_pi,
    zeta_log_coeffs,
)
from .cache import ConstantCache, default_cache
from .mseries import MultiSeries, ms_exp, ms_mul
from .nlambda import n_lambda
from .partitions import enumerate_partitions
from .primetail import prime_sieve

MAX_WEIGHT = 10  # largest lower-order index r computed symbolically


@dataclass
class MomentPolynomial:
    """Coefficients of one moment polynomial, highest power first.

    coefficients[r] multiplies x^(degree - r).  For k with degree above
    MAX_WEIGHT only r <= max_r entries exist and partial is True.
    """

    family: FamilySpec
    k: int
    coefficients: list
    degree: int
    precision: int
    cutoff: int
    err_bound: PrecReal
    partial: bool = False

    @property
    def density_factor(self) -> str:
        """Discriminant-density prefactor excluded from the coefficients."""
        return "15/(11*pi^2)" if self.family.is_elliptic else "3/pi^2"

    def coefficient(self, r: int) -> PrecReal:
        return self.coefficients[r]


def _factorial_ratio(k: int, shift: int) -> Fraction:
    """prod_{j=0}^{k-1} (2j)! / (k + j - shift)! as an exact rational."""
    out = Fraction(1)
    for j in range(k):
        out *= Fraction(math.factorial(2 * j), math.factorial(k + j - shift))
    return out


def c0(family: FamilySpec, k: int, bits: int, cutoff: int = DEFAULT_CUTOFF,
       cache: ConstantCache | None = None) -> PrecReal:
    """Leading coefficient of the moment polynomial.

    Quadratic families share it: (a_k / 2^k) prod (2j)!/(k+j)!.  For the
    elliptic family it is 2^(k + C(k-1,2)) a_k prod (2j)!/(k+j-1)!.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    from .arithfactors import arithmetic_factor

    ak = arithmetic_factor(family, k, bits, cutoff, cache)
    with workprec(bits + GUARD_BITS):
        if family.is_elliptic:
            pref = Fraction(2) ** (k + (k - 1) * (k - 2) // 2) * _factorial_ratio(k, 1)
        else:
            pref = Fraction(1, 2**k) * _factorial_ratio(k, 0)
        return PrecReal(mpfr(to_mpfr(pref, bits + GUARD_BITS) * ak.value, bits))


_b_tables = {}


def _b_table(family: FamilySpec, k: int, max_weight: int, bits: int, cutoff: int,
             cache: ConstantCache | None) -> BCoeffTable:
    key = (family.kind, k, max_weight, bits, cutoff)
    if key not in _b_tables:
        _b_tables[key] = b_coeffs(family, k, max_weight, bits, cutoff, cache)
    return _b_tables[key]


def c_coeff(family: FamilySpec, r: int, k: int, bits: int,
            cutoff: int = DEFAULT_CUTOFF,
            cache: ConstantCache | None = None) -> PrecReal:
    """Coefficient of x^(degree - r) in the moment polynomial."""
    deg = family.degree(k)
    if not 0 <= r <= deg:
        raise ValueError(f"r must lie in 0..{deg}")
    if r == 0:
        return c0(family, k, bits, cutoff, cache)
    if r > MAX_WEIGHT:
        raise ValueError(f"coefficients beyond r = {MAX_WEIGHT} are not supported")
    table = _b_table(family, k, min(deg, MAX_WEIGHT), bits, cutoff, cache)
    from .arithfactors import arithmetic_factor

    ak = arithmetic_factor(family, k, bits + GUARD_BITS, cutoff, cache)
    with workprec(bits + GUARD_BITS):
        total = mpfr(0)
        narg = k - 1 if family.is_elliptic else k
        for lam in enumerate_partitions(r):
            if lam.length > narg:
                continue  # the combinatorial factor vanishes
            nval = poly_eval(n_lambda(lam), narg)
            if nval == 0:
                continue
            total += table.get(lam).value * to_mpfr(nval, bits + GUARD_BITS)
        if family.is_elliptic:
            pref = Fraction(2) ** (k + (k - 1) * (k - 2) // 2 - r) * _factorial_ratio(k, 1)
        else:
            pref = Fraction(1, 2**k) * _factorial_ratio(k, 0)
        val = to_mpfr(pref, bits + GUARD_BITS) * ak.value * total
        return PrecReal(mpfr(val, bits))


def q_polynomial(family: FamilySpec, k: int, bits: int,
                 cutoff: int = DEFAULT_CUTOFF,
                 cache: ConstantCache | None = None,
                 max_r: int | None = None) -> MomentPolynomial:
    """The full moment polynomial (all r up to min(degree, MAX_WEIGHT))."""
    deg = family.degree(k)
    top = min(deg, MAX_WEIGHT, max_r if max_r is not None else MAX_WEIGHT)
    coeffs = [c_coeff(family, r, k, bits, cutoff, cache) for r in range(top + 1)]
    if deg == 0:
        err = PrecReal(mpfr(0, bits))
    else:
        ps = prime_sum_pi(family, k, min(deg, MAX_WEIGHT), bits, cutoff, cache)
        with workprec(bits):
            err = PrecReal(mpfr(max(abs(e) for e in ps.errs), bits))
    return MomentPolynomial(family, k, coeffs, deg, bits, cutoff, err,
                            partial=top < deg)


def averaged_transform(coeffs_by_power):
    """Apply Q -> (1/X) integral_1^X Q(log t) dt on the power basis.

    coeffs_by_power[n] multiplies x^n.  Returns (polynomial part in the
    same basis, coefficient of the 1/X remainder); exact for exact input.
    """
    n_top = len(coeffs_by_power) - 1
    out = [0] * (n_top + 1)
    remainder = 0
    for n, c in enumerate(coeffs_by_power):
        if c == 0:
            continue
        for j in range(n + 1):
            term = c * Fraction((-1) ** (n - j) * math.factorial(n), math.factorial(j))
            out[j] = out[j] + term
        remainder = remainder - c * Fraction((-1) ** n * math.factorial(n))
    return out, remainder


def averaged_polynomial(q: MomentPolynomial):
    """Term-wise local average of a moment polynomial.

    Returns the averaged polynomial and the coefficient of its 1/X
    remainder as a PrecReal.
    """
    if q.partial:
        raise ValueError("averaging needs the complete coefficient list")
    bits = q.precision
    with workprec(bits + GUARD_BITS):
        by_power = [q.coefficients[q.degree - n].value for n in range(q.degree + 1)]
        out_exact, rem = averaged_transform(by_power)
        coeffs = [PrecReal(mpfr(out_exact[q.degree - r], bits))
                  for r in range(q.degree + 1)]
        remainder = PrecReal(mpfr(rem, bits))
    return MomentPolynomial(q.family, q.k, coeffs, q.degree, bits, q.cutoff,
                            q.err_bound), remainder


def identity_checks(kmax: int):
    """Exact rational checks of the two leading-coefficient identities.

    For each k: (1/2^k) prod (2j)!/(k+j)! against both closed forms, and
    the elliptic 2-power identity.  Returns a list of result dicts.
    """
    if kmax > 30:
        raise ValueError("kmax <= 30")
    results = []
    for k in range(1, kmax + 1):
        lhs = Fraction(1, 2**k) * _factorial_ratio(k, 0)
        mid = Fraction(1, 2 ** (k * (k + 1) // 2))
        for j in range(1, k + 1):
            mid /= Fraction(math.factorial(2 * j), 2**j * math.factorial(j))
        rhs = Fraction(1)
        for j in range(1, k + 1):
            rhs *= Fraction(math.factorial(j), math.factorial(2 * j))
        ell_lhs = Fraction(2) ** (k + (k - 1) * (k - 2) // 2) * _factorial_ratio(k, 1)
        ell_rhs = Fraction(2) ** ((k + 1) * k // 2)
        for j in range(k):
            ell_rhs *= Fraction(math.factorial(j), math.factorial(2 * j))
        results.append({
            "k": k,
            "quadratic": lhs == mid == rhs,
            "elliptic": ell_lhs == ell_rhs,
            "value": lhs,
        })
    return results


# ---------------------------------------------------------------------------
# the multivariate residue oracle

def _vandermonde_squares(k: int, caps, max_total: int) -> MultiSeries:
    """Delta(z) * Delta(z^2) as an exact integer-coefficient series."""
    out = MultiSeries.constant(k, max_total, 1, caps=caps)
    for i in range(k):
        for j in range(i + 1, k):
            diff = MultiSeries(k, max_total, caps=caps)
            ej = [0] * k
            ej[j] = 1
            diff._add_term(tuple(ej), 1)
            ei = [0] * k
            ei[i] = 1
            diff._add_term(tuple(ei), -1)
            sq = MultiSeries(k, max_total, caps=caps)
            ej2 = [0] * k
            ej2[j] = 2
            sq._add_term(tuple(ej2), 1)
            ei2 = [0] * k
            ei2[i] = 2
            sq._add_term(tuple(ei2), -1)
            out = ms_mul(ms_mul(out, diff), sq)
    return out


def residue_oracle(family: FamilySpec, k: int, bits: int,
                   cutoff: int = DEFAULT_CUTOFF,
                   cache: ConstantCache | None = None) -> MomentPolynomial:
    """Moment polynomial for small k straight from the k-fold residue.

    Builds the full analytic integrand as a k-variable series (gamma
    factors, zeta pairs, summed local factors with their own tail) and
    reads the target monomial coefficient for every power of x, without
    the determinant or arrangement combinatorics.
    """
    if k > 3:
        raise ValueError("residue oracle supports k <= 3")
    cache = cache or default_cache()
    deg = family.degree(k)
    cap = 2 * k - 2 if family.is_elliptic else 2 * k - 1
    caps = (cap,) * k
    target = caps
    with workprec(bits + GUARD_BITS):
        prime_part = MultiSeries(k, deg)
        for p in prime_sieve(cutoff):
            ap = elliptic_ap(p) if family.is_elliptic else None
            ops = _NumOps(family, p, ap)
            raw = _local_series_unitlog(ops, k, k, deg)
            logp = gmpy2.log(mpfr(p))
            for e, c in raw.terms.items():
                prime_part._add_term(e, c * logp ** sum(e))
        # analytic tail, assembled per monomial from the q-series template
        qorder = 36 if not family.is_elliptic else 24
        tails = get_tail_tables(cutoff, bits, max_m=qorder + 2, cache=cache)
        if family.is_elliptic:
            tops = _QTSeriesOps(family, qorder, min(2 * deg + 4, qorder))
        else:
            tops = _QSeriesOps(family, qorder)
        template = _local_series_unitlog(tops, k, k, deg)
        small = mpfr(2) ** (-(bits // 2))
        for e, entry in template.terms.items():
            w = sum(e)
            qs = entry
            if family.is_elliptic:
                qs, dropped = _qt_fold_mean(entry, qorder)
            for m, c in enumerate(qs.c):
                if not c:
                    continue
                if m <= 2:
                    if abs(c) > small:
                        raise ArithmeticError("non-decaying oracle tail term")
                    continue
                prime_part._add_term(e, c * tails.tail(m, w))

        log_g = prime_part
        gamma = gamma_log_coeffs(family, deg, bits + GUARD_BITS, cache)
        for i in range(k):
            log_g = log_g + MultiSeries.univariate(gamma, i, k, deg)
        zc = zeta_log_coeffs(deg, bits + GUARD_BITS, cache)
        diag = family.zeta_diagonal
        for i in range(k):
            lo = i if diag else i + 1
            for j in range(lo, k):
                log_g = log_g + MultiSeries.pair_substituted(zc, i, j, k, deg)
        const = log_g.constant_term()
        log_g = log_g - const
        g = ms_exp(log_g).scale(gmpy2.exp(const))

        total_deg = sum(target)
        vdm = _vandermonde_squares(k, caps, total_deg)
        gv = MultiSeries(k, total_deg, caps=caps)
        for e, c in g.terms.items():
            gv._add_term(e, c)
        gv = ms_mul(gv, vdm)
        s_series = MultiSeries(k, total_deg, caps=caps)
        for i in range(k):
            e = [0] * k
            e[i] = 1
            s_series._add_term(tuple(e), 1)

        sign = -1 if (k * (k - 1) // 2) % 2 else 1
        if family.is_elliptic:
            pref = mpfr(sign * 2**k) / math.factorial(k)
            half = mpfr(1)
        else:
            pref = mpfr(sign) / math.factorial(k)
            half = mpfr(1) / 2
        coeffs = [None] * (deg + 1)
        power = gv
        fact = 1
        scale = mpfr(1)
        for n in range(deg + 1):
            if n > 0:
                power = ms_mul(power, s_series)
                fact *= n
                scale = scale * half
            val = power.coefficient(target) * pref * scale / fact
            coeffs[deg - n] = PrecReal(mpfr(val, bits))
        err = PrecReal(mpfr(2, bits) ** (-bits // 2))
    return MomentPolynomial(family, k, coeffs, deg, bits, cutoff, err)
