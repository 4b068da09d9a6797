"""Analytic inputs for the moment polynomials: Stieltjes constants,
gamma-factor and zeta expansions, local Euler factors, accelerated prime
sums, the Taylor coefficient tables b_lambda(k), and the Fourier
coefficients of the weight-2 level-11 cusp form.

Per-prime work happens in power-sum coordinates (see powersums).  The
same bracket builder runs once per prime with numeric scalars, and once
per family/k with q-series scalars to produce the analytic tail template
summed through the prime zeta function.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import gmpy2
import mpmath
from gmpy2 import mpfr

from .algebra import PrecReal, mpfr_from_hex, mpfr_to_hex, workprec
from .cache import ConstantCache, default_cache
from .mseries import MultiSeries, ms_log
from .partitions import Partition
from .powersums import PowerSumRing, element_to_mlambda
from .primetail import QSeries, QTSeries, TailTables, from_mpmath, prime_sieve

DEFAULT_CUTOFF = 10_000
DEFAULT_QORDER = 36
ELLIPTIC_QORDER = 24
GUARD_BITS = 32


class PrecisionError(ValueError):
    """Raised when a requested precision is not achievable."""

    def __init__(self, message, achievable_digits=None):
        super().__init__(message)
        self.achievable_digits = achievable_digits


# ---------------------------------------------------------------------------
# families

_FAMILY_ALIASES = {
    "quadratic-plus": "quadratic-plus",
    "qd-plus": "quadratic-plus",
    "plus": "quadratic-plus",
    "quadratic-minus": "quadratic-minus",
    "qd-minus": "quadratic-minus",
    "minus": "quadratic-minus",
    "elliptic-11a": "elliptic-11a",
    "e11": "elliptic-11a",
    "elliptic": "elliptic-11a",
}


@dataclass(frozen=True)
class FamilySpec:
    """Moment family: quadratic Dirichlet with either sign of the
    fundamental discriminant, or quadratic twists of the curve 11a."""

    kind: str

    @staticmethod
    def from_name(name: str) -> "FamilySpec":
        try:
            return FamilySpec(_FAMILY_ALIASES[name.lower()])
        except KeyError:
            raise ValueError(f"unknown family {name!r}") from None

    @property
    def is_elliptic(self) -> bool:
        return self.kind == "elliptic-11a"

    @property
    def gamma_parity(self) -> int:
        """Gamma-factor parameter: 0 for d > 0, 1 for d < 0."""
        if self.is_elliptic:
            raise ValueError("elliptic family has no parity parameter")
        return 0 if self.kind == "quadratic-plus" else 1

    @property
    def conductor(self) -> int:
        return 11 if self.is_elliptic else 1

    @property
    def zeta_diagonal(self) -> bool:
        """True when the zeta product runs over i <= j, False for i < j."""
        return not self.is_elliptic

    def degree(self, k: int) -> int:
        return k * (k - 1) // 2 if self.is_elliptic else k * (k + 1) // 2

    def short_name(self) -> str:
        return {"quadratic-plus": "qd-plus",
                "quadratic-minus": "qd-minus",
                "elliptic-11a": "e11"}[self.kind]


QUADRATIC_PLUS = FamilySpec("quadratic-plus")
QUADRATIC_MINUS = FamilySpec("quadratic-minus")
ELLIPTIC_11A = FamilySpec("elliptic-11a")


# ---------------------------------------------------------------------------
# analytic constants

def stieltjes(n: int, bits: int, cache: ConstantCache | None = None) -> PrecReal:
    """Stieltjes constant gamma_n at the stated precision."""
    if n > 20:
        raise ValueError("stieltjes supported for n <= 20")
    cache = cache or default_cache()
    key = f"{n}_{bits}"
    hit = cache.get("stieltjes", key)
    if hit is not None:
        return PrecReal(mpfr_from_hex(hit))
    with mpmath.workprec(bits + 24):
        val = mpmath.stieltjes(n)
    out = from_mpmath(val, bits)
    cache.put("stieltjes", key, mpfr_to_hex(out))
    return PrecReal(out)


def _psi_jet(which: str, order: int, bits: int, cache: ConstantCache | None = None):
    """Polygamma values psi^(j)(c) for j = 0..order, c in {1/4, 3/4, 1}."""
    cache = cache or default_cache()
    arg = {"1/4": mpmath.mpf(1) / 4, "3/4": mpmath.mpf(3) / 4, "1": mpmath.mpf(1)}[which]
    out = []
    for j in range(order + 1):
        key = f"{which.replace('/', 'o')}_{j}_{bits}"
        hit = cache.get("psi", key)
        if hit is not None:
            out.append(mpfr_from_hex(hit))
            continue
        with mpmath.workprec(bits + 24):
            val = mpmath.psi(j, arg)
        v = from_mpmath(val, bits)
        cache.put("psi", key, mpfr_to_hex(v))
        out.append(v)
    return out


def gamma_log_coeffs(family: FamilySpec, order: int, bits: int,
                     cache: ConstantCache | None = None):
    """Taylor coefficients of -(1/2) log X(1/2 + z) for the family.

    X is the gamma-factor ratio of the functional equation; the constant
    term vanishes because X(1/2) = 1.  Only odd powers of z survive.
    """
    with workprec(bits):
        coeffs = [mpfr(0) for _ in range(order + 1)]
        if family.is_elliptic:
            psi = _psi_jet("1", order, bits, cache)
            if order >= 1:
                coeffs[1] = -gmpy2.log(2 * gmpy2.const_pi() / gmpy2.sqrt(mpfr(11)))
            for j in range(0, order, 2):
                coeffs[j + 1] += psi[j] / math.factorial(j + 1)
        else:
            which = "1/4" if family.gamma_parity == 0 else "3/4"
            psi = _psi_jet(which, order, bits, cache)
            if order >= 1:
                coeffs[1] = -gmpy2.log(gmpy2.const_pi()) / 2
            for j in range(0, order, 2):
                coeffs[j + 1] += psi[j] / (mpfr(2) ** (j + 1) * math.factorial(j + 1))
        return coeffs


def gamma_series(family: FamilySpec, order: int, bits: int,
                 cache: ConstantCache | None = None) -> MultiSeries:
    """One-variable series of the log gamma factor, reused per variable."""
    if order > 20:
        raise ValueError("gamma series supported to order 20")
    coeffs = gamma_log_coeffs(family, order, bits, cache)
    return MultiSeries.univariate(coeffs, 0, 1, order)


def zeta_log_coeffs(order: int, bits: int, cache: ConstantCache | None = None):
    """Taylor coefficients of log(zeta(1+s) s), from Stieltjes constants."""
    with workprec(bits):
        f = [mpfr(0) for _ in range(order + 1)]
        f[0] = mpfr(1)
        for n in range(order):
            g = stieltjes(n, bits, cache).value
            f[n + 1] = (g if n % 2 == 0 else -g) / math.factorial(n)
        out = [mpfr(0) for _ in range(order + 1)]
        u = list(f)
        u[0] = mpfr(0)
        power = None
        for m in range(1, order + 1):
            power = u if power is None else _useries_mul(power, u, order)
            sign = 1 if m % 2 else -1
            for i in range(order + 1):
                if power[i]:
                    out[i] += (power[i] if sign == 1 else -power[i]) / m
        return out


def _useries_mul(a, b, order: int):
    out = [0] * (order + 1)
    for i, av in enumerate(a):
        if av:
            for j in range(order + 1 - i):
                if b[j]:
                    out[i + j] = out[i + j] + av * b[j]
    return out


def zeta_product_series(k: int, l: int, order: int, bits: int,
                        family: FamilySpec = QUADRATIC_PLUS,
                        cache: ConstantCache | None = None) -> MultiSeries:
    """Expansion of the log zeta product in l variables.

    Sums log(zeta(1+z_i+z_j)(z_i+z_j)) over the family's pair range and
    adds (k-l) replicated one-variable terms for the variables set to 0.
    """
    out = MultiSeries(l, order)
    if l == 0:
        return out
    with workprec(bits + GUARD_BITS):
        c = zeta_log_coeffs(order, bits, cache)
        diag = family.zeta_diagonal
        for i in range(l):
            lo = i if diag else i + 1
            for j in range(lo, l):
                out = out + MultiSeries.pair_substituted(c, i, j, l, order)
        if k > l:
            for i in range(l):
                out = out + MultiSeries.univariate(c, i, l, order).scale(k - l)
        return out


# ---------------------------------------------------------------------------
# scalar adapters for the local-factor builder

class _NumOps:
    """Concrete mpfr scalars for one prime."""

    def __init__(self, family: FamilySpec, p: int, ap: int | None = None):
        self.family = family
        self.p = p
        self.pinv = 1 / mpfr(p)
        self.q = 1 / gmpy2.sqrt(mpfr(p))
        self.ap = mpfr(ap) if ap is not None else None
        self.one = mpfr(1)

    def log(self, x):
        return gmpy2.log(x)

    def recip(self, x):
        return 1 / x

    def ipow(self, x, n: int):
        return x**n


class _QSeriesOps:
    """Symbolic scalars: truncated series in q = p^(-1/2)."""

    def __init__(self, family: FamilySpec, order: int):
        self.family = family
        self.p = None
        self.q = QSeries.gen(order) * mpfr(1)
        self.pinv = self.q * self.q
        self.ap = None
        self.one = QSeries.scalar(order, mpfr(1))

    def log(self, x):
        return x.log()

    def recip(self, x):
        return x.recip()

    def ipow(self, x, n: int):
        if n < 0:
            return self.ipow(x.recip(), -n)
        out = self.one
        for _ in range(n):
            out = out * x
        return out


class _QTSeriesOps:
    """Symbolic scalars in q and the per-prime parameter t = a(p)."""

    def __init__(self, family: FamilySpec, qorder: int, torder: int):
        self.family = family
        self.p = None
        one = mpfr(1)
        self.q = QTSeries(qorder, torder, {(1, 0): one})
        self.pinv = QTSeries(qorder, torder, {(2, 0): one})
        self.ap = QTSeries(qorder, torder, {(0, 1): one})
        self.one = QTSeries.scalar(qorder, torder, one)

    def log(self, x):
        return x.log()

    def recip(self, x):
        return x.recip()

    def ipow(self, x, n: int):
        if n < 0:
            return self.ipow(x.recip(), -n)
        out = self.one
        for _ in range(n):
            out = out * x
        return out


# ---------------------------------------------------------------------------
# local factor series (all in unit-log variables: multiply the weight-w
# part by (log p)^w to return to the z coordinates)

def _exp_shift_coeffs(scale: int, order: int):
    """Coefficients of exp(-scale * s): scale^a (-1)^a / a!, as mpfr."""
    out = [mpfr(1)]
    for a in range(1, order + 1):
        out.append(out[-1] * (-scale) / a)
    return out


def _affine_exp_series(ops, terms, order: int):
    """Series of 1 + sum_i c_i e^(-m_i s) for (c_i, m_i) pairs."""
    out = [ops.one * 0 for _ in range(order + 1)]
    out[0] = ops.one
    for c, m in terms:
        shift = _exp_shift_coeffs(m, order)
        for a in range(order + 1):
            out[a] = out[a] + c * shift[a]
    return out


def _useries_log_general(d, order: int, ops):
    """log of a univariate series with invertible constant term."""
    inv0 = ops.recip(d[0])
    u = [x * inv0 for x in d]
    u[0] = u[0] * 0
    out = [d[0] * 0 for _ in range(order + 1)]
    out[0] = ops.log(d[0])
    power = None
    for m in range(1, order + 1):
        power = u if power is None else _useries_mul(power, u, order)
        if not any(power):
            break
        sign = 1 if m % 2 else -1
        for i in range(order + 1):
            if power[i]:
                out[i] = out[i] + (power[i] if sign == 1 else -power[i]) / m
    return out


def _useries_recip(d, order: int, ops):
    """Series 1/d for invertible constant term."""
    inv0 = ops.recip(d[0])
    out = [d[0] * 0 for _ in range(order + 1)]
    out[0] = inv0
    for n in range(1, order + 1):
        acc = 0
        for i in range(1, n + 1):
            if d[i] and out[n - i]:
                acc = acc + d[i] * out[n - i]
        out[n] = -(inv0 * acc) if acc else out[0] * 0
    return out


def _pair_compensator_coeffs(ops, order: int):
    """Series in s of log(1 - (1/p) e^(-s))."""
    d = _affine_exp_series(ops, [(ops.pinv * (-1), 1)], order)
    return _useries_log_general(d, order, ops)


def _half_factors(ops, order: int):
    """The two averaged local factors D_(+-)(s) as univariate series.

    Quadratic: D_(+-)(s) = 1 -+ q e^(-s).  Elliptic, p != 11:
    D_(+-)(s) = 1 -+ a(p) p^(-1) e^(-s) + p^(-1) e^(-2s).
    """
    if ops.family.is_elliptic:
        ap_over_p = ops.ap * ops.pinv
        dplus = _affine_exp_series(ops, [(ap_over_p * (-1), 1), (ops.pinv, 2)], order)
        dminus = _affine_exp_series(ops, [(ap_over_p, 1), (ops.pinv, 2)], order)
    else:
        dplus = _affine_exp_series(ops, [(ops.q * (-1), 1)], order)
        dminus = _affine_exp_series(ops, [(ops.q, 1)], order)
    return dplus, dminus


def local_bracket_pi(ring: PowerSumRing, k: int, ops) -> list:
    """Log of one prime's local factor as a power-sum polynomial.

    The constant slot is the local factor's log at the origin, so the
    sum over all primes has constant slot log a_k.
    """
    R = ring.max_weight
    acc = ring.zero()
    fam = ops.family
    gpair = _pair_compensator_coeffs(ops, R)
    ring.add_pair_distribution(acc, gpair, k, include_diagonal=fam.zeta_diagonal)
    if fam.is_elliptic and ops.p == 11:
        d = _affine_exp_series(ops, [(ops.pinv, 1)], R)
        logd = _useries_log_general(d, R, ops)
        ring.add_linear(acc, logd, factor=-1, count=k)
        return acc
    dplus, dminus = _half_factors(ops, R)
    logdp = _useries_log_general(dplus, R, ops)
    logdm = _useries_log_general(dminus, R, ops)
    eplus = ring.exp_linear({a: -logdp[a] for a in range(1, R + 1) if logdp[a]})
    eminus = ring.exp_linear({a: -logdm[a] for a in range(1, R + 1) if logdm[a]})
    sp0 = ops.ipow(dplus[0], -k)
    sm0 = ops.ipow(dminus[0], -k)
    h = ring.zero()
    for idx in range(ring.size):
        term = 0
        if eplus[idx]:
            term = term + eplus[idx] * sp0
        if eminus[idx]:
            term = term + eminus[idx] * sm0
        if term:
            h[idx] = term / 2
    h[0] = h[0] + ops.pinv
    h0 = h[0]
    inv0 = ops.recip(h0)
    w = [x * inv0 if x else 0 for x in h]
    w[0] = ops.one
    logh = ring.log_from_unit(w)
    ring.add_into(acc, logh)
    acc[0] = acc[0] + ops.log(h0) - ops.log(ops.one + ops.pinv)
    return acc


def _local_series_unitlog(ops, k: int, l: int, order: int, caps=None) -> MultiSeries:
    """Log local factor as an l-variable series in unit-log variables.

    Coefficients live in the scalar type of ops; a monomial of total
    degree w still needs the factor (log p)^w to return to z variables.
    """
    family = ops.family
    R = order
    out = MultiSeries(l, R, caps=caps)
    gpair = _pair_compensator_coeffs(ops, R)
    diag = family.zeta_diagonal
    for i in range(l):
        lo = i if diag else i + 1
        for j in range(lo, l):
            out = out + MultiSeries.pair_substituted(gpair, i, j, l, R, caps=caps)
    if k > l:
        for i in range(l):
            out = out + MultiSeries.univariate(gpair, i, l, R, caps=caps).scale(k - l)
    beyond = k - l
    npairs_beyond = beyond * (beyond + 1) // 2 if diag else beyond * (beyond - 1) // 2
    if npairs_beyond:
        out = out + gpair[0] * npairs_beyond
    if family.is_elliptic and ops.p == 11:
        d = _affine_exp_series(ops, [(ops.pinv, 1)], R)
        logd = _useries_log_general(d, R, ops)
        for i in range(l):
            out = out - MultiSeries.univariate(logd, i, l, R, caps=caps)
        if k > l:
            out = out - (k - l) * logd[0]
        return out
    dplus, dminus = _half_factors(ops, R)
    halves = []
    for d in (dplus, dminus):
        recip = _useries_recip(d, R, ops)
        s = MultiSeries.constant(l, R, ops.ipow(d[0], l - k), caps=caps)
        for i in range(l):
            s = s * MultiSeries.univariate(recip, i, l, R, caps=caps)
        halves.append(s)
    havg = (halves[0] + halves[1]).scale(ops.one / 2) + ops.pinv
    h0 = havg.constant_term()
    inv0 = ops.recip(h0)
    norm = havg.scale(inv0)
    norm.terms[(0,) * l] = 1
    out = out + ms_log(norm)
    out = out + (ops.log(h0) - ops.log(ops.one + ops.pinv))
    return out


def local_factor_log_series(family: FamilySpec, p: int, k: int, l: int,
                            order: int, bits: int,
                            ap: int | None = None) -> MultiSeries:
    """Log of one local Euler factor as an l-variable series (direct route).

    Variables beyond l are set to zero; the constant term is the full
    local contribution to log a_k.
    """
    if not gmpy2.is_prime(p):
        raise ValueError(f"{p} is not prime")
    if family.is_elliptic and ap is None:
        ap = elliptic_ap(p)
    with workprec(bits + GUARD_BITS):
        ops = _NumOps(family, p, ap)
        raw = _local_series_unitlog(ops, k, l, order)
        logp = gmpy2.log(mpfr(p))
        out = MultiSeries(l, order)
        for e, c in raw.terms.items():
            out._add_term(e, c * logp ** sum(e))
        return out


# ---------------------------------------------------------------------------
# accelerated prime sums

@dataclass
class PrimeSumPi:
    """Power-sum coefficients of sum_p log(local factor), with tail."""

    family: FamilySpec
    k: int
    ring: PowerSumRing
    totals: list  # mpfr per ring index, analytic tail included
    errs: list  # crude per-index tail truncation bounds
    cutoff: int
    bits: int

    @property
    def log_ak(self) -> mpfr:
        return self.totals[0]


_tail_tables = {}


def get_tail_tables(cutoff: int, bits: int, max_m: int = 60, max_w: int = 12,
                    cache: ConstantCache | None = None) -> TailTables:
    key = (cutoff, bits, max_m, max_w)
    if key not in _tail_tables:
        _tail_tables[key] = TailTables(cutoff, max_m, max_w, bits,
                                       cache=cache or default_cache())
    return _tail_tables[key]


def _quadratic_tail_template(k: int, R: int, qorder: int, bits: int):
    """Per-weight q-series of the local bracket, prime-independent."""
    ring = PowerSumRing(R)
    with workprec(bits + GUARD_BITS):
        ops = _QSeriesOps(QUADRATIC_PLUS, qorder)
        return ring, local_bracket_pi(ring, k, ops)


def _elliptic_tail_template(k: int, R: int, qorder: int, torder: int, bits: int):
    ring = PowerSumRing(R)
    with workprec(bits + GUARD_BITS):
        ops = _QTSeriesOps(ELLIPTIC_11A, qorder, torder)
        return ring, local_bracket_pi(ring, k, ops)


def _qt_fold_mean(template: QTSeries, qorder: int):
    """Collapse a (q, t)-series to a q-series under the second-moment mean.

    Even powers t^(2i) are replaced by p^i = q^(-2i); odd powers do not
    survive the +/- average and are returned separately as a bound term.
    """
    folded = QSeries(qorder)
    dropped = mpfr(0)
    for (qe, te), c in template.terms.items():
        if te % 2 == 1:
            # odd moments vanish in the mean; track their Hasse size
            m = qe - te
            if m >= 0:
                dropped += abs(c) * mpfr(2) ** te
            continue
        m = qe - te
        if m < 0:
            raise ValueError("elliptic tail term below the Hasse line")
        if m <= qorder:
            folded.c[m] = folded.c[m] + c
    return folded, dropped


def prime_sum_pi(family: FamilySpec, k: int, max_weight: int, bits: int,
                 cutoff: int = DEFAULT_CUTOFF,
                 cache: ConstantCache | None = None) -> PrimeSumPi:
    """Sum of log local factors over all primes, in power-sum coordinates.

    Direct summation up to the cutoff plus the prime-zeta tail.  Results
    are cached on disk keyed by family, k, weight, precision and cutoff.
    """
    if cutoff < 100:
        raise ValueError("cutoff must be >= 100")
    cache = cache or default_cache()
    R = max_weight
    ring = PowerSumRing(R)
    qorder = DEFAULT_QORDER if not family.is_elliptic else ELLIPTIC_QORDER
    # the arithmetic factor does not depend on the quadratic sign
    fam_key = "elliptic-11a" if family.is_elliptic else "quadratic"
    ckey = f"{fam_key}_{k}_{R}_{bits}_{cutoff}_{qorder}"
    hit = cache.get("prime_sums", ckey)
    if hit is not None:
        totals = [mpfr_from_hex(h) for h in hit["totals"]]
        errs = [mpfr_from_hex(h) for h in hit["errs"]]
        return PrimeSumPi(family, k, ring, totals, errs, cutoff, bits)

    with workprec(bits + GUARD_BITS):
        totals = [mpfr(0) for _ in range(ring.size)]
        ap_table = None
        if family.is_elliptic:
            ap_table = {p: elliptic_ap(p) for p in prime_sieve(cutoff)}
        for p in prime_sieve(cutoff):
            ops = _NumOps(family, p, ap_table[p] if ap_table else None)
            br = local_bracket_pi(ring, k, ops)
            logp = gmpy2.log(mpfr(p))
            lp = [mpfr(1)]
            for _ in range(R):
                lp.append(lp[-1] * logp)
            for idx in range(ring.size):
                if br[idx]:
                    totals[idx] += br[idx] * lp[ring.weights[idx]]

        # analytic tail from the q-series template
        tails = get_tail_tables(cutoff, bits, max_m=qorder + 2, cache=cache)
        errs = [mpfr(0) for _ in range(ring.size)]
        if family.is_elliptic:
            tring, template = _elliptic_tail_template(k, R, qorder, min(R * 2 + 4, qorder), bits)
        else:
            tring, template = _quadratic_tail_template(k, R, qorder, bits)
        small = mpfr(2) ** (-(bits // 2))
        for idx in range(ring.size):
            entry = template[idx]
            if not entry:
                continue
            w = ring.weights[idx]
            if family.is_elliptic:
                qs, dropped = _qt_fold_mean(entry, qorder)
                if dropped:
                    errs[idx] += dropped * tails.tail(3, w)
            else:
                qs = entry
            for m, c in enumerate(qs.c):
                if not c:
                    continue
                if m <= 2:
                    if abs(c) > small:
                        raise ArithmeticError(
                            f"non-decaying tail coefficient q^{m} at weight {w}")
                    continue
                totals[idx] += c * tails.tail(m, w)
            # truncation bound from the last kept orders
            top = abs(qs.c[qorder]) + abs(qs.c[qorder - 1]) if qorder >= 2 else mpfr(0)
            if top:
                errs[idx] += 4 * top * tails.tail(qorder - 1, w)
            if family.is_elliptic:
                # second-moment substitution is heuristic; flag its scale
                lead = max((abs(c) for c in qs.c if c), default=mpfr(0))
                errs[idx] += lead * tails.tail(3, w) * mpfr(2) ** (-bits // 4)

    cache.put("prime_sums", ckey, {
        "totals": [mpfr_to_hex(v) for v in totals],
        "errs": [mpfr_to_hex(v) for v in errs],
    })
    return PrimeSumPi(family, k, ring, totals, errs, cutoff, bits)


@dataclass
class PrimeSumResult:
    """l-variable series of the summed log local factors, with error bound."""

    series: MultiSeries
    err_bound: mpfr
    cutoff: int


def prime_sum(family: FamilySpec, k: int, l: int, order: int, bits: int,
              cutoff: int = DEFAULT_CUTOFF,
              cache: ConstantCache | None = None,
              min_digits: int = 12) -> PrimeSumResult:
    """Sum over all primes of the local-factor logs, as an l-variable series.

    Raises PrecisionError when the recorded tail bound is worse than
    min_digits decimal digits.
    """
    ps = prime_sum_pi(family, k, order, bits, cutoff, cache)
    out = MultiSeries(l, order)
    from .mseries import monomial_orbit

    with workprec(bits + GUARD_BITS):
        coeffs = element_to_mlambda(ps.ring, ps.totals, max_length=l)
        for lam, c in coeffs.items():
            part = Partition(lam)
            for e in monomial_orbit(part, l):
                out._add_term(e, c)
        err = max((abs(e) for e in ps.errs), default=mpfr(0))
    if min_digits and err > mpfr(10) ** (-min_digits):
        achievable = int(-gmpy2.log10(err)) if err > 0 else min_digits
        raise PrecisionError(
            f"tail bound {float(err):.2e} exceeds the requested precision",
            achievable_digits=achievable)
    return PrimeSumResult(out, err, cutoff)


# ---------------------------------------------------------------------------
# the Taylor coefficient tables

@dataclass
class BCoeffTable:
    """Map partition -> b coefficient for one family and k."""

    family: FamilySpec
    k: int
    values: dict  # partition tuple -> PrecReal
    precision: int
    cutoff: int
    tail_method: str
    err_bound: PrecReal

    def get(self, lam) -> PrecReal:
        parts = lam.parts if isinstance(lam, Partition) else tuple(lam)
        return self.values[parts]


def b_coeffs(family: FamilySpec, k: int, max_weight: int, bits: int,
             cutoff: int = DEFAULT_CUTOFF,
             cache: ConstantCache | None = None) -> BCoeffTable:
    """Taylor coefficients b_lambda(k) for all |lambda| <= max_weight with
    l(lambda) <= k (longer partitions have no monomial in k variables)."""
    if max_weight > 10:
        raise ValueError("max_weight > 10 is beyond desk scale")
    ps = prime_sum_pi(family, k, max_weight, bits, cutoff, cache)
    ring = ps.ring
    with workprec(bits + GUARD_BITS):
        total = ring.zero()
        for idx in range(ring.size):
            total[idx] = mpfr(ps.totals[idx])
        total[0] = mpfr(0)  # divide by a_k: drop the constant of the log
        gcoeffs = gamma_log_coeffs(family, max_weight, bits + GUARD_BITS, cache)
        ring.add_linear(total, gcoeffs, count=k)
        zcoeffs = zeta_log_coeffs(max_weight, bits + GUARD_BITS, cache)
        ring.add_pair_distribution(total, zcoeffs, k,
                                   include_diagonal=family.zeta_diagonal)
        expf = ring.exp_zero(total)
        by_lam = element_to_mlambda(ring, expf, max_length=k)
        err = max((abs(e) for e in ps.errs), default=mpfr(0))
        values = {}
        for lam, v in by_lam.items():
            values[lam] = PrecReal(mpfr(v, bits))
        values[()] = PrecReal(mpfr(1, bits))
    return BCoeffTable(family, k, values, bits, cutoff, "prime-zeta",
                       PrecReal(mpfr(err, bits)))


def arithmetic_factor(family: FamilySpec, k: int, bits: int,
                      cutoff: int = DEFAULT_CUTOFF,
                      cache: ConstantCache | None = None) -> PrecReal:
    """a_k, the value of the arithmetic Euler product at the origin."""
    ps = prime_sum_pi(family, k, 1 if k > 0 else 0, bits, cutoff, cache)
    with workprec(bits + GUARD_BITS):
        return PrecReal(mpfr(gmpy2.exp(ps.log_ak), bits))


# ---------------------------------------------------------------------------
# closed-form oracles for b_(1) and b_(1,1) (quadratic families)

def _f_ratio_numeric(j: int, k: int, q: mpfr) -> mpfr:
    """f_j(p) with q = p^(-1/2): rational in q, sign (-1)^j on the first
    numerator term."""
    num = (mpfr(-1)) ** j * (1 - q) ** (-j - k) + (1 + q) ** (-j - k)
    den = (1 - q) ** (-k) + (1 + q) ** (-k) + 2 * q * q
    return q**j * num / den


def _f_ratio_qseries(j: int, k: int, order: int, bits: int) -> QSeries:
    with workprec(bits + GUARD_BITS):
        num = (QSeries.binom_inv_power(order, j + k, +1, bits) * ((-1) ** j)
               + QSeries.binom_inv_power(order, j + k, -1, bits))
        den = (QSeries.binom_inv_power(order, k, +1, bits)
               + QSeries.binom_inv_power(order, k, -1, bits)
               + QSeries.gen(order).shift(1) * 2)
        return (num * den.recip()).shift(j)


def _tail_sum_qseries(qs: QSeries, w: int, tails: TailTables, bits: int) -> mpfr:
    """Sum a q-series tail against sum_{p>P} p^(-m/2) log(p)^w."""
    small = mpfr(2) ** (-(bits // 2))
    total = mpfr(0)
    for m, c in enumerate(qs.c):
        if not c:
            continue
        if m <= 2:
            if abs(c) > small:
                raise ArithmeticError(f"non-decaying oracle tail at q^{m}")
            continue
        total += c * tails.tail(m, w)
    return total


def b1_oracle(k: int, parity: int, bits: int,
              cutoff: int = DEFAULT_CUTOFF,
              cache: ConstantCache | None = None) -> PrecReal:
    """Closed form for b_(1): gamma-factor term, (k+1) gamma_0, and the
    prime sum of ((k+1)/(p-1) + f_1(p)) log p."""
    cache = cache or default_cache()
    with workprec(bits + GUARD_BITS):
        psi = _psi_jet("1/4" if parity == 0 else "3/4", 0, bits + GUARD_BITS, cache)
        g0 = stieltjes(0, bits + GUARD_BITS, cache).value
        total = -gmpy2.log(gmpy2.const_pi()) / 2 + psi[0] / 2 + (k + 1) * g0
        for p in prime_sieve(cutoff):
            pm = mpfr(p)
            q = 1 / gmpy2.sqrt(pm)
            summand = (k + 1) / (pm - 1) + _f_ratio_numeric(1, k, q)
            total += summand * gmpy2.log(pm)
        order = DEFAULT_QORDER
        one_minus_q2 = QSeries.scalar(order, mpfr(1)) - QSeries.gen(order).shift(1)
        geom = one_minus_q2.recip().shift(2) * (k + 1)
        series = geom + _f_ratio_qseries(1, k, order, bits)
        tails = get_tail_tables(cutoff, bits, max_m=order + 2, cache=cache)
        total += _tail_sum_qseries(series, 1, tails, bits)
        return PrecReal(mpfr(total, bits))


def b11_oracle(k: int, parity: int, bits: int,
               cutoff: int = DEFAULT_CUTOFF,
               cache: ConstantCache | None = None) -> PrecReal:
    """Closed form for b_(1,1): b_(1)^2 - gamma_0^2 - 2 gamma_1 minus the
    prime sum of (p/(p-1)^2 + f_1(p)^2 - f_2(p)) log(p)^2."""
    cache = cache or default_cache()
    with workprec(bits + GUARD_BITS):
        b1 = b1_oracle(k, parity, bits + GUARD_BITS, cutoff, cache).value
        g0 = stieltjes(0, bits + GUARD_BITS, cache).value
        g1 = stieltjes(1, bits + GUARD_BITS, cache).value
        inner = mpfr(0)
        for p in prime_sieve(cutoff):
            pm = mpfr(p)
            q = 1 / gmpy2.sqrt(pm)
            f1 = _f_ratio_numeric(1, k, q)
            f2 = _f_ratio_numeric(2, k, q)
            summand = pm / (pm - 1) ** 2 + f1 * f1 - f2
            inner += summand * gmpy2.log(pm) ** 2
        order = DEFAULT_QORDER
        one = QSeries.scalar(order, mpfr(1))
        om = (one - QSeries.gen(order).shift(1)).recip()
        p_ratio = (om * om).shift(2)
        f1s = _f_ratio_qseries(1, k, order, bits)
        f2s = _f_ratio_qseries(2, k, order, bits)
        series = p_ratio + f1s * f1s - f2s
        tails = get_tail_tables(cutoff, bits, max_m=order + 2, cache=cache)
        inner += _tail_sum_qseries(series, 2, tails, bits)
        return PrecReal(mpfr(b1 * b1 - g0 * g0 - 2 * g1 - inner, bits))


# ---------------------------------------------------------------------------
# Fourier coefficients of the level-11 weight-2 form

_eta_cache = {"limit": 0, "an": [0, 1]}


def elliptic_an(limit: int) -> list:
    """a(n) for n <= limit from the eta product q prod (1-q^n)^2 (1-q^11n)^2.

    Returns a list indexed by n with a[0] = 0.
    """
    if limit > 100_000:
        raise ValueError("eta expansion supported to 10^5")
    if _eta_cache["limit"] >= limit:
        return _eta_cache["an"][: limit + 1]
    n = limit  # degree needed after the leading q shift
    # pentagonal-number expansion of prod (1 - x^m)
    pent = {}
    j = 1
    while j * (3 * j - 1) // 2 <= n:
        pent[j * (3 * j - 1) // 2] = (-1) ** j
        if j * (3 * j + 1) // 2 <= n:
            pent[j * (3 * j + 1) // 2] = (-1) ** j
        j += 1
    pent[0] = 1
    items = sorted(pent.items())
    sq = [0] * (n + 1)
    for e1, s1 in items:
        for e2, s2 in items:
            if e1 + e2 > n:
                break
            sq[e1 + e2] += s1 * s2
    # multiply by prod (1 - x^(11m))^2 via the sparse pentagonal series twice
    pent11 = [(11 * e, s) for e, s in items if 11 * e <= n]
    for _ in range(2):
        nxt = [0] * (n + 1)
        for e, s in pent11:
            for i in range(n + 1 - e):
                if sq[i]:
                    nxt[i + e] += s * sq[i]
        sq = nxt
    an = [0] * (limit + 1)
    for i in range(min(n, limit - 1) + 1):
        an[i + 1] = sq[i]
    _eta_cache["limit"] = limit
    _eta_cache["an"] = an
    return an


def elliptic_ap(p: int) -> int:
    """a(p) for prime p, from the eta expansion (extended on demand)."""
    if not gmpy2.is_prime(p):
        raise ValueError(f"{p} is not prime")
    if _eta_cache["limit"] < p:
        elliptic_an(max(p, 2 * _eta_cache["limit"], 11000))
    return _eta_cache["an"][p]


def elliptic_ap_point_count(p: int) -> int:
    """a(p) by counting affine points of y^2 + y = x^3 - x^2 over F_p.

    For odd p the fiber count over x is 1 + chi(4x^3 - 4x^2 + 1); p = 2
    is counted by exhaustion, and p = 11 (bad reduction) is pinned to 1
    by the local Euler factor.
    """
    if not gmpy2.is_prime(p):
        raise ValueError(f"{p} is not prime")
    if p == 11:
        return 1
    if p == 2:
        count = sum(1 for x in range(2) for y in range(2)
                    if (y * y + y) % 2 == ((x * x * x - x * x) % 2))
        return 2 - count
    total = 0
    for x in range(p):
        c = (4 * x * x * x - 4 * x * x + 1) % p
        total += gmpy2.jacobi(c, p) if c else 0
    return -total
