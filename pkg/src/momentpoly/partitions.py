"""Integer partitions and the combinatorial attributes the moment
formulas are built from: conjugation, multiplicities, the multinomial
repetition factor r_lambda, and irreducible character degrees.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

from .algebra import Poly, falling_factorial


class Partition:
    """Non-increasing tuple of positive parts; () is the empty partition."""

    __slots__ = ("parts",)

    def __init__(self, parts=()):
        ps = tuple(int(p) for p in parts)
        if any(p <= 0 for p in ps):
            raise ValueError("parts must be positive")
        if any(ps[i] < ps[i + 1] for i in range(len(ps) - 1)):
            raise ValueError("parts must be non-increasing")
        self.parts = ps

    @property
    def weight(self) -> int:
        return sum(self.parts)

    @property
    def length(self) -> int:
        return len(self.parts)

    def part(self, i: int) -> int:
        """1-based part access, 0 beyond the length."""
        return self.parts[i - 1] if 1 <= i <= len(self.parts) else 0

    def multiplicities(self) -> dict:
        """Map part value -> number of occurrences."""
        m = {}
        for p in self.parts:
            m[p] = m.get(p, 0) + 1
        return m

    def conjugate(self) -> "Partition":
        if not self.parts:
            return Partition(())
        cols = [0] * self.parts[0]
        for p in self.parts:
            for i in range(p):
                cols[i] += 1
        return Partition(cols)

    def padded(self, n: int) -> tuple:
        """Parts extended with zeros to length n."""
        return self.parts + (0,) * (n - len(self.parts))

    def __eq__(self, other):
        if isinstance(other, Partition):
            return self.parts == other.parts
        if isinstance(other, tuple):
            return self.parts == other
        return NotImplemented

    def __hash__(self):
        return hash(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def __len__(self):
        return len(self.parts)

    def __repr__(self):
        return f"Partition{list(self.parts)}"

    def text(self) -> str:
        """CLI text form, e.g. "2,1,1"."""
        return ",".join(str(p) for p in self.parts)

    @staticmethod
    def from_text(s: str) -> "Partition":
        s = s.strip()
        if not s or s in ("0", "[]", "-"):
            return Partition(())
        return Partition(int(t) for t in s.split(","))


def enumerate_partitions(weight: int):
    """All partitions of the given weight in reverse lexicographic order.

    Weight 0 yields exactly the empty partition.
    """
    if weight < 0:
        raise ValueError("weight must be >= 0")

    def gen(remaining, maxpart, prefix):
        if remaining == 0:
            yield Partition(prefix)
            return
        for p in range(min(remaining, maxpart), 0, -1):
            yield from gen(remaining - p, p, prefix + (p,))

    yield from gen(weight, weight if weight else 1, ())


def partitions_up_to(max_weight: int):
    """Partitions of every weight from 0 through max_weight."""
    for w in range(max_weight + 1):
        yield from enumerate_partitions(w)


def conjugate(lam: Partition) -> Partition:
    return lam.conjugate()


def r_lambda(lam: Partition) -> Poly:
    """Repetition factor (k)_{l} / (m_1! m_2! ...) as a polynomial in k.

    This counts the monomials of the monomial symmetric polynomial with
    exponent multiset lam in k variables.
    """
    p = falling_factorial(Poly.x(), lam.length)
    denom = 1
    for mult in lam.multiplicities().values():
        denom *= math.factorial(mult)
    return p / Fraction(denom)


@lru_cache(maxsize=None)
def _chi_degree_cached(parts: tuple) -> int:
    lam = Partition(parts)
    l = lam.length
    if l == 0:
        return 1
    # |lam|! * det( 1/(lam_i - i + j)! ) over an l x l matrix
    rows = []
    for i in range(1, l + 1):
        row = []
        for j in range(1, l + 1):
            a = lam.part(i) - i + j
            row.append(Fraction(0) if a < 0 else Fraction(1, math.factorial(a)))
        rows.append(row)
    det = _det_fraction(rows)
    val = det * math.factorial(lam.weight)
    assert val.denominator == 1
    return int(val)


def _det_fraction(rows) -> Fraction:
    """Exact determinant by rational Gaussian elimination with pivoting."""
    m = [list(r) for r in rows]
    n = len(m)
    det = Fraction(1)
    for col in range(n):
        pivot = None
        for r in range(col, n):
            if m[r][col] != 0:
                pivot = r
                break
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        det *= m[col][col]
        inv = 1 / m[col][col]
        for r in range(col + 1, n):
            if m[r][col] != 0:
                factor = m[r][col] * inv
                for c in range(col, n):
                    m[r][c] -= factor * m[col][c]
    return det


def chi_degree(lam: Partition) -> int:
    """Degree of the irreducible symmetric-group representation of shape lam."""
    return _chi_degree_cached(lam.parts)
