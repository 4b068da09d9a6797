"""Embedded reference tables and parsers for their factored-polynomial
notation.  The JSON files under data/ hold the table strings verbatim;
everything here turns them into exact objects for comparison.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from importlib import resources

from .algebra import Poly, falling_factorial
from .partitions import Partition

_TERM_RE = re.compile(r"\s*([+-])?\s*(?:(\d+)\s*)?(k(?:\s*\^\s*(\d+))?)?\s*")
_FACTOR_RE = re.compile(r"\(([^()]*)\)\s*(?:\^\s*(\d+))?")


def _load(name: str) -> dict:
    with resources.files("momentpoly.data").joinpath(name).open() as fh:
        return json.load(fh)


def parse_poly_body(body: str) -> Poly:
    """Parse an expanded polynomial like "k^4 + 2k^3 - 11k^2 - 12k + 40"."""
    out = Poly.zero()
    pos = 0
    body = body.strip()
    while pos < len(body):
        m = _TERM_RE.match(body, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse polynomial term at {body[pos:]!r}")
        sign, coeff, kpart, power = m.groups()
        if coeff is None and kpart is None:
            raise ValueError(f"empty term in {body!r}")
        c = Fraction(int(coeff) if coeff else 1)
        if sign == "-":
            c = -c
        if kpart:
            deg = int(power) if power else 1
        else:
            deg = 0
        out = out + Poly([0] * deg + [c])
        pos = m.end()
    return out


def parse_factored_poly(s: str) -> Poly:
    """Parse a factored table entry like "(1/8) (k - 2) (k + 3) (k^2 + k - 4)".

    Also accepts a bare polynomial ("k + 1"), a plain "0", integer
    prefixes and "^2" powers on factors.
    """
    s = s.strip()
    if s == "0":
        return Poly.zero()
    coeff = Fraction(1)
    if s.startswith("-"):
        coeff = -coeff
        s = s[1:].lstrip()
    m = re.match(r"\((\d+)\s*/\s*(\d+)\)\s*", s)
    if m:
        coeff *= Fraction(int(m.group(1)), int(m.group(2)))
        s = s[m.end():]
    else:
        m = re.match(r"(\d+)\s+", s)
        if m:
            coeff *= int(m.group(1))
            s = s[m.end():]
    factors = list(_FACTOR_RE.finditer(s))
    if not factors:
        return coeff * parse_poly_body(s)
    out = Poly.const(coeff)
    for m in factors:
        body, power = m.groups()
        p = parse_poly_body(body)
        out = out * (p ** int(power) if power else p)
    return out


def parse_repetition_factor(s: str) -> Poly:
    """Parse "(k)_m" or "(k)_m/d" into the falling-factorial polynomial."""
    m = re.fullmatch(r"\(k\)_(\d+)\s*(?:/\s*(\d+))?", s.strip())
    if not m:
        raise ValueError(f"bad repetition factor {s!r}")
    n, d = int(m.group(1)), int(m.group(2) or 1)
    return falling_factorial(Poly.x(), n) / Fraction(d)


def plambda_table():
    """List of (Partition, exact Poly, raw string) for weights 1..7."""
    rows = []
    for row in _load("plambda_table.json")["rows"]:
        rows.append((Partition(row["lambda"]), parse_factored_poly(row["poly"]),
                     row["poly"]))
    return rows


def nlambda_table():
    """List of (Partition, N/r Poly, r Poly, raw strings)."""
    rows = []
    for row in _load("nlambda_table.json")["rows"]:
        rows.append((Partition(row["lambda"]),
                     parse_factored_poly(row["n_over_r"]),
                     parse_repetition_factor(row["r"]),
                     row))
    return rows


def c_table(sign: str) -> dict:
    """Printed coefficients for one quadratic family: k -> list of strings.

    sign is "minus" or "plus"; rows are indexed by r from 0.
    """
    name = "cminus_table.json" if sign == "minus" else "cplus_table.json"
    data = _load(name)["columns"]
    return {int(k): v for k, v in data.items()}
