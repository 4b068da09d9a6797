"""Command-line front end: table generation, coefficient computation,
and the verification suites.

Exit codes: 0 success, 1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

import gmpy2
from gmpy2 import mpfr

from .algebra import Poly, poly_eval, rational_str, workprec
from .arithfactors import (DEFAULT_CUTOFF, FamilySpec, b_coeffs)
from .cache import ENV_VAR, ConstantCache
from .detkernel import DetResult, d_lambda_bruteforce, p_lambda
from .moments import (averaged_polynomial, identity_checks, q_polynomial,
                      residue_oracle)
from .nlambda import n_lambda
from .reftables import c_table, nlambda_table, plambda_table
from .partitions import Partition, partitions_up_to, r_lambda

DEFAULT_PREC = 256


def _poly_json(p: Poly):
    return [rational_str(c) for c in p.coeffs]


def _emit(rows, fmt: str, stream=None):
    stream = stream or sys.stdout
    if fmt == "json":
        json.dump(rows, stream, indent=1, sort_keys=True)
        stream.write("\n")
    elif fmt == "csv":
        for row in rows:
            stream.write(",".join(str(v) for v in row.values()) + "\n")
    else:
        for row in rows:
            stream.write("  ".join(f"{k}={v}" for k, v in row.items()) + "\n")


def cmd_partitions(args) -> int:
    rows = [{"lambda": list(p.parts), "weight": p.weight, "length": p.length}
            for p in partitions_up_to(args.max_weight)]
    _emit(rows, args.format)
    return 0


def cmd_plambda(args) -> int:
    """Emit (and optionally check) the determinant polynomials table."""
    if args.max_weight > 9:
        print("max weight 9 supported", file=sys.stderr)
        return 2
    rows = []
    for lam in partitions_up_to(args.max_weight):
        rows.append({"lambda": list(lam.parts), "poly": _poly_json(p_lambda(lam))})
    _emit(rows, args.format)
    if args.check:
        failures = []
        for lam, poly, raw in plambda_table():
            if lam.weight > args.max_weight:
                continue
            mine = p_lambda(lam)
            if mine != poly:
                failures.append((lam.parts, raw, mine.coeffs))
        if failures:
            for lam, raw, got in failures:
                print(f"MISMATCH {lam}: table {raw!r} vs computed {got}", file=sys.stderr)
            return 1
        print(f"# check passed: all table rows with weight <= {args.max_weight}",
              file=sys.stderr)
    return 0


def cmd_nlambda(args) -> int:
    if args.max_weight > 9:
        print("max weight 9 supported", file=sys.stderr)
        return 2
    rows = []
    for lam in partitions_up_to(args.max_weight):
        if lam.length == 0:
            rows.append({"lambda": [], "N_over_r": ["1"], "r": ["1"]})
            continue
        r = r_lambda(lam)
        n = n_lambda(lam)
        from .algebra import divmod_poly

        q, rem = divmod_poly(n, r)
        assert rem.is_zero()
        rows.append({"lambda": list(lam.parts), "N_over_r": _poly_json(q),
                     "r": _poly_json(r)})
    _emit(rows, args.format)
    if args.check:
        failures = []
        for lam, n_over_r, r, raw in nlambda_table():
            if lam.weight > args.max_weight:
                continue
            if n_lambda(lam) != n_over_r * r:
                failures.append((lam.parts, raw))
        if failures:
            for lam, raw in failures:
                print(f"MISMATCH {lam}: {raw}", file=sys.stderr)
            return 1
        print(f"# check passed: all table rows with weight <= {args.max_weight}",
              file=sys.stderr)
    return 0


def cmd_dlambda(args) -> int:
    lam = Partition.from_text(args.partition)
    k = args.k
    if lam.length > k:
        print("partition longer than k", file=sys.stderr)
        return 2
    res = DetResult(d_lambda_bruteforce(lam, k), k, lam)
    e = k * (k - 1) // 2 - lam.weight
    p_at_k = poly_eval(p_lambda(lam), k)
    rows = [{
        "lambda": list(res.lam.parts),
        "k": res.k,
        "det": str(res.value),
        "power_of_2": e,
        "p_lambda_at_k": rational_str(Fraction(p_at_k)),
    }]
    _emit(rows, args.format)
    return 0


def _family(args) -> FamilySpec:
    return FamilySpec.from_name(args.family)


def _cache(args) -> ConstantCache:
    return ConstantCache(args.cache_dir) if args.cache_dir else ConstantCache()


def cmd_bcoeffs(args) -> int:
    fam = _family(args)
    table = b_coeffs(fam, args.k, args.max_weight, args.prec,
                     cutoff=args.prime_cutoff, cache=_cache(args))
    rows = [{"lambda": list(lam), "value": table.values[lam].to_sci()}
            for lam in sorted(table.values, key=lambda t: (sum(t), t))]
    out = {
        "family": fam.short_name(),
        "k": args.k,
        "precision_bits": table.precision,
        "prime_cutoff": table.cutoff,
        "tail_method": table.tail_method,
        "err_bound": table.err_bound.to_sci(3),
        "coefficients": rows,
    }
    if args.format == "json":
        json.dump(out, sys.stdout, indent=1, sort_keys=True)
        sys.stdout.write("\n")
    else:
        _emit(rows, args.format)
    return 0


def _digits_for(fmt: str, bits: int) -> int:
    # CSV carries the full stored precision; text mirrors the 19-digit tables
    return int(bits * 0.30103) + 2 if fmt == "csv" else 19


def _poly_payload(fam, qp, fmt):
    digits = _digits_for(fmt, qp.precision)
    coeffs = [{"r": r, "value": qp.coefficients[r].to_sci(digits),
               "err_bound": qp.err_bound.to_sci(3)}
              for r in range(len(qp.coefficients))]
    return {
        "family": fam.short_name(),
        "k": qp.k,
        "degree": qp.degree,
        "partial": qp.partial,
        "precision_bits": qp.precision,
        "prime_cutoff": qp.cutoff,
        "density_factor": qp.density_factor,
        "coefficients": coeffs,
    }


def cmd_coeffs(args) -> int:
    fam = _family(args)
    qp = q_polynomial(fam, args.k, args.prec, cutoff=args.prime_cutoff,
                      cache=_cache(args), max_r=args.max_r)
    out = _poly_payload(fam, qp, args.format)
    if args.format == "json":
        json.dump(out, sys.stdout, indent=1, sort_keys=True)
        sys.stdout.write("\n")
    else:
        _emit(out["coefficients"], args.format)
    return 0


def cmd_qpoly(args) -> int:
    fam = _family(args)
    qp = q_polynomial(fam, args.k, args.prec, cutoff=args.prime_cutoff,
                      cache=_cache(args), max_r=args.max_r)
    out = _poly_payload(fam, qp, args.format)
    out["averaged"] = None
    if args.averaged:
        avg, remainder = averaged_polynomial(qp)
        out["averaged"] = _poly_payload(fam, avg, args.format)
        out["averaged_remainder"] = remainder.to_sci()
    if args.format == "json":
        json.dump(out, sys.stdout, indent=1, sort_keys=True)
        sys.stdout.write("\n")
    else:
        _emit(out["coefficients"], args.format)
    return 0


def _verify_c_tables(sign: str, args) -> int:
    fam = FamilySpec.from_name("qd-" + sign)
    cache = _cache(args)
    table = c_table(sign)
    worst = (0.0, None)
    failures = []
    for k in sorted(table):
        if k > args.max_k:
            continue
        qp = q_polynomial(fam, k, args.prec, cutoff=args.prime_cutoff, cache=cache)
        tol = 1e-10 if k <= 4 else 1e-8
        if args.tolerance:
            tol = args.tolerance
        with workprec(args.prec):
            for r, ref_str in enumerate(table[k]):
                ref = mpfr(ref_str, args.prec)
                got = qp.coefficients[r].value
                dev = float(abs(got - ref) / abs(ref))
                status = "ok" if dev < tol else "FAIL"
                print(f"c_{sign}(r={r:2d}, k={k}): dev {dev:.3e}  {status}")
                if dev >= tol:
                    failures.append((r, k, dev))
                if dev > worst[0]:
                    worst = (dev, (r, k))
    print(f"worst deviation {worst[0]:.3e} at (r, k) = {worst[1]}")
    if failures:
        print(f"{len(failures)} cells over tolerance", file=sys.stderr)
        return 1
    print("suite passed")
    return 0


def _verify_identities(args) -> int:
    results = identity_checks(30)
    ok = True
    for res in results:
        status = "ok" if res["quadratic"] and res["elliptic"] else "FAIL"
        print(f"k={res['k']:2d}: quadratic {res['quadratic']}  "
              f"elliptic {res['elliptic']}  {status}")
        ok = ok and res["quadratic"] and res["elliptic"]
    print("suite passed" if ok else "suite FAILED")
    return 0 if ok else 1


def _verify_oracle(args) -> int:
    cache = _cache(args)
    ok = True
    for name in ("qd-minus", "qd-plus"):
        fam = FamilySpec.from_name(name)
        for k in (1, 2):
            oracle = residue_oracle(fam, k, args.prec, cutoff=args.prime_cutoff,
                                    cache=cache)
            assembled = q_polynomial(fam, k, args.prec, cutoff=args.prime_cutoff,
                                     cache=cache)
            with workprec(args.prec):
                for r in range(fam.degree(k) + 1):
                    a = oracle.coefficients[r].value
                    b = assembled.coefficients[r].value
                    dev = float(abs(a - b) / abs(b))
                    status = "ok" if dev < 1e-9 else "FAIL"
                    print(f"{name} k={k} r={r}: oracle dev {dev:.3e}  {status}")
                    ok = ok and dev < 1e-9
    print("suite passed" if ok else "suite FAILED")
    return 0 if ok else 1


def cmd_verify(args) -> int:
    if args.suite == "cminus":
        return _verify_c_tables("minus", args)
    if args.suite == "cplus":
        return _verify_c_tables("plus", args)
    if args.suite == "identities":
        return _verify_identities(args)
    if args.suite == "oracle":
        return _verify_oracle(args)
    print(f"unknown suite {args.suite}", file=sys.stderr)
    return 2


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="momentpoly",
        description="Moment polynomial coefficients for quadratic Dirichlet "
                    "and elliptic twist L-function families")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, family=False, prec=True):
        if family:
            p.add_argument("--family", default="qd-minus",
                           help="qd-plus | qd-minus | e11")
            p.add_argument("--k", type=int, default=1)
        if prec:
            p.add_argument("--prec", type=int, default=DEFAULT_PREC,
                           help="working precision in bits (>= 64)")
            p.add_argument("--prime-cutoff", type=int, default=DEFAULT_CUTOFF,
                           help="direct prime summation bound (>= 100)")
        p.add_argument("--cache-dir", default=os.environ.get(ENV_VAR),
                       help="cache directory (also via MOMENTPOLY_CACHE)")
        p.add_argument("--format", choices=("json", "csv", "text"), default="json")

    p = sub.add_parser("partitions", help="enumerate partitions")
    p.add_argument("--max-weight", type=int, default=7)
    common(p, prec=False)
    p.set_defaults(func=cmd_partitions)

    p = sub.add_parser("plambda", help="determinant polynomial table")
    p.add_argument("--max-weight", type=int, default=7)
    p.add_argument("--check", action="store_true",
                   help="compare against the embedded table")
    common(p, prec=False)
    p.set_defaults(func=cmd_plambda)

    p = sub.add_parser("nlambda", help="arrangement polynomial table")
    p.add_argument("--max-weight", type=int, default=7)
    p.add_argument("--check", action="store_true")
    common(p, prec=False)
    p.set_defaults(func=cmd_nlambda)

    p = sub.add_parser("dlambda", help="one binomial determinant")
    p.add_argument("--partition", required=True, help='e.g. "2,1,1"')
    p.add_argument("--k", type=int, required=True)
    common(p, prec=False)
    p.set_defaults(func=cmd_dlambda)

    p = sub.add_parser("bcoeffs", help="Taylor coefficient table")
    common(p, family=True)
    p.add_argument("--max-weight", type=int, default=3)
    p.set_defaults(func=cmd_bcoeffs)

    p = sub.add_parser("coeffs", help="moment polynomial coefficients")
    common(p, family=True)
    p.add_argument("--max-r", type=int, default=None)
    p.set_defaults(func=cmd_coeffs)

    p = sub.add_parser("qpoly", help="full moment polynomial")
    common(p, family=True)
    p.add_argument("--max-r", type=int, default=None)
    p.add_argument("--averaged", action="store_true",
                   help="also apply the local-average transform")
    p.set_defaults(func=cmd_qpoly)

    p = sub.add_parser("verify", help="verification suites")
    p.add_argument("--suite", required=True,
                   choices=("cminus", "cplus", "identities", "oracle"))
    p.add_argument("--max-k", type=int, default=9)
    p.add_argument("--tolerance", type=float, default=None)
    common(p)
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "prec", DEFAULT_PREC) < 64:
        print("precision must be at least 64 bits", file=sys.stderr)
        return 2
    if getattr(args, "prime_cutoff", DEFAULT_CUTOFF) < 100:
        print("prime cutoff must be at least 100", file=sys.stderr)
        return 2
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
