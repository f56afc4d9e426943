"""Command-line front end.

Exit status: 0 when every requested bound check passes, 1 when one fails,
2 for usage errors, 3 when an enumeration cap is exceeded.
"""

from __future__ import annotations

import argparse
import csv
import json
import random
import sys
import time

import jsonschema
import numpy as np

from .boomerang_system import check_bound_exponent, valid_bound_exponents, verify_bound_sweep
from .character import bct_entry_charsum, weil_sum_table
from .errors import EnumerationCapError, FieldError, HypothesisError, NotBijectiveError
from .field import GF, HARD_CAP, check_cap
from .gtds import (
    GTDS,
    bct_bound,
    cipher_eval,
    cipher_invert,
    corollary_bct_bound,
    make_hades,
    pair_system_row,
    random_invertible_matrix,
    rounds_from_json,
    two_round_bct_row,
    two_round_targets,
)
from .linalg import SingularMatrixError
from .polynomial import make_monomial_spec, reduce_p_power_exponent
from .space import monomial_map
from .uniformity import (
    SCHEMA_VERSION,
    bct_entry_pairs,
    bct_table,
    boomerang_uniformity,
    ddt_entry,
    ddt_table,
    differential_uniformity,
    table_rows,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3
CHARSUM_TOL = 1e-6


class UsageError(Exception):
    pass


# -- argument helpers ---------------------------------------------------------

def _int_list(text):
    try:
        return [int(t) for t in str(text).split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _positive(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _add_field_args(p):
    p.add_argument("--p", type=int, required=True, help="characteristic")
    p.add_argument("--n", type=int, default=1, help="extension degree")
    p.add_argument("--modulus", type=_int_list, help="modulus coefficients, constant term first")


def _add_c_args(p, default_all=False):
    g = p.add_mutually_exclusive_group(required=not default_all)
    g.add_argument("--c", type=_int_list, help="c value(s), comma separated")
    g.add_argument("--all-c", action="store_true", help="every nonzero c")


def _add_common(p):
    p.add_argument("--json", metavar="FILE", help="write the JSON report here instead of stdout")
    p.add_argument("--workers", type=_positive, default=1)
    p.add_argument("--cap", type=int, help=f"enumeration cap override (at most {HARD_CAP})")
    p.add_argument("--timing", action="store_true", help="add elapsed_ms to reports")


def build_parser():
    parser = argparse.ArgumentParser(prog="cboomerang", description="c-differential and c-boomerang tables over finite fields")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("field-info", help="field parameters and a primitive element")
    _add_field_args(p)
    _add_common(p)

    for name, what in (("ddt", "c-DDT"), ("bct", "c-BCT"), ("uniformity", "c-DDT and c-BCT")):
        p = sub.add_parser(name, help=f"{what} uniformity of x^d")
        _add_field_args(p)
        p.add_argument("--d", type=int, required=True)
        p.add_argument("--inverse", action="store_true", help="use x^(1/d)")
        _add_c_args(p)
        if name != "uniformity":
            p.add_argument("--a", type=int)
            p.add_argument("--b", type=int)
            p.add_argument("--dump", metavar="FILE", help="CSV of a,b,entry for nonzero a and b")
        _add_common(p)

    p = sub.add_parser("verify-bound", help="sweep the d^2 bound over exponents and c")
    _add_field_args(p)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--d", type=_int_list)
    g.add_argument("--all-d", action="store_true", help="every d in [2, q-2] meeting the hypotheses")
    p.add_argument("--inverse", action="store_true")
    _add_c_args(p, default_all=True)
    p.add_argument("--samples", type=_positive, help="random (a, b) pairs per cell instead of all")
    p.add_argument("--seed", type=int, default=0)
    _add_common(p)

    p = sub.add_parser("gtds-check", help="validate a GTDS spec and check invertibility")
    p.add_argument("--spec", required=True, metavar="FILE")
    _add_common(p)

    p = sub.add_parser("gtds-bct", help="c-BCT of a GTDS against the product bound")
    p.add_argument("--spec", required=True, metavar="FILE")
    _add_c_args(p)
    p.add_argument("--a", type=_int_list)
    p.add_argument("--b", type=_int_list)
    p.add_argument("--dump", metavar="FILE")
    _add_common(p)

    p = sub.add_parser("char-check", help="character-sum c-BCT oracle against enumeration")
    _add_field_args(p)
    p.add_argument("--d", type=int, required=True)
    _add_c_args(p)
    _add_common(p)

    p = sub.add_parser("hades-demo", help="toy Hades cipher: round trip and two-round reduction")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--branches", type=_positive, default=2)
    p.add_argument("--rf", type=int, default=2, help="full rounds on each side")
    p.add_argument("--rp", type=int, default=1, help="partial rounds")
    p.add_argument("--c", type=int, default=1)
    p.add_argument("--random-keys", action="store_true", help="distinct round keys")
    p.add_argument("--samples", type=_positive, help="random a values instead of all")
    p.add_argument("--seed", type=int, default=0)
    _add_common(p)
    return parser


# -- shared plumbing ----------------------------------------------------------

def _field(args):
    return GF(args.p, args.n, tuple(args.modulus) if args.modulus else None)


def _c_values(args, field):
    if getattr(args, "all_c", False) or getattr(args, "c", None) is None:
        return list(range(1, field.q))
    for c in args.c:
        if not 0 < c < field.q:
            raise UsageError(f"c = {c} is not a nonzero element of F_{field.q}")
    return list(args.c)


def _cap(args):
    if args.cap is None:
        return None
    if not 0 < args.cap <= HARD_CAP:
        raise UsageError(f"--cap must be in [1, {HARD_CAP}]")
    return args.cap


def _emit(args, payload):
    text = json.dumps(payload, indent=2) + "\n"
    if args.json:
        with open(args.json, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _write_csv(path, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["a", "b", "entry"])
        w.writerows(rows)


def _envelope(command, reports, passed, **extra):
    out = {"schema_version": SCHEMA_VERSION, "command": command, "passed": passed}
    out.update(extra)
    out["reports"] = reports
    return out


def _verdict(reports):
    return all(r.get("bound_satisfied") is not False for r in reports)


class _Clock:
    """Per-cell wall time, attached only when --timing is given."""

    def __init__(self, on):
        self.on = on
        self.start = time.perf_counter()

    def lap(self):
        now = time.perf_counter()
        ms = round((now - self.start) * 1e3, 3)
        self.start = now
        return ms

    def stamp(self, rep):
        ms = self.lap()
        if self.on:
            rep.elapsed_ms = ms
        return rep


# -- commands -----------------------------------------------------------------

def cmd_field_info(args):
    F = _field(args)
    check_cap(F.q, _cap(args), "field tables")
    info = F.to_json()
    info.update({"q": F.q, "primitive_element": F.primitive_element(), "minus_one": F.minus_one})
    _emit(args, {"schema_version": SCHEMA_VERSION, "command": "field-info", "field": info})
    return EXIT_OK


def _monomial_setup(args, F):
    m = make_monomial_spec(F, args.d)
    if args.inverse and not m.is_permutation:
        raise UsageError(f"x^{args.d} is not a permutation of F_{F.q}, so x^(1/d) is undefined")
    exponent = m.inverse_exponent if args.inverse else args.d
    fmap = monomial_map(F, exponent, _cap(args))
    reduced, power = reduce_p_power_exponent(F, args.d)
    meta = {"field": F.to_json(), "map": f"x^{exponent}", "exponent": args.d, "inverse": args.inverse,
            "reduced_d": reduced, "p_power": power}
    return fmap, reduced, meta


def _ddt_report(args, F, fmap, reduced, meta, c, clock):
    bound = reduced if reduced > 1 and not args.inverse else None
    extra = dict(meta, bound_formula="d" if bound else None,
                 hypotheses={"d_gt_1": reduced > 1, "c_nonzero": True})
    return clock.stamp(differential_uniformity(fmap, c, bound=bound, cap=_cap(args), meta=extra))


def _bct_report(args, F, fmap, reduced, meta, c, clock):
    try:
        d, _ = check_bound_exponent(F, args.d)
        bound, ok = d * d, True
    except HypothesisError:
        bound, ok = None, False
    extra = dict(meta, bound_formula="d^2" if ok else None,
                 hypotheses={"d_gt_1": reduced > 1, "gcd_d_q_minus_1": make_monomial_spec(F, args.d).is_permutation,
                             "p_not_dividing_d": True, "c_nonzero": True})
    table = bct_table(fmap, c, workers=args.workers, cap=_cap(args))
    rep = boomerang_uniformity(fmap, c, bound=bound, meta=extra, table=table)
    return clock.stamp(rep), table


def _single_entry(args, F, fmap, kind, c):
    for v in (args.a, args.b):
        if not 0 <= v < F.q:
            raise UsageError(f"{v} is not an element of F_{F.q}")
    if kind == "DDT":
        return ddt_entry(fmap, c, args.a, args.b)
    return bct_entry_pairs(fmap, c, args.a, args.b, cap=_cap(args))


def cmd_table(args, kind):
    F = _field(args)
    fmap, reduced, meta = _monomial_setup(args, F)
    cs = _c_values(args, F)
    if (args.a is None) != (args.b is None):
        raise UsageError("--a and --b go together")
    if args.dump and len(cs) != 1:
        raise UsageError("--dump needs a single --c")
    clock = _Clock(args.timing)
    reports, entries = [], []
    for c in cs:
        if kind == "DDT":
            rep = _ddt_report(args, F, fmap, reduced, meta, c, clock)
            table = ddt_table(fmap, c, _cap(args)) if args.dump else None
        else:
            rep, table = _bct_report(args, F, fmap, reduced, meta, c, clock)
        reports.append(rep.to_dict())
        if args.a is not None:
            entries.append({"c": c, "a": args.a, "b": args.b, "entry": _single_entry(args, F, fmap, kind, c)})
        if args.dump:
            _write_csv(args.dump, table_rows(fmap, table))
    extra = {"entries": entries} if entries else {}
    passed = _verdict(reports)
    _emit(args, _envelope(args.command, reports, passed, **extra))
    return EXIT_OK if passed else EXIT_FAIL


def cmd_uniformity(args):
    F = _field(args)
    fmap, reduced, meta = _monomial_setup(args, F)
    clock = _Clock(args.timing)
    reports = []
    for c in _c_values(args, F):
        reports.append(_ddt_report(args, F, fmap, reduced, meta, c, clock).to_dict())
        reports.append(_bct_report(args, F, fmap, reduced, meta, c, clock)[0].to_dict())
    passed = _verdict(reports)
    _emit(args, _envelope("uniformity", reports, passed))
    return EXIT_OK if passed else EXIT_FAIL


def cmd_verify_bound(args):
    F = _field(args)
    check_cap(F.q**2, _cap(args), "c-BCT pair scan")
    ds = valid_bound_exponents(F) if args.all_d else args.d
    if not ds:
        raise UsageError(f"no exponent in [2, {F.q - 2}] meets the bound's hypotheses")
    reps = verify_bound_sweep(F, ds, _c_values(args, F), inverse=args.inverse, ab_sample=args.samples,
                              seed=args.seed, workers=args.workers, include_timing=args.timing)
    reports = [r.to_dict() for r in reps]
    passed = _verdict(reports)
    _emit(args, _envelope("verify-bound", reports, passed, cells=len(reports)))
    return EXIT_OK if passed else EXIT_FAIL


def _load_spec(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read spec {path}: {exc}")


def _build_gtds(obj):
    """(gtds, violations); gtds is None when the spec cannot even be parsed."""
    try:
        g = GTDS.from_json(obj)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "spec"
        return None, [f"schema: {where}: {exc.message}"]
    except (FieldError, ValueError) as exc:
        return None, [f"field: {exc}"]
    return g, g.validate()


def cmd_gtds_check(args):
    obj = _load_spec(args.spec)
    g, issues = _build_gtds(obj)
    out = {"schema_version": SCHEMA_VERSION, "command": "gtds-check", "valid": not issues, "violations": issues}
    if g is not None and not issues:
        try:
            rounds_from_json(obj, g)
        except SingularMatrixError:
            issues.append("matrix is not invertible")
        except ValueError as exc:
            issues.append(f"rounds: {exc}")
    if g is not None and not issues:
        sp = g.space
        xs = sp.decode(sp.indices(_cap(args)))
        out["n"] = g.n
        out["degrees"] = [g.degree(i) for i in range(g.n)]
        out["roundtrip"] = bool(np.array_equal(g.invert(g.eval(xs)), xs))
        if not out["roundtrip"]:
            issues.append("invert(eval(x)) != x")
    out["valid"] = not issues
    _emit(args, out)
    return EXIT_OK if not issues else EXIT_FAIL


def cmd_gtds_bct(args):
    obj = _load_spec(args.spec)
    g, issues = _build_gtds(obj)
    if issues:
        raise UsageError("invalid GTDS spec: " + "; ".join(issues))
    if (args.a is None) != (args.b is None):
        raise UsageError("--a and --b go together")
    F, sp = g.field, g.space
    cs = _c_values(args, F)
    if args.dump and len(cs) != 1:
        raise UsageError("--dump needs a single --c")
    try:
        ds = g.monomial_exponents()
    except HypothesisError as exc:
        raise UsageError(str(exc))
    d_max = max(ds)
    corollary = all(d > 1 for d in ds)
    fmap = g.as_map(_cap(args))
    clock = _Clock(args.timing)
    reports, entries = [], []
    for c in cs:
        table = bct_table(fmap, c, workers=args.workers, cap=_cap(args))
        worst, violations = None, 0
        for a in range(1, sp.size):
            av = sp.vector(a)
            for b in range(1, sp.size):
                bv = sp.vector(b)
                bnd = bct_bound(g, c, av, bv)
                if corollary:
                    bnd = min(bnd, corollary_bct_bound(g, c, av, bv, d_max))
                e = int(table[a, b])
                if e > bnd:
                    violations += 1
                slack = bnd - e
                if worst is None or slack < worst[0]:
                    worst = (slack, list(av), list(bv), e, bnd)
        meta = {"field": F.to_json(), "map": "GTDS", "degrees": ds,
                "bound_formula": "product bound, min with q^(n-w) d^(2w)" if corollary else "product bound",
                "hypotheses": {"h_zero": True, "monomial_p": True, "gcd_d_q_minus_1": True, "p_not_dividing_d": True},
                "violations": violations,
                "tightest": {"a": worst[1], "b": worst[2], "entry": worst[3], "bound": worst[4]} if worst else None}
        rep = boomerang_uniformity(fmap, c, meta=meta, table=table)
        rep.bound_satisfied = violations == 0
        reports.append(clock.stamp(rep).to_dict())
        if args.a is not None:
            e = int(table[sp.index(args.a), sp.index(args.b)])
            bnd = bct_bound(g, c, args.a, args.b)
            entries.append({"c": c, "a": args.a, "b": args.b, "entry": e, "bound": bnd})
        if args.dump:
            _write_csv(args.dump, table_rows(fmap, table))
    passed = _verdict(reports) and all(x["entry"] <= x["bound"] for x in entries)
    extra = {"entries": entries} if entries else {}
    _emit(args, _envelope("gtds-bct", reports, passed, **extra))
    return EXIT_OK if passed else EXIT_FAIL


def cmd_char_check(args):
    F = _field(args)
    m = make_monomial_spec(F, args.d)
    cap = _cap(args)
    S = weil_sum_table(F, args.d, cap)
    fmap = monomial_map(F, args.d, cap)
    clock = _Clock(args.timing)
    reports = []
    a_all = np.arange(1, F.q, dtype=np.int64)
    ad = F.pow(a_all, args.d)
    for c in _c_values(args, F):
        table = bct_table(fmap, c, workers=args.workers, cap=cap)
        worst = 0.0
        for b in range(F.q):
            value = bct_entry_charsum(F, m, c, 1, b, table=S)
            exact = table[a_all, F.mul(ad, np.int64(b))]
            worst = max(worst, float(np.max(np.abs(exact - value))))
        rep = {"schema_version": SCHEMA_VERSION, "kind": "charsum", "c": c, "max_abs_error": worst,
               "tolerance": CHARSUM_TOL, "bound_satisfied": worst < CHARSUM_TOL,
               "field": F.to_json(), "map": f"x^{args.d}"}
        ms = clock.lap()
        if args.timing:
            rep["elapsed_ms"] = ms
        reports.append(rep)
    passed = _verdict(reports)
    _emit(args, _envelope("char-check", reports, passed))
    return EXIT_OK if passed else EXIT_FAIL


def cmd_hades_demo(args):
    F = GF(args.p)
    n = args.branches
    cap = _cap(args)
    check_cap(F.q ** (2 * n), cap, "two-round scan")
    if args.rf < 1 or args.rp < 0:
        raise UsageError("need --rf >= 1 and --rp >= 0")
    rng = random.Random(args.seed)
    A = random_invertible_matrix(F, n, rng)
    total = 2 * args.rf + args.rp
    constants = [[rng.randrange(F.q) for _ in range(n)] for _ in range(total)]
    if args.random_keys:
        keys = [[rng.randrange(F.q) for _ in range(n)] for _ in range(total)]
    else:
        k = [rng.randrange(F.q) for _ in range(n)]
        keys = [k] * total
    k0 = [rng.randrange(F.q) for _ in range(n)]
    try:
        rounds = make_hades(F, n, args.d, args.rf, args.rp, A, constants, keys)
    except HypothesisError as exc:
        raise UsageError(str(exc))
    sp = rounds[0].gtds.space
    xs = sp.decode(sp.indices(cap))
    roundtrip = bool(np.array_equal(cipher_invert(rounds, k0, cipher_eval(rounds, k0, xs)), xs))

    c = args.c
    if not 0 < c < F.q:
        raise UsageError(f"c = {c} is not a nonzero element of F_{F.q}")
    r0, r1 = rounds[0], rounds[1]
    fmap = r0.gtds.as_map()
    a_idx = range(sp.size) if args.samples is None else sorted(rng.sample(range(sp.size), min(args.samples, sp.size)))
    targets = [two_round_targets(r0, r1, c, sp.vector(b)) for b in range(sp.size)]
    t1 = np.array([sp.index(t[0]) for t in targets])
    t2 = np.array([sp.index(t[1]) for t in targets])
    mismatches, top, checked = 0, 0, 0
    for a in a_idx:
        direct = two_round_bct_row(r0, r1, c, sp.vector(a), cap)
        reduced = pair_system_row(fmap, c, sp.vector(a))[t1, t2]
        mismatches += int(np.count_nonzero(direct != reduced))
        if a:
            top = max(top, int(direct[1:].max()))
        checked += sp.size
    passed = roundtrip and mismatches == 0
    out = {"schema_version": SCHEMA_VERSION, "command": "hades-demo", "passed": passed,
           "field": F.to_json(), "branches": n, "d": args.d, "rf": args.rf, "rp": args.rp, "c": c,
           "seed": args.seed, "matrix": A, "equal_keys": not args.random_keys,
           "roundtrip": roundtrip, "pairs_checked": checked, "reduction_mismatches": mismatches,
           "two_round_max_entry": top}
    _emit(args, out)
    return EXIT_OK if passed else EXIT_FAIL


COMMANDS = {
    "field-info": cmd_field_info,
    "ddt": lambda a: cmd_table(a, "DDT"),
    "bct": lambda a: cmd_table(a, "BCT"),
    "uniformity": cmd_uniformity,
    "verify-bound": cmd_verify_bound,
    "gtds-check": cmd_gtds_check,
    "gtds-bct": cmd_gtds_bct,
    "char-check": cmd_char_check,
    "hades-demo": cmd_hades_demo,
}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        _cap(args)
        return COMMANDS[args.command](args)
    except EnumerationCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (UsageError, FieldError, HypothesisError, NotBijectiveError, SingularMatrixError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
