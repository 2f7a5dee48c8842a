"""Command-line front end.

    quatclass field D
    quatclass algebra D (--unramified | --ramified LABELS | --ab A;B)
    quatclass catalog D
    quatclass classno d=D algebra=SPEC [level=LABELS]
    quatclass fibers  d=D algebra=SPEC [level=LABELS]
    quatclass oracle  d=1 algebra=ramified:P[,...] [level=LABELS]
    quatclass verify [CORPUS]

Exit codes: 0 all checks pass, 1 a mathematical check failed, 2 bad input.
"""

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from . import __version__, brandt_oracle as brandt, cmorders
from .classnumbers import IntegralityError, TheoremViolation, compute_fibers
from .cmfield import BudgetExceeded
from .corpus import CorpusParseError, build_algebra, build_order, load_corpus, parse_case_tokens, _tokens
from .numberfield import InputError, make_field

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else int(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def dumps(doc):
    return json.dumps(_jsonable(doc), sort_keys=True, indent=2)


def parse_delta_base(spec):
    """'0', '1', or 'TAG=0,TAG=1' (tags as in the catalog, e.g. F(i))."""
    if spec is None:
        return 1
    spec = spec.strip()
    if spec in ("0", "1"):
        return int(spec)
    out = {}
    for part in spec.split(","):
        if "=" not in part:
            raise InputError("bad --delta-base entry %r" % part)
        tag, v = part.rsplit("=", 1)
        if v not in ("0", "1"):
            raise InputError("--delta-base values must be 0 or 1")
        out[tag.strip()] = int(v)
    return out


def _catalog(d, opts):
    if opts.get("curated_table"):
        table = cmorders.load_curated_table(opts["curated_table"])
        return cmorders.build_catalog(make_field(d), opts.get("budget", cmorders.DEFAULT_BUDGET), table)
    return cmorders.catalog_for(d, opts.get("budget", cmorders.DEFAULT_BUDGET))


# --- single-case computations -------------------------------------------------

def field_doc(d):
    F = make_field(d)
    G = F.narrow_class_group
    return {
        "d": d,
        "disc": F.disc,
        "fund_unit": None if F.is_rational else str(F.fund_unit),
        "unit_norm": None if F.is_rational else F.unit_norm,
        "h": F.h,
        "h_plus": F.h_plus,
        "r": G.r,
        "narrow_classes": G.labels(),
        "zeta_minus_one": F.zeta_minus_one,
    }


def algebra_doc(d, spec):
    F = make_field(d)
    A = build_algebra(F, spec)
    return {
        "field": d,
        "a": str(A.a),
        "b": str(A.b),
        "ram_finite": [P.label for P in A.ram_finite],
        "ram_infinite": list(A.ram_infinite),
        "totally_definite": A.totally_definite,
        "eichler_condition": A.eichler_condition,
    }


def catalog_doc(d, opts):
    cat = _catalog(d, opts)
    return {
        "field": d,
        "members": [{
            "label": r.label(),
            "extension": r.ext.tag,
            "conductor_norm": r.conductor_norm,
            "conductor": r.conductor_label,
            "h": r.h_B,
            "w": r.w_B,
            "provenance": r.provenance,
        } for r in cat],
        "notes": list(cat.notes),
    }


def fibers_doc(case, opts):
    t0 = time.perf_counter()
    order = build_order(case)
    d = case.d
    catalog = None
    if order.alg.totally_definite:
        catalog = _catalog(d, opts)
    rep = compute_fibers(order, catalog, delta_base=opts.get("delta_base", 1),
                         budget=opts.get("budget", cmorders.DEFAULT_BUDGET))
    doc = {
        "field": d,
        "algebra": case.algebra,
        "level": list(case.level),
        "mass": rep.mass,
        "mass_sc": rep.mass_sc,
        "psi_fibers": rep.psi_fibers,
        "phi_fibers": rep.phi_fibers,
        "total": rep.total,
        "divisibility": rep.divisibility,
        "assumptions": rep.assumptions,
        "provenance": {
            "catalog": {r.label(): r.provenance for r in (catalog or [])},
            "notes": rep.notes,
            "seed": opts.get("seed", 0),
            "version": __version__,
        },
        "timing_ms": _elapsed(t0, opts),
    }
    return doc


def _elapsed(t0, opts):
    if opts.get("no_timing"):
        return None
    return round((time.perf_counter() - t0) * 1000, 1)


def _rational_genus(case):
    if case.d != 1:
        raise InputError("the oracle runs over Q only (d=1)")
    order = build_order(case)
    D = 1
    for P in order.ram_finite:
        D *= P.p
    N = 1
    for P in order.level_primes:
        N *= P.p
    return D, N


def oracle_doc(case, opts):
    t0 = time.perf_counter()
    D, N = _rational_genus(case)
    S = brandt.ideal_class_set(brandt.order_for(D, N))
    return {
        "field": 1,
        "algebra": case.algebra,
        "level": list(case.level),
        "discriminant": D,
        "level_norm": N,
        "classes": len(S),
        "unit_indices": S.unit_indices,
        "mass": S.mass,
        "timing_ms": _elapsed(t0, opts),
    }


def run_case(case, opts):
    """Evaluate one corpus case; returns a result document with a status field."""
    t0 = time.perf_counter()
    res = {"case": case.name, "spec": case.describe(), "checks": {}}
    try:
        doc = fibers_doc(case, opts)
        res.update(doc)
        checks = res["checks"]
        div = doc["divisibility"]
        checks["h_divides"] = div["h_divides"]
        if div["h_plus_required"]:
            checks["h_plus_divides"] = div["h_plus_divides"]
        if "total" in case.expect:
            checks["expect_total"] = doc["total"] == case.expect["total"]
        if "h_plus_divides" in case.expect:
            checks["expect_h_plus_divides"] = div["h_plus_divides"] == case.expect["h_plus_divides"]
        if case.d == 1 and doc["mass_sc"] is not None:
            orc = oracle_doc(case, opts)
            checks["oracle_total"] = orc["classes"] == doc["total"]
            checks["oracle_mass"] = orc["mass"] == doc["mass"]
        res["status"] = "pass" if all(checks.values()) else "fail"
    except cmorders.UnsupportedConfiguration as e:
        res["status"], res["message"] = "unsupported", str(e)
    except (IntegralityError, TheoremViolation, brandt.OracleError) as e:
        res["status"], res["message"] = "fail", "%s: %s" % (type(e).__name__, e)
    except (InputError, BudgetExceeded, cmorders.TableError, cmorders.CatalogConflict) as e:
        res["status"], res["message"] = "input-error", "%s: %s" % (type(e).__name__, e)
    res["timing_ms"] = _elapsed(t0, opts)
    return res


def _run_indexed(args):
    case, opts = args
    return run_case(case, opts)


def run_corpus(cases, opts, jobs=1):
    """Results in case order regardless of completion order."""
    work = [(c, opts) for c in cases]
    if jobs <= 1 or len(cases) <= 1:
        return [_run_indexed(w) for w in work]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_run_indexed, work))


def verify_exit_code(results):
    if any(r["status"] == "fail" for r in results):
        return EXIT_FAIL
    if any(r["status"] == "input-error" for r in results):
        return EXIT_INPUT
    return EXIT_OK


# --- output ---------------------------------------------------------------------

def _table(doc, out):
    width = max((len(k) for k in doc), default=0)
    for k in sorted(doc):
        v = _jsonable(doc[k])
        if isinstance(v, (dict, list)):
            v = json.dumps(v, sort_keys=True)
        out.write("%-*s  %s\n" % (width, k, v))


def _emit(doc, args, out):
    if args.json:
        out.write(dumps(doc) + "\n")
    else:
        _table(doc, out)


def _case_from_args(tokens):
    text = " ".join(tokens)
    return parse_case_tokens(_tokens(text), 1, "cli")


def build_parser():
    p = argparse.ArgumentParser(prog="quatclass", description="Class numbers of Eichler orders.")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.add_argument("--seed", type=int, default=0, help="seed for searches (all are deterministic)")
    p.add_argument("--curated-table", help="curated CM class number table")
    p.add_argument("--jobs", type=int, default=1, help="worker processes for verify")
    p.add_argument("--budget", type=int, default=cmorders.DEFAULT_BUDGET,
                   help="Minkowski-bound budget for ideal enumeration")
    p.add_argument("--delta-base", help="Delta(O_K, O) values: 0, 1, or TAG=v,...")
    p.add_argument("--no-timing", action="store_true", help="omit timings (byte-stable output)")
    sub = p.add_subparsers(dest="cmd", required=True)
    s = sub.add_parser("field")
    s.add_argument("d", type=int)
    s = sub.add_parser("algebra")
    s.add_argument("d", type=int)
    g = s.add_mutually_exclusive_group()
    g.add_argument("--unramified", action="store_true")
    g.add_argument("--ramified")
    g.add_argument("--ab")
    s = sub.add_parser("catalog")
    s.add_argument("d", type=int)
    for name in ("classno", "fibers", "oracle"):
        s = sub.add_parser(name)
        s.add_argument("spec", nargs="+", help="d=.. algebra=.. [level=..]")
    s = sub.add_parser("verify")
    s.add_argument("corpus", nargs="?")
    return p


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    try:
        opts = {
            "seed": args.seed,
            "curated_table": args.curated_table,
            "budget": args.budget,
            "delta_base": parse_delta_base(args.delta_base),
            "no_timing": args.no_timing,
        }
        if args.cmd == "field":
            _emit(field_doc(args.d), args, out)
        elif args.cmd == "algebra":
            spec = "unramified"
            if args.ramified:
                spec = "ramified:" + args.ramified
            elif args.ab:
                spec = "ab:" + args.ab
            _emit(algebra_doc(args.d, spec), args, out)
        elif args.cmd == "catalog":
            _emit(catalog_doc(args.d, opts), args, out)
        elif args.cmd in ("classno", "fibers"):
            doc = fibers_doc(_case_from_args(args.spec), opts)
            if args.cmd == "classno":
                doc = {k: doc[k] for k in ("field", "algebra", "level", "mass", "total",
                                           "divisibility", "timing_ms")}
            _emit(doc, args, out)
        elif args.cmd == "oracle":
            _emit(oracle_doc(_case_from_args(args.spec), opts), args, out)
        elif args.cmd == "verify":
            cases = load_corpus(args.corpus)
            results = run_corpus(cases, opts, args.jobs)
            code = verify_exit_code(results)
            if args.json:
                out.write(dumps({"results": results, "exit_code": code}) + "\n")
            else:
                for r in results:
                    extra = r.get("message") or "total=%s" % r.get("total")
                    out.write("%-12s %-11s %s  [%s]\n" % (r["status"].upper(), r["case"], extra, r["spec"]))
            return code
    except (InputError, CorpusParseError, BudgetExceeded, cmorders.TableError,
            cmorders.CatalogConflict, cmorders.UnsupportedConfiguration, OSError) as e:
        sys.stderr.write("error: %s\n" % e)
        return EXIT_INPUT
    except (IntegralityError, TheoremViolation, brandt.OracleError) as e:
        sys.stderr.write("check failed: %s\n" % e)
        return EXIT_FAIL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
