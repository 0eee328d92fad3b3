"""Command line front end.

Every command reads one scenario (a bundled name or a path to a JSON file)
and prints a JSON report.  Exit status: 0 on success, 1 when a checked
property fails, 2 when the input is malformed.
"""

import argparse
import json
import sys

from .localization import hom_criterion
from .nullgeom import GeometryError
from .operad import OperadError
from .pipeline import (
    BUNDLED,
    Context,
    ScenarioError,
    check_algebras,
    check_clf,
    check_dcas,
    check_localization,
    check_roundtrip,
    check_site,
    check_w_isos,
    load_scenario,
    paper_suite,
    scan_fibers0,
    scan_fibers1,
)
from .qftoperads import operad_dump


def dumps(obj):
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _context(args):
    name, doc = load_scenario(args.scenario)
    return Context(name, doc, args.arity_cap, args.saturation_depth, args.object_cap, args.seed)


def cmd_validate_site(args):
    ctx = _context(args)
    return 0, {"scenario": ctx.name, "summary": check_site(ctx), "site": ctx.site.to_json()}


def cmd_dump_operad(args):
    ctx = _context(args)
    O, tP, L = ctx.sat if args.saturated else ctx.base
    chosen = {"aqft": O, "tpfa": tP, "localized": L}[args.operad]
    return 0, operad_dump(chosen)


def cmd_clf_check(args):
    ctx = _context(args)
    rep = check_clf(ctx, args.operad)
    return (0 if rep["ok"] else 1), rep


def cmd_localize(args):
    ctx = _context(args)
    rep = check_localization(ctx)
    s = ctx.saturated
    rep["homs"] = [[U, V] for U in s.names for V in s.names if hom_criterion(s, U, V)]
    return (0 if rep["ok"] else 1), rep


def cmd_hinich_scan(args):
    ctx = _context(args)
    if args.n == 0:
        rep = scan_fibers0(ctx)
        rep["w_to_isos"] = check_w_isos(ctx)
        ok = rep["all_single_component"] and rep["w_to_isos"]["ok"]
        return (0 if ok else 1), rep
    return 0, {"scope": "objects of the saturated universe", "fibers": scan_fibers1(ctx)}


def cmd_algebra_check(args):
    rep = check_algebras(_context(args))
    ok = rep["all_laws"] and rep["all_timeslice"] and not rep["einstein_failures"]
    return (0 if ok else 1), rep


def cmd_roundtrip(args):
    rep = check_roundtrip(_context(args))
    return (0 if rep["verified"] else 1), rep


def cmd_dcas(args):
    rep = check_dcas(_context(args))
    ok = rep["as_dc_identity"] and rep["dc_as_iso"] and rep["twisted_assembly_laws"]
    return (0 if ok else 1), rep


def cmd_paper_suite(args):
    refs = args.scenarios or list(BUNDLED)
    rep = paper_suite(refs, arity_cap=args.arity_cap, saturation_depth=args.saturation_depth,
                      object_cap=args.object_cap, seed=args.seed)
    for s in rep["scenarios"]:
        for row in s["checks"]:
            print(f"{row['status']} {s['scenario']} {row['check']}", file=sys.stderr)
    return (0 if rep["ok"] else 1), rep


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--arity-cap", type=int, default=3)
    common.add_argument("--saturation-depth", type=int, default=2)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--object-cap", type=int, default=64)
    common.add_argument("--out", help="write the JSON report here instead of standard output")

    p = argparse.ArgumentParser(prog="artifact", description="Exact checks for causal-region operads.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text, scenario=True):
        sp = sub.add_parser(name, parents=[common], help=help_text)
        if scenario:
            sp.add_argument("scenario", help=f"bundled name ({', '.join(BUNDLED)}) or path to a JSON file")
        sp.set_defaults(func=fn)
        return sp

    add("validate-site", cmd_validate_site, "validate a site and print its tables")
    sp = add("dump-operad", cmd_dump_operad, "print operation counts and sample composites")
    sp.add_argument("--operad", choices=["aqft", "tpfa", "localized"], default="aqft")
    sp.add_argument("--saturated", action="store_true", help="use the saturated universe")
    sp = add("clf-check", cmd_clf_check, "check the operadic calculus of left fractions")
    sp.add_argument("--operad", choices=["aqft", "tpfa"], default="aqft")
    add("localize", cmd_localize, "compare the explicit localization with fractions")
    sp = add("hinich-scan", cmd_hinich_scan, "enumerate fibers of the localization functor")
    sp.add_argument("--n", type=int, choices=[0, 1], default=0)
    add("algebra-check", cmd_algebra_check, "check sample algebras, time-slice and causality")
    add("roundtrip", cmd_roundtrip, "invert the comparison on sample algebras")
    add("dcas", cmd_dcas, "decompose and assemble a sample algebra")
    sp = add("paper-suite", cmd_paper_suite, "run every bundled scenario against its expectations", scenario=False)
    sp.add_argument("scenarios", nargs="*", help="scenarios to run (default: all bundled)")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        code, report = args.func(args)
    except (ScenarioError, GeometryError) as exc:
        pointer = getattr(exc, "pointer", "") or ""
        where = f" (at {pointer})" if pointer else ""
        print(f"error: {exc}{where}", file=sys.stderr)
        sys.stdout.write(dumps({"error": str(exc), "pointer": pointer}))
        return 2
    except OperadError as exc:
        print(f"error: {exc}", file=sys.stderr)
        sys.stdout.write(dumps({"error": str(exc)}))
        return 1
    text = dumps(report)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code
