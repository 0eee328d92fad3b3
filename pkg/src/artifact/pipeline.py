"""Scenario loading and the end-to-end checks run by the command line.

A scenario file holds a site (ambient, objects, options) plus a
``metadata`` block and an ``expected`` block listing the verdicts the
checks should reproduce.  Every check returns plain JSON data.
"""

import json
import os
from concurrent.futures import ProcessPoolExecutor
from functools import cached_property
from importlib import resources

import jsonschema

from .algebra import (
    PreconditionError,
    aqft_algebra,
    assemble,
    check_algebra,
    check_family,
    decompose,
    einstein_causality,
    family_iso_check,
    invert_comparison,
    member_timeslice,
    nesting_depth,
    pullback,
    same_algebra,
    sample_algebras,
    sample_data,
    strict_timeslice,
    twisted_family,
)
from .localization import (
    build_localized_O_M,
    check_clf_for_operad,
    compare_localizations,
    localization_multifunctor,
)
from .nullgeom import GeometryError
from .operad import check_multifunctor, check_operad_axioms, compose_multifunctors
from .operators import HinichSetup, Morphism, analyze_fiber, check_sends_w_to_isos
from .qftoperads import build_O_M, build_Phi_M, build_tP_M, cauchy_ops
from .site import build_site, check_mult_pair, propose_mult_pair, saturate, site_from_json

BUNDLED = ("staircase-universe", "crossing-bands", "nested-diamonds")

_RATIONAL = {
    "oneOf": [
        {"type": "integer"},
        {"type": "string", "pattern": r"^(-?[0-9]+(/[0-9]+)?|-?inf)$"},
    ]
}
_REGION = {
    "type": "object",
    "required": ["rects"],
    "properties": {
        "rects": {
            "type": "array",
            "items": {"type": "array", "minItems": 4, "maxItems": 4, "items": _RATIONAL},
        }
    },
}
SITE_SCHEMA = {
    "type": "object",
    "required": ["ambient"],
    "properties": {
        "metadata": {"type": "object"},
        "ambient": _REGION,
        "objects": {"type": "object", "additionalProperties": _REGION},
        "mult_pairs": {
            "type": "object",
            "additionalProperties": {"type": "array", "minItems": 2, "maxItems": 2, "items": _REGION},
        },
        "options": {
            "type": "object",
            "properties": {
                "ambient_name": {"type": "string"},
                "bands": {"type": "array", "items": {"type": "string"}},
            },
        },
        "expected": {"type": "object"},
    },
}


class ScenarioError(Exception):
    """Schema or geometry problem in an input file, with a JSON pointer."""

    def __init__(self, message, pointer=""):
        super().__init__(message)
        self.pointer = pointer


def _pointer(path):
    return "".join(f"/{p}" for p in path)


def validate_document(doc):
    try:
        jsonschema.validate(doc, SITE_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise ScenarioError(exc.message, _pointer(exc.absolute_path)) from None


def load_scenario(ref):
    """Read a scenario by bundled name or by path, and validate it."""
    if ref in BUNDLED or ref.removesuffix(".json") in BUNDLED:
        name = ref.removesuffix(".json")
        text = resources.files("artifact").joinpath("scenarios", f"{name}.json").read_text()
    else:
        name = os.path.basename(ref).removesuffix(".json")
        try:
            with open(ref) as fh:
                text = fh.read()
        except OSError as exc:
            raise ScenarioError(f"cannot read {ref}: {exc.strerror}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"invalid JSON: {exc.msg} at line {exc.lineno}") from None
    validate_document(doc)
    return name, doc


class Context:
    """A scenario's site with lazily built operads and derived data."""

    def __init__(self, name, doc, arity_cap=3, saturation_depth=2, object_cap=64, seed=0):
        self.name = name
        self.doc = doc
        self.arity_cap = arity_cap
        self.saturation_depth = saturation_depth
        self.object_cap = object_cap
        self.seed = seed
        try:
            self.site = site_from_json(doc)
        except GeometryError as exc:
            raise ScenarioError(str(exc), exc.pointer) from None

    @property
    def expected(self):
        return self.doc.get("expected", {})

    @cached_property
    def saturated(self):
        return saturate(self.site, self.saturation_depth, self.object_cap)

    def operads(self, site):
        O = build_O_M(site, self.arity_cap)
        tP = build_tP_M(site, self.arity_cap)
        L = build_localized_O_M(site, self.arity_cap)
        return O, tP, L

    @cached_property
    def base(self):
        return self.operads(self.site)

    @cached_property
    def sat(self):
        return self.operads(self.saturated)


# ------------------------------------------------------------------ checks

def check_site(ctx):
    s, sat = ctx.site, ctx.saturated
    return {
        "objects": list(s.names),
        "object_count": len(s),
        "saturated_object_count": len(sat),
        "cauchy_in_ambient": sorted(n for n in s.names if s.hom(n, s.names[0]).cauchy),
        "orthogonal_pairs": sorted(sorted(p) for p in s.orthogonal),
        "subsites": {n: list(s.subsite(n).names) for n in s.names},
    }


def check_integrity(ctx):
    s = ctx.site
    O, tP, L = ctx.base
    Phi = build_Phi_M(s, tP, O)
    Lmf = localization_multifunctor(s, O, L)
    reports = [
        check_operad_axioms(O),
        check_operad_axioms(tP),
        check_operad_axioms(L),
        check_multifunctor(Phi),
        check_multifunctor(Lmf),
    ]
    return {"ok": all(r.ok for r in reports), "reports": [r.to_json(limit=5) for r in reports]}


def check_clf(ctx, which):
    s = ctx.saturated
    O, tP, _ = ctx.sat
    target = O if which == "aqft" else tP
    rep = check_clf_for_operad(target, cauchy_ops(target, s), s)
    return rep.to_json()


def clf_verdicts(report):
    return {k: v["verdict"] for k, v in report["properties"].items()}


def check_localization(ctx):
    s = ctx.saturated
    _, _, L = ctx.sat
    return compare_localizations(s, L)


def _hinich_setup(ctx):
    s = ctx.saturated
    O, tP, L = ctx.sat
    F = compose_multifunctors(localization_multifunctor(s, O, L), build_Phi_M(s, tP, O))
    return HinichSetup(s, tP, L, F, cauchy_ops(tP, s))


def scan_fibers0(ctx, max_length=None):
    setup = _hinich_setup(ctx)
    cap = ctx.arity_cap if max_length is None else max_length
    records, sizes = [], {}
    for n in range(cap + 1):
        for V in setup.tgt.objects(n):
            info = analyze_fiber(setup.fiber0(V))
            records.append({"psi": list(V), "n": 0, "empty": info["empty"], "components": info["components"]})
            sizes[info["components"]] = sizes.get(info["components"], 0) + 1
    bad = [r for r in records if r["empty"] or r["components"] != 1]
    return {
        "fibers": len(records),
        "all_single_component": not bad,
        "component_histogram": {str(k): v for k, v in sorted(sizes.items())},
        "exceptions": bad[:20],
    }


def _psi(setup, sources, target, payload):
    L = setup.tgt.O
    op = next((o for o in L.ops(tuple(sources), target) if list(o.payload) == list(payload)), None)
    if op is None:
        raise ScenarioError(f"no localized operation {sources} -> {target} with payload {payload}")
    return Morphism(tuple(sources), (target,), (1,) * len(sources), (op,))


def scan_fibers1(ctx, queries=None):
    """Fibers over binary operations into the ambient.

    Without ``queries`` every localized binary operation between distinct
    base objects (other than the ambient) into the ambient is scanned.
    """
    setup = _hinich_setup(ctx)
    L = setup.tgt.O
    M = ctx.site.names[0]
    if queries is None:
        queries = []
        names = ctx.site.names[1:]
        for a in names:
            for b in names:
                if a < b:
                    queries.extend({"sources": [a, b], "target": M, "payload": list(o.payload)}
                                   for o in L.ops((a, b), M))
    out = []
    for q in queries:
        fib = setup.fiber1(_psi(setup, q["sources"], q["target"], q["payload"]))
        info = analyze_fiber(fib)
        out.append({"psi": {"sources": list(q["sources"]), "target": q["target"], "payload": list(q["payload"])},
                    "n": 1, "empty": info["empty"], "components": info["components"],
                    "lifts": info["objects"]})
    return out


def check_w_isos(ctx):
    setup = _hinich_setup(ctx)
    names = ctx.site.names
    objs = [()] + [(a,) for a in names] + [(a, b) for a in names for b in names]
    return check_sends_w_to_isos(setup, objs)


def check_algebras(ctx, count=10):
    s = ctx.site
    O, tP, _ = ctx.base
    Osat = build_O_M(ctx.saturated, ctx.arity_cap)
    W = cauchy_ops(O, s)
    Phi = build_Phi_M(s, tP, O)
    Wt = cauchy_ops(tP, s)
    rows = []
    for A in sample_algebras(s, count, ctx.seed, operad=O):
        kind = A.name.split("#")[0]
        k = int(A.name.split("#")[1])
        Asat = sample_algebras(ctx.saturated, k + 1, ctx.seed, operad=Osat)[k]
        checked, fails = einstein_causality(Asat, ctx.saturated)
        F = pullback(Phi, A)
        rows.append({
            "algebra": A.name,
            "laws": check_algebra(A).ok,
            "timeslice": strict_timeslice(A, W),
            "pullback_laws": check_algebra(F).ok,
            "pullback_timeslice": strict_timeslice(F, Wt),
            "einstein_pairs": checked,
            "einstein_failures": len(fails),
            "noncommutative": kind.startswith(("triangular", "opposite")),
        })
    broken = aqft_algebra("broken", s, sample_data(s, "truncated/subring", ctx.seed, break_timeslice=True), operad=O)
    return {
        "count": len(rows),
        "all_laws": all(r["laws"] and r["pullback_laws"] for r in rows),
        "all_timeslice": all(r["timeslice"] and r["pullback_timeslice"] for r in rows),
        "einstein_pairs": sum(r["einstein_pairs"] for r in rows),
        "einstein_failures": sum(r["einstein_failures"] for r in rows),
        "broken_sample_timeslice": strict_timeslice(broken, W),
        "algebras": rows,
    }


def _product_pairs(site):
    """Designated pairs, falling back to staircase proposals; returns (pairs, rejections)."""
    pairs, rejected = {}, {}
    for V in site.names:
        if V in site.mult_pairs:
            pairs[V] = site.mult_pairs[V]
            continue
        R = site.region[V]
        if not R.bounded:
            rejected[V] = ["no proposal for an unbounded object"]
            continue
        pair = propose_mult_pair(R)
        problems = check_mult_pair(R, pair)
        if problems:
            rejected[V] = problems
        else:
            pairs[V] = pair
    return pairs, rejected


def check_roundtrip(ctx, count=10):
    """Both round trips through the inverse of the comparison, per sample algebra."""
    s = ctx.site
    pairs, rejected = _product_pairs(s)
    if rejected:
        return {
            "verified": False,
            "reason": "no usable product pair",
            "rejected_pairs": {n: p for n, p in sorted(rejected.items())},
        }
    objects = [(n, s.region[n]) for n in s.names[1:]]
    s2 = build_site(s.ambient, objects, s.options, pairs)
    s2 = saturate(s2, 1, ctx.object_cap)
    O, tP = build_O_M(s2, ctx.arity_cap), build_tP_M(s2, ctx.arity_cap)
    Phi = build_Phi_M(s2, tP, O)
    W, Wt = cauchy_ops(O, s2), cauchy_ops(tP, s2)
    rows = []
    for A in sample_algebras(s2, count, ctx.seed, operad=O):
        try:
            F = pullback(Phi, A)
            back = invert_comparison(F, s2, Wt, O)
            again = pullback(Phi, back)
            rows.append({
                "algebra": A.name,
                "inverse_after_pullback": same_algebra(back, A),
                "pullback_after_inverse": same_algebra(again, F),
                "inverse_laws": check_algebra(back).ok,
                "inverse_timeslice": strict_timeslice(back, W),
            })
        except PreconditionError as exc:
            rows.append({"algebra": A.name, "error": str(exc)})
    ok = all(r.get("inverse_after_pullback") and r.get("pullback_after_inverse") for r in rows)
    return {"verified": ok, "algebras": rows}


def check_dcas(ctx, seed=None):
    seed = ctx.seed if seed is None else seed
    s = ctx.site
    O, _, _ = ctx.base
    W = cauchy_ops(O, s)
    A = sample_algebras(s, 3, seed, operad=O)[2]
    fam = decompose(A, s)
    check_family(fam)
    twisted = twisted_family(fam, seed + 1)
    check_family(twisted)
    assembled = assemble(twisted, O)
    broken = aqft_algebra("broken", s, sample_data(s, "truncated/subring", seed, break_timeslice=True), operad=O)
    broken_fam = decompose(broken, s)
    return {
        "levels": nesting_depth(s),
        "as_dc_identity": same_algebra(assemble(fam, O), A),
        "dc_as_iso": not family_iso_check(twisted),
        "twisted_assembly_laws": check_algebra(assembled).ok,
        "timeslice": {
            "algebra": strict_timeslice(A, W),
            "decomposed_members_failing": member_timeslice(fam),
            "twisted_members_failing": member_timeslice(twisted),
            "assembled": strict_timeslice(assembled, W),
            "broken_algebra": strict_timeslice(broken, W),
            "broken_members_failing": member_timeslice(broken_fam),
            "broken_reassembled": strict_timeslice(assemble(broken_fam, O), W),
        },
    }


# ------------------------------------------------------------------ suite

def _outcome(check, expected, observed, detail=None):
    row = {"check": check, "expected": expected, "observed": observed,
           "status": "PASS" if expected == observed else "FAIL"}
    if detail is not None:
        row["detail"] = detail
    return row


def run_scenario(name, doc, arity_cap=3, saturation_depth=2, object_cap=64, seed=0):
    """Run every check whose expectation the scenario lists."""
    ctx = Context(name, doc, arity_cap, saturation_depth, object_cap, seed)
    exp = ctx.expected
    rows = []
    if "site" in exp:
        info = check_site(ctx)
        rows.append(_outcome("site", exp["site"], {k: info[k] for k in exp["site"]}))
    if "integrity" in exp:
        rows.append(_outcome("integrity", exp["integrity"], check_integrity(ctx)["ok"]))
    for which in ("aqft", "tpfa"):
        key = f"clf_{which}"
        if key in exp:
            rows.append(_outcome(key, exp[key], clf_verdicts(check_clf(ctx, which))))
    if "localization" in exp:
        loc = check_localization(ctx)
        rows.append(_outcome("localization", exp["localization"], {"agree": loc["ok"], "thin": loc["thin"]}))
    if "fibers0" in exp:
        rows.append(_outcome("fibers0", exp["fibers0"], scan_fibers0(ctx)["all_single_component"]))
    if "fibers1" in exp:
        got = scan_fibers1(ctx, [e["psi"] for e in exp["fibers1"]])
        rows.append(_outcome("fibers1", exp["fibers1"], [{"psi": g["psi"], "empty": g["empty"]} for g in got]))
    if "algebras" in exp:
        a = check_algebras(ctx)
        rows.append(_outcome("algebras", exp["algebras"], {k: a[k] for k in exp["algebras"]}))
    if "roundtrip" in exp:
        rt = check_roundtrip(ctx)
        detail = {k: v for k, v in rt.items() if k in ("reason", "rejected_pairs")} or None
        rows.append(_outcome("roundtrip", exp["roundtrip"], rt["verified"], detail))
    if "dcas" in exp:
        d = check_dcas(ctx)
        observed = {
            "levels": d["levels"],
            "as_dc_identity": d["as_dc_identity"],
            "dc_as_iso": d["dc_as_iso"],
            "timeslice_preserved": (
                d["timeslice"]["algebra"] and not d["timeslice"]["decomposed_members_failing"]
                and d["timeslice"]["assembled"] and not d["timeslice"]["twisted_members_failing"]
                and not d["timeslice"]["broken_algebra"] and bool(d["timeslice"]["broken_members_failing"])
                and not d["timeslice"]["broken_reassembled"]
            ),
        }
        rows.append(_outcome("dcas", exp["dcas"], {k: observed[k] for k in exp["dcas"]}))
    return {"scenario": name, "metadata": doc.get("metadata", {}), "checks": rows,
            "ok": all(r["status"] == "PASS" for r in rows)}


def _run_one(args):
    ref, kw = args
    name, doc = load_scenario(ref)
    return run_scenario(name, doc, **kw)


def paper_suite(refs=BUNDLED, workers=None, **kw):
    workers = workers or int(os.environ.get("ARTIFACT_WORKERS", "1") or 1)
    jobs = [(r, kw) for r in refs]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(_run_one, jobs))
    else:
        results = [_run_one(j) for j in jobs]
    return {"scenarios": results, "ok": all(r["ok"] for r in results),
            "options": {k: kw[k] for k in sorted(kw)}}

