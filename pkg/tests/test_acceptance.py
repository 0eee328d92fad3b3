"""Acceptance criteria, one printed PASS/FAIL line each.

Run under pytest, or directly with ``python tests/test_acceptance.py``.
Every comparison is exact.
"""

import json
import os
import random
import subprocess
import sys
import tempfile
import time

sys.path.insert(0, os.path.dirname(__file__))

import oracles
from artifact.algebra import invert_comparison, pullback, sample_algebras
from artifact.localization import (
    REFUTED,
    check_clf_for_operad,
    zigzag_candidates,
    zigzag_condition2,
    zigzag_witness,
)
from artifact.nullgeom import (
    ClosedRegion,
    PreconditionError,
    Region,
    are_causally_disjoint,
    causal_future,
    cauchy_development,
    causally_convex_hull,
    development_cells_of_closed,
    is_causally_convex,
    time_ordering,
)
from artifact.pipeline import (
    BUNDLED,
    Context,
    check_algebras,
    check_dcas,
    check_integrity,
    check_localization,
    check_roundtrip,
    load_scenario,
    scan_fibers0,
    scan_fibers1,
)
from artifact.qftoperads import build_Phi_M, cauchy_ops

_contexts = {}


def ctx(name):
    if name not in _contexts:
        _contexts[name] = Context(*load_scenario(name))
    return _contexts[name]


def report(number, title, ok, detail, started):
    line = f"C{number} {'PASS' if ok else 'FAIL'} {title}: {detail} ({time.time() - started:.1f} s)"
    sys.__stdout__.write(line + "\n")
    sys.__stdout__.flush()
    return line


# ------------------------------------------------------------ criteria

def criterion_1():
    """Geometry operations agree with the brute-force oracles."""
    rng = random.Random(20240601)
    instances = mismatches = 0
    first = None
    while instances < 500:
        A = oracles.random_region(rng, 6)
        B = oracles.random_region(rng, 6)
        C = Region([oracles.random_rect(rng)])
        instances += 1
        problems = []
        fut = causal_future(A)
        pts = oracles.future_points(A, [A])
        if any(fut.contains(p) != (p in pts) for p in oracles.samples([A], 1)):
            problems.append("causal_future")
        if is_causally_convex(A) != oracles.convex(A):
            problems.append("is_causally_convex")
        if are_causally_disjoint(A, B) != oracles.disjoint(A, B):
            problems.append("are_causally_disjoint")
        valid, _ = oracles.orderable([A, B, C])
        rho = time_ordering([A, B, C])
        if (rho is None) != (not valid) or (rho is not None and rho not in valid):
            problems.append("time_ordering")
        M = causally_convex_hull(A | B)
        U = causally_convex_hull(A)
        D = cauchy_development(U, M)
        ref = oracles.development_members(U.contains, M, [U, M])
        if any(D.contains(p) != inside for p, inside in ref.items()):
            problems.append("cauchy_development")
        if problems:
            mismatches += 1
            first = first or {"A": repr(A), "B": repr(B), "failed": problems}
    detail = f"{instances} instances, {mismatches} mismatches"
    if first:
        detail += f", first {first}"
    return mismatches == 0, detail


def criterion_2():
    """Witness found iff every input sits admissibly in the development."""
    families = discrepancies = 0
    counts = {True: 0, False: 0}
    first = None
    for name in BUNDLED:
        s = ctx(name).saturated
        rng = random.Random(name)
        M = s.ambient
        regions = [s.region[n] for n in s.names]
        for _ in range(60):
            Us = [rng.choice(regions) for _ in range(rng.randint(1, 3))]
            V = rng.choice(regions)
            cond2 = zigzag_condition2(M, Us, V)
            witness = zigzag_witness(M, Us, V, zigzag_candidates(M, Us, V, regions))
            families += 1
            counts[cond2] += 1
            if (witness is not None) != cond2:
                discrepancies += 1
                first = first or {"site": name, "U": [s.name_of(U) for U in Us], "V": s.name_of(V)}
    ok = families >= 100 and discrepancies == 0 and counts[True] and counts[False]
    detail = (f"{families} families ({counts[True]} inside, {counts[False]} outside the development), "
              f"{discrepancies} discrepancies")
    if first:
        detail += f", first {first}"
    return bool(ok), detail


def criterion_3():
    """Developments of closed rectangle unions are closed and match the oracle."""
    rng = random.Random(77)
    M = Region([(-2, 2, -2, 2)])
    total = not_closed = wrong = 0
    while total < 60:
        K = ClosedRegion([oracles.random_rect(rng) for _ in range(rng.randint(1, 4))])
        total += 1
        cells = development_cells_of_closed(K, M)
        if not cells.is_closed():
            not_closed += 1
        ref = oracles.development_members(K.contains, M, [M, K])
        if any(cells.contains(p) != inside for p, inside in ref.items()):
            wrong += 1
    return not_closed == 0 and wrong == 0, f"{total} compacta, {not_closed} not closed, {wrong} oracle mismatches"


def criterion_4():
    """Fractions for the permutation-class operad; refuted square filling for tuples."""
    st = ctx("staircase-universe")
    s = st.saturated
    O, _, _ = st.sat
    aqft = check_clf_for_operad(O, cauchy_ops(O, s), s)
    cb = ctx("crossing-bands")
    s2 = cb.saturated
    _, tP, _ = cb.sat
    tp = check_clf_for_operad(tP, cauchy_ops(tP, s2), s2)
    refuted = tp.verdict("3") == REFUTED
    verified = False
    if refuted:
        ce = tp.properties["3"]["counterexample"]
        enlarged = tuple(x["target"] for x in ce["w"])
        # no operation out of the enlarged tuple exists, whatever the target
        verified = all(not tP.ops(enlarged, N) for N in s2.names) and time_ordering(
            [s2.region[n] for n in enlarged]) is None
    verdicts = {k: v["verdict"] for k, v in aqft.properties.items()}
    ok = aqft.ok and refuted and verified
    return ok, f"staircase aqft {verdicts}; crossing tuples property 3 refuted={refuted}, counterexample verified={verified}"


def criterion_5():
    """Explicit localized unary homs equal the fraction category on every saturated universe."""
    rows = []
    ok = True
    for name in BUNDLED:
        got = check_localization(ctx(name))
        ok &= got["ok"] and got["thin"]
        rows.append(f"{name}: {got['pairs']} pairs, {len(got['mismatches'])} mismatches, thin={got['thin']}")
    return ok, "; ".join(rows)


def criterion_6():
    """An empty binary fiber on the crossing bands; connected object fibers everywhere."""
    queries = [{"sources": ["U1", "U2"], "target": "M", "payload": p} for p in ([0, 1], [1, 0])]
    fib1 = scan_fibers1(ctx("crossing-bands"), queries)
    empty = [f for f in fib1 if f["empty"]]
    rows = []
    all_single = True
    for name in BUNDLED:
        got = scan_fibers0(ctx(name))
        all_single &= got["all_single_component"]
        rows.append(f"{name} {got['fibers']}")
    ok = bool(empty) and all_single
    return ok, (f"crossing binary fibers empty: {len(empty)}/{len(fib1)}; "
                f"object fibers single-component={all_single} ({', '.join(rows)})")


def criterion_7():
    """Round trips through the inverse comparison, plus causality of the samples."""
    ok = True
    rows = []
    for name in BUNDLED:
        c = ctx(name)
        alg = check_algebras(c)
        causal = alg["count"] >= 10 and alg["all_laws"] and alg["all_timeslice"] and alg["einstein_failures"] == 0
        rt = check_roundtrip(c)
        # attempt the inversion directly as well, so the failure mode is the library's own
        s = c.site
        O, tP, _ = c.base
        F = pullback(build_Phi_M(s, tP, O), sample_algebras(s, 1, c.seed, operad=O)[0])
        try:
            invert_comparison(F, s, cauchy_ops(tP, s), O)
            error = None
        except PreconditionError as exc:
            error = str(exc)
        ok &= causal and rt["verified"]
        rows.append(f"{name}: {alg['count']} algebras causal={causal}, round trips verified={rt['verified']}"
                    + (f" ({rt.get('reason')}; inversion says: {error})" if not rt["verified"] else ""))
    return ok, "; ".join(rows)


def criterion_8():
    """Assembly and decomposition are inverse on nested configurations of depth at least 3."""
    ok = True
    rows = []
    for name in ("nested-diamonds", "crossing-bands"):
        d = check_dcas(ctx(name))
        ts = d["timeslice"]
        preserved = (ts["algebra"] and not ts["decomposed_members_failing"] and ts["assembled"]
                     and not ts["twisted_members_failing"])
        reflected = (not ts["broken_algebra"] and bool(ts["broken_members_failing"])
                     and not ts["broken_reassembled"])
        good = d["levels"] >= 3 and d["as_dc_identity"] and d["dc_as_iso"] and d["twisted_assembly_laws"]
        ok &= good and preserved and reflected
        rows.append(f"{name}: levels {d['levels']}, as.dc=id {d['as_dc_identity']}, dc.as iso {d['dc_as_iso']}, "
                    f"time-slice preserved {preserved}, failure carried both ways {reflected}")
    return ok, "; ".join(rows)


def criterion_9():
    """Operad axioms and multifunctor laws on every bundled universe."""
    ok = True
    rows = []
    for name in BUNDLED:
        got = check_integrity(ctx(name))
        ok &= got["ok"]
        failing = [r["name"] for r in got["reports"] if not r["ok"]]
        rows.append(f"{name} ok={got['ok']}" + (f" failing {failing}" if failing else ""))
    return ok, "; ".join(rows)


def criterion_10():
    """Two suite runs with the same seed write byte-identical reports."""
    outs = []
    with tempfile.TemporaryDirectory() as tmp:
        for k in range(2):
            path = os.path.join(tmp, f"run{k}.json")
            proc = subprocess.run([sys.executable, "-m", "artifact", "paper-suite", "--seed", "0", "--out", path],
                                  capture_output=True, text=True)
            if proc.returncode not in (0, 1):
                return False, f"run {k} exited {proc.returncode}: {proc.stderr.strip()[-300:]}"
            with open(path, "rb") as fh:
                outs.append(fh.read())
    same = outs[0] == outs[1]
    statuses = [row["status"] for s in json.loads(outs[0])["scenarios"] for row in s["checks"]]
    return same, f"{len(outs[0])} bytes per report, identical={same}, {len(statuses)} checks per run"


TITLES = {
    1: "geometry oracle equivalence",
    2: "zig-zag witnesses",
    3: "closed developments",
    4: "calculus of left fractions",
    5: "localized operad model",
    6: "localization fibers",
    7: "inverse comparison round trips",
    8: "decomposition and assembly",
    9: "operad and multifunctor integrity",
    10: "determinism",
}

CRITERIA = {
    1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5,
    6: criterion_6, 7: criterion_7, 8: criterion_8, 9: criterion_9, 10: criterion_10,
}


def _check(number):
    started = time.time()
    ok, detail = CRITERIA[number]()
    line = report(number, TITLES[number], ok, detail, started)
    assert ok, line


def test_c01_geometry_oracles():
    _check(1)


def test_c02_zigzag():
    _check(2)


def test_c03_closed_developments():
    _check(3)


def test_c04_left_fractions():
    _check(4)


def test_c05_localized_model():
    _check(5)


def test_c06_fibers():
    _check(6)


def test_c07_round_trips():
    _check(7)


def test_c08_decomposition_assembly():
    _check(8)


def test_c09_integrity():
    _check(9)


def test_c10_determinism():
    _check(10)


if __name__ == "__main__":
    failed = 0
    for n in CRITERIA:
        started = time.time()
        ok, detail = CRITERIA[n]()
        report(n, TITLES[n], ok, detail, started)
        failed += not ok
    sys.exit(1 if failed else 0)
