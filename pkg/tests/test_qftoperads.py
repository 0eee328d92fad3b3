from math import factorial

import pytest

from artifact.operad import check_multifunctor, check_operad_axioms, inverse
from artifact.qftoperads import (
    IntegrityError,
    build_O_M,
    build_Phi_M,
    build_tP_M,
    cauchy_ops,
    operad_dump,
    perm_class_operad,
    phi_classes,
)
from universes import context, crossing_site, disjoint_site, timelike_site


@pytest.mark.parametrize("n", [0, 1, 2, 3, 4])
def test_repeated_object_gives_all_permutations(n):
    s = timelike_site()
    O = build_O_M(s, 4)
    assert len(O.ops(("L",) * n, "M")) == factorial(n)


def test_disjoint_pair_collapses_to_one_class():
    O = build_O_M(disjoint_site())
    (op,) = O.ops(("A", "B"), "M")
    assert O.act(op, (1, 0)).payload == (0, 1)


def test_crossing_pair_keeps_both_orders():
    O = build_O_M(crossing_site())
    assert [op.payload for op in O.ops(("U1", "U2"), "M")] == [(0, 1), (1, 0)]


def test_no_operation_without_inclusions():
    O = build_O_M(disjoint_site())
    assert O.ops(("A",), "B") == ()
    assert O.ops(("A", "M"), "A") == ()


def test_mixed_class_count():
    # A, B commute, L commutes with neither: L's position relative to each is free
    from universes import SQ, LEFT, LOW, RIGHT
    from artifact.site import build_site

    s = build_site(SQ, [("A", LEFT), ("B", RIGHT), ("L", LOW)])
    O = build_O_M(s)
    assert len(O.ops(("A", "B", "L"), "M")) == 4


def test_time_ordered_tuples():
    tP = build_tP_M(timelike_site())
    assert len(tP.ops(("L", "H"), "M")) == 1
    assert len(tP.ops(("H", "L"), "M")) == 1
    assert tP.ops(("L", "L"), "M") == ()
    assert len(tP.ops((), "M")) == 1
    tX = build_tP_M(crossing_site())
    assert tX.ops(("U1", "U2"), "M") == ()
    assert len(build_tP_M(disjoint_site()).ops(("A", "B"), "M")) == 1


def test_comparison_follows_the_time_order():
    s = timelike_site()
    O, tP = build_O_M(s), build_tP_M(s)
    Phi = build_Phi_M(s, tP, O)
    up = Phi(tP.ops(("L", "H"), "M")[0])
    down = Phi(tP.ops(("H", "L"), "M")[0])
    # the later factor sits first in the ordered product
    assert inverse(up.payload) == (1, 0)
    assert inverse(down.payload) == (0, 1)
    assert up == O.ops(("L", "H"), "M")[1]


def test_comparison_is_well_defined_for_commuting_factors():
    s = disjoint_site()
    O, tP = build_O_M(s), build_tP_M(s)
    (op,) = tP.ops(("A", "B"), "M")
    assert len(phi_classes(s, O, op)) == 1


def test_exhaustive_comparison_detects_inconsistent_classes():
    s = disjoint_site()
    tP = build_tP_M(s)
    # pretend nothing commutes: both orderings of (A, B) now give different classes
    strict = perm_class_operad("strict", s.names, 3, lambda a, b: s.hom(a, b) is not None, lambda a, b: False)
    Phi = build_Phi_M(s, tP, strict)
    with pytest.raises(IntegrityError):
        Phi(tP.ops(("A", "B"), "M")[0])


def test_unary_comparison_is_bijective_and_keeps_cauchy():
    ctx = context("staircase-universe")
    s = ctx.site
    O, tP, _ = ctx.base
    Phi = build_Phi_M(s, tP, O)
    unary_t = list(tP.operations(1))
    unary_o = list(O.operations(1))
    assert sorted(Phi(op) for op in unary_t) == sorted(unary_o)
    assert {Phi(w) for w in cauchy_ops(tP, s)} == set(cauchy_ops(O, s))
    assert [(w.sources[0], w.target) for w in cauchy_ops(O, s) if w.sources[0] != w.target] == [("S", "M")]


@pytest.mark.parametrize("make", [timelike_site, disjoint_site, crossing_site])
def test_small_operads_satisfy_laws(make):
    s = make()
    O, tP = build_O_M(s), build_tP_M(s)
    assert check_operad_axioms(O).ok
    assert check_operad_axioms(tP).ok
    assert check_multifunctor(build_Phi_M(s, tP, O)).ok


def test_dump_lists_counts():
    s = crossing_site()
    d = operad_dump(build_O_M(s, 2))
    row = next(r for r in d["signatures"] if r["sources"] == ["U1", "U2"] and r["target"] == "M")
    assert row["count"] == 2
    assert d["composition_samples"]
