import random

import numpy as np
import pytest

from artifact.algebra import (
    FamilyCoherenceError,
    LocalAlgebra,
    MultilinearMap,
    OperadAlgebra,
    SAMPLE_PAIRS,
    SiteAlgebraData,
    aqft_algebra,
    as_array,
    assemble,
    check_algebra,
    check_family,
    decompose,
    einstein_causality,
    eye,
    family_iso_check,
    invert,
    invert_comparison,
    member_timeslice,
    mpq,
    nesting_depth,
    pullback,
    random_invertible,
    rank,
    same_algebra,
    sample_algebras,
    sample_data,
    scalars,
    strict_timeslice,
    timeslice_failures,
    truncated_polynomials,
    twisted_family,
    upper_triangular,
)
from artifact.nullgeom import PreconditionError
from artifact.operad import Multifunctor, identity_multifunctor
from artifact.qftoperads import build_O_M, build_Phi_M, build_tP_M, cauchy_ops
from artifact.site import build_site
from universes import HIGH, LEFT, LOW, RIGHT, SQ, STAIR, context, disjoint_site, timelike_site


def vec(*xs):
    return as_array(list(xs))


def test_exact_inverse_and_rank():
    rng = random.Random(3)
    g = random_invertible(rng, 3)
    assert (np.dot(g, invert(g)) == eye(3)).all()
    assert rank(as_array([[1, 2], [2, 4]])) == 1
    with pytest.raises(PreconditionError):
        invert(as_array([[1, 2], [2, 4]]))
    assert all(isinstance(x, type(mpq(1))) for x in invert(g).flat)


def test_multilinear_partial_and_permute_match_evaluation():
    A = upper_triangular()
    m = MultilinearMap(A.mult)
    x, y, z = vec(1, 2, 3), vec(0, -1, 5), vec(2, 0, 1)
    assert (m(x, y) == A.multiply(x, y)).all()
    assert (m.permute((1, 0))(x, y) == A.multiply(y, x)).all()
    three = m.partial(0, m)
    assert (three(x, y, z) == A.multiply(A.multiply(x, y), z)).all()
    assert three == A.ordered_product(3)


def test_local_algebras_are_associative_and_transport_keeps_that():
    rng = random.Random(0)
    for big, small, emb in SAMPLE_PAIRS.values():
        for alg in (big(), small()):
            assert alg.associativity_defects() == []
            t = alg.transport(random_invertible(rng, alg.dim))
            assert t.associativity_defects() == []
    assert not upper_triangular().is_commutative()
    assert truncated_polynomials(3).is_commutative()


def test_broken_local_algebra_is_detected():
    A = upper_triangular()
    bad = LocalAlgebra("bad", A.mult.copy(), vec(1, 0, 0))
    assert ("unit", 2) in bad.associativity_defects()


def test_scalar_algebra_satisfies_the_laws():
    s = timelike_site()
    data = SiteAlgebraData(s, {n: scalars() for n in s.names},
                           {k: eye(1) for k in s.inclusion})
    assert data.defects() == []
    A = aqft_algebra("scalars", s, data)
    rep = check_algebra(A)
    assert rep.ok and rep.checked["composition"] > 0


@pytest.mark.parametrize("make", [timelike_site, disjoint_site])
def test_sample_algebras_satisfy_the_laws(make):
    s = make()
    for A in sample_algebras(s, count=5, seed=1):
        assert check_algebra(A).ok, A.name
        assert einstein_causality(A, s)[1] == []


def test_sample_data_is_consistent():
    ctx = context("staircase-universe")
    for kind in SAMPLE_PAIRS:
        assert sample_data(ctx.site, kind, 7).defects() == []


def test_corrupted_equivariance_is_pinpointed():
    s = timelike_site()
    A = sample_algebras(s, count=2, seed=0)[1]
    assert not A.name.startswith("diagonal")
    O = A.operad
    target = O.ops(("M", "M"), "M")[1]

    def action(op):
        if op == target:
            return A.action(O.ops(("M", "M"), "M")[0])
        return A.action(op)

    B = OperadAlgebra("corrupt", O, A.carrier, action)
    rep = check_algebra(B)
    assert not rep.ok
    assert {f["law"] for f in rep.failures} >= {"equivariance"}
    assert any(f.get("op", {}).get("sources") == ["M", "M"] for f in rep.failures)


def test_non_commutative_local_algebras_break_causality():
    s = disjoint_site()
    data = SiteAlgebraData(s, {n: upper_triangular() for n in s.names},
                           {k: eye(3) for k in s.inclusion})
    A = aqft_algebra("everything big", s, data)
    checked, failures = einstein_causality(A, s)
    assert checked == 1 and failures == [{"target": "M", "pair": ["A", "B"]}]
    # the quotient itself forces equality, so the law check flags the composite
    assert not check_algebra(A).ok


def test_pullback_along_identity_is_the_same_algebra():
    s = timelike_site()
    A = sample_algebras(s, count=2, seed=4)[1]
    assert same_algebra(pullback(identity_multifunctor(A.operad), A), A)


def test_pullback_along_the_comparison_gives_a_tuple_algebra():
    s = timelike_site()
    O, tP = build_O_M(s), build_tP_M(s)
    A = sample_algebras(s, count=1, seed=2, operad=O)[0]
    F = pullback(build_Phi_M(s, tP, O), A)
    assert check_algebra(F).ok
    (lh,) = tP.ops(("L", "H"), "M")
    x, y = vec(*[1] * A.dim("L")), vec(*range(A.dim("H")))
    # the later factor multiplies from the left
    later_first = A.action(O.ops(("H", "L"), "M")[0])
    assert (F.action(lh)(x, y) == later_first(y, x)).all()


def test_pullback_needs_matching_operads():
    s = timelike_site()
    A = sample_algebras(s, count=1)[0]
    other = build_O_M(s)
    with pytest.raises(PreconditionError):
        pullback(identity_multifunctor(other), A)


def test_strict_timeslice_examples():
    s = build_site(SQ, [("S", STAIR), ("L", LOW), ("H", HIGH), ("A", LEFT), ("B", RIGHT)])
    O = build_O_M(s)
    W = cauchy_ops(O, s)
    good = aqft_algebra("good", s, sample_data(s, "triangular/diagonal", 0), operad=O)
    bad = aqft_algebra("bad", s, sample_data(s, "triangular/diagonal", 0, break_timeslice=True), operad=O)
    assert strict_timeslice(good, W)
    assert [(w.sources, w.target) for w in timeslice_failures(bad, W)] == [(("S",), "M")]
    assert check_algebra(bad).ok


def test_breaking_timeslice_needs_a_cauchy_inclusion():
    with pytest.raises(PreconditionError):
        sample_data(timelike_site(), "diagonal/scalars", 0, break_timeslice=True)


def test_inverse_comparison_needs_product_pairs():
    s = timelike_site()
    O, tP = build_O_M(s), build_tP_M(s)
    A = sample_algebras(s, count=1, operad=O)[0]
    F = pullback(build_Phi_M(s, tP, O), A)
    with pytest.raises(PreconditionError) as e:
        invert_comparison(F, s, cauchy_ops(tP, s), O)
    assert "product pair" in str(e.value)


def test_inverse_comparison_needs_timeslice():
    s = build_site(SQ, [("S", STAIR)])
    O, tP = build_O_M(s), build_tP_M(s)
    A = aqft_algebra("bad", s, sample_data(s, "diagonal/scalars", 0, break_timeslice=True), operad=O)
    F = pullback(build_Phi_M(s, tP, O), A)
    with pytest.raises(PreconditionError, match="time-slice"):
        invert_comparison(F, s, cauchy_ops(tP, s), O)


def nested():
    ctx = context("nested-diamonds")
    s = ctx.site
    A = sample_algebras(s, count=2, seed=5)[1]
    return s, A


def test_decompose_then_assemble_round_trips():
    s, A = nested()
    fam = decompose(A, s)
    check_family(fam)
    assert member_timeslice(fam) == []
    assert same_algebra(assemble(fam, A.operad), A)
    assert family_iso_check(fam) == []
    assert nesting_depth(s) == 3


def test_twisted_family_is_coherent_and_isomorphic():
    s, A = nested()
    fam = twisted_family(decompose(A, s), seed=9)
    check_family(fam)
    assert family_iso_check(fam) == []
    assert not same_algebra(assemble(fam, A.operad), A)


def test_corrupted_comparison_is_reported_with_its_square():
    s, A = nested()
    fam = decompose(A, s)
    d = A.dim("W")
    fam.alpha["W", "V"]["W"] = 2 * eye(d)
    with pytest.raises(FamilyCoherenceError) as e:
        check_family(fam)
    assert e.value.square == {"cocycle": ["W", "V", "M"], "at": "W"}


def test_corrupted_identity_comparison_is_reported():
    s, A = nested()
    fam = decompose(A, s)
    fam.alpha["U", "U"]["U"] = 2 * eye(A.dim("U"))
    with pytest.raises(FamilyCoherenceError) as e:
        check_family(fam)
    assert e.value.square == {"identity": "U", "at": "U"}


def test_assembly_needs_every_member():
    s, A = nested()
    fam = decompose(A, s, members=["M", "V"])
    with pytest.raises(PreconditionError):
        assemble(fam, A.operad)


def test_multifunctor_with_wrong_target_is_rejected():
    s = timelike_site()
    A = sample_algebras(s, count=1)[0]
    F = Multifunctor("id", A.operad, build_O_M(s), {c: c for c in s.names}, lambda op: op)
    with pytest.raises(PreconditionError):
        pullback(F, A)
