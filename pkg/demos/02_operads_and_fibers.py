# ---
# jupyter:
#   jupytext:
#     formats: py:percent
#     text_representation:
#       extension: .py
#       format_name: percent
# ---

# %% [markdown]
# # Operads, fractions and fibers
#
# Two bands that cross each other are neither causally disjoint nor
# time-orderable.  The permutation-class operad keeps both orders of their
# product; the time-ordered tuple operad has no binary operation on them.

# %%
from artifact.localization import build_localized_O_M, check_clf_for_operad, localization_multifunctor
from artifact.nullgeom import Region
from artifact.operad import compose_multifunctors
from artifact.operators import HinichSetup, Morphism, analyze_fiber
from artifact.qftoperads import build_O_M, build_Phi_M, build_tP_M, cauchy_ops
from artifact.site import build_site

M = Region([(-2, 2, -2, 2)])
site = build_site(M, [("U1", Region([(0, 1, -1, 1)])), ("U2", Region([(-1, 1, 0, 1)]))])
O, tP, L = build_O_M(site), build_tP_M(site), build_localized_O_M(site)
print("permutation classes:", [op.payload for op in O.ops(("U1", "U2"), "M")])
print("time-ordered tuples:", tP.ops(("U1", "U2"), "M"))

# %% [markdown]
# Inverting the Cauchy inclusions admits a calculus of left fractions for
# the permutation-class operad.  For tuples the square-filling property
# fails on the bundled crossing universe; see `artifact clf-check
# crossing-bands --operad tpfa`.

# %%
print(check_clf_for_operad(O, cauchy_ops(O, site), site).to_json()["ok"])

# %% [markdown]
# Fibers of the composite functor over the crossing binary operations
# are empty: no lift through time-ordered tuples exists.

# %%
F = compose_multifunctors(localization_multifunctor(site, O, L), build_Phi_M(site, tP, O))
setup = HinichSetup(site, tP, L, F, cauchy_ops(tP, site))
for op in L.ops(("U1", "U2"), "M"):
    psi = Morphism(("U1", "U2"), ("M",), (1, 1), (op,))
    print(op.payload, analyze_fiber(setup.fiber1(psi)))
