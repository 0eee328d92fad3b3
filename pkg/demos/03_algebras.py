# ---
# jupyter:
#   jupytext:
#     formats: py:percent
#     text_representation:
#       extension: .py
#       format_name: percent
# ---

# %% [markdown]
# # Algebras over the operads
#
# Sample algebras assign a finite-dimensional algebra to each object and
# act by ordered products.  All arithmetic is exact.

# %%
from artifact.algebra import (
    assemble,
    check_algebra,
    decompose,
    einstein_causality,
    family_iso_check,
    same_algebra,
    sample_algebras,
    strict_timeslice,
    twisted_family,
)
from artifact.pipeline import Context, load_scenario
from artifact.qftoperads import cauchy_ops

ctx = Context(*load_scenario("nested-diamonds"))
site = ctx.site
O, _, _ = ctx.base
A = sample_algebras(site, count=3, seed=0, operad=O)[2]
print(A.name, A.carrier)
print("laws:", check_algebra(A).ok)
print("time-slice:", strict_timeslice(A, cauchy_ops(O, site)))

# %% [markdown]
# The nested diamonds have no causally disjoint objects.  The staircase
# universe has one disjoint pair, whose images commute.

# %%
stairs = Context(*load_scenario("staircase-universe")).site
B = sample_algebras(stairs, count=3, seed=0)[2]
print("causality (checked, failures):", einstein_causality(B, stairs))

# %% [markdown]
# Restricting to each object's sub-site and gluing back is the identity;
# after twisting every member by a basis change, the glued algebra is
# isomorphic to the original through the comparison components.

# %%
fam = decompose(A, site)
print(same_algebra(assemble(fam, O), A))
print(family_iso_check(twisted_family(fam, seed=1)))

# %% [markdown]
# The inverse of the comparison needs a time-orderable pair of Cauchy
# sub-regions for every object.  Rectangle unions never provide one, and
# the round-trip check says so.

# %%
from artifact.pipeline import check_roundtrip

print(check_roundtrip(ctx)["rejected_pairs"]["M"])
