# ---
# jupyter:
#   jupytext:
#     formats: py:percent
#     text_representation:
#       extension: .py
#       format_name: percent
# ---

# %% [markdown]
# # Regions and sites
#
# Points are written in null coordinates `(u, v)`, so one point causally
# precedes another exactly when both coordinates are smaller or equal.
# A region is a finite union of open rational rectangles.

# %%
from fractions import Fraction as F

from artifact.nullgeom import (
    Region,
    cauchy_development,
    causal_future,
    causally_convex_hull,
    classify_inclusion,
    time_ordering,
)
from artifact.site import build_site, saturate

M = Region([(-1, 1, -1, 1)])
stair = Region([("-1", "-1/4", "1/4", "1"), ("-1/2", "1/2", "-1/2", "1/2"), ("1/4", "1", "-1", "-1/4")])
low = Region([("-1/2", "-1/4", "-1/2", "-1/4")])
high = Region([("1/4", "1/2", "1/4", "1/2")])
print(causal_future(low))
print(causally_convex_hull(low | high))

# %% [markdown]
# A staircase that crosses the whole diamond is Cauchy: every inextendible
# causal curve meets it, so its development is the full diamond.  A small
# diamond is its own development and sits relatively compactly.

# %%
print(cauchy_development(stair, M) == M, classify_inclusion(stair, M))
print(cauchy_development(low, M) == low, classify_inclusion(low, M))

# %% [markdown]
# Time orderings list later regions first.

# %%
print(time_ordering([low, high]))

# %% [markdown]
# A site collects named objects together with their inclusion and
# orthogonality tables.  Saturation adds developments and hulls.

# %%
site = build_site(M, [("S", stair), ("L", low), ("H", high)])
print(site.names)
print({k: v for k, v in site.inclusion.items() if k[0] != k[1]})
sat = saturate(site, 2)
print(len(sat.names), "objects after saturation")
