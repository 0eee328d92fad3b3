"""Brute-force reference implementations used to cross-check the geometry.

Nothing here touches the arrangement-grid machinery of the library.  Sets
are probed pointwise on sample lattices built from coordinate values and
their midpoints, and causal curves are chains of short straight segments
between lattice neighbours.
"""

import random
from fractions import Fraction
from itertools import permutations

from artifact.nullgeom import INF, Region

F = Fraction


def in_open(rects, p):
    return any(r[0] < p[0] < r[1] and r[2] < p[1] < r[3] for r in rects)


def in_closed(rects, p):
    return any(r[0] <= p[0] <= r[1] and r[2] <= p[1] <= r[3] for r in rects)


def _finite_coords(regions, axis):
    out = set()
    for R in regions:
        for r in R:
            for x in (r[2 * axis], r[2 * axis + 1]):
                if x not in (INF, -INF):
                    out.add(F(x))
    return sorted(out)


def refine(xs, levels=1, pad=True):
    xs = sorted(set(xs))
    if pad:
        if xs:
            xs = [xs[0] - 1] + xs + [xs[-1] + 1]
        else:
            xs = [F(0)]
    for _ in range(levels):
        mids = [(a + b) / 2 for a, b in zip(xs, xs[1:])]
        xs = sorted(set(xs) | set(mids))
    return xs


def samples(regions, levels=1):
    us = refine(_finite_coords(regions, 0), levels)
    vs = refine(_finite_coords(regions, 1), levels)
    return [(u, v) for u in us for v in vs]


def leq(p, q):
    return p[0] <= q[0] and p[1] <= q[1]


def future_points(A, regions):
    """Level-1 sample points p admitting a fine sample a in A with a <= p."""
    coarse = samples(regions, 1)
    fine = [a for a in samples(regions, 2) if in_open(A.rects, a)]
    return {p for p in coarse if any(leq(a, p) for a in fine)}


def agrees_on_samples(R, predicate, regions):
    return all(in_open(R.rects, p) == predicate(p) for p in samples(regions, 1))


def future_meets(A, B):
    regions = [A, B]
    fine = [a for a in samples(regions, 2) if in_open(A.rects, a)]
    for b in samples(regions, 1):
        if in_open(B.rects, b) and any(leq(a, b) for a in fine):
            return True
    return False


def convex(U):
    regions = [U]
    fine_in = [p for p in samples(regions, 2) if in_open(U.rects, p)]
    for q in samples(regions, 1):
        if in_open(U.rects, q):
            continue
        below = any(leq(p, q) for p in fine_in)
        above = any(leq(q, r) for r in fine_in)
        if below and above:
            return False
    return True


def disjoint(U1, U2):
    regions = [U1, U2]
    fine = samples(regions, 2)
    a_pts = [p for p in fine if in_open(U1.rects, p)]
    b_pts = [p for p in fine if in_open(U2.rects, p)]
    return not any(leq(a, b) or leq(b, a) for a in a_pts for b in b_pts)


def orderable(tup):
    n = len(tup)
    meets = {(i, j): future_meets(tup[i], tup[j]) for i in range(n) for j in range(n) if i != j}
    valid = []
    for rho in permutations(range(n)):
        if all(not meets[rho[i], rho[j]] for i in range(n) for j in range(i + 1, n)):
            valid.append(rho)
    return valid, meets


def development_members(obstacle_has, M, regions):
    """Lattice points of M lying in D_M(obstacle), by explicit path search.

    Nodes are lattice points.  A step joins a point to its right, upper or
    upper-right lattice neighbour; the step is allowed when both endpoints
    and the segment midpoint avoid the obstacle and the midpoint is in M.
    A curve may start at (or end at) a lattice point outside M.
    """
    us = refine(_finite_coords(regions, 0), 1)
    vs = refine(_finite_coords(regions, 1), 1)
    nu, nv = len(us), len(vs)
    pt = lambda i, j: (us[i], vs[j])
    inM = [[in_open(M.rects, pt(i, j)) for j in range(nv)] for i in range(nu)]
    blocked = [[obstacle_has(pt(i, j)) for j in range(nv)] for i in range(nu)]

    def step_ok(a, b):
        (i1, j1), (i2, j2) = a, b
        mid = ((us[i1] + us[i2]) / 2, (vs[j1] + vs[j2]) / 2)
        if not in_open(M.rects, mid) or obstacle_has(mid):
            return False
        for i, j in (a, b):
            if blocked[i][j]:
                return False
        return True

    moves = ((1, 0), (0, 1), (1, 1))
    reach = [[False] * nv for _ in range(nu)]
    for i in range(nu):
        for j in range(nv):
            if not inM[i][j] or blocked[i][j]:
                continue
            for di, dj in moves:
                a = (i - di, j - dj)
                if a[0] < 0 or a[1] < 0:
                    continue
                if (not inM[a[0]][a[1]] or reach[a[0]][a[1]]) and step_ok(a, (i, j)):
                    reach[i][j] = True
                    break
    coreach = [[False] * nv for _ in range(nu)]
    for i in range(nu - 1, -1, -1):
        for j in range(nv - 1, -1, -1):
            if not inM[i][j] or blocked[i][j]:
                continue
            for di, dj in moves:
                b = (i + di, j + dj)
                if b[0] >= nu or b[1] >= nv:
                    continue
                if (not inM[b[0]][b[1]] or coreach[b[0]][b[1]]) and step_ok((i, j), b):
                    coreach[i][j] = True
                    break
    out = {}
    for i in range(nu):
        for j in range(nv):
            if inM[i][j]:
                out[pt(i, j)] = not (reach[i][j] and coreach[i][j])
    return out


# ------------------------------------------------------------- generators

def random_rect(rng, lo=-1, hi=1, denom=4):
    grid = [F(k, denom) for k in range(lo * denom, hi * denom + 1)]
    while True:
        a, b = sorted(rng.sample(grid, 2))
        c, d = sorted(rng.sample(grid, 2))
        if a < b and c < d:
            return (a, b, c, d)


def random_region(rng, max_rects=6, **kw):
    return Region([random_rect(rng, **kw) for _ in range(rng.randint(1, max_rects))])


def rng_for(seed):
    return random.Random(seed)
