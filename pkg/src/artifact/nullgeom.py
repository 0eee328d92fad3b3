"""Exact causal geometry of 1+1 Minkowski space in null coordinates.

A point is a pair ``(u, v)`` with ``u = t - x`` and ``v = t + x``.  Causal
precedence is the product order.  A :class:`Region` is a finite union of open
rectangles with rational endpoints (``±inf`` is allowed for ambient regions).

Every predicate is decided on the *arrangement grid* spanned by the rectangle
endpoints.  Along each axis the grid alternates between coordinate points
(even positions) and the open intervals between them (odd positions), so a
pair of positions names a cell, an open edge or a vertex.  Those pieces are
exactly the atoms of the Boolean algebra generated by the rectangles, which
makes all set operations exact.
"""

import bisect
import heapq
import math
from collections import namedtuple
from fractions import Fraction
from functools import lru_cache
from itertools import permutations

INF = math.inf


class GeometryError(ValueError):
    """Invalid geometric input.  ``pointer`` is a JSON pointer when known."""

    def __init__(self, message, pointer=""):
        super().__init__(message)
        self.pointer = pointer


class PreconditionError(GeometryError):
    pass


# ---------------------------------------------------------------- rationals

def rational(x):
    """Parse an exact rational, or ``±inf``.  Floats other than ``±inf`` are refused."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not coordinates")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        if math.isinf(x):
            return x
        raise TypeError(f"inexact float {x!r}; write it as a string such as '1/3'")
    if isinstance(x, str):
        s = x.strip().lower()
        if s in ("inf", "+inf", "infinity", "+infinity"):
            return INF
        if s in ("-inf", "-infinity"):
            return -INF
        return Fraction(s)
    raise TypeError(f"cannot read {x!r} as a rational")


def format_rational(x):
    if x == INF:
        return "inf"
    if x == -INF:
        return "-inf"
    return str(x)


def _finite(x):
    return x != INF and x != -INF


# ------------------------------------------------------------ rectangles

class Rect(namedtuple("Rect", "u_lo u_hi v_lo v_hi")):
    """Open box ``(u_lo, u_hi) x (v_lo, v_hi)``."""

    __slots__ = ()

    def contains(self, p):
        return self.u_lo < p[0] < self.u_hi and self.v_lo < p[1] < self.v_hi

    @property
    def bounded(self):
        return all(_finite(x) for x in self)

    def to_json(self):
        return [format_rational(x) for x in self]


class ClosedRect(namedtuple("ClosedRect", "u_lo u_hi v_lo v_hi")):
    """Closed box ``[u_lo, u_hi] x [v_lo, v_hi]``; degenerate boxes are allowed."""

    __slots__ = ()

    def contains(self, p):
        return self.u_lo <= p[0] <= self.u_hi and self.v_lo <= p[1] <= self.v_hi

    def to_json(self):
        return [format_rational(x) for x in self]


def make_rect(raw, pointer=""):
    if isinstance(raw, Rect):
        vals = tuple(raw)
    else:
        try:
            vals = tuple(rational(x) for x in raw)
        except (TypeError, ValueError, ZeroDivisionError) as exc:
            raise GeometryError(f"bad rectangle {raw!r}: {exc}", pointer) from None
    if len(vals) != 4:
        raise GeometryError(f"rectangle needs 4 endpoints, got {len(vals)}", pointer)
    r = Rect(*vals)
    if not (r.u_lo < r.u_hi and r.v_lo < r.v_hi):
        raise GeometryError(
            "degenerate rectangle ({}, {}) x ({}, {})".format(*map(format_rational, r)), pointer
        )
    return r


def make_closed_rect(raw, pointer=""):
    try:
        vals = tuple(rational(x) for x in raw)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise GeometryError(f"bad rectangle {raw!r}: {exc}", pointer) from None
    if len(vals) != 4 or not all(_finite(x) for x in vals):
        raise GeometryError("closed rectangles need 4 finite endpoints", pointer)
    r = ClosedRect(*vals)
    if not (r.u_lo <= r.u_hi and r.v_lo <= r.v_hi):
        raise GeometryError(f"inverted closed rectangle {raw!r}", pointer)
    return r


# ------------------------------------------------------------------ grid

def _run_mask(lo, hi):
    """Bits lo..hi inclusive."""
    return ((1 << (hi - lo + 1)) - 1) << lo


def _runs(mask):
    """Maximal runs of set bits as (lo, hi) pairs."""
    out = []
    q = 0
    while mask:
        tz = (mask & -mask).bit_length() - 1
        mask >>= tz
        q += tz
        ones = (~mask & (mask + 1)).bit_length() - 1
        out.append((q, q + ones - 1))
        mask >>= ones
        q += ones
    return out


class Grid:
    """Arrangement grid for sorted coordinate lists, padded with ``±inf``."""

    def __init__(self, us, vs):
        self.us = [-INF] + sorted({x for x in us if _finite(x)}) + [INF]
        self.vs = [-INF] + sorted({x for x in vs if _finite(x)}) + [INF]
        self.nu = 2 * len(self.us) - 1
        self.nv = 2 * len(self.vs) - 1
        self._ui = {x: 2 * i for i, x in enumerate(self.us)}
        self._vi = {x: 2 * i for i, x in enumerate(self.vs)}
        self.full = (1 << self.nv) - 1
        self.even = sum(1 << q for q in range(0, self.nv, 2))
        self.odd = self.full ^ self.even

    @classmethod
    def spanning(cls, *rect_lists):
        us, vs = set(), set()
        for rects in rect_lists:
            for r in rects:
                us.update((r[0], r[1]))
                vs.update((r[2], r[3]))
        return cls(us, vs)

    def locate(self, axis, x):
        """Grid position of coordinate ``x`` along axis 0 (u) or 1 (v)."""
        coords = self.us if axis == 0 else self.vs
        i = bisect.bisect_left(coords, x)
        if i < len(coords) and coords[i] == x:
            return 2 * i
        return 2 * i - 1

    def raster(self, rects, closed=False):
        cols = [0] * self.nu
        for r in rects:
            if closed:
                p1, p2 = self._ui[r[0]], self._ui[r[1]]
                q1, q2 = self._vi[r[2]], self._vi[r[3]]
            else:
                p1, p2 = self._ui[r[0]] + 1, self._ui[r[1]] - 1
                q1, q2 = self._vi[r[2]] + 1, self._vi[r[3]] - 1
            m = _run_mask(q1, q2)
            for p in range(p1, p2 + 1):
                cols[p] |= m
        return CellSet(self, cols)


class CellSet:
    """An exact point set given by the grid pieces it contains."""

    __slots__ = ("grid", "cols")

    def __init__(self, grid, cols):
        self.grid = grid
        self.cols = cols

    def __and__(self, other):
        return CellSet(self.grid, [a & b for a, b in zip(self.cols, other.cols)])

    def __or__(self, other):
        return CellSet(self.grid, [a | b for a, b in zip(self.cols, other.cols)])

    def __sub__(self, other):
        return CellSet(self.grid, [a & ~b for a, b in zip(self.cols, other.cols)])

    def __eq__(self, other):
        return self.cols == other.cols

    def __le__(self, other):
        return all(a & ~b == 0 for a, b in zip(self.cols, other.cols))

    def is_empty(self):
        return not any(self.cols)

    def has(self, p, q):
        return bool(self.cols[p] >> q & 1)

    def _spread(self, m, parity):
        return (m | ((m & parity) << 1) | ((m & parity) >> 1)) & self.grid.full

    def is_open(self):
        g = self.grid
        c = self.cols
        for p, m in enumerate(c):
            if not m:
                continue
            s = self._spread(m, g.even)
            if s & ~m:
                return False
            if p % 2 == 0 and (p == 0 or p == g.nu - 1 or s & ~c[p - 1] or s & ~c[p + 1]):
                return False
        return True

    def is_closed(self):
        g = self.grid
        c = self.cols
        for p, m in enumerate(c):
            if not m:
                continue
            s = self._spread(m, g.odd)
            if s & ~m:
                return False
            if p % 2 == 1 and (s & ~c[p - 1] or s & ~c[p + 1]):
                return False
        return True

    def boxes(self):
        """All maximal boxes of included pieces, as position quadruples."""
        c = self.cols
        n = len(c)
        out = []
        for p1 in range(n):
            acc = c[p1]
            p2 = p1
            while acc:
                for q1, q2 in _runs(acc):
                    run = _run_mask(q1, q2)
                    if p1 > 0 and c[p1 - 1] & run == run:
                        continue
                    if p2 < n - 1 and c[p2 + 1] & run == run:
                        continue
                    out.append((p1, p2, q1, q2))
                p2 += 1
                if p2 >= n:
                    break
                acc &= c[p2]
        return out

    def contains(self, point):
        p = self.grid.locate(0, point[0])
        q = self.grid.locate(1, point[1])
        return self.has(p, q)

    def to_region(self):
        if not self.is_open():
            raise GeometryError("piece set is not open")
        us, vs = self.grid.us, self.grid.vs
        rects = [
            Rect(us[(p1 - 1) // 2], us[(p2 + 1) // 2], vs[(q1 - 1) // 2], vs[(q2 + 1) // 2])
            for p1, p2, q1, q2 in self.boxes()
        ]
        return Region._canonical(sorted(rects))

    def to_closed_region(self):
        if not self.is_closed():
            raise GeometryError("piece set is not closed")
        us, vs = self.grid.us, self.grid.vs
        rects = [
            ClosedRect(us[p1 // 2], us[p2 // 2], vs[q1 // 2], vs[q2 // 2])
            for p1, p2, q1, q2 in self.boxes()
        ]
        return ClosedRegion._canonical(sorted(rects))


# --------------------------------------------------------------- regions

class Region:
    """Finite union of open rectangles, kept in canonical form.

    The canonical form lists every maximal open rectangle contained in the
    set, sorted.  It depends only on the point set, so two regions are equal
    exactly when their forms coincide.
    """

    __slots__ = ("rects", "_hash")

    def __init__(self, rects=(), pointer=""):
        rs = [make_rect(r, f"{pointer}/{i}") for i, r in enumerate(rects)]
        if rs:
            canon = Grid.spanning(rs).raster(rs).to_region().rects
        else:
            canon = ()
        self.rects = canon
        self._hash = hash(canon)

    @classmethod
    def _canonical(cls, rects):
        self = object.__new__(cls)
        self.rects = tuple(rects)
        self._hash = hash(self.rects)
        return self

    def __eq__(self, other):
        return isinstance(other, Region) and self.rects == other.rects

    def __hash__(self):
        return self._hash

    def __iter__(self):
        return iter(self.rects)

    def __len__(self):
        return len(self.rects)

    def __bool__(self):
        return bool(self.rects)

    def __repr__(self):
        inner = ", ".join(
            "({},{})x({},{})".format(*map(format_rational, r)) for r in self.rects
        )
        return f"Region[{inner}]"

    def is_empty(self):
        return not self.rects

    @property
    def bounded(self):
        return all(r.bounded for r in self.rects)

    def contains(self, point):
        return any(r.contains(point) for r in self.rects)

    def _pair(self, other):
        g = Grid.spanning(self.rects, other.rects)
        return g.raster(self.rects), g.raster(other.rects)

    def __or__(self, other):
        a, b = self._pair(other)
        return (a | b).to_region()

    def __and__(self, other):
        if not self.intersects(other):
            return EMPTY
        a, b = self._pair(other)
        return (a & b).to_region()

    def __le__(self, other):
        if not self.rects:
            return True
        a, b = self._pair(other)
        return a <= b

    def intersects(self, other):
        return any(
            max(r.u_lo, s.u_lo) < min(r.u_hi, s.u_hi) and max(r.v_lo, s.v_lo) < min(r.v_hi, s.v_hi)
            for r in self.rects
            for s in other.rects
        )

    def to_json(self):
        return {"rects": [r.to_json() for r in self.rects]}

    @classmethod
    def from_json(cls, obj, pointer=""):
        if not isinstance(obj, dict) or "rects" not in obj:
            raise GeometryError("region must be an object with a 'rects' list", pointer)
        rects = obj["rects"]
        if not isinstance(rects, list):
            raise GeometryError("'rects' must be a list", pointer + "/rects")
        return cls(rects, pointer + "/rects")


EMPTY = Region._canonical(())


class ClosedRegion:
    """Finite union of closed rectangles in canonical (maximal boxes) form."""

    __slots__ = ("rects", "_hash")

    def __init__(self, rects=(), pointer=""):
        rs = [make_closed_rect(r, f"{pointer}/{i}") for i, r in enumerate(rects)]
        if rs:
            canon = Grid.spanning(rs).raster(rs, closed=True).to_closed_region().rects
        else:
            canon = ()
        self.rects = canon
        self._hash = hash(canon)

    @classmethod
    def _canonical(cls, rects):
        self = object.__new__(cls)
        self.rects = tuple(rects)
        self._hash = hash(self.rects)
        return self

    def __eq__(self, other):
        return isinstance(other, ClosedRegion) and self.rects == other.rects

    def __hash__(self):
        return self._hash

    def __iter__(self):
        return iter(self.rects)

    def __bool__(self):
        return bool(self.rects)

    def __repr__(self):
        inner = ", ".join("[{},{}]x[{},{}]".format(*map(format_rational, r)) for r in self.rects)
        return f"ClosedRegion[{inner}]"

    @property
    def bounded(self):
        return True

    def contains(self, point):
        return any(r.contains(point) for r in self.rects)

    def within(self, region):
        """Is this closed set contained in the open ``region``?"""
        if not self.rects:
            return True
        g = Grid.spanning(self.rects, region.rects)
        return g.raster(self.rects, closed=True) <= g.raster(region.rects)

    def to_json(self):
        return {"rects": [r.to_json() for r in self.rects]}


Difference = namedtuple("Difference", "region boundary_dropped")


def difference(A, B):
    """Interior of ``A \\ B``.

    The difference of two open sets need not be open, so the open part
    ``A \\ closure(B)`` is returned together with a flag telling whether
    boundary points of ``B`` inside ``A`` were discarded.
    """
    g = Grid.spanning(A.rects, B.rects)
    a = g.raster(A.rects)
    interior = a - g.raster(B.rects, closed=True)
    dropped = not (a - g.raster(B.rects)) == interior
    return Difference(interior.to_region(), dropped)


def normalize(raw):
    """Canonical :class:`Region` for a list of raw rectangles."""
    return Region(raw)


def closure(U):
    """Closure of a bounded region as a closed rectangle union."""
    if not U.bounded:
        raise GeometryError("closure is only represented for bounded regions")
    return ClosedRegion([tuple(r) for r in U.rects])


def is_closed(cells):
    return cells.is_closed()


# -------------------------------------------------------- causal structure

@lru_cache(maxsize=None)
def causal_future(A):
    """J+(A): the union of the open quadrants above the lower-left corners."""
    return Region([(r.u_lo, INF, r.v_lo, INF) for r in A.rects])


@lru_cache(maxsize=None)
def causal_past(A):
    return Region([(-INF, r.u_hi, -INF, r.v_hi) for r in A.rects])


def future_meets(a, b):
    """Does J+(a) meet b?"""
    return any(rb.u_hi > ra.u_lo and rb.v_hi > ra.v_lo for ra in a.rects for rb in b.rects)


@lru_cache(maxsize=None)
def causally_convex_hull(U):
    if not U:
        return EMPTY
    h = causal_future(U) & causal_past(U)
    assert U <= h, "hull must contain its input"
    assert causal_future(h) & causal_past(h) == h, "hull must be order-convex"
    return h


@lru_cache(maxsize=None)
def is_causally_convex(U):
    if not U:
        return True
    return causal_future(U) & causal_past(U) == U


def are_causally_disjoint(U1, U2):
    return not future_meets(U1, U2) and not future_meets(U2, U1)


def _check_inside(tup, ambient):
    if ambient is not None:
        for i, U in enumerate(tup):
            if not U <= ambient:
                raise PreconditionError(f"tuple entry {i} is not inside the ambient region")


def is_time_ordered(tup):
    return all(not future_meets(tup[i], tup[j]) for i in range(len(tup)) for j in range(i + 1, len(tup)))


def time_ordering(tup, ambient=None):
    """A permutation ``rho`` such that ``(tup[rho[0]], tup[rho[1]], ...)`` is time-ordered.

    Entry ``i`` precedes entry ``j`` in a time-ordered tuple when the future of
    ``U_i`` avoids ``U_j``; later regions come first.  Returns ``None`` when no
    ordering exists.  Ties are broken towards the smallest index.
    """
    tup = tuple(tup)
    _check_inside(tup, ambient)
    n = len(tup)
    succ = [[] for _ in range(n)]
    indeg = [0] * n
    for a in range(n):
        for b in range(n):
            if a != b and future_meets(tup[a], tup[b]):
                succ[b].append(a)  # b must come before a
                indeg[a] += 1
    heap = [i for i in range(n) if indeg[i] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        i = heapq.heappop(heap)
        order.append(i)
        for j in succ[i]:
            indeg[j] -= 1
            if indeg[j] == 0:
                heapq.heappush(heap, j)
    if len(order) < n:
        return None
    rho = tuple(order)
    assert is_time_ordered([tup[i] for i in rho])
    return rho


def time_orderings(tup):
    """Every time-ordering permutation of ``tup``."""
    tup = tuple(tup)
    return [rho for rho in permutations(range(len(tup))) if is_time_ordered([tup[i] for i in rho])]


# ------------------------------------------------------ Cauchy development

def _development_cells(grid, inside, obstacle):
    """Pieces of ``inside`` crossed by no inextendible causal curve avoiding ``obstacle``.

    Curves are monotone in both coordinates.  Forward reachability is swept
    in increasing grid order from pieces outside ``inside``; diagonal steps
    pass between a cell and a corner vertex.
    """
    nu, nv = grid.nu, grid.nv
    M = [[bool(inside.cols[p] >> q & 1) for q in range(nv)] for p in range(nu)]
    K = [[bool(obstacle.cols[p] >> q & 1) for q in range(nv)] for p in range(nu)]
    free = [[M[p][q] and not K[p][q] for q in range(nv)] for p in range(nu)]

    fwd = [[False] * nv for _ in range(nu)]
    for p in range(nu):
        for q in range(nv):
            if not free[p][q]:
                continue
            ok = False
            for a, b in ((p - 1, q), (p, q - 1), (p - 1, q - 1)):
                if a < 0 or b < 0 or (a != p and b != q and p % 2 != q % 2):
                    continue
                if not M[a][b] or fwd[a][b]:
                    ok = True
                    break
            fwd[p][q] = ok

    bwd = [[False] * nv for _ in range(nu)]
    for p in range(nu - 1, -1, -1):
        for q in range(nv - 1, -1, -1):
            if not free[p][q]:
                continue
            ok = False
            for a, b in ((p + 1, q), (p, q + 1), (p + 1, q + 1)):
                if a >= nu or b >= nv or (a != p and b != q and p % 2 != q % 2):
                    continue
                if not M[a][b] or bwd[a][b]:
                    ok = True
                    break
            bwd[p][q] = ok

    cols = []
    for p in range(nu):
        m = 0
        for q in range(nv):
            if M[p][q] and not (fwd[p][q] and bwd[p][q]):
                m |= 1 << q
        cols.append(m)
    return CellSet(grid, cols)


@lru_cache(maxsize=None)
def cauchy_development(U, M):
    """D_M(U): points of M all of whose inextendible causal curves in M meet U."""
    if not U <= M:
        raise PreconditionError("development needs U inside M")
    if not is_causally_convex(U) or not is_causally_convex(M):
        raise PreconditionError("development needs causally convex inputs")
    g = Grid.spanning(U.rects, M.rects)
    D = _development_cells(g, g.raster(M.rects), g.raster(U.rects))
    return D.to_region()


def development_cells_of_closed(K, M):
    """Exact piece set of D_M(K) for a closed rectangle union ``K`` inside ``M``."""
    if not K.within(M):
        raise PreconditionError("closed set must lie inside M")
    g = Grid.spanning(K.rects, M.rects)
    return _development_cells(g, g.raster(M.rects), g.raster(K.rects, closed=True))


def cauchy_development_closed(K, M):
    return development_cells_of_closed(K, M).to_closed_region()


# ---------------------------------------------------------- classification

class InclusionClass(namedtuple("InclusionClass", "cauchy relatively_compact")):
    __slots__ = ()

    @property
    def admissible(self):
        return self.cauchy or self.relatively_compact

    def to_json(self):
        return {"cauchy": self.cauchy, "relatively_compact": self.relatively_compact}


def is_relatively_compact(U, V):
    return U.bounded and closure(U).within(V)


@lru_cache(maxsize=None)
def classify_inclusion(U, V):
    if not U <= V:
        raise PreconditionError("classification needs U inside V")
    cauchy = cauchy_development(U, V) == V
    return InclusionClass(cauchy, is_relatively_compact(U, V))


def compose_classes(inner, outer):
    """Flags guaranteed for a composite inclusion by the flags of its legs.

    Two Cauchy legs compose to a Cauchy inclusion, and a relatively compact
    leg on either side makes the composite relatively compact.
    """
    return InclusionClass(
        inner.cauchy and outer.cauchy,
        inner.relatively_compact or outer.relatively_compact,
    )
