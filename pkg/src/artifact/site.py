"""Finite universes of regions inside one ambient region.

A :class:`Site` fixes an ambient causally convex region and a finite list of
named object regions.  Every object is convex and sits in the ambient by a
Cauchy or relatively compact inclusion.  Inclusion classes and causal
disjointness between objects are tabulated once at construction.
"""

from itertools import combinations

from .nullgeom import (
    GeometryError,
    Region,
    are_causally_disjoint,
    cauchy_development,
    causally_convex_hull,
    classify_inclusion,
    compose_classes,
    future_meets,
    is_causally_convex,
)


class SiteError(GeometryError):
    pass


class SaturationOverflow(SiteError):
    pass


def check_mult_pair(V, pair):
    """Reasons why ``pair = (C_plus, C_minus)`` cannot serve as a product pair for ``V``.

    Both members must be convex, lie in ``V`` and be Cauchy there, and the
    tuple ``(C_plus, C_minus)`` must be time-ordered so that ``C_plus`` is
    the later factor.  An empty list means the pair is usable.
    """
    problems = []
    for label, C in zip(("first", "second"), pair):
        if not C:
            problems.append(f"{label} member is empty")
            continue
        if not is_causally_convex(C):
            problems.append(f"{label} member is not causally convex")
            continue
        if not C <= V:
            problems.append(f"{label} member is not inside the object")
            continue
        if not classify_inclusion(C, V).cauchy:
            problems.append(f"{label} member is not Cauchy in the object")
    if not problems and future_meets(pair[0], pair[1]):
        problems.append("the pair is not time-ordered: the second member meets the future of the first")
    return problems


def propose_mult_pair(V):
    """Best-effort construction of two shifted staircases inside ``V``.

    The result is returned whether or not it passes :func:`check_mult_pair`.
    """
    us = sorted({x for r in V for x in (r.u_lo, r.u_hi)})
    vs = sorted({x for r in V for x in (r.v_lo, r.v_hi)})
    u0, u1, v0, v1 = us[0], us[-1], vs[0], vs[-1]
    if not all(abs(x) != float("inf") for x in (u0, u1, v0, v1)):
        raise SiteError("staircase proposals need a bounded object")
    du, dv = (u1 - u0) / 8, (v1 - v0) / 8

    def band(shift):
        pts = [(u0 + 2 * k * du + shift * du / 2, v1 - 2 * k * dv + shift * dv / 2) for k in range(5)]
        rects = [
            (a - du, b + du, d - dv, c + dv) for (a, c), (b, d) in zip(pts, pts[1:])
        ]
        return causally_convex_hull(Region(rects) & V)

    return band(1), band(-1)


class Site:
    """Validated finite universe.  Build with :func:`build_site`."""

    def __init__(self, ambient, objects, ambient_name="M", bands=(), mult_pairs=None, options=None):
        self.ambient_name = ambient_name
        self.ambient = ambient
        self.names = (ambient_name,) + tuple(n for n, _ in objects)
        self.region = {ambient_name: ambient}
        self.region.update(objects)
        self.bands = frozenset(bands)
        self.mult_pairs = dict(mult_pairs or {})
        self.options = dict(options or {})
        self._by_region = {R: n for n, R in self.region.items()}

        self.inclusion = {}
        for a in self.names:
            for b in self.names:
                Ra, Rb = self.region[a], self.region[b]
                if Ra <= Rb:
                    cls = classify_inclusion(Ra, Rb)
                    if cls.admissible:
                        self.inclusion[a, b] = cls
        self.orthogonal = frozenset(
            frozenset((a, b))
            for a, b in combinations(self.names, 2)
            if are_causally_disjoint(self.region[a], self.region[b])
        )
        self._orth = {(a, b) for p in self.orthogonal for a in p for b in p if a != b}
        self.development = {n: cauchy_development(self.region[n], ambient) for n in self.names}
        self._check_composition_closed()

    def _check_composition_closed(self):
        for (a, b), c1 in self.inclusion.items():
            for c in self.names:
                c2 = self.inclusion.get((b, c))
                if c2 is None:
                    continue
                got = self.inclusion.get((a, c))
                want = compose_classes(c1, c2)
                assert got is not None, f"composite {a} -> {c} missing"
                assert (got.cauchy or not want.cauchy) and (got.relatively_compact or not want.relatively_compact)

    # -- queries

    def __len__(self):
        return len(self.names)

    def __iter__(self):
        return iter(self.names)

    def __contains__(self, name):
        return name in self.region

    def hom(self, a, b):
        """Inclusion class of ``a -> b``, or ``None`` when there is no morphism."""
        return self.inclusion.get((a, b))

    def is_orthogonal(self, a, b):
        return (a, b) in self._orth

    def name_of(self, region):
        return self._by_region.get(region)

    def subsite(self, name):
        """The site of objects admissible inside ``name``, with ``name`` as ambient."""
        V = self.region[name]
        objs = [(n, self.region[n]) for n in self.names if n != name and self.hom(n, name) is not None]
        return Site(
            V, objs, ambient_name=name,
            bands=self.bands & {n for n, _ in objs},
            mult_pairs={n: p for n, p in self.mult_pairs.items() if n == name or n in dict(objs)},
            options=self.options,
        )

    def to_json(self):
        out = {
            "ambient_name": self.ambient_name,
            "ambient": self.ambient.to_json(),
            "objects": {n: self.region[n].to_json() for n in self.names[1:]},
            "inclusions": [
                {"source": a, "target": b, **self.inclusion[a, b].to_json()}
                for a in self.names for b in self.names if (a, b) in self.inclusion
            ],
            "orthogonal": sorted(sorted(p) for p in self.orthogonal),
            "developments": {n: self.development[n].to_json() for n in self.names},
        }
        if self.bands:
            out["bands"] = sorted(self.bands)
        if self.mult_pairs:
            out["mult_pairs"] = {n: [C.to_json() for C in p] for n, p in sorted(self.mult_pairs.items())}
        return out


def build_site(ambient, objects=(), options=None, mult_pairs=None):
    """Validate and tabulate a site.

    ``objects`` is a sequence of ``(name, Region)`` pairs.  Options understood
    here are ``ambient_name`` and ``bands`` (names of objects allowed to be
    unbounded).  Problems raise :class:`SiteError` with a JSON pointer.
    """
    options = dict(options or {})
    ambient_name = options.get("ambient_name", "M")
    bands = set(options.get("bands", ()))
    objects = list(objects)
    if not is_causally_convex(ambient):
        raise SiteError("ambient region is not causally convex", "/ambient")
    if not ambient:
        raise SiteError("ambient region is empty", "/ambient")
    seen = {ambient: ambient_name}
    names = {ambient_name}
    for name, R in objects:
        ptr = f"/objects/{name}"
        if name in names:
            raise SiteError(f"duplicate object name {name!r}", ptr)
        names.add(name)
        if R in seen:
            raise SiteError(f"object {name!r} repeats the region of {seen[R]!r}", ptr)
        seen[R] = name
        if not R:
            raise SiteError(f"object {name!r} is empty", ptr)
        if not R.bounded and name not in bands:
            raise SiteError(f"object {name!r} is unbounded but not listed as a band", ptr)
        if not is_causally_convex(R):
            raise SiteError(f"object {name!r} is not causally convex", ptr)
        if not R <= ambient:
            raise SiteError(f"object {name!r} is not inside the ambient region", ptr)
        if not classify_inclusion(R, ambient).admissible:
            raise SiteError(f"object {name!r} is neither Cauchy nor relatively compact in the ambient", ptr)
    for b in bands:
        if b not in names:
            raise SiteError(f"band {b!r} is not an object", "/options/bands")
    mult_pairs = dict(mult_pairs or {})
    regions = dict(objects)
    regions[ambient_name] = ambient
    for name, pair in mult_pairs.items():
        ptr = f"/mult_pairs/{name}"
        if name not in regions:
            raise SiteError(f"product pair for unknown object {name!r}", ptr)
        problems = check_mult_pair(regions[name], pair)
        if problems:
            raise SiteError(f"product pair for {name!r} rejected: " + "; ".join(problems), ptr)
    return Site(ambient, objects, ambient_name, bands, mult_pairs, options)


def site_from_json(obj):
    if not isinstance(obj, dict):
        raise SiteError("site must be a JSON object", "")
    ambient = Region.from_json(obj.get("ambient"), "/ambient")
    raw = obj.get("objects", {})
    objects = [(n, Region.from_json(r, f"/objects/{n}")) for n, r in raw.items()]
    pairs = {}
    for n, p in obj.get("mult_pairs", {}).items():
        if not isinstance(p, list) or len(p) != 2:
            raise SiteError("a product pair is a list of two regions", f"/mult_pairs/{n}")
        pairs[n] = tuple(Region.from_json(r, f"/mult_pairs/{n}/{i}") for i, r in enumerate(p))
    return build_site(ambient, objects, obj.get("options", {}), pairs)


def saturate(site, depth, object_cap=64):
    """Close the object set under developments, hulls of pairs and product-pair members.

    Each of ``depth`` rounds adds, for the current objects, the ambient
    development of every object, the causally convex hull of every pair, and
    the members of designated product pairs; candidates that are not
    admissible in the ambient are skipped.  A final pass closes the result
    under developments, which are idempotent, so every object's development
    is itself an object.
    """
    if depth < 0:
        raise ValueError("depth must be non-negative")
    if depth == 0:
        return site
    M = site.ambient
    objects = [(n, site.region[n]) for n in site.names[1:]]
    known = {R: n for n, R in site.region.items()}
    bands = set(site.bands)

    def offer(name, R, new):
        if not R or R in known:
            return
        if not R <= M or not is_causally_convex(R) or not classify_inclusion(R, M).admissible:
            return
        if len(known) + 1 > object_cap:
            raise SaturationOverflow(f"object cap {object_cap} exceeded while adding {name}")
        known[R] = name
        new.append((name, R))
        if not R.bounded:
            bands.add(name)

    for _ in range(depth):
        current = [(site.ambient_name, M)] + objects
        new = []
        for n, R in current:
            offer(f"D({n})", cauchy_development(R, M), new)
        for (n1, R1), (n2, R2) in combinations(current, 2):
            offer(f"hull({n1},{n2})", causally_convex_hull(R1 | R2), new)
        for n, pair in site.mult_pairs.items():
            for i, C in enumerate(pair):
                offer(f"pair({n},{i})", C, new)
        if not new:
            break
        objects.extend(new)
    new = []
    for n, R in list(objects):
        offer(f"D({n})", cauchy_development(R, M), new)
    objects.extend(new)
    options = dict(site.options)
    options["bands"] = sorted(bands)
    return Site(M, objects, site.ambient_name, bands, site.mult_pairs, options)
