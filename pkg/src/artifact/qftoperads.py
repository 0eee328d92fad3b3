"""The operads of a site: permutation-class (AQFT style) and time-ordered tuple (tPFA style).

Colors are object names.  In :func:`build_O_M` an n-ary operation
``(U_1..U_n) -> V`` is a class of permutations, two permutations being
identified when they differ by swapping adjacent, causally disjoint factors.
In :func:`build_tP_M` there is a single operation for each time-orderable
tuple.  :func:`build_Phi_M` sends a time-orderable tuple to the class of
``rho^-1`` for any time-ordering ``rho``.
"""

from itertools import permutations

from .nullgeom import time_ordering, time_orderings
from .operad import (
    ColoredOperad,
    Multifunctor,
    OperadError,
    assoc_compose,
    compose_perm,
    inverse,
    perm_orbit,
)


class IntegrityError(OperadError):
    """An invariant that the construction guarantees did not hold."""


def _disjointness_key(sources, disjoint):
    n = len(sources)
    return tuple(disjoint(sources[a], sources[b]) for a in range(n) for b in range(a + 1, n))


def perm_class_operad(name, colors, arity_cap, admissible, disjoint, kind="permutation classes"):
    """Operad of permutation classes modulo adjacent swaps of disjoint colors.

    ``admissible(source, target)`` says whether a color may feed a target;
    an operation exists for a signature exactly when every source does.
    """
    classes = {}

    def reps(sources):
        key = (len(sources), pattern(sources))
        got = classes.get(key)
        if got is None:
            left = set(permutations(range(len(sources))))
            got = []
            while left:
                s = min(left)
                orb = perm_orbit(sources, s, disjoint)
                got.append(s)
                left -= orb
            classes[key] = got
        return got

    canon_cache = {}
    key_cache = {}

    def pattern(sources):
        got = key_cache.get(sources)
        if got is None:
            got = key_cache[sources] = _disjointness_key(sources, disjoint)
        return got

    def canon(sources, sigma):
        key = (pattern(sources), sigma)
        got = canon_cache.get(key)
        if got is None:
            got = canon_cache[key] = min(perm_orbit(sources, sigma, disjoint))
        return got

    def ops_fn(sources, target):
        if not all(admissible(s, target) for s in sources):
            return []
        return reps(sources)

    def compose_fn(outer, inners):
        sources = tuple(c for g in inners for c in g.sources)
        return canon(sources, assoc_compose(outer.payload, [g.payload for g in inners]))

    def act_fn(op, sigma):
        sources = tuple(op.sources[k] for k in sigma)
        return canon(sources, compose_perm(op.payload, sigma))

    O = ColoredOperad(name, colors, arity_cap, ops_fn, compose_fn, act_fn, lambda c: (0,), kind)
    O.canonical = canon
    O.disjoint = disjoint
    return O


def build_O_M(site, arity_cap=3):
    return perm_class_operad(
        f"aqft({site.ambient_name})", site.names, arity_cap,
        lambda s, t: site.hom(s, t) is not None,
        site.is_orthogonal,
    )


def build_tP_M(site, arity_cap=3):
    def ops_fn(sources, target):
        if not all(site.hom(s, target) is not None for s in sources):
            return []
        if time_ordering([site.region[s] for s in sources]) is None:
            return []
        return [None]

    return ColoredOperad(
        f"tpfa({site.ambient_name})", site.names, arity_cap,
        ops_fn,
        lambda outer, inners: None,
        lambda op, sigma: None,
        lambda c: None,
        "time-ordered tuples",
    )


def phi_classes(site, O, op):
    """Every class ``[rho^-1]`` over the time-orderings ``rho`` of ``op``'s sources."""
    regions = [site.region[s] for s in op.sources]
    return {O.canonical(op.sources, inverse(rho)) for rho in time_orderings(regions)}


def build_Phi_M(site, tP, O, exhaustive=True):
    """Comparison multifunctor from time-ordered tuples to permutation classes.

    With ``exhaustive`` set, every time-ordering is computed and the images
    are required to land in one class; otherwise the first ordering is used.
    """

    def op_map(op):
        if exhaustive:
            got = phi_classes(site, O, op)
            if len(got) != 1:
                raise IntegrityError(
                    f"time-orderings of {op.sources} give {len(got)} different permutation classes"
                )
            (cls,) = got
        else:
            rho = time_ordering([site.region[s] for s in op.sources])
            cls = O.canonical(op.sources, inverse(rho))
        return op._replace(payload=cls)

    return Multifunctor(f"compare({site.ambient_name})", tP, O, {c: c for c in tP.colors}, op_map)


def cauchy_ops(O, site):
    """The unary operations whose inclusion is Cauchy."""
    out = []
    for s in O.colors:
        for t in O.colors:
            cls = site.hom(s, t)
            if cls is not None and cls.cauchy:
                out.extend(O.ops((s,), t))
    return out


def operad_dump(O, spot=8):
    """JSON summary: colors, counts per signature, representatives and a few composites."""
    sigs = []
    for (sources, target), k in sorted(O.counts().items(), key=lambda kv: (len(kv[0][0]), kv[0])):
        reps = [op.payload for op in O.ops(sources, target)]
        sigs.append({
            "sources": list(sources),
            "target": target,
            "count": k,
            "representatives": [list(p) if isinstance(p, tuple) else p for p in reps],
        })
    table = []
    for f in O.all_operations(2):
        if len(f.sources) != 2:
            continue
        for g in O.all_operations(2):
            if g.target == f.sources[0] and len(g.sources) == 2 and len(table) < spot:
                fg = O.partial(f, 0, g)
                table.append({
                    "outer": _op(f), "position": 0, "inner": _op(g), "result": _op(fg),
                })
    return {"name": O.name, "colors": list(O.colors), "arity_cap": O.arity_cap,
            "signatures": sigs, "composition_samples": table}


def _op(op):
    p = op.payload
    return {"sources": list(op.sources), "target": op.target,
            "payload": list(p) if isinstance(p, tuple) else p}
