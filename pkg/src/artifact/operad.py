"""Finitely enumerated colored operads, multifunctors and their law checks.

Permutations are tuples ``p`` with ``p[k]`` the image of ``k``; the product
is ``(s * t)(k) = s(t(k))``.  Operations carry a target color, a tuple of
source colors and a hashable payload.  The symmetric group acts on the
right, with ``(f . s)`` having sources ``f_{s(0)}, f_{s(1)}, ...``; input
``k`` of ``f . s`` is fed into slot ``s(k)`` of ``f``.
"""

from collections import deque, namedtuple
from functools import lru_cache
from itertools import permutations, product

Op = namedtuple("Op", "target sources payload")


class OperadError(Exception):
    pass


class SignatureMismatch(OperadError):
    pass


# ------------------------------------------------------------ permutations

def identity(n):
    return tuple(range(n))


def compose_perm(s, t):
    return tuple(s[k] for k in t)


def inverse(p):
    out = [0] * len(p)
    for k, x in enumerate(p):
        out[x] = k
    return tuple(out)


def block_permutation(sigma, sizes):
    """Relabelling of inputs when blocks of the given sizes are permuted by ``sigma``.

    Block ``i`` (of size ``sizes[i]``) is moved to block position
    ``sigma[i]``; position blocks are laid out in order with the sizes they
    receive.
    """
    n = len(sigma)
    inv = inverse(sigma)
    offsets, acc = [0] * n, 0
    for s in range(n):
        offsets[s] = acc
        acc += sizes[inv[s]]
    return tuple(offsets[sigma[i]] + j for i in range(n) for j in range(sizes[i]))


def insert_perm(n, i, tau):
    """``id_n`` with ``tau`` substituted at input ``i``."""
    k = len(tau)
    return tuple(range(i)) + tuple(i + t for t in tau) + tuple(j + k - 1 for j in range(i + 1, n))


def perm_orbit(colors, sigma, disjoint):
    """Class of ``sigma`` under swaps of adjacent word entries with disjoint colors.

    The word of ``sigma`` is ``sigma^-1``: it lists which input sits at each
    position of the ordered product.  Two neighbouring positions may be
    exchanged when ``disjoint`` holds for their colors.  Returns a frozenset
    of permutations.
    """
    start = inverse(sigma)
    seen = {start}
    queue = deque([start])
    n = len(start)
    while queue:
        w = queue.popleft()
        for k in range(n - 1):
            if disjoint(colors[w[k]], colors[w[k + 1]]):
                w2 = w[:k] + (w[k + 1], w[k]) + w[k + 2:]
                if w2 not in seen:
                    seen.add(w2)
                    queue.append(w2)
    return frozenset(inverse(w) for w in seen)


def canonical(colors, sigma, disjoint):
    return min(perm_orbit(colors, sigma, disjoint))


def orbit_partition(colors, disjoint):
    """Partition of the full symmetric group into classes."""
    left = set(permutations(range(len(colors))))
    classes = []
    while left:
        s = min(left)
        orb = perm_orbit(colors, s, disjoint)
        classes.append(orb)
        left -= orb
    return classes


def assoc_compose(sigma, inner_sigmas):
    """Composition in the associative operad, in permutation form."""
    return _assoc_compose(tuple(sigma), tuple(map(tuple, inner_sigmas)))


@lru_cache(maxsize=None)
def _assoc_compose(sigma, inner_sigmas):
    sizes = [len(t) for t in inner_sigmas]
    offsets, acc = [], 0
    for k in sizes:
        offsets.append(acc)
        acc += k
    word = inverse(sigma)
    inner_words = [inverse(t) for t in inner_sigmas]
    full = tuple(offsets[w] + x for w in word for x in inner_words[w])
    return inverse(full)


# ------------------------------------------------------------------ operad

class ColoredOperad:
    """A colored operad given by enumeration and composition callbacks.

    ``ops_fn(sources, target)`` lists the payloads of the operations with
    that signature.  ``compose_fn(outer, inners)`` returns the payload of
    the full composite, ``act_fn(op, sigma)`` the payload of ``op . sigma``
    and ``unit_payload(color)`` the identity payload.  Results are cached
    per signature.
    """

    def __init__(self, name, colors, arity_cap, ops_fn, compose_fn, act_fn, unit_payload, kind="generic"):
        self.name = name
        self.kind = kind
        self.colors = tuple(colors)
        self.arity_cap = arity_cap
        self._ops_fn = ops_fn
        self._compose_fn = compose_fn
        self._act_fn = act_fn
        self._unit_payload = unit_payload
        self._cache = {}

    def ops(self, sources, target):
        key = (tuple(sources), target)
        got = self._cache.get(key)
        if got is None:
            got = tuple(Op(target, key[0], p) for p in self._ops_fn(key[0], target))
            self._cache[key] = got
        return got

    def has(self, op):
        return op in self.ops(op.sources, op.target)

    def unit(self, color):
        return Op(color, (color,), self._unit_payload(color))

    def compose(self, outer, inners):
        inners = tuple(inners)
        if len(inners) != len(outer.sources):
            raise OperadError("composition needs one inner operation per input")
        for k, g in enumerate(inners):
            if g.target != outer.sources[k]:
                raise OperadError(f"input {k} expects color {outer.sources[k]!r}, got {g.target!r}")
        sources = tuple(c for g in inners for c in g.sources)
        return Op(outer.target, sources, self._compose_fn(outer, inners))

    def partial(self, f, i, g):
        inners = [self.unit(c) for c in f.sources]
        inners[i] = g
        return self.compose(f, inners)

    def act(self, op, sigma):
        sigma = tuple(sigma)
        if sorted(sigma) != list(range(len(op.sources))):
            raise OperadError("permutation does not match the arity")
        sources = tuple(op.sources[k] for k in sigma)
        return Op(op.target, sources, self._act_fn(op, sigma))

    # -- enumeration

    def signatures(self, n):
        for target in self.colors:
            for sources in product(self.colors, repeat=n):
                yield sources, target

    def operations(self, n):
        for sources, target in self.signatures(n):
            yield from self.ops(sources, target)

    def operations_into(self, target, n):
        for sources in product(self.colors, repeat=n):
            yield from self.ops(sources, target)

    def all_operations(self, max_arity=None):
        cap = self.arity_cap if max_arity is None else max_arity
        out = []
        for n in range(cap + 1):
            out.extend(self.operations(n))
        return out

    def counts(self):
        """Operation counts per non-empty signature, for arities up to the cap."""
        out = {}
        for n in range(self.arity_cap + 1):
            for sources, target in self.signatures(n):
                k = len(self.ops(sources, target))
                if k:
                    out[sources, target] = k
        return out


class Report:
    """Outcome of a law check: the failing instances and how much was checked."""

    def __init__(self, name):
        self.name = name
        self.failures = []
        self.checked = {}

    def tick(self, law, n=1):
        self.checked[law] = self.checked.get(law, 0) + n

    def fail(self, law, **detail):
        self.failures.append({"law": law, **detail})

    @property
    def ok(self):
        return not self.failures

    def to_json(self, limit=20):
        return {
            "name": self.name,
            "ok": self.ok,
            "checked": dict(sorted(self.checked.items())),
            "failures": self.failures[:limit],
            "failure_count": len(self.failures),
        }


def op_json(op):
    p = op.payload
    return {
        "target": op.target,
        "sources": list(op.sources),
        "payload": list(p) if isinstance(p, tuple) else p,
    }


def _ops_by_target(O, cap):
    by_target = {}
    for n in range(cap + 1):
        for op in O.operations(n):
            by_target.setdefault(op.target, []).append(op)
    return by_target


def check_operad_axioms(O, cap=None):
    """Check units, associativity, equivariance and the group action.

    Every instance with operations of arity at most ``cap`` (default the
    operad's cap) whose composites also have arity at most ``cap`` is
    checked.  Failures are recorded in the returned :class:`Report`.
    """
    cap = O.arity_cap if cap is None else cap
    rep = Report(f"{O.name} axioms")
    every = O.all_operations(cap)
    into = _ops_by_target(O, cap)
    perms = {n: list(permutations(range(n))) for n in range(cap + 1)}
    partial = lru_cache(maxsize=None)(O.partial)
    act = lru_cache(maxsize=None)(O.act)

    for f in every:
        n = len(f.sources)
        if not O.has(f):
            rep.fail("closure", op=op_json(f))
        if O.compose(O.unit(f.target), [f]) != f:
            rep.fail("left unit", op=op_json(f))
        if O.compose(f, [O.unit(c) for c in f.sources]) != f:
            rep.fail("right unit", op=op_json(f))
        rep.tick("unit", 2)
        if act(f, identity(n)) != f:
            rep.fail("identity permutation", op=op_json(f))
        for s in perms[n]:
            fs = act(f, s)
            if not O.has(fs):
                rep.fail("action closure", op=op_json(f), sigma=list(s))
            for t in perms[n]:
                rep.tick("action")
                if act(fs, t) != act(f, compose_perm(s, t)):
                    rep.fail("action", op=op_json(f), sigma=list(s), tau=list(t))

    for f in every:
        m = len(f.sources)
        for i in range(m):
            for g in into.get(f.sources[i], ()):
                k = len(g.sources)
                if m + k - 1 > cap:
                    continue
                fg = partial(f, i, g)
                if not O.has(fg):
                    rep.fail("composition closure", f=op_json(f), i=i, g=op_json(g))
                    continue
                # equivariance in the outer and inner operation
                for s in perms[m]:
                    rep.tick("outer equivariance")
                    lhs = partial(act(f, s), inverse(s)[i], g)
                    rhs = act(fg, block_permutation(s, _block_sizes(m, i, k, s)))
                    if lhs != rhs:
                        rep.fail("outer equivariance", f=op_json(f), i=i, g=op_json(g), sigma=list(s))
                for t in perms[k]:
                    rep.tick("inner equivariance")
                    if partial(f, i, act(g, t)) != act(fg, insert_perm(m, i, t)):
                        rep.fail("inner equivariance", f=op_json(f), i=i, g=op_json(g), tau=list(t))
                # sequential associativity
                for j in range(k):
                    for h in into.get(g.sources[j], ()):
                        l = len(h.sources)
                        if m + k + l - 2 > cap or k + l - 1 > cap:
                            continue
                        rep.tick("sequential associativity")
                        if partial(fg, i + j, h) != partial(f, i, partial(g, j, h)):
                            rep.fail("sequential associativity", f=op_json(f), i=i, g=op_json(g), j=j, h=op_json(h))
                # parallel associativity
                for j in range(i + 1, m):
                    for h in into.get(f.sources[j], ()):
                        l = len(h.sources)
                        if m + k + l - 2 > cap or m + l - 1 > cap:
                            continue
                        rep.tick("parallel associativity")
                        lhs = partial(fg, j + k - 1, h)
                        rhs = partial(partial(f, j, h), i, g)
                        if lhs != rhs:
                            rep.fail("parallel associativity", f=op_json(f), i=i, g=op_json(g), j=j, h=op_json(h))

    # full composition agrees with iterated partial composition; nullary
    # inputs are already covered by the partial laws above
    by_arity = {}
    for c, ops in into.items():
        for g in ops:
            by_arity.setdefault((c, len(g.sources)), []).append(g)

    def inner_tuples(colors, budget):
        if not colors:
            yield ()
            return
        for k in range(1, budget + 1):
            for g in by_arity.get((colors[0], k), ()):
                for rest in inner_tuples(colors[1:], budget - k):
                    yield (g,) + rest

    for f in every:
        m = len(f.sources)
        if m < 2:
            continue
        for inners in inner_tuples(f.sources, cap):
            rep.tick("full composition")
            acc = f
            for i in range(m - 1, -1, -1):
                acc = partial(acc, i, inners[i])
            if O.compose(f, inners) != acc:
                rep.fail("full composition", f=op_json(f), inners=[op_json(g) for g in inners])
    return rep


def _block_sizes(m, i, k, s):
    # input j of f . s feeds slot s(j) of f; only slot i carries k inputs
    return [k if s[j] == i else 1 for j in range(m)]


# ------------------------------------------------------------ multifunctor

class Multifunctor:
    """A map of colored operads given by a color map and an operation map."""

    def __init__(self, name, source, target, color_map, op_map):
        self.name = name
        self.source = source
        self.target = target
        self.color_map = dict(color_map)
        self._op_map = op_map
        self._cache = {}

    def color(self, c):
        return self.color_map[c]

    def __call__(self, op):
        got = self._cache.get(op)
        if got is None:
            got = self._op_map(op)
            want_sources = tuple(self.color_map[c] for c in op.sources)
            if got.target != self.color_map[op.target] or got.sources != want_sources:
                raise SignatureMismatch(
                    f"{self.name}: image of an operation into {op.target!r} has the wrong signature"
                )
            self._cache[op] = got
        return got


def identity_multifunctor(O):
    return Multifunctor(f"id({O.name})", O, O, {c: c for c in O.colors}, lambda op: op)


def compose_multifunctors(G, F):
    """``G o F``."""
    return Multifunctor(
        f"{G.name}.{F.name}", F.source, G.target,
        {c: G.color(F.color(c)) for c in F.source.colors},
        lambda op: G(F(op)),
    )


def check_multifunctor(F, cap=None):
    """Check that ``F`` preserves identities, partial composition and the action."""
    S, T = F.source, F.target
    missing = [c for c in S.colors if c not in F.color_map]
    if missing:
        raise OperadError(f"color map is not total: {missing[:5]}")
    cap = min(S.arity_cap, T.arity_cap) if cap is None else cap
    rep = Report(f"{F.name} multifunctor")
    every = S.all_operations(cap)
    into = _ops_by_target(S, cap)
    for c in S.colors:
        rep.tick("identity")
        if F(S.unit(c)) != T.unit(F.color(c)):
            rep.fail("identity", color=c)
    for f in every:
        n = len(f.sources)
        Ff = F(f)
        if not T.has(Ff):
            rep.fail("image", op=op_json(f))
            continue
        for s in permutations(range(n)):
            rep.tick("equivariance")
            if F(S.act(f, s)) != T.act(Ff, s):
                rep.fail("equivariance", op=op_json(f), sigma=list(s))
        for i in range(n):
            for g in into.get(f.sources[i], ()):
                if n + len(g.sources) - 1 > cap:
                    continue
                rep.tick("composition")
                if F(S.partial(f, i, g)) != T.partial(Ff, i, F(g)):
                    rep.fail("composition", f=op_json(f), i=i, g=op_json(g))
    return rep


# ------------------------------------------------------------ small examples

def terminal_operad(colors=("*",), arity_cap=3):
    """One operation per signature."""
    return ColoredOperad(
        "terminal", colors, arity_cap,
        lambda sources, target: [None],
        lambda outer, inners: None,
        lambda op, sigma: None,
        lambda c: None,
    )


def associative_operad(arity_cap=3):
    """One color; operations are permutations, composed by block substitution."""
    return ColoredOperad(
        "associative", ("*",), arity_cap,
        lambda sources, target: list(permutations(range(len(sources)))),
        lambda outer, inners: assoc_compose(outer.payload, [g.payload for g in inners]),
        lambda op, sigma: compose_perm(op.payload, sigma),
        lambda c: (0,),
    )
