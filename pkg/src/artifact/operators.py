"""Categories of operators and strict homotopy fibers of the localization.

An object of the category of operators is a tuple of colors; its length is
the size of the pointed set (the base point is implicit).  A morphism from a
tuple of length ``n`` to one of length ``n2`` is a pointed map, stored as a
tuple ``phi`` with ``phi[i]`` in ``0..n2`` (``0`` is the base point and
entries are numbered from 1 on the target side), together with one operation
per target entry whose sources are the entries mapped to it, in increasing
order.
"""

from collections import deque, namedtuple
from itertools import permutations, product

from .operad import OperadError, compose_perm, inverse, op_json

Morphism = namedtuple("Morphism", "source target phi ops")


class OperatorOverflow(OperadError):
    pass


def preimage(phi, j):
    """Indices ``i`` with ``phi[i] == j``, increasing."""
    return tuple(i for i, x in enumerate(phi) if x == j)


def pointed_maps(n, n2):
    return product(range(n2 + 1), repeat=n)


def _sorting_perm(idx):
    """``s`` such that ``idx[s[k]]`` is the k-th smallest entry."""
    return tuple(sorted(range(len(idx)), key=lambda k: idx[k]))


class OperatorCategory:
    """Category of operators of ``O`` restricted to tuples of length at most ``cap``."""

    def __init__(self, O, cap=None):
        self.O = O
        self.cap = O.arity_cap if cap is None else cap

    def objects(self, n):
        return product(self.O.colors, repeat=n)

    def _check(self, *tuples):
        for t in tuples:
            if len(t) > self.cap:
                raise OperatorOverflow(f"tuple of length {len(t)} exceeds the cap {self.cap}")

    def identity(self, M):
        M = tuple(M)
        return Morphism(M, M, tuple(range(1, len(M) + 1)), tuple(self.O.unit(c) for c in M))

    def homs(self, M, M2, phi=None):
        """All morphisms ``M -> M2``, optionally over a fixed pointed map."""
        M, M2 = tuple(M), tuple(M2)
        self._check(M, M2)
        maps = [tuple(phi)] if phi is not None else pointed_maps(len(M), len(M2))
        for f in maps:
            pools = []
            for j in range(1, len(M2) + 1):
                src = tuple(M[i] for i in preimage(f, j))
                pools.append(self.O.ops(src, M2[j - 1]))
            for ops in product(*pools):
                yield Morphism(M, M2, f, ops)

    def is_morphism(self, m):
        if len(m.phi) != len(m.source) or len(m.ops) != len(m.target):
            return False
        for j, op in enumerate(m.ops, start=1):
            src = tuple(m.source[i] for i in preimage(m.phi, j))
            if op.sources != src or op.target != m.target[j - 1] or not self.O.has(op):
                return False
        return True

    def compose(self, g, f):
        """``g o f``."""
        if f.target != g.source:
            raise OperadError("morphisms are not composable")
        O = self.O
        chi = tuple(0 if x == 0 else g.phi[x - 1] for x in f.phi)
        ops = []
        for l, gop in enumerate(g.ops, start=1):
            js = preimage(g.phi, l)
            comp = O.compose(gop, [f.ops[j] for j in js])
            idx = [i for j in js for i in preimage(f.phi, j + 1)]
            ops.append(O.act(comp, _sorting_perm(idx)))
        return Morphism(f.source, g.target, chi, tuple(ops))

    def permutation(self, M, sigma):
        """The isomorphism ``(sigma, identities)`` out of ``M``; entry ``i`` moves to ``sigma[i]``."""
        M = tuple(M)
        inv = inverse(sigma)
        M2 = tuple(M[inv[j]] for j in range(len(M)))
        return Morphism(M, M2, tuple(s + 1 for s in sigma), tuple(self.O.unit(c) for c in M2))

    def project(self, m):
        return m.phi


def check_operator_category(OC, objects, sample_maps=None):
    """Identity and associativity on all composable triples among ``objects``.

    Returns a dict with counts and the first failures found.
    """
    fails = []
    n_id = n_assoc = 0
    homs = {}
    for A in objects:
        for B in objects:
            homs[A, B] = list(OC.homs(A, B))
            if sample_maps is not None:
                homs[A, B] = homs[A, B][:sample_maps]
    for (A, B), ms in homs.items():
        for m in ms:
            n_id += 1
            if OC.compose(OC.identity(B), m) != m or OC.compose(m, OC.identity(A)) != m:
                fails.append({"law": "identity", "morphism": morphism_json(m)})
            if OC.project(OC.compose(OC.identity(B), m)) != m.phi:
                fails.append({"law": "projection", "morphism": morphism_json(m)})
    for A in objects:
        for B in objects:
            for C in objects:
                for f in homs[A, B]:
                    for g in homs[B, C]:
                        gf = OC.compose(g, f)
                        if not OC.is_morphism(gf):
                            fails.append({"law": "closure", "f": morphism_json(f), "g": morphism_json(g)})
                        for D in objects:
                            for h in homs[C, D]:
                                n_assoc += 1
                                if OC.compose(h, gf) != OC.compose(OC.compose(h, g), f):
                                    fails.append({"law": "associativity", "f": morphism_json(f),
                                                  "g": morphism_json(g), "h": morphism_json(h)})
    return {"ok": not fails, "identities": n_id, "triples": n_assoc, "failures": fails[:10]}


def morphism_json(m):
    return {"source": list(m.source), "target": list(m.target), "phi": list(m.phi),
            "ops": [op_json(op) for op in m.ops]}


# ------------------------------------------------------------ W tensor

def in_w_tensor(m, W):
    """Is ``m`` a bijection decorated by operations of ``W``?"""
    n = len(m.source)
    return len(m.target) == n and sorted(m.phi) == list(range(1, n + 1)) and all(op in W for op in m.ops)


def w_tensor_homs(OC, M, M2, W):
    """All ``W``-decorated bijections ``M -> M2``."""
    M, M2 = tuple(M), tuple(M2)
    if len(M) != len(M2):
        return
    for s in permutations(range(1, len(M) + 1)):
        ops = []
        for j in range(1, len(M2) + 1):
            i = s.index(j)
            cands = [op for op in OC.O.ops((M[i],), M2[j - 1]) if op in W]
            if not cands:
                break
            ops.append(cands)
        else:
            for choice in product(*ops):
                yield Morphism(M, M2, tuple(s), tuple(choice))


def check_w_tensor_clf(OC, W, objects):
    """Gabriel-Zisman left fractions for ``(OC, W^tensor)`` among the given objects."""
    fails = []
    n = 0
    for A in objects:
        if not in_w_tensor(OC.identity(A), W):
            fails.append({"identity": list(A)})
    for A in objects:
        for B in objects:
            for w in w_tensor_homs(OC, A, B, W):
                for C in objects:
                    for f in OC.homs(A, C):
                        n += 1
                        ok = any(
                            OC.compose(w2, f) == OC.compose(f2, w)
                            for D in objects
                            for w2 in w_tensor_homs(OC, C, D, W)
                            for f2 in OC.homs(B, D)
                        )
                        if not ok:
                            fails.append({"square": [morphism_json(w), morphism_json(f)]})
                    for w2 in w_tensor_homs(OC, B, C, W):
                        if not in_w_tensor(OC.compose(w2, w), W):
                            fails.append({"composition": [morphism_json(w), morphism_json(w2)]})
    return {"ok": not fails, "squares": n, "failures": fails[:10]}


# ------------------------------------------------------------ fibers

class FiberCategory:
    """Lifts of a simplex together with the connecting ``W``-tensor arrows."""

    def __init__(self, n, psi, objects, edges):
        self.n = n
        self.psi = psi
        self.objects = objects
        self.edges = edges

    def to_json(self):
        return {"n": self.n, "objects": len(self.objects), "edges": len(self.edges)}


def functor_on_morphism(F, m):
    return Morphism(tuple(F.color(c) for c in m.source), tuple(F.color(c) for c in m.target),
                    m.phi, tuple(F(op) for op in m.ops))


class HinichSetup:
    """The data needed to form fibers of the composite localization functor.

    ``F`` is a multifunctor from the tuple operad to the localized operad,
    ``W`` the Cauchy unary operations of the tuple operad and ``site`` the
    universe whose objects bound every search.
    """

    def __init__(self, site, source, target, F, W):
        self.site = site
        self.src = OperatorCategory(source)
        self.tgt = OperatorCategory(target)
        self.F = F
        self.W = set(W)
        L = target
        self._iso = {}
        for U in L.colors:
            for V in L.colors:
                self._iso[U, V] = bool(L.ops((U,), V)) and bool(L.ops((V,), U))
        self.iso_class = {V: [U for U in source.colors if self._iso[U, V]] for V in L.colors}

    def iso_decoration(self, U, V, tau):
        """The localized isomorphism ``U -> V`` moving entry ``i`` to ``tau[i]``, if any."""
        ops = []
        for j in range(len(V)):
            i = tau.index(j)
            got = self.tgt.O.ops((U[i],), V[j])
            if not got or not self._iso[U[i], V[j]]:
                return None
            ops.append(got[0])
        return Morphism(tuple(U), tuple(V), tuple(t + 1 for t in tau), tuple(ops))

    # -- n = 0

    def fiber0(self, V):
        V = tuple(V)
        n = len(V)
        objs = []
        for tau in permutations(range(n)):
            pools = [self.iso_class[V[tau[i]]] for i in range(n)]
            for U in product(*pools):
                objs.append((U, tau))
        index = {o: k for k, o in enumerate(objs)}
        edges = set()
        for k, (U, tau) in enumerate(objs):
            for i in range(n):
                # enlarge one entry along a Cauchy inclusion
                for U2 in self.iso_class[V[tau[i]]]:
                    if U2 != U[i] and self.site.hom(U[i], U2) is not None and self.site.hom(U[i], U2).cauchy:
                        other = (U[:i] + (U2,) + U[i + 1:], tau)
                        edges.add((k, index[other]))
            for i in range(n - 1):
                # swap two neighbouring entries; the decoration follows
                s = tuple(i + 1 if x == i else i if x == i + 1 else x for x in range(n))
                U2 = tuple(U[s.index(x)] for x in range(n))
                tau2 = compose_perm(tau, inverse(s))
                edges.add((k, index[(U2, tau2)]))
        return FiberCategory(0, V, objs, sorted(edges))

    def check_fiber0_edges(self, fib):
        """Every stored edge is a ``W``-tensor arrow compatible with the decorations."""
        for a, b in fib.edges:
            (U, tau), (U2, tau2) = fib.objects[a], fib.objects[b]
            found = False
            for m in w_tensor_homs(self.src, U, U2, self.W):
                s = tuple(x - 1 for x in m.phi)
                if compose_perm(tau2, s) == tau:
                    found = True
                    break
            if not found:
                return False
        return True

    # -- n = 1

    def fiber1(self, psi):
        """Lifts of the localized morphism ``psi`` through the tuple operad."""
        V, V2 = psi.source, psi.target
        n, n2 = len(V), len(V2)
        objs = []
        for t0 in permutations(range(n)):
            for t1 in permutations(range(n2)):
                # phi_f = t1^-1 phi_psi t0 on non-base points
                inv1 = inverse(t1)
                phi_f = tuple(
                    0 if psi.phi[t0[i]] == 0 else inv1[psi.phi[t0[i]] - 1] + 1 for i in range(n)
                )
                pools0 = [self.iso_class[V[t0[i]]] for i in range(n)]
                pools1 = [self.iso_class[V2[t1[j]]] for j in range(n2)]
                for U in product(*pools0):
                    alpha = self.iso_decoration(U, V, t0)
                    if alpha is None:
                        continue
                    right = self.tgt.compose(psi, alpha)
                    for U2 in product(*pools1):
                        beta = self.iso_decoration(U2, V2, t1)
                        if beta is None:
                            continue
                        for f in self.src.homs(U, U2, phi_f):
                            if self.tgt.compose(beta, functor_on_morphism(self.F, f)) == right:
                                objs.append((f, t0, t1))
        edges = set()
        for a, (f, t0, t1) in enumerate(objs):
            for b, (g, s0, s1) in enumerate(objs):
                if a != b and self._transformation(f, t0, t1, g, s0, s1):
                    edges.add((a, b))
        return FiberCategory(1, psi, objs, sorted(edges))

    def _transformation(self, f, t0, t1, g, s0, s1):
        for a in w_tensor_homs(self.src, f.source, g.source, self.W):
            pa = tuple(x - 1 for x in a.phi)
            if compose_perm(s0, pa) != t0:
                continue
            for b in w_tensor_homs(self.src, f.target, g.target, self.W):
                pb = tuple(x - 1 for x in b.phi)
                if compose_perm(s1, pb) != t1:
                    continue
                if self.src.compose(b, f) == self.src.compose(g, a):
                    return True
        return False


def analyze_fiber(fib):
    """Emptiness and connected components of the underlying graph."""
    n = len(fib.objects)
    adj = [[] for _ in range(n)]
    for a, b in fib.edges:
        adj[a].append(b)
        adj[b].append(a)
    comp = [-1] * n
    sizes = []
    for start in range(n):
        if comp[start] >= 0:
            continue
        cid = len(sizes)
        comp[start] = cid
        q = deque([start])
        size = 0
        while q:
            x = q.popleft()
            size += 1
            for y in adj[x]:
                if comp[y] < 0:
                    comp[y] = cid
                    q.append(y)
        sizes.append(size)
    return {"empty": n == 0, "components": len(sizes), "component_sizes": sizes, "objects": n}


def check_sends_w_to_isos(setup, objects):
    """The composite functor maps every ``W``-tensor arrow to an isomorphism."""
    bad = []
    n = 0
    tgt = setup.tgt
    for A in objects:
        for B in objects:
            for m in w_tensor_homs(setup.src, A, B, setup.W):
                n += 1
                Fm = functor_on_morphism(setup.F, m)
                back = tuple(x + 1 for x in inverse(tuple(x - 1 for x in m.phi)))
                if not any(
                    tgt.compose(inv, Fm) == tgt.identity(Fm.source)
                    and tgt.compose(Fm, inv) == tgt.identity(Fm.target)
                    for inv in tgt.homs(Fm.target, Fm.source, back)
                ):
                    bad.append(morphism_json(m))
    return {"ok": not bad, "checked": n, "failures": bad[:10]}
