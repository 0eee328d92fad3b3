"""Finite-dimensional operad algebras over exact rationals.

A multilinear map with inputs of dimensions ``d_1..d_n`` and output of
dimension ``d`` is a numpy object array of shape ``(d, d_1, ..., d_n)``
holding ``gmpy2.mpq`` entries.  Input ``k`` of ``f . s`` feeds slot
``s(k)`` of ``f``, matching the operad conventions.

Permutation-class operations ``[sigma]`` act by the ordered product whose
word is ``sigma^-1``: ``mu(x_0, .., x_{n-1}) = x_{w(0)} x_{w(1)} ...``.
"""

import random
from itertools import permutations, product

import gmpy2
import numpy as np

from .nullgeom import PreconditionError
from .operad import (
    OperadError,
    Report,
    _ops_by_target,
    identity,
    inverse,
    op_json,
)
from .qftoperads import IntegrityError, build_O_M, cauchy_ops

mpq = gmpy2.mpq
ZERO, ONE = mpq(0), mpq(1)


class FamilyCoherenceError(OperadError):
    def __init__(self, message, square):
        super().__init__(message)
        self.square = square


# ------------------------------------------------------------ exact matrices

def zeros(shape):
    a = np.empty(shape, dtype=object)
    a.fill(ZERO)
    return a


def as_array(rows):
    a = np.array(rows, dtype=object)
    return np.vectorize(mpq, otypes=[object])(a) if a.size else zeros(a.shape)


def eye(d):
    a = zeros((d, d))
    for i in range(d):
        a[i, i] = ONE
    return a


def _echelon(M):
    """Row echelon form of a copy of ``M``; returns (rows, pivot columns)."""
    A = [list(r) for r in M]
    rows, cols = len(A), (len(A[0]) if A else 0)
    pivots, r = [], 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if A[i][c] != 0), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        inv = 1 / A[r][c]
        A[r] = [x * inv for x in A[r]]
        for i in range(rows):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return A, pivots


def rank(M):
    return len(_echelon(M)[1])


def invert(M):
    d = M.shape[0]
    if M.shape != (d, d):
        raise PreconditionError("only square matrices are invertible")
    aug = np.concatenate([M, eye(d)], axis=1)
    A, piv = _echelon(aug)
    if piv[:d] != list(range(d)):
        raise PreconditionError("matrix is singular")
    return as_array([row[d:] for row in A])


def to_json_array(a):
    if a.ndim == 0:
        return str(a[()])
    return [to_json_array(x) for x in a]


# ------------------------------------------------------------ multilinear maps

class MultilinearMap:
    """An exact multilinear map stored as a coefficient array."""

    __slots__ = ("array",)

    def __init__(self, array):
        self.array = array

    @property
    def out_dim(self):
        return self.array.shape[0]

    @property
    def in_dims(self):
        return self.array.shape[1:]

    @property
    def arity(self):
        return self.array.ndim - 1

    def __call__(self, *vectors):
        if len(vectors) != self.arity:
            raise OperadError("wrong number of arguments")
        out = self.array
        for v in reversed(vectors):
            out = np.dot(out, v)
        return out

    def partial(self, i, g):
        """``self`` with ``g`` substituted at input ``i``."""
        if g.out_dim != self.in_dims[i]:
            raise OperadError("dimension mismatch in composition")
        out = np.tensordot(self.array, g.array, axes=([1 + i], [0]))
        m = g.arity
        if m:
            tail = list(range(out.ndim - m, out.ndim))
            out = np.moveaxis(out, tail, [1 + i + k for k in range(m)])
        return MultilinearMap(out)

    def compose(self, inners):
        acc = self
        for i in range(len(inners) - 1, -1, -1):
            acc = acc.partial(i, inners[i])
        return acc

    def permute(self, sigma):
        return MultilinearMap(self.array.transpose([0] + [1 + s for s in sigma]))

    def __eq__(self, other):
        return (
            isinstance(other, MultilinearMap)
            and self.array.shape == other.array.shape
            and bool((self.array == other.array).all())
        )

    def __hash__(self):
        return hash((self.array.shape, tuple(self.array.flat)))

    def to_json(self):
        return {"shape": list(self.array.shape), "coefficients": to_json_array(self.array)}


# ------------------------------------------------------------ algebras

class OperadAlgebra:
    """Carriers (dimensions) per color and a multilinear action per operation.

    ``action_fn(op)`` returns a :class:`MultilinearMap`; results are cached.
    """

    def __init__(self, name, operad, carrier, action_fn):
        self.name = name
        self.operad = operad
        self.carrier = dict(carrier)
        self._action_fn = action_fn
        self._cache = {}

    def dim(self, color):
        return self.carrier[color]

    def action(self, op):
        got = self._cache.get(op)
        if got is None:
            got = self._action_fn(op)
            if got is None:
                raise PreconditionError(f"{self.name}: no action given for an operation into {op.target!r}")
            self._cache[op] = got
        return got


def _expected_shape(A, op):
    return (A.dim(op.target),) + tuple(A.dim(c) for c in op.sources)


def check_algebra(A, cap=None):
    """Shapes, units, equivariance and partial composition on every enumerated instance."""
    O = A.operad
    missing = [c for c in O.colors if c not in A.carrier]
    if missing:
        raise PreconditionError(f"carrier is not total: {missing[:5]}")
    cap = O.arity_cap if cap is None else cap
    rep = Report(f"{A.name} algebra")
    every = O.all_operations(cap)
    into = _ops_by_target(O, cap)
    for c in O.colors:
        rep.tick("unit")
        if A.action(O.unit(c)) != MultilinearMap(eye(A.dim(c))):
            rep.fail("unit", color=c)
    for f in every:
        Af = A.action(f)
        rep.tick("shape")
        if Af.array.shape != _expected_shape(A, f):
            rep.fail("shape", op=op_json(f))
            continue
        n = len(f.sources)
        for s in permutations(range(n)):
            if s == identity(n):
                continue
            rep.tick("equivariance")
            if A.action(O.act(f, s)) != Af.permute(s):
                rep.fail("equivariance", op=op_json(f), sigma=list(s))
        for i in range(n):
            for g in into.get(f.sources[i], ()):
                if n + len(g.sources) - 1 > cap:
                    continue
                rep.tick("composition")
                if A.action(O.partial(f, i, g)) != Af.partial(i, A.action(g)):
                    rep.fail("composition", f=op_json(f), i=i, g=op_json(g))
    return rep


def pullback(F, A):
    """Algebra over ``F.source`` with carriers and actions read through ``F``."""
    if F.target is not A.operad:
        raise PreconditionError("the algebra lives over a different operad than the multifunctor's target")
    return OperadAlgebra(
        f"{F.name}^*({A.name})", F.source,
        {c: A.dim(F.color(c)) for c in F.source.colors},
        lambda op: A.action(F(op)),
    )


def strict_timeslice(A, W):
    """Is every operation of ``W`` sent to an invertible matrix?"""
    return not timeslice_failures(A, W)


def timeslice_failures(A, W):
    bad = []
    for w in sorted(W):
        M = A.action(w).array
        if M.shape[0] != M.shape[1] or rank(M) != M.shape[0]:
            bad.append(w)
    return bad


def einstein_causality(A, site):
    """Compare both orderings of the product on every causally disjoint pair in a common target.

    Returns ``(checked, failures)``.  The two orderings are built from the
    binary operations ``(V, V) -> V`` composed with the unary inclusions,
    so the comparison does not rely on the quotient.
    """
    O = A.operad
    checked, failures = 0, []
    for V in site.names:
        ops = O.ops((V, V), V)
        if len(ops) < 2:
            continue
        order = {op.payload: op for op in ops}
        mu, mu_op = order[(0, 1)], order[(1, 0)]
        inside = [U for U in site.names if site.hom(U, V) is not None]
        for U1, U2 in product(inside, repeat=2):
            if U1 >= U2 or not site.is_orthogonal(U1, U2):
                continue
            i1 = A.action(O.ops((U1,), V)[0])
            i2 = A.action(O.ops((U2,), V)[0])
            checked += 1
            a = A.action(mu).compose([i1, i2])
            b = A.action(mu_op).compose([i1, i2])
            if a != b:
                failures.append({"target": V, "pair": [U1, U2]})
    return checked, failures


# ------------------------------------------------------------ local algebra data

class LocalAlgebra:
    """A unital associative algebra: structure constants ``m[k, i, j]`` and unit vector."""

    def __init__(self, name, mult, unit):
        self.name = name
        self.mult = mult
        self.unit = unit

    @property
    def dim(self):
        return self.unit.shape[0]

    def multiply(self, x, y):
        return np.dot(np.dot(self.mult, y), x)

    def transport(self, g):
        """The isomorphic algebra on the same space with ``g`` as the structure map ``new -> old``."""
        gi = invert(g)
        m = np.einsum("kl,lab,ai,bj->kij", gi, self.mult, g, g, dtype=object)
        return LocalAlgebra(self.name, m, np.dot(gi, self.unit))

    def ordered_product(self, n):
        """The n-fold product ``x_1 ... x_n`` as a multilinear map."""
        if n == 0:
            return MultilinearMap(self.unit.copy())
        acc = MultilinearMap(eye(self.dim))
        m = MultilinearMap(self.mult)
        for _ in range(n - 1):
            acc = m.partial(0, acc)
        return acc

    def associativity_defects(self):
        d = self.dim
        basis = eye(d)
        bad = []
        for i, j, k in product(range(d), repeat=3):
            x, y, z = basis[i], basis[j], basis[k]
            if (self.multiply(self.multiply(x, y), z) != self.multiply(x, self.multiply(y, z))).any():
                bad.append((i, j, k))
        for i in range(d):
            if (self.multiply(self.unit, basis[i]) != basis[i]).any() or (
                self.multiply(basis[i], self.unit) != basis[i]
            ).any():
                bad.append(("unit", i))
        return bad

    def is_commutative(self):
        return bool((self.mult == self.mult.transpose(0, 2, 1)).all())


def _algebra_from_basis_products(name, table, unit):
    d = len(unit)
    m = zeros((d, d, d))
    for (i, j), vec in table.items():
        for k, c in enumerate(vec):
            m[k, i, j] = mpq(c)
    return LocalAlgebra(name, m, as_array(unit))


def upper_triangular():
    """2x2 upper triangular matrices on the basis e11, e12, e22 (non-commutative)."""
    e11, e12, e22 = (1, 0, 0), (0, 1, 0), (0, 0, 1)
    z = (0, 0, 0)
    t = {
        (0, 0): e11, (0, 1): e12, (0, 2): z,
        (1, 0): z, (1, 1): z, (1, 2): e12,
        (2, 0): z, (2, 1): z, (2, 2): e22,
    }
    return _algebra_from_basis_products("upper-triangular", t, (1, 0, 1))


def lower_triangular():
    """The opposite of :func:`upper_triangular`."""
    U = upper_triangular()
    return LocalAlgebra("lower-triangular", U.mult.transpose(0, 2, 1).copy(), U.unit.copy())


def diagonal(d=2):
    t = {(i, j): tuple(1 if (k == i == j) else 0 for k in range(d)) for i in range(d) for j in range(d)}
    return _algebra_from_basis_products(f"diagonal{d}", t, (1,) * d)


def truncated_polynomials(d):
    """``Q[x]/(x^d)`` on the basis 1, x, .., x^(d-1)."""
    t = {(i, j): tuple(1 if k == i + j else 0 for k in range(d)) for i in range(d) for j in range(d)}
    return _algebra_from_basis_products(f"Q[x]/x^{d}", t, (1,) + (0,) * (d - 1))


def scalars():
    return _algebra_from_basis_products("Q", {(0, 0): (1,)}, (1,))


# Each entry: (large algebra, commutative subalgebra, embedding small -> large)
SAMPLE_PAIRS = {
    "triangular/diagonal": (upper_triangular, lambda: diagonal(2), [[1, 0], [0, 0], [0, 1]]),
    "opposite-triangular/diagonal": (lower_triangular, lambda: diagonal(2), [[1, 0], [0, 0], [0, 1]]),
    "triangular/scalars": (upper_triangular, scalars, [[1], [0], [1]]),
    "truncated/subring": (lambda: truncated_polynomials(3), lambda: truncated_polynomials(2), [[1, 0], [0, 0], [0, 1]]),
    "diagonal/scalars": (lambda: diagonal(3), scalars, [[1], [1], [1]]),
}


def random_invertible(rng, d, spread=3):
    while True:
        g = as_array([[rng.randint(-spread, spread) for _ in range(d)] for _ in range(d)])
        if rank(g) == d:
            return g


# ------------------------------------------------------------ AQFT-style algebras

class SiteAlgebraData:
    """Local algebras per object and algebra maps per admissible inclusion."""

    def __init__(self, site, local, maps):
        self.site = site
        self.local = dict(local)
        self.maps = dict(maps)

    def defects(self):
        out = []
        for n, alg in self.local.items():
            if alg.associativity_defects():
                out.append({"object": n, "problem": "not a unital associative algebra"})
        for (a, b), f in self.maps.items():
            A, B = self.local[a], self.local[b]
            if (np.dot(f, A.unit) != B.unit).any():
                out.append({"inclusion": [a, b], "problem": "does not preserve the unit"})
            basis = eye(A.dim)
            for i, j in product(range(A.dim), repeat=2):
                lhs = np.dot(f, A.multiply(basis[i], basis[j]))
                rhs = B.multiply(np.dot(f, basis[i]), np.dot(f, basis[j]))
                if (lhs != rhs).any():
                    out.append({"inclusion": [a, b], "problem": "not multiplicative"})
                    break
        for (a, b) in self.maps:
            for c in self.site.names:
                if (b, c) in self.maps and (a, c) in self.maps:
                    if (np.dot(self.maps[b, c], self.maps[a, b]) != self.maps[a, c]).any():
                        out.append({"inclusions": [a, b, c], "problem": "not functorial"})
        return out


def aqft_action(O, data):
    """The permutation-class action built from ordered products and pushforwards."""
    prods = {}

    def action(op):
        V = op.target
        alg = data.local[V]
        n = len(op.sources)
        key = (V, n)
        if key not in prods:
            prods[key] = alg.ordered_product(n)
        word = inverse(op.payload)
        pushes = [MultilinearMap(data.maps[op.sources[word[p]], V]) for p in range(n)]
        return prods[key].compose(pushes).permute(op.payload)

    return action


def aqft_algebra(name, site, data, arity_cap=3, operad=None):
    O = operad if operad is not None else build_O_M(site, arity_cap)
    return OperadAlgebra(name, O, {n: data.local[n].dim for n in site.names}, aqft_action(O, data))


def sample_data(site, kind, seed, twist=True, break_timeslice=False):
    """Sample local data on a site.

    Objects that are Cauchy in the ambient carry the large algebra; the
    others carry the commutative subalgebra, so causally disjoint images
    commute.  Each object receives a seeded basis change.  With
    ``break_timeslice`` the large algebra sits instead on everything
    containing the target of the first non-identity Cauchy inclusion, whose
    source keeps the small one, so that inclusion is not invertible.
    """
    big_f, small_f, emb = SAMPLE_PAIRS[kind]
    big, small = big_f(), small_f()
    emb = as_array(emb)
    rng = random.Random(seed)
    M = site.names[0]
    if break_timeslice:
        cut = next(((a, b) for (a, b), c in sorted(site.inclusion.items()) if a != b and c.cauchy), None)
        if cut is None:
            raise PreconditionError("the site has no non-identity Cauchy inclusion to break")
        top = {n for n in site.names if site.hom(cut[1], n) is not None}

    def is_big(n):
        if break_timeslice:
            return n in top
        return site.development[n] == site.region[M]

    local, twists = {}, {}
    for n in site.names:
        base = big if is_big(n) else small
        g = random_invertible(rng, base.dim) if twist else eye(base.dim)
        twists[n] = g
        local[n] = base.transport(g)
    maps = {}
    for a in site.names:
        for b in site.names:
            if site.hom(a, b) is None:
                continue
            if is_big(a) == is_big(b):
                core = eye(local[a].dim)
            elif is_big(b):
                core = emb
            else:
                raise IntegrityError(f"{a!r} carries the large algebra but {b!r} does not")
            maps[a, b] = np.dot(invert(twists[b]), np.dot(core, twists[a]))
    return SiteAlgebraData(site, local, maps)


def sample_algebras(site, count=10, seed=0, arity_cap=3, operad=None):
    """``count`` strict-time-slice algebras over the site's permutation-class operad."""
    O = operad if operad is not None else build_O_M(site, arity_cap)
    kinds = sorted(SAMPLE_PAIRS)
    out = []
    for k in range(count):
        kind = kinds[k % len(kinds)]
        data = sample_data(site, kind, seed * 1000 + k, twist=k >= len(kinds) or k % 2 == 1)
        out.append(aqft_algebra(f"{kind}#{k}", site, data, operad=O))
    return out


# ------------------------------------------------------------ inverse of the comparison

def _mult_pair_names(site, V):
    pair = site.mult_pairs.get(V)
    if pair is None:
        raise PreconditionError(f"object {V!r} has no designated product pair", f"/mult_pairs/{V}")
    names = [site.name_of(C) for C in pair]
    if None in names:
        raise PreconditionError(f"the product pair of {V!r} is not made of site objects", f"/mult_pairs/{V}")
    return names


def invert_comparison(F, site, W, O=None):
    """Build a permutation-class algebra from a time-ordered-tuple algebra.

    The product on ``F(V)`` is the factorization product of V's designated
    pair ``(C+, C-)``, with the later member ``C+`` carrying the first
    factor, precomposed with the inverses of ``F(C+ -> V)`` and
    ``F(C- -> V)``.  The unit is the nullary operation.
    """
    bad = timeslice_failures(F, W)
    if bad:
        raise PreconditionError(f"the algebra fails strict time-slice on {len(bad)} Cauchy operations")
    tP = F.operad
    pairs = {V: _mult_pair_names(site, V) for V in site.names}
    O = O if O is not None else build_O_M(site, tP.arity_cap)
    local, maps = {}, {}
    for V in site.names:
        Cp, Cm = pairs[V]
        ops = tP.ops((Cp, Cm), V)
        if not ops:
            raise IntegrityError(f"the designated pair of {V!r} has no factorization product")
        fac = F.action(ops[0])
        ip = invert(F.action(tP.ops((Cp,), V)[0]).array)
        im = invert(F.action(tP.ops((Cm,), V)[0]).array)
        m = fac.compose([MultilinearMap(ip), MultilinearMap(im)]).array
        unit = F.action(tP.ops((), V)[0]).array
        local[V] = LocalAlgebra(f"F({V})", m, unit)
        if local[V].associativity_defects():
            raise IntegrityError(f"the constructed product on {V!r} is not unital associative")
    for a in site.names:
        for b in site.names:
            if site.hom(a, b) is not None:
                maps[a, b] = F.action(tP.ops((a,), b)[0]).array
    data = SiteAlgebraData(site, local, maps)
    return OperadAlgebra(f"inverse({F.name})", O, {n: local[n].dim for n in site.names}, aqft_action(O, data))


def same_algebra(A, B, cap=None):
    """Exact equality of carriers and of every enumerated action."""
    if A.carrier != B.carrier:
        return False
    for op in A.operad.all_operations(cap):
        if A.action(op) != B.action(op):
            return False
    return True


# ------------------------------------------------------------ decomposition and assembly

class GlobalFamily:
    """Per-member algebras over the member's own operad, plus comparison maps.

    ``alpha[M, N][U]`` is the component at ``U`` of the comparison for the
    inclusion ``M -> N``; it maps ``algebras[M]`` at ``U`` to
    ``algebras[N]`` at ``U``.
    """

    def __init__(self, site, members, subsites, algebras, alpha):
        self.site = site
        self.members = tuple(members)
        self.subsites = subsites
        self.algebras = algebras
        self.alpha = alpha

    def inclusions(self):
        return [(a, b) for a in self.members for b in self.members if self.site.hom(a, b) is not None]


def _member_sites(site, members):
    return {M: site.subsite(M) for M in members}


def decompose(A, site, members=None, arity_cap=None):
    """Restrict a site-wide algebra to each member's sub-site; comparisons are identities."""
    cap = A.operad.arity_cap if arity_cap is None else arity_cap
    members = site.names if members is None else members
    subs = _member_sites(site, members)
    algebras, alpha = {}, {}
    for M in members:
        S = subs[M]
        OM = build_O_M(S, cap)
        algebras[M] = OperadAlgebra(
            f"{A.name}|{M}", OM, {n: A.dim(n) for n in S.names}, A.action,
        )
    for M in members:
        for N in members:
            if site.hom(M, N) is not None:
                alpha[M, N] = {U: eye(A.dim(U)) for U in subs[M].names}
    return GlobalFamily(site, members, subs, algebras, alpha)


def assemble(fam, operad):
    """A site-wide algebra whose value on ``M`` is the member algebra at its top object.

    An operation ``(M_1..M_n) -> N`` acts by the member algebra of ``N``
    precomposed with the comparison components at each ``M_i``.
    """
    if set(fam.members) != set(operad.colors):
        raise PreconditionError("every color of the operad must be a member of the family")

    def action(op):
        N = op.target
        inner = fam.algebras[N].action(op)
        legs = [MultilinearMap(fam.alpha[Mi, N][Mi]) for Mi in op.sources]
        return inner.compose(legs)

    carrier = {M: fam.algebras[M].dim(M) for M in fam.members}
    return OperadAlgebra(f"assemble({fam.site.ambient_name})", operad, carrier, action)


def check_family(fam, cap=None):
    """Raise :class:`FamilyCoherenceError` on the first failed unit, cocycle or naturality square."""
    for M in fam.members:
        a = fam.alpha.get((M, M))
        if a is None:
            raise FamilyCoherenceError(f"missing comparison for the identity of {M!r}", {"identity": M})
        for U, c in a.items():
            if (c != eye(c.shape[0])).any():
                raise FamilyCoherenceError(f"comparison of the identity of {M!r} is not the identity at {U!r}",
                                           {"identity": M, "at": U})
    incl = fam.inclusions()
    for (L, M) in incl:
        for (M2, N) in incl:
            if M2 != M or (L, N) not in fam.alpha:
                continue
            for U in fam.subsites[L].names:
                lhs = np.dot(fam.alpha[M, N][U], fam.alpha[L, M][U])
                if (lhs != fam.alpha[L, N][U]).any():
                    raise FamilyCoherenceError("cocycle square does not commute",
                                               {"cocycle": [L, M, N], "at": U})
    for (M, N) in incl:
        AM, AN = fam.algebras[M], fam.algebras[N]
        comp = fam.alpha[M, N]
        for op in AM.operad.all_operations(cap):
            lhs = MultilinearMap(comp[op.target]).compose([AM.action(op)])
            rhs = AN.action(op).compose([MultilinearMap(comp[c]) for c in op.sources])
            if lhs != rhs:
                raise FamilyCoherenceError("comparison is not natural",
                                           {"naturality": [M, N], "operation": op_json(op)})


def twisted_family(fam, seed):
    """An isomorphic family: every member algebra is transported along seeded basis changes."""
    rng = random.Random(seed)
    h = {}
    for M in fam.members:
        for U in fam.subsites[M].names:
            h[M, U] = random_invertible(rng, fam.algebras[M].dim(U))
    hinv = {k: invert(v) for k, v in h.items()}
    algebras = {}
    for M in fam.members:
        base = fam.algebras[M]

        def action(op, base=base, M=M):
            legs = [MultilinearMap(hinv[M, c]) for c in op.sources]
            return MultilinearMap(h[M, op.target]).compose([base.action(op).compose(legs)])

        algebras[M] = OperadAlgebra(f"{base.name}~", base.operad, base.carrier, action)
    alpha = {
        (M, N): {U: np.dot(h[N, U], np.dot(comp[U], hinv[M, U])) for U in comp}
        for (M, N), comp in fam.alpha.items()
    }
    return GlobalFamily(fam.site, fam.members, fam.subsites, algebras, alpha)


def family_iso_check(fam, cap=None):
    """Check ``decompose(assemble(fam))`` against ``fam`` through the components ``alpha[U, M][U]``.

    Returns a list of failures; empty means the components form an
    isomorphism of families.
    """
    site = fam.site
    O = build_O_M(site, fam.algebras[fam.members[0]].operad.arity_cap if cap is None else cap)
    back = decompose(assemble(fam, O), site, fam.members, cap)
    failures = []
    for M in fam.members:
        comp = {U: fam.alpha[U, M][U] for U in fam.subsites[M].names}
        for U, c in comp.items():
            if c.shape[0] != c.shape[1] or rank(c) != c.shape[0]:
                failures.append({"member": M, "at": U, "problem": "component not invertible"})
        src, dst = back.algebras[M], fam.algebras[M]
        for op in dst.operad.all_operations(cap):
            lhs = MultilinearMap(comp[op.target]).compose([src.action(op)])
            rhs = dst.action(op).compose([MultilinearMap(comp[c]) for c in op.sources])
            if lhs != rhs:
                failures.append({"member": M, "operation": op_json(op), "problem": "not natural"})
                break
    for (M, N) in fam.inclusions():
        for U in fam.subsites[M].names:
            # back has identity comparisons
            lhs = np.dot(fam.alpha[M, N][U], fam.alpha[U, M][U])
            if (lhs != fam.alpha[U, N][U]).any():
                failures.append({"inclusion": [M, N], "at": U, "problem": "comparison square"})
    return failures


def member_timeslice(fam):
    """Members whose algebra fails strict time-slice on its own Cauchy operations."""
    return [M for M in fam.members
            if not strict_timeslice(fam.algebras[M], cauchy_ops(fam.algebras[M].operad, fam.subsites[M]))]


def nesting_depth(site, members=None):
    """Length of the longest chain of proper inclusions among members."""
    members = site.names if members is None else members
    depth = {}
    for M in sorted(members, key=lambda n: len(site.subsite(n))):
        below = [depth[U] for U in depth if U != M and site.hom(U, M) is not None]
        depth[M] = 1 + max(below, default=0)
    return max(depth.values(), default=0)
