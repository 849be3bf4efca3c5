"""Concrete finite groups and the operations the constructions need.

Elements are opaque hashable ids: integers (coset numbers of the regular
representation), tuples (direct products), or parent ids (quotient coset
representatives, subgroups viewed as groups).  A subclass provides _mul and
_inv; everything else is generic: canonical words (shortlex BFS over the
positive generators), subgroup closures, normal closures, commutator
subgroups, central/derived series, quotients, and generator-image
homomorphisms verified at construction time.

All operations are deterministic: element lists have a stable order, BFS
is used for canonical words, and any sampling uses fixed seeds.
"""

from __future__ import annotations

import math
import random
from functools import reduce

from .coset import CosetTable, EnumerationLimits, enumerate_cosets
from .words import Presentation, Word

_ASSOC_SAMPLES = 64
_HOM_EXHAUSTIVE_MAX = 64
_HOM_SAMPLES = 10_000
_ELEMENTWISE_CAP = 300_000


class HomomorphismError(ValueError):
    """A generator-image map is not a homomorphism (or maps outside)."""


class FiniteGroup:
    """Base class: a finite group with a stable element list.

    `generators` may contain repeats or the identity; positional alignment
    with construction data is part of the contract (generator-image maps
    rely on it).
    """

    def __init__(self, elements, identity, generators, name=None, presentation=None):
        self.elements = list(elements)
        self.identity = identity
        self.generators = list(generators)
        self.name = name
        self.presentation = presentation
        self._index = {e: i for i, e in enumerate(self.elements)}
        if len(self._index) != len(self.elements):
            raise ValueError("duplicate elements")
        self._words: list[tuple[int, ...]] | None = None
        self._inv_cache: dict = {}

    # subclasses provide:
    def _mul(self, a, b):  # pragma: no cover - abstract
        raise NotImplementedError

    def _inv(self, a):  # pragma: no cover - abstract
        raise NotImplementedError

    # -- generic arithmetic ---------------------------------------------------

    @property
    def order(self) -> int:
        return len(self.elements)

    def mul(self, a, b):
        return self._mul(a, b)

    def inv(self, a):
        r = self._inv_cache.get(a)
        if r is None:
            r = self._inv(a)
            self._inv_cache[a] = r
        return r

    def conj(self, a, b):
        """a^b = b^-1 a b."""
        return self.mul(self.inv(b), self.mul(a, b))

    def comm(self, a, b):
        """[a, b] = a^-1 b^-1 a b."""
        return self.mul(self.inv(self.mul(b, a)), self.mul(a, b))

    def index(self, e) -> int:
        return self._index[e]

    def element_order(self, a) -> int:
        k = 1
        x = a
        while x != self.identity:
            x = self.mul(x, a)
            k += 1
        return k

    def is_abelian(self) -> bool:
        gens = self.generators
        return all(
            self.mul(g, h) == self.mul(h, g)
            for i, g in enumerate(gens)
            for h in gens[i + 1 :]
        )

    # -- canonical words -------------------------------------------------------

    @property
    def words(self) -> list[tuple[int, ...]]:
        """Shortlex-BFS canonical words (positive 1-based letters), aligned
        with `elements`."""
        if self._words is None:
            self._words = self._compute_words()
        return self._words

    def _compute_words(self):
        order = [self.identity]
        words = {self.identity: ()}
        for u in order:
            wu = words[u]
            for i, g in enumerate(self.generators):
                v = self.mul(u, g)
                if v not in words:
                    words[v] = wu + (i + 1,)
                    order.append(v)
        if len(order) != len(self.elements):
            raise ValueError(
                f"generators only reach {len(order)} of {len(self.elements)} elements"
            )
        return [words[e] for e in self.elements]

    def word_of(self, e) -> tuple[int, ...]:
        return self.words[self._index[e]]

    def canonical_word(self, e) -> Word:
        return Word(self.word_of(e))

    def eval_letters(self, letters, images=None):
        """Evaluate a signed-letter word over `images` (default: own
        generators)."""
        if images is None:
            images = self.generators
        x = self.identity
        for a in letters:
            x = self.mul(x, images[a - 1]) if a > 0 else self.mul(x, self.inv(images[-a - 1]))
        return x

    # -- construction-time sanity ----------------------------------------------

    def _self_check(self):
        e = self.identity
        if self.mul(e, e) != e:
            raise ValueError("identity is not idempotent")
        for a in self.elements:
            if self.mul(a, self.inv(a)) != e:
                raise ValueError("inverse law fails")
        rng = random.Random(0x5EED)
        els = self.elements
        for _ in range(_ASSOC_SAMPLES):
            a, b, c = (els[rng.randrange(len(els))] for _ in range(3))
            if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)):
                raise ValueError("associativity fails on a sampled triple")

    def __repr__(self):
        label = self.name or type(self).__name__
        return f"<{label}: order {self.order}>"


class PermGroup(FiniteGroup):
    """Regular representation read off a completed coset table over the
    trivial subgroup: elements are coset numbers, generator action is a
    column lookup."""

    def __init__(self, table: CosetTable, name=None):
        if table.subgroup_words:
            raise ValueError("regular representation needs a trivial-subgroup table")
        self.table = table
        self.cols = [list(col) for col in zip(*table.rows)] if table.n else []
        n = table.n
        super().__init__(
            range(n),
            0,
            [table.rows[0][2 * i] for i in range(table.ngens)],
            name=name,
            presentation=table.presentation,
        )
        self._words = list(table.words)
        self._self_check()

    def _mul(self, a, b):
        for k in self._words[b]:
            a = self.cols[2 * (k - 1)][a]
        return a

    def _inv(self, a):
        x = 0
        for k in reversed(self._words[a]):
            x = self.cols[2 * (k - 1) + 1][x]
        return x


class TupleGroup(FiniteGroup):
    """Direct product with componentwise arithmetic; elements are tuples."""

    def __init__(self, factors, name=None):
        import itertools

        self.factors = list(factors)
        elements = itertools.product(*(f.elements for f in self.factors))
        identity = tuple(f.identity for f in self.factors)
        generators = []
        for i, f in enumerate(self.factors):
            for g in f.generators:
                emb = list(identity)
                emb[i] = g
                generators.append(tuple(emb))
        super().__init__(elements, identity, generators, name=name)
        self._self_check()

    def _mul(self, a, b):
        return tuple(f.mul(x, y) for f, x, y in zip(self.factors, a, b))

    def _inv(self, a):
        return tuple(f.inv(x) for f, x in zip(self.factors, a))

    def embed(self, i: int, x):
        e = list(self.identity)
        e[i] = x
        return tuple(e)

    def project(self, coords) -> "Homomorphism":
        """Projection onto the sub-product of the given factor positions."""
        target = TupleGroup([self.factors[i] for i in coords]) if len(coords) > 1 else None
        if target is None:
            (i,) = coords
            images = [a[i] for a in self.generators]
            return Homomorphism(self, self.factors[i], images)
        images = [tuple(a[i] for i in coords) for a in self.generators]
        return Homomorphism(self, target, images)


class SubgroupAsGroup(FiniteGroup):
    """A subgroup promoted to a standalone group (same element ids)."""

    def __init__(self, sub: "Subgroup", name=None):
        self.parent = sub.parent
        self.subgroup = sub
        gens = list(sub.gens)
        super().__init__(sub.sorted_elements(), sub.parent.identity, gens, name=name)
        self._self_check()

    def _mul(self, a, b):
        return self.parent.mul(a, b)

    def _inv(self, a):
        return self.parent.inv(a)


class QuotientGroup(FiniteGroup):
    """G/N with coset representatives as elements (first element of each
    coset in parent order).  `projection` is the canonical epimorphism."""

    def __init__(self, parent: FiniteGroup, normal: "Subgroup", name=None):
        if normal.parent is not parent:
            raise ValueError("subgroup belongs to a different group")
        if not normal.is_normal():
            raise ValueError("cannot quotient by a non-normal subgroup")
        self.parent = parent
        self.normal = normal
        rep: dict = {}
        reps = []
        nsorted = normal.sorted_elements()
        for e in parent.elements:
            if e in rep:
                continue
            reps.append(e)
            for n in nsorted:
                rep[parent.mul(e, n)] = e
        self.rep_map = rep
        super().__init__(
            reps,
            rep[parent.identity],
            [rep[g] for g in parent.generators],
            name=name,
        )
        self._self_check()
        self.projection = Homomorphism(parent, self, list(self.generators))

    def _mul(self, a, b):
        return self.rep_map[self.parent.mul(a, b)]

    def _inv(self, a):
        return self.rep_map[self.parent.inv(a)]


class Subgroup:
    """A subgroup given by its explicit element set plus a small generating
    set; hangs off a parent FiniteGroup."""

    def __init__(self, parent: FiniteGroup, elements, gens):
        self.parent = parent
        self.elements = frozenset(elements)
        self.gens = tuple(gens)
        self._sorted = None

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, e):
        return e in self.elements

    def __eq__(self, other):
        return (
            isinstance(other, Subgroup)
            and self.parent is other.parent
            and self.elements == other.elements
        )

    def __le__(self, other):
        return self.elements <= other.elements

    def __hash__(self):
        return hash((id(self.parent), self.elements))

    def sorted_elements(self) -> list:
        if self._sorted is None:
            idx = self.parent._index
            self._sorted = sorted(self.elements, key=idx.__getitem__)
        return self._sorted

    def is_normal(self) -> bool:
        G = self.parent
        return all(
            G.conj(h, g) in self.elements
            for h in self.elements
            for g in G.generators
        )

    def is_abelian(self) -> bool:
        G = self.parent
        gens = self.gens
        return all(
            G.mul(a, b) == G.mul(b, a)
            for i, a in enumerate(gens)
            for b in gens[i + 1 :]
        )

    def as_group(self, name=None) -> SubgroupAsGroup:
        return SubgroupAsGroup(self, name=name)

    def __repr__(self):
        return f"<Subgroup of order {self.order} in {self.parent!r}>"


def _closure_set(G: FiniteGroup, seeds) -> set:
    out = {G.identity}
    frontier = [G.identity]
    seeds = [s for s in seeds if s != G.identity]
    while frontier:
        x = frontier.pop()
        for s in seeds:
            y = G.mul(x, s)
            if y not in out:
                out.add(y)
                frontier.append(y)
    return out


def _thin_gens(G: FiniteGroup, candidates) -> list:
    """Greedy small generating set drawn from `candidates` (order-stable)."""
    gens: list = []
    have = {G.identity}
    for x in candidates:
        if x not in have:
            gens.append(x)
            have = _closure_set(G, gens)
    return gens


def subgroup_closure(G: FiniteGroup, seeds) -> Subgroup:
    """The subgroup generated by `seeds` (finite, so positive products
    suffice)."""
    seeds = list(dict.fromkeys(seeds))
    gens = _thin_gens(G, seeds)
    return Subgroup(G, _closure_set(G, gens), gens)


def trivial_subgroup(G: FiniteGroup) -> Subgroup:
    return Subgroup(G, [G.identity], ())


def whole_subgroup(G: FiniteGroup) -> Subgroup:
    return Subgroup(G, G.elements, tuple(_thin_gens(G, G.generators)))


def normal_closure(G: FiniteGroup, seeds) -> Subgroup:
    """Smallest normal subgroup of G containing `seeds`."""
    gens = _thin_gens(G, list(dict.fromkeys(seeds)))
    have = _closure_set(G, gens)
    changed = True
    while changed:
        changed = False
        for h in sorted(have, key=G._index.__getitem__):
            for g in G.generators:
                c = G.conj(h, g)
                if c not in have:
                    gens.append(c)
                    have = _closure_set(G, gens)
                    changed = True
    return Subgroup(G, have, _thin_gens(G, gens))


def intersection(A: Subgroup, B: Subgroup) -> Subgroup:
    if A.parent is not B.parent:
        raise ValueError("subgroups of different parents")
    els = A.elements & B.elements
    G = A.parent
    idx = G._index
    return Subgroup(G, els, _thin_gens(G, sorted(els, key=idx.__getitem__)))


def _as_subgroup(X) -> Subgroup:
    return whole_subgroup(X) if isinstance(X, FiniteGroup) else X


def commutator_subgroup(A, B, method: str = "auto") -> Subgroup:
    """[A, B]: the subgroup generated by all commutators [a, b].

    'elementwise' takes all |A|*|B| commutators (the oracle); 'generated'
    closes generator commutators under conjugation by gens of <A, B> (the
    fast path, cross-checked against the oracle in tests); 'auto' picks by
    size.
    """
    A = _as_subgroup(A)
    B = _as_subgroup(B)
    if A.parent is not B.parent:
        raise ValueError("subgroups of different parents")
    G = A.parent
    if method == "auto":
        method = "elementwise" if A.order * B.order <= _ELEMENTWISE_CAP else "generated"
    if method == "elementwise":
        seen = set()
        for a in A.sorted_elements():
            for b in B.sorted_elements():
                seen.add(G.comm(a, b))
        return subgroup_closure(G, sorted(seen, key=G._index.__getitem__))
    if method != "generated":
        raise ValueError(f"unknown method {method!r}")
    conjugators = list(dict.fromkeys(list(A.gens) + list(B.gens)))
    gens = _thin_gens(G, [G.comm(a, b) for a in A.gens for b in B.gens])
    have = _closure_set(G, gens)
    changed = True
    while changed:
        changed = False
        for h in sorted(have, key=G._index.__getitem__):
            for g in conjugators:
                c = G.conj(h, g)
                if c not in have:
                    gens.append(c)
                    have = _closure_set(G, gens)
                    changed = True
    return Subgroup(G, have, _thin_gens(G, gens))


def center(G: FiniteGroup) -> Subgroup:
    gens = G.generators
    els = [
        x
        for x in G.elements
        if all(G.mul(x, g) == G.mul(g, x) for g in gens)
    ]
    return Subgroup(G, els, _thin_gens(G, els))


def derived_subgroup(G: FiniteGroup) -> Subgroup:
    return commutator_subgroup(whole_subgroup(G), whole_subgroup(G))


def lower_central_series(G: FiniteGroup) -> list[Subgroup]:
    """G = gamma_1 >= gamma_2 = [G, gamma_1] >= ... until it stabilizes."""
    series = [whole_subgroup(G)]
    while True:
        nxt = commutator_subgroup(whole_subgroup(G), series[-1])
        if nxt == series[-1]:
            return series
        series.append(nxt)


def derived_series(G: FiniteGroup) -> list[Subgroup]:
    series = [whole_subgroup(G)]
    while True:
        cur = series[-1]
        nxt = commutator_subgroup(cur, cur)
        if nxt == cur:
            return series
        series.append(nxt)


def nilpotency_class(G: FiniteGroup) -> int | None:
    series = lower_central_series(G)
    if series[-1].order != 1:
        return None
    return len(series) - 1


def is_soluble(G: FiniteGroup) -> bool:
    return derived_series(G)[-1].order == 1


def quotient(G: FiniteGroup, N: Subgroup, name=None) -> QuotientGroup:
    return QuotientGroup(G, N, name=name)


def power_subgroup(G: FiniteGroup, k: int) -> Subgroup:
    """The subgroup generated by all k-th powers."""
    pows = {pow_element(G, x, k) for x in G.elements}
    return subgroup_closure(G, sorted(pows, key=G._index.__getitem__))


def pow_element(G: FiniteGroup, x, k: int):
    r = G.identity
    b = x if k >= 0 else G.inv(x)
    for _ in range(abs(k)):
        r = G.mul(r, b)
    return r


def exponent(G: FiniteGroup) -> int:
    return reduce(math.lcm, (G.element_order(x) for x in G.elements), 1)


def p_group_data(G: FiniteGroup) -> tuple[int, int]:
    """(p, k) with |G| = p^k; raises if the order is not a prime power."""
    n = G.order
    if n == 1:
        raise ValueError("trivial group has no canonical prime")
    p = None
    for q in range(2, n + 1):
        if n % q == 0:
            p = q
            break
    k = 0
    m = n
    while m % p == 0:
        m //= p
        k += 1
    if m != 1:
        raise ValueError(f"order {n} is not a prime power")
    return p, k


def minimal_generator_count(G: FiniteGroup) -> int:
    """d(G) via the Frattini quotient G / (G^p [G,G]) for a p-group."""
    p, _ = p_group_data(G)
    der = derived_subgroup(G)
    pows = power_subgroup(G, p)
    frat = subgroup_closure(G, list(der.gens) + list(pows.gens))
    q = G.order // frat.order
    d = 0
    while q > 1:
        q //= p
        d += 1
    return d


def is_powerful(G: FiniteGroup) -> bool:
    """G' <= G^p for odd p; G' <= G^4 for p = 2."""
    p, _ = p_group_data(G)
    der = derived_subgroup(G)
    target = power_subgroup(G, p if p != 2 else 4)
    return der.elements <= target.elements


class Homomorphism:
    """Generator-image homomorphism, verified at construction.

    If the domain carries a presentation, every relator is checked to map
    to the identity (complete proof of well-definedness); the product law
    f(xy) = f(x)f(y) is additionally checked, exhaustively for small
    domains and on seeded samples otherwise.
    """

    def __init__(self, domain: FiniteGroup, codomain: FiniteGroup, images, check=True):
        if len(images) != len(domain.generators):
            raise HomomorphismError(
                f"{len(images)} images for {len(domain.generators)} generators"
            )
        for im in images:
            if im not in codomain._index:
                raise HomomorphismError("image outside the codomain")
        self.domain = domain
        self.codomain = codomain
        self.images = list(images)
        self._cache = {domain.identity: codomain.identity}
        if check:
            self._verify()

    def _verify(self):
        pres = self.domain.presentation
        if pres is not None:
            for k, rel in enumerate(pres.relators):
                v = self.codomain.eval_letters(rel.letters, self.images)
                if v != self.codomain.identity:
                    raise HomomorphismError(
                        f"relator {k} ({pres.word_text(rel)}) does not map to the identity"
                    )
        dom, cod = self.domain, self.codomain
        if dom.order <= _HOM_EXHAUSTIVE_MAX:
            pairs = ((x, y) for x in dom.elements for y in dom.elements)
        else:
            rng = random.Random(20240817)
            els = dom.elements
            pairs = (
                (els[rng.randrange(len(els))], els[rng.randrange(len(els))])
                for _ in range(_HOM_SAMPLES)
            )
        for x, y in pairs:
            if self(dom.mul(x, y)) != cod.mul(self(x), self(y)):
                raise HomomorphismError("product law fails")

    def __call__(self, x):
        r = self._cache.get(x)
        if r is None:
            cod = self.codomain
            r = cod.identity
            for k in self.domain.word_of(x):
                r = cod.mul(r, self.images[k - 1])
            self._cache[x] = r
        return r

    def kernel(self) -> Subgroup:
        dom = self.domain
        e = self.codomain.identity
        els = [x for x in dom.elements if self(x) == e]
        return Subgroup(dom, els, _thin_gens(dom, els))

    def image(self) -> Subgroup:
        return subgroup_closure(self.codomain, self.images)

    def is_surjective(self) -> bool:
        return self.image().order == self.codomain.order

    def is_injective(self) -> bool:
        return self.kernel().order == 1

    def __repr__(self):
        return f"<hom {self.domain!r} -> {self.codomain!r}>"


def from_coset_table(table: CosetTable, name=None) -> PermGroup:
    """Regular representation of a completed trivial-subgroup table."""
    return PermGroup(table, name=name)


def group_from_presentation(
    pres: Presentation,
    limits: EnumerationLimits | None = None,
    strategy: str = "hlt",
    name=None,
) -> PermGroup:
    table = enumerate_cosets(pres, limits=limits, strategy=strategy)
    return PermGroup(table, name=name or pres.name)


def direct_product(*groups: FiniteGroup, name=None) -> TupleGroup:
    return TupleGroup(groups, name=name)
