"""The doubled group in which every element commutes with its mirror.

Given a finite group P (a regular representation carrying a presentation),
build the group X on two copies of P's generators -- the originals and a
mirrored set -- subject to the base relators in both copies plus one
commutation relator [w_g, mirror(w_g)] for every nontrivial element g,
with w_g the canonical word of g.  Any representing word would do, since
the base relators already identify them.

The bundle keeps the structural maps this construction is studied through:

* embed_left / embed_right: the two copies of P inside X (both injective);
* alpha: X -> P, both copies folded onto P; its kernel is L;
* beta: X -> P x P, the copies separated; its kernel is D;
* rho: X -> P^3, left copy to (g, g, 1), mirror copy to (1, g, g);
  its kernel is W;
* R = [left copy, [L, right copy]], a normal subgroup contained in W.

W is abelian, equals the intersection of L and D, and W/R recovers the
Schur multiplier of P; [L, D] = 1 and the cross pairing is symmetric
([x, mirror(y)] = [mirror(x), y]).  These are checked by the test suite
and the verification harness rather than re-proved at build time.
"""

from __future__ import annotations

from dataclasses import dataclass

from .coset import EnumerationLimits
from .groups import (
    FiniteGroup,
    Homomorphism,
    PermGroup,
    Subgroup,
    commutator_subgroup,
    direct_product,
    group_from_presentation,
    quotient,
    subgroup_closure,
)
from .homology import abelian_invariants
from .words import Presentation, Word, commutator


def mirror_word(w: Word, n: int) -> Word:
    """Shift a word on generators 1..n to the mirrored block n+1..2n."""
    return Word(tuple(a + n if a > 0 else a - n for a in w.letters))


def mirror_names(names) -> list[str]:
    """Mirror generator names: append 'p', extending on collision."""
    used = set(names)
    out = []
    for nm in names:
        cand = nm + "p"
        while cand in used:
            cand += "p"
        used.add(cand)
        out.append(cand)
    return out


def xp_presentation(base: FiniteGroup, elements: str = "all") -> Presentation:
    """Presentation of X on two copies of the base generators.

    `elements="all"` adds one commutation relator per nontrivial base
    element (the construction proper); `elements="gens"` keeps only the
    generator relators, which presents a group that can be strictly
    larger -- exposed for comparison experiments.
    """
    pres = base.presentation
    if pres is None:
        raise ValueError("base group carries no presentation")
    n = pres.ngens
    if elements == "all":
        sources = [Word(base.word_of(g)) for g in base.elements if g != base.identity]
    elif elements == "gens":
        sources = [Word.gen(i) for i in range(n)]
    else:
        raise ValueError(f"unknown elements mode {elements!r}")
    rels = list(pres.relators)
    rels += [mirror_word(r, n) for r in pres.relators]
    rels += [commutator(w, mirror_word(w, n)) for w in sources]
    label = pres.name or base.name
    return Presentation(
        list(pres.generators) + mirror_names(pres.generators),
        rels,
        name=f"xp_{label}" if label else None,
    )


@dataclass
class XPBundle:
    """X together with its structural maps and distinguished subgroups."""

    base: FiniteGroup
    group: PermGroup
    embed_left: Homomorphism
    embed_right: Homomorphism
    alpha: Homomorphism
    beta: Homomorphism
    rho: Homomorphism
    left_copy: Subgroup
    right_copy: Subgroup
    L: Subgroup
    D: Subgroup
    W: Subgroup
    R: Subgroup

    @property
    def square(self) -> FiniteGroup:
        return self.beta.codomain

    @property
    def cube(self) -> FiniteGroup:
        return self.rho.codomain

    def h2_invariants(self) -> list[int]:
        """Invariant factors of W/R (the multiplier reading of this
        construction)."""
        Wg = self.W.as_group()
        r = Subgroup(Wg, self.R.elements, self.R.gens)
        return abelian_invariants(quotient(Wg, r))

    def orders(self) -> dict[str, int]:
        return {
            "base": self.base.order,
            "group": self.group.order,
            "L": self.L.order,
            "D": self.D.order,
            "W": self.W.order,
            "R": self.R.order,
            "im_rho": self.rho.image().order,
        }


def build_xp(
    base: FiniteGroup,
    elements: str = "all",
    limits: EnumerationLimits | None = None,
    strategy: str = "hlt",
) -> XPBundle:
    pres = xp_presentation(base, elements=elements)
    X = group_from_presentation(pres, limits=limits, strategy=strategy, name=pres.name)
    n = base.presentation.ngens
    left_images = X.generators[:n]
    right_images = X.generators[n:]

    embed_left = Homomorphism(base, X, left_images)
    embed_right = Homomorphism(base, X, right_images)
    alpha = Homomorphism(X, base, base.generators + base.generators)
    square = direct_product(base, base, name="basexbase")
    beta = Homomorphism(
        X,
        square,
        [square.embed(0, g) for g in base.generators]
        + [square.embed(1, g) for g in base.generators],
    )
    cube = direct_product(base, base, base, name="basecubed")
    e = base.identity
    rho = Homomorphism(
        X,
        cube,
        [(g, g, e) for g in base.generators] + [(e, g, g) for g in base.generators],
    )

    left_copy = subgroup_closure(X, left_images)
    right_copy = subgroup_closure(X, right_images)
    L = alpha.kernel()
    D = beta.kernel()
    W = rho.kernel()
    inner = commutator_subgroup(L, right_copy)
    R = commutator_subgroup(left_copy, inner)
    return XPBundle(
        base=base,
        group=X,
        embed_left=embed_left,
        embed_right=embed_right,
        alpha=alpha,
        beta=beta,
        rho=rho,
        left_copy=left_copy,
        right_copy=right_copy,
        L=L,
        D=D,
        W=W,
        R=R,
    )


def fold_difference_generators(bundle: XPBundle, scope: str = "all") -> list:
    """Elements g * mirror(g)^-1, which generate L = ker(alpha).

    `scope="gens"` restricts to the base generators; that subset need not
    generate all of L, which is the point of exposing it.
    """
    base, X = bundle.base, bundle.group
    if scope == "all":
        items = [g for g in base.elements if g != base.identity]
    elif scope == "gens":
        items = [g for g in base.generators if g != base.identity]
    else:
        raise ValueError(f"unknown scope {scope!r}")
    il, ir = bundle.embed_left, bundle.embed_right
    return [X.mul(il(g), X.inv(ir(g))) for g in items]


def symmetrized_generators(base, extra=()) -> list:
    """The base generators plus `extra`, closed under inversion, with
    the identity dropped -- a symmetric generating set."""
    sym = []
    seen = set()
    for g in list(base.generators) + list(extra):
        for h in (g, base.inv(g)):
            if h != base.identity and h not in seen:
                seen.add(h)
                sym.append(h)
    return sym


def z_set(bundle: XPBundle, generating_set=None) -> list:
    """The elements [x1, [y*mirror(y)^-1, mirror(x2)]] over a symmetric
    generating set of the base; their normal closure is R.  The set
    defaults to the symmetrized base generators; a custom one must be
    symmetric, identity-free, and generate the base."""
    base, X = bundle.base, bundle.group
    if generating_set is None:
        sym = symmetrized_generators(base)
    else:
        sym = list(dict.fromkeys(generating_set))
        if base.identity in sym:
            raise ValueError("generating set contains the identity")
        if any(base.inv(g) not in sym for g in sym):
            raise ValueError("generating set is not symmetric")
        from .groups import subgroup_closure

        if subgroup_closure(base, sym).order != base.order:
            raise ValueError("set does not generate the base group")
    il, ir = bundle.embed_left, bundle.embed_right
    out = []
    for x1 in sym:
        for y in sym:
            ell = X.mul(il(y), X.inv(ir(y)))
            for x2 in sym:
                out.append(X.comm(il(x1), X.comm(ell, ir(x2))))
    return out


def swap_pairing_holds(bundle: XPBundle) -> bool:
    """[x, mirror(y)] == [mirror(x), y] for all base elements x, y."""
    base, X = bundle.base, bundle.group
    il, ir = bundle.embed_left, bundle.embed_right
    left = [il(x) for x in base.elements]
    right = [ir(x) for x in base.elements]
    return all(
        X.comm(left[i], right[j]) == X.comm(right[i], left[j])
        for i in range(len(left))
        for j in range(len(left))
    )


def induced_xp_map(f: Homomorphism, src: XPBundle, dst: XPBundle) -> Homomorphism:
    """Functorial map X(f): both copies transported through f.

    Construction verifies the relators, so a non-homomorphic assignment
    cannot slip through.
    """
    if f.domain is not src.base or f.codomain is not dst.base:
        raise ValueError("map endpoints do not match the bundles")
    imgs = [dst.embed_left(f(g)) for g in src.base.generators]
    imgs += [dst.embed_right(f(g)) for g in src.base.generators]
    return Homomorphism(src.group, dst.group, imgs)
