"""Crossed-pairing groups: a direct presentation of the tensor square and
the nu construction that contains it.

The tensor square T(P) is presented on symbols s(g, h) for nontrivial
g, h in P, with the two expansion families

    s(g1*g, h)  = s(g1^g, h^g) * s(g, h)
    s(g, h1*h)  = s(g, h) * s(g^h, h1^h)

where any symbol with an identity coordinate is dropped.  Enumeration
runs with the expansion element (g resp. h) restricted to the base
generators; the full family is then certified against the finished
table.  The restricted group always maps onto the fully-related one, so
a passing certification proves the two coincide; a failing one escalates
the build to the next relator scope.

nu(P) doubles P like the weak-commutativity construction, but with
conjugation-compatibility relators instead of the diagonal pairing:

    [h1, h2']^h3 = [h1^h3, (h2^h3)'] = [h1, h2']^(h3')

(primes marking the mirror copy).  Inside nu, the subgroup [P, P'] is the
kernel of the fold-to-both-coordinates map and realizes the tensor
square -- checked here by an explicit isomorphism from the direct
presentation.  The diagonal subgroup Delta (closure of the [g, g']) is
central; T/Delta is the exterior square; and (ker alpha cap [P, P'])
modulo Delta recovers the Schur multiplier.  nu is enumerated only when
the predicted order |P|^2 * |T| stays under a size gate, since it grows
much faster than the constructions around it.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .coset import EnumerationError, EnumerationLimits
from .groups import (
    FiniteGroup,
    Homomorphism,
    PermGroup,
    Subgroup,
    center,
    derived_subgroup,
    direct_product,
    group_from_presentation,
    intersection,
    normal_closure,
    quotient,
)
from .homology import abelian_invariants, invariants_from_cyclic_orders
from .weakcomm import mirror_names, mirror_word
from .words import Presentation, Word, commutator, conjugate

NU_SIZE_GATE = 20_000
TENSOR_COSET_CAP = 200_000


class SizeGateError(ValueError):
    """Predicted order of a nu build exceeds the configured gate."""

    def __init__(self, predicted: int, gate: int):
        super().__init__(
            f"predicted order {predicted} exceeds the size gate {gate}"
        )
        self.predicted = predicted
        self.gate = gate


def tensor_square_abelian_invariants(invariants) -> list[int]:
    """Closed form for abelian P: one cyclic factor gcd(d_i, d_j) per
    ordered pair (the pairing is biadditive there)."""
    pieces = [
        g
        for di in invariants
        for dj in invariants
        if (g := gcd(di, dj)) > 1
    ]
    return invariants_from_cyclic_orders(pieces)


# ---------------------------------------------------------------------------
# direct tensor-square presentation
# ---------------------------------------------------------------------------


def _tensor_symbols(base: FiniteGroup) -> list[tuple]:
    e = base.identity
    els = [g for g in base.elements if g != e]
    return [(g, h) for g in els for h in els]


def tensor_relators(base: FiniteGroup, scope: str) -> list[Word]:
    """Expansion relators; `scope` fixes the range of the expansion
    element ("gens" or "full")."""
    e = base.identity
    els = [g for g in base.elements if g != e]
    if scope == "gens":
        movers = [g for g in dict.fromkeys(base.generators) if g != e]
    elif scope == "full":
        movers = els
    else:
        raise ValueError(f"unknown scope {scope!r}")
    index = {pair: k + 1 for k, pair in enumerate(_tensor_symbols(base))}

    def letter(g, h):
        return index[g, h] if g != e and h != e else None

    rels = []
    seen = set()

    def emit(letters):
        w = Word(tuple(a for a in letters if a is not None))
        if w.letters and w.letters not in seen:
            seen.add(w.letters)
            rels.append(w)

    mul, conj = base.mul, base.conj
    for g1 in els:
        for g in movers:
            g1g = mul(g1, g)
            g1c = conj(g1, g)
            for h in els:
                a = letter(g1g, h)
                emit([-a if a else None, letter(g1c, conj(h, g)), letter(g, h)])
    for h1 in els:
        for h in movers:
            h1h = mul(h1, h)
            h1c = conj(h1, h)
            for g in els:
                a = letter(g, h1h)
                emit([-a if a else None, letter(g, h), letter(conj(g, h), h1c)])
    return rels


def tensor_square_presentation(base: FiniteGroup, scope: str = "gens") -> Presentation:
    names = [f"s{base.index(g)}_{base.index(h)}" for g, h in _tensor_symbols(base)]
    label = base.presentation.name if base.presentation else base.name
    return Presentation(
        names,
        tensor_relators(base, scope),
        name=f"ts_{label}" if label else None,
    )


@dataclass
class TensorSquare:
    """The directly-presented tensor square with its reading maps."""

    base: FiniteGroup
    group: PermGroup
    symbols: list[tuple]
    to_base: Homomorphism  # s(g, h) -> [g, h]; image is the derived subgroup
    delta: Subgroup  # normal closure of the diagonal symbols
    scope_used: str

    def symbol(self, g, h):
        if g == self.base.identity or h == self.base.identity:
            return self.group.identity
        return self.group.generators[self._index[g, h]]

    def __post_init__(self):
        self._index = {pair: k for k, pair in enumerate(self.symbols)}

    @property
    def exterior_order(self) -> int:
        return self.group.order // self.delta.order

    def h2_invariants(self) -> list[int]:
        """Invariants of (ker to_base)/delta."""
        ker = self.to_base.kernel()
        if not self.delta.elements <= ker.elements:
            raise RuntimeError("diagonal subgroup escapes the commutator kernel")
        kg = ker.as_group()
        d = Subgroup(kg, self.delta.elements, self.delta.gens)
        return abelian_invariants(quotient(kg, d))

    def orders(self) -> dict[str, int]:
        return {
            "base": self.base.order,
            "tensor": self.group.order,
            "delta": self.delta.order,
            "exterior": self.exterior_order,
        }


def build_tensor_square(
    base: FiniteGroup,
    limits: EnumerationLimits | None = None,
    strategy: str = "hlt",
) -> TensorSquare:
    if base.presentation is None:
        raise ValueError("base group carries no presentation")
    symbols = _tensor_symbols(base)
    if not symbols:
        raise ValueError("trivial base group has no pairing symbols")
    lim = limits or EnumerationLimits(max_cosets=TENSOR_COSET_CAP)
    last_exc: Exception | None = None
    T = None
    scope_used = ""
    for scope in ("gens", "full"):
        pres = tensor_square_presentation(base, scope=scope)
        try:
            cand = group_from_presentation(pres, limits=lim, strategy=strategy, name=pres.name)
        except EnumerationError as exc:
            last_exc = exc
            continue
        if scope == "full" or cand.table.relators_hold(tensor_relators(base, "full")):
            T = cand
            scope_used = scope
            break
    if T is None:
        raise RuntimeError(f"tensor square build failed: {last_exc}")

    to_base = Homomorphism(T, base, [base.comm(g, h) for g, h in symbols])
    diag = [T.generators[k] for k, (g, h) in enumerate(symbols) if g == h]
    delta = normal_closure(T, diag)
    return TensorSquare(
        base=base,
        group=T,
        symbols=symbols,
        to_base=to_base,
        delta=delta,
        scope_used=scope_used,
    )


# ---------------------------------------------------------------------------
# the nu construction
# ---------------------------------------------------------------------------


def nu_relators(base: FiniteGroup, scope: str) -> list[Word]:
    """Conjugation-compatibility relators.  Scopes: "gens" (all three
    slots over the generators), "mixed" (pair slots over all elements,
    conjugating slot over the generators), "full" (everything)."""
    e = base.identity
    els = [g for g in base.elements if g != e]
    gens = [g for g in dict.fromkeys(base.generators) if g != e]
    if scope == "gens":
        pairs, movers = gens, gens
    elif scope == "mixed":
        pairs, movers = els, gens
    elif scope == "full":
        pairs, movers = els, els
    else:
        raise ValueError(f"unknown scope {scope!r}")
    n = base.presentation.ngens
    word = {g: Word(base.word_of(g)) for g in base.elements}
    rels = []
    seen = set()

    def emit(w: Word):
        if w.letters and w.letters not in seen:
            seen.add(w.letters)
            rels.append(w)

    for h1 in pairs:
        for h2 in pairs:
            c12 = commutator(word[h1], mirror_word(word[h2], n))
            for h3 in movers:
                target = commutator(
                    word[base.conj(h1, h3)], mirror_word(word[base.conj(h2, h3)], n)
                )
                emit(conjugate(c12, word[h3]) * ~target)
                emit(conjugate(c12, mirror_word(word[h3], n)) * ~target)
    return rels


def nu_presentation(base: FiniteGroup, scope: str = "gens") -> Presentation:
    pres = base.presentation
    if pres is None:
        raise ValueError("base group carries no presentation")
    n = pres.ngens
    rels = list(pres.relators)
    rels += [mirror_word(r, n) for r in pres.relators]
    rels += nu_relators(base, scope)
    label = pres.name or base.name
    return Presentation(
        list(pres.generators) + mirror_names(pres.generators),
        rels,
        name=f"nu_{label}" if label else None,
    )


@dataclass
class NuBundle:
    base: FiniteGroup
    group: PermGroup
    embed_left: Homomorphism
    embed_right: Homomorphism
    alpha: Homomorphism  # fold both copies onto the base
    to_square: Homomorphism  # separate the copies; kernel is the tensor
    tensor: Subgroup
    delta: Subgroup
    tensor_square: TensorSquare  # the standalone direct presentation
    tensor_iso: Homomorphism  # direct presentation -> tensor subgroup
    scope_used: str

    @property
    def exterior_order(self) -> int:
        return self.tensor.order // self.delta.order

    def exterior_group(self):
        tg = self.tensor.as_group()
        d = Subgroup(tg, self.delta.elements, self.delta.gens)
        return quotient(tg, d)

    def h2_invariants(self) -> list[int]:
        """Invariants of (ker alpha cap tensor)/delta."""
        ker = intersection(self.alpha.kernel(), self.tensor)
        if not self.delta.elements <= ker.elements:
            raise RuntimeError("diagonal subgroup escapes the fold kernel")
        kg = ker.as_group()
        d = Subgroup(kg, self.delta.elements, self.delta.gens)
        return abelian_invariants(quotient(kg, d))

    def delta_is_central(self) -> bool:
        z = center(self.group)
        return self.delta.elements <= z.elements

    def delta_in_derived(self) -> bool:
        return self.delta.elements <= derived_subgroup(self.group).elements

    def orders(self) -> dict[str, int]:
        return {
            "base": self.base.order,
            "group": self.group.order,
            "tensor": self.tensor.order,
            "delta": self.delta.order,
            "exterior": self.exterior_order,
        }


def predicted_nu_order(base: FiniteGroup, tensor: TensorSquare) -> int:
    return base.order**2 * tensor.group.order


def build_nu(
    base: FiniteGroup,
    tensor: TensorSquare | None = None,
    size_gate: int = NU_SIZE_GATE,
    limits: EnumerationLimits | None = None,
    strategy: str = "hlt",
) -> NuBundle:
    if tensor is None:
        tensor = build_tensor_square(base, strategy=strategy)
    predicted = predicted_nu_order(base, tensor)
    if predicted > size_gate:
        raise SizeGateError(predicted, size_gate)

    cert: list[Word] | None = None
    X = None
    scope_used = ""
    for scope in ("gens", "mixed", "full"):
        pres = nu_presentation(base, scope=scope)
        lim = limits or EnumerationLimits(max_cosets=max(60_000, 6 * predicted))
        try:
            cand = group_from_presentation(pres, limits=lim, strategy=strategy, name=pres.name)
        except EnumerationError:
            continue
        if cand.order != predicted:
            continue
        if scope == "full":
            X = cand
            scope_used = scope
            break
        if cert is None:
            cert = nu_relators(base, "full")
        if cand.table.relators_hold(cert):
            X = cand
            scope_used = scope
            break
    if X is None:
        raise RuntimeError(
            f"no relator scope produced the certified group of order {predicted}"
        )

    n = base.presentation.ngens
    embed_left = Homomorphism(base, X, X.generators[:n])
    embed_right = Homomorphism(base, X, X.generators[n:])
    alpha = Homomorphism(X, base, base.generators + base.generators)
    square = direct_product(base, base, name="basexbase")
    to_square = Homomorphism(
        X,
        square,
        [square.embed(0, g) for g in base.generators]
        + [square.embed(1, g) for g in base.generators],
    )
    tensor_sub = to_square.kernel()
    e = base.identity
    delta = normal_closure(
        X,
        [X.comm(embed_left(g), embed_right(g)) for g in base.elements if g != e],
    )
    tensor_iso = Homomorphism(
        tensor.group,
        X,
        [X.comm(embed_left(g), embed_right(h)) for g, h in tensor.symbols],
    )
    if not tensor_iso.is_injective() or tensor_iso.image() != tensor_sub:
        raise RuntimeError("direct tensor presentation does not match [P, P'] inside nu")
    return NuBundle(
        base=base,
        group=X,
        embed_left=embed_left,
        embed_right=embed_right,
        alpha=alpha,
        to_square=to_square,
        tensor=tensor_sub,
        delta=delta,
        tensor_square=tensor,
        tensor_iso=tensor_iso,
        scope_used=scope_used,
    )


def induced_nu_map(f: Homomorphism, src: NuBundle, dst: NuBundle) -> Homomorphism:
    """Functorial map nu(f), both copies transported through f."""
    if f.domain is not src.base or f.codomain is not dst.base:
        raise ValueError("map endpoints do not match the bundles")
    imgs = [dst.embed_left(f(g)) for g in src.base.generators]
    imgs += [dst.embed_right(f(g)) for g in src.base.generators]
    return Homomorphism(src.group, dst.group, imgs)


def quotient_identification(xp_bundle, nu_bundle: NuBundle) -> Homomorphism:
    """The generator-respecting map from the doubled pairing group onto
    nu/Delta; verifies that its kernel is exactly R, which identifies
    X/R with nu/Delta.  Returns the verified map."""
    if xp_bundle.base is not nu_bundle.base:
        raise ValueError("bundles are over different base groups")
    N = nu_bundle.group
    Q = quotient(N, nu_bundle.delta)
    phi = Homomorphism(
        xp_bundle.group, Q, [Q.projection(g) for g in N.generators]
    )
    if not phi.is_surjective():
        raise RuntimeError("quotient identification is not onto")
    if phi.kernel() != xp_bundle.R:
        raise RuntimeError("kernel of the quotient identification is not R")
    return phi
