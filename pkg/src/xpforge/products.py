"""Fibre products, the antidiagonal subgroup, and subdirect diagnostics.

A fibre product pulls two surjections p1: G1 -> Q, p2: G2 -> Q back to
the subgroup {(g1, g2) : p1(g1) = p2(g2)} of G1 x G2; its order is
always |G1|*|G2|/|Q|.  The antidiagonal subgroup S of H x H is generated
by the pairs (h, h^-1); it coincides with the fibre product of the
abelianization map against its composite with inversion (inversion is
only a homomorphism after abelianizing, which is why the comparison runs
through H/H').  s_subgroup performs that comparison on construction.

im_rho_verify checks the product-coordinate description of the image of
rho for a doubled-group bundle: a triple lies in the image exactly when
g1 * g2^-1 * g3 falls in the derived subgroup of the base.  Small bases
are checked exhaustively; larger ones by seeded sampling in both
directions.  The report also tabulates every single and pairwise
projection of the image, which are all onto.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

from .groups import (
    FiniteGroup,
    Homomorphism,
    Subgroup,
    TupleGroup,
    _thin_gens,
    derived_subgroup,
    direct_product,
    quotient,
    subgroup_closure,
)

EXHAUSTIVE_BASE_ORDER = 8
SAMPLES_PER_DIRECTION = 100_000
_SAMPLE_SEED = 0x5D17EC7


@dataclass
class FibreSpec:
    """Two surjections onto a common quotient."""

    p1: Homomorphism
    p2: Homomorphism

    def __post_init__(self):
        if self.p1.codomain is not self.p2.codomain:
            raise ValueError("the two maps must share a codomain")
        if not self.p1.is_surjective() or not self.p2.is_surjective():
            raise ValueError("fibre products are taken over surjections")


def fibre_product(spec: FibreSpec, ambient: TupleGroup | None = None) -> Subgroup:
    """The pullback {(g1, g2) : p1(g1) = p2(g2)} inside G1 x G2."""
    G1, G2 = spec.p1.domain, spec.p2.domain
    if ambient is None:
        ambient = direct_product(G1, G2)
    elif ambient.factors != [G1, G2]:
        raise ValueError("ambient product does not match the spec domains")
    els = [x for x in ambient.elements if spec.p1(x[0]) == spec.p2(x[1])]
    sub = Subgroup(ambient, els, _thin_gens(ambient, els))
    if sub.order * spec.p1.codomain.order != G1.order * G2.order:
        raise RuntimeError("fibre product violates the order law")
    return sub


def antipodal_spec(H: FiniteGroup) -> FibreSpec:
    """Abelianization map of H against its composite with inversion."""
    A = quotient(H, derived_subgroup(H))
    p = A.projection
    anti = Homomorphism(H, A, [A.inv(p(x)) for x in H.generators])
    return FibreSpec(p, anti)


def s_subgroup(H: FiniteGroup, ambient: TupleGroup | None = None) -> Subgroup:
    """Closure of the pairs (h, h^-1) in H x H, verified on construction
    to equal the antipodal fibre product."""
    if ambient is None:
        ambient = direct_product(H, H)
    sub = subgroup_closure(ambient, [(h, H.inv(h)) for h in H.elements])
    if sub != fibre_product(antipodal_spec(H), ambient=ambient):
        raise RuntimeError("antidiagonal closure differs from the fibre product")
    return sub


def _projection_rows(sub: Subgroup) -> dict[str, dict]:
    amb = sub.parent
    if not isinstance(amb, TupleGroup):
        raise ValueError("subdirect diagnostics need a product ambient")
    k = len(amb.factors)
    rows: dict[str, dict] = {}
    singles = [(i,) for i in range(k)]
    pairs = list(itertools.combinations(range(k), 2)) if k > 2 else []
    for coords in singles + pairs:
        shadow = {tuple(x[i] for i in coords) for x in sub.elements}
        full = 1
        for i in coords:
            full *= amb.factors[i].order
        key = "p" + "".join(str(i + 1) for i in coords)
        rows[key] = {
            "image_order": len(shadow),
            "index": full // len(shadow),
            "surjective": len(shadow) == full,
        }
        if full % len(shadow):
            raise RuntimeError(f"projection {key} order does not divide the ambient")
    return rows


@dataclass
class SubdirectReport:
    ambient_orders: list[int]
    subgroup_order: int
    projections: dict[str, dict]
    equality_mode: str  # "exhaustive" or "sampled"
    samples_checked: int
    mismatches: int
    index_in_ambient: int
    index_matches_abelianization: bool | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.mismatches == 0 and all(
            row["surjective"] for key, row in self.projections.items()
        ) and self.index_matches_abelianization is not False

    def as_dict(self) -> dict:
        return {
            "ambient_orders": list(self.ambient_orders),
            "subgroup_order": self.subgroup_order,
            "index_in_ambient": self.index_in_ambient,
            "projections": {k: dict(v) for k, v in sorted(self.projections.items())},
            "equality": {
                "mode": self.equality_mode,
                "samples_checked": self.samples_checked,
                "mismatches": self.mismatches,
            },
            "index_matches_abelianization": self.index_matches_abelianization,
            "notes": list(self.notes),
            "ok": self.ok,
        }


def im_rho_verify(
    xb,
    samples: int = SAMPLES_PER_DIRECTION,
    seed: int = _SAMPLE_SEED,
) -> SubdirectReport:
    """Check the coordinate description of im(rho) for a doubled-group
    bundle and tabulate its projections."""
    G = xb.base
    cube = xb.rho.codomain
    im = xb.rho.image()
    der = derived_subgroup(G)
    der_set = der.elements

    def in_described_set(t) -> bool:
        return G.mul(G.mul(t[0], G.inv(t[1])), t[2]) in der_set

    mismatches = 0
    if G.order <= EXHAUSTIVE_BASE_ORDER:
        mode = "exhaustive"
        checked = len(cube.elements)
        for t in cube.elements:
            if (t in im.elements) != in_described_set(t):
                mismatches += 1
    else:
        mode = "sampled"
        rng = random.Random(seed)
        im_list = im.sorted_elements()
        der_list = der.sorted_elements()
        els = G.elements
        checked = 2 * samples
        for _ in range(samples):
            t = rng.choice(im_list)
            if not in_described_set(t):
                mismatches += 1
        for _ in range(samples):
            g1, g2 = rng.choice(els), rng.choice(els)
            d = rng.choice(der_list)
            g3 = G.mul(G.inv(G.mul(g1, G.inv(g2))), d)
            if (g1, g2, g3) not in im.elements:
                mismatches += 1
    index = cube.order // im.order
    ab_order = G.order // der.order
    return SubdirectReport(
        ambient_orders=[f.order for f in cube.factors],
        subgroup_order=im.order,
        projections=_projection_rows(im),
        equality_mode=mode,
        samples_checked=checked,
        mismatches=mismatches,
        index_in_ambient=index,
        index_matches_abelianization=(index == ab_order),
    )
