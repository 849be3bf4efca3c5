"""Tests for the crossed-pairing groups: direct tensor squares and nu.

Every frozen order below was reproduced by the engine before being
written down, and the abelian rows are forced independently by the
closed form: for invariant factors (d_1, ..., d_k) the pairing group is
the direct sum of cyclic factors gcd(d_i, d_j) over ordered pairs.  The
nu orders then follow from |nu| = |P|^2 * |T|.  D8 and Q8 (tensor orders
32 and 64) pin the nonabelian behaviour, and the order-27 bases exercise
the size gate that keeps nu builds bounded.
"""

import functools
import random

import pytest

from xpforge.groups import (
    Homomorphism,
    derived_subgroup,
    exponent,
    group_from_presentation,
    is_powerful,
    nilpotency_class,
)
from xpforge.homology import abelian_invariants, schur_multiplier_bar
from xpforge.tensor import (
    NU_SIZE_GATE,
    SizeGateError,
    build_nu,
    build_tensor_square,
    induced_nu_map,
    nu_presentation,
    predicted_nu_order,
    quotient_identification,
    tensor_relators,
    tensor_square_abelian_invariants,
    tensor_square_presentation,
)
from xpforge.weakcomm import build_xp, mirror_names
from xpforge.words import parse_presentation

PRESENTATIONS = {
    "C2": "gens a\nrels a^2",
    "C3": "gens a\nrels a^3",
    "C4": "gens a\nrels a^4",
    "C8": "gens a\nrels a^8",
    "C9": "gens a\nrels a^9",
    "K4": "gens a, b\nrels a^2, b^2, [a,b]",
    "C2xC4": "gens a, b\nrels a^2, b^4, [a,b]",
    "C3xC3": "gens a, b\nrels a^3, b^3, [a,b]",
    "D8": "gens a, b\nrels a^4, b^2, b^-1*a*b*a",
    "Q8": "gens a, b\nrels a^4, a^2*b^-2, b^-1*a*b*a",
    "E8": "gens a, b, c\nrels a^2, b^2, c^2, [a,b], [a,c], [b,c]",
    "Mod27": "gens a, b\nrels a^9, b^3, b^-1*a*b*a^-4",
}


@functools.lru_cache(maxsize=None)
def base(name):
    return group_from_presentation(parse_presentation(PRESENTATIONS[name]), name=name)


@functools.lru_cache(maxsize=None)
def tensor(name):
    return build_tensor_square(base(name))


@functools.lru_cache(maxsize=None)
def nu(name):
    return build_nu(base(name), tensor=tensor(name))


# name: (|T|, |Delta|, |exterior|, H2 invariants)
TENSOR_EXPECTED = {
    "C2": (2, 2, 1, []),
    "C3": (3, 3, 1, []),
    "C4": (4, 4, 1, []),
    "C8": (8, 8, 1, []),
    "C9": (9, 9, 1, []),
    "K4": (16, 8, 2, [2]),
    "C2xC4": (32, 16, 2, [2]),
    "C3xC3": (81, 27, 3, [3]),
    "D8": (32, 8, 4, [2]),
    "Q8": (64, 32, 2, []),
    "E8": (512, 64, 8, [2, 2, 2]),
    "Mod27": (81, 27, 3, []),
}

# name: (|nu|, H2 invariants read off inside nu)
NU_EXPECTED = {
    "C2": (8, []),
    "C3": (27, []),
    "C4": (64, []),
    "C8": (512, []),
    "C9": (729, []),
    "K4": (256, [2]),
    "C2xC4": (2048, [2]),
    "C3xC3": (6561, [3]),
    "D8": (2048, [2]),
    "Q8": (4096, []),
}

ABELIAN = ["C2", "C3", "C4", "C8", "C9", "K4", "C2xC4", "C3xC3", "E8"]


@pytest.mark.parametrize("name", sorted(TENSOR_EXPECTED))
def test_tensor_square_frozen(name):
    T = tensor(name)
    size, delta, ext, h2 = TENSOR_EXPECTED[name]
    assert T.group.order == size
    assert T.delta.order == delta
    assert T.exterior_order == ext
    assert T.h2_invariants() == h2
    assert T.scope_used == "gens"


@pytest.mark.parametrize("name", ABELIAN)
def test_abelian_closed_form(name):
    G = base(name)
    T = tensor(name)
    want = tensor_square_abelian_invariants(abelian_invariants(G))
    assert abelian_invariants(T.group) == want


@pytest.mark.parametrize("name", ["C4", "K4", "D8", "Q8", "Mod27"])
def test_commutator_map_lands_on_derived_subgroup(name):
    G = base(name)
    T = tensor(name)
    assert T.to_base.image() == derived_subgroup(G)
    assert T.to_base.kernel().order == T.group.order // derived_subgroup(G).order


@pytest.mark.parametrize("name", ["K4", "C3xC3", "D8", "Q8", "E8"])
def test_multiplier_three_routes_agree(name):
    via_tensor = tensor(name).h2_invariants()
    via_bar = schur_multiplier_bar(base(name))
    via_doubling = build_xp(base(name)).h2_invariants()
    assert via_tensor == via_bar == via_doubling


def test_symbols_biadditive_for_abelian_base():
    G = base("C2xC4")
    T = tensor("C2xC4")
    for g1 in G.elements:
        for g2 in G.elements:
            for h in G.elements:
                left = T.symbol(G.mul(g1, g2), h)
                assert left == T.group.mul(T.symbol(g1, h), T.symbol(g2, h))
                right = T.symbol(h, G.mul(g1, g2))
                assert right == T.group.mul(T.symbol(h, g1), T.symbol(h, g2))


def test_symbol_identity_coordinate_is_trivial():
    G = base("D8")
    T = tensor("D8")
    e = G.identity
    for g in G.elements:
        assert T.symbol(e, g) == T.group.identity
        assert T.symbol(g, e) == T.group.identity


def test_trivial_base_rejected():
    C1 = group_from_presentation(parse_presentation("gens a\nrels a"))
    with pytest.raises(ValueError):
        build_tensor_square(C1)


def test_tensor_presentation_rejects_unknown_scope():
    with pytest.raises(ValueError):
        tensor_square_presentation(base("C4"), scope="everything")
    with pytest.raises(ValueError):
        tensor_relators(base("C4"), "everything")


@pytest.mark.parametrize("name", sorted(NU_EXPECTED))
def test_nu_frozen(name):
    b = nu(name)
    size, h2 = NU_EXPECTED[name]
    assert b.group.order == size
    assert b.group.order == predicted_nu_order(base(name), tensor(name))
    assert b.scope_used == "gens"
    assert b.tensor.order == tensor(name).group.order
    assert b.h2_invariants() == h2


@pytest.mark.parametrize("name", ["C4", "K4", "D8", "Q8", "C3xC3"])
def test_delta_central_and_in_derived(name):
    b = nu(name)
    assert b.delta_is_central()
    assert b.delta_in_derived()


def test_nu_of_c2_is_the_dihedral_group_of_order_8():
    N = nu("C2").group
    assert N.order == 8
    assert not N.is_abelian()
    assert sorted(N.element_order(x) for x in N.elements) == [1, 2, 2, 2, 2, 2, 4, 4]


def test_nu_of_c3_is_extraspecial_and_not_powerful():
    N = nu("C3").group
    assert N.order == 27
    assert nilpotency_class(N) == 2
    assert exponent(N) == 3
    assert not is_powerful(N)
    assert nu("C3").tensor.order == 3


def test_fold_restricted_to_tensor_reads_the_multiplier():
    # the fold kernel meets the tensor exactly in the full multiplier
    # preimage: its size is |H2| * |Delta|
    b = nu("C3xC3")
    from xpforge.groups import intersection

    ker = intersection(b.alpha.kernel(), b.tensor)
    assert ker.order == 3 * b.delta.order


def test_conjugation_compatibility_sampled():
    G = base("D8")
    b = nu("D8")
    N = b.group
    il, ir = b.embed_left, b.embed_right
    rng = random.Random(0xC0FFEE)
    els = list(G.elements)
    for _ in range(200):
        h1, h2, h3 = (rng.choice(els) for _ in range(3))
        c = N.comm(il(h1), ir(h2))
        target = N.comm(il(G.conj(h1, h3)), ir(G.conj(h2, h3)))
        assert N.conj(c, il(h3)) == target
        assert N.conj(c, ir(h3)) == target


def test_separating_map_kernel_is_the_tensor():
    b = nu("Q8")
    assert b.to_square.kernel() == b.tensor
    assert b.to_square.is_surjective()
    assert b.group.order == b.base.order**2 * b.tensor.order


def test_size_gate_trips_for_order_27_bases():
    G = base("Mod27")
    T = tensor("Mod27")
    assert predicted_nu_order(G, T) == 27 * 27 * 81 == 59049
    with pytest.raises(SizeGateError) as exc:
        build_nu(G, tensor=T)
    assert exc.value.predicted == 59049
    assert exc.value.gate == NU_SIZE_GATE


def test_gate_override_builds_the_rank_three_case():
    # the one base in reach whose R is nontrivial: X/R and nu/Delta both
    # have order 512 and the identification map has kernel exactly R
    G = base("E8")
    b = build_nu(G, tensor=tensor("E8"), size_gate=40_000)
    assert b.group.order == 32768
    assert b.h2_invariants() == [2, 2, 2]
    xp = build_xp(G)
    assert xp.R.order == 2
    phi = quotient_identification(xp, b)
    assert phi.codomain.order == xp.group.order // xp.R.order == 512


@pytest.mark.parametrize("name", ["C4", "Q8"])
def test_quotient_identification_trivial_r(name):
    xp = build_xp(base(name))
    phi = quotient_identification(xp, nu(name))
    assert xp.R.order == 1
    assert phi.is_surjective()
    assert phi.codomain.order == xp.group.order


def test_quotient_identification_rejects_mismatched_bases():
    with pytest.raises(ValueError):
        quotient_identification(build_xp(base("C4")), nu("C8"))


def test_induced_map_collapses_towers():
    f = Homomorphism(base("C8"), base("C4"), [base("C4").generators[0]])
    F = induced_nu_map(f, nu("C8"), nu("C4"))
    assert F.is_surjective()
    assert F.kernel().order == nu("C8").group.order // nu("C4").group.order == 8


def test_induced_map_identity_is_bijective():
    G = base("C4")
    f = Homomorphism(G, G, G.generators)
    F = induced_nu_map(f, nu("C4"), nu("C4"))
    assert F.is_injective() and F.is_surjective()


def test_induced_map_rejects_wrong_endpoints():
    f = Homomorphism(base("C8"), base("C4"), [base("C4").generators[0]])
    with pytest.raises(ValueError):
        induced_nu_map(f, nu("C4"), nu("C8"))


def test_nu_presentation_shape():
    pres = nu_presentation(base("Q8"), scope="gens")
    assert pres.generators == ["a", "b", "ap", "bp"]
    assert pres.name == "nu_Q8"
    with pytest.raises(ValueError):
        nu_presentation(base("Q8"), scope="everything")


def test_mirrored_names_follow_the_doubling_convention():
    pres = nu_presentation(base("E8"))
    assert pres.generators == ["a", "b", "c"] + mirror_names(["a", "b", "c"])


def test_closed_form_helper():
    assert tensor_square_abelian_invariants([2]) == [2]
    assert tensor_square_abelian_invariants([2, 4]) == [2, 2, 2, 4]
    assert tensor_square_abelian_invariants([3, 3]) == [3, 3, 3, 3]
    assert tensor_square_abelian_invariants([2, 2, 2]) == [2] * 9
