"""Group engine tests: regular representations, subgroup lattice ops,
series, quotients, products, and verified homomorphisms.

Expected values are classical small-group facts (orders, centers, derived
subgroups, element-order multisets) frozen directly.
"""

import functools

import pytest

from xpforge.groups import (
    Homomorphism,
    HomomorphismError,
    QuotientGroup,
    Subgroup,
    center,
    commutator_subgroup,
    derived_series,
    derived_subgroup,
    direct_product,
    exponent,
    group_from_presentation,
    intersection,
    is_powerful,
    is_soluble,
    lower_central_series,
    minimal_generator_count,
    nilpotency_class,
    normal_closure,
    p_group_data,
    pow_element,
    power_subgroup,
    quotient,
    subgroup_closure,
    trivial_subgroup,
    whole_subgroup,
)
from xpforge.words import parse_presentation

PRESENTATIONS = {
    "C2": "gens a\nrels a^2",
    "C4": "gens a\nrels a^4",
    "C8": "gens a\nrels a^8",
    "C9": "gens a\nrels a^9",
    "K4": "gens a, b\nrels a^2, b^2, [a,b]",
    "C12": "gens a, b\nrels a^4, b^3, [a,b]",
    "S3": "gens a, b\nrels a^3, b^2, b^-1*a*b*a",
    "D8": "gens a, b\nrels a^4, b^2, b^-1*a*b*a",
    "Q8": "gens a, b\nrels a^4, a^2*b^-2, b^-1*a*b*a",
    "A4": "gens a, b\nrels a^3, b^2, (a*b)^3",
    "Heis27": "gens a, b, c\nrels a^3, b^3, c^3, [a,b]*c^-1, [a,c], [b,c]",
    "Mod27": "gens a, b\nrels a^9, b^3, b^-1*a*b*a^-4",
}


@functools.lru_cache(maxsize=None)
def grp(name):
    return group_from_presentation(parse_presentation(PRESENTATIONS[name]), name=name)


@pytest.mark.parametrize(
    "name,order",
    [
        ("C2", 2),
        ("C4", 4),
        ("C8", 8),
        ("K4", 4),
        ("C12", 12),
        ("S3", 6),
        ("D8", 8),
        ("Q8", 8),
        ("A4", 12),
        ("Heis27", 27),
        ("Mod27", 27),
    ],
)
def test_orders(name, order):
    assert grp(name).order == order


def test_words_match_table_and_evaluate_back():
    G = grp("Q8")
    assert G.words == G.table.words
    for e in G.elements:
        assert G.eval_letters(G.word_of(e)) == e


def test_words_are_shortlex_increasing():
    G = grp("D8")
    ws = G.words
    assert all(ws[i] < ws[i + 1] or len(ws[i]) < len(ws[i + 1]) for i in range(len(ws) - 1))
    assert ws == sorted(ws, key=lambda w: (len(w), w))


def test_determinism_of_construction():
    a = group_from_presentation(parse_presentation(PRESENTATIONS["D8"]))
    b = group_from_presentation(parse_presentation(PRESENTATIONS["D8"]))
    assert a.words == b.words
    assert a.cols == b.cols


@pytest.mark.parametrize(
    "name,orders",
    [
        ("D8", [1, 2, 2, 2, 2, 2, 4, 4]),
        ("Q8", [1, 2, 4, 4, 4, 4, 4, 4]),
        ("K4", [1, 2, 2, 2]),
    ],
)
def test_element_order_multisets(name, orders):
    G = grp(name)
    assert sorted(G.element_order(x) for x in G.elements) == orders


def test_inverse_and_conjugation():
    G = grp("S3")
    for x in G.elements:
        assert G.mul(x, G.inv(x)) == G.identity
        assert G.conj(x, G.identity) == x
    a, b = G.generators
    # b^-1 a b = a^-1 in this dihedral-style presentation
    assert G.conj(a, b) == G.inv(a)
    assert G.comm(a, b) == G.mul(G.inv(a), G.conj(a, b))


def test_pow_element():
    G = grp("C8")
    a = G.generators[0]
    assert pow_element(G, a, 0) == G.identity
    assert pow_element(G, a, 8) == G.identity
    assert pow_element(G, a, -1) == G.inv(a)
    assert pow_element(G, a, 3) == G.mul(G.mul(a, a), a)


@pytest.mark.parametrize(
    "name,zorder",
    [("D8", 2), ("Q8", 2), ("S3", 1), ("Heis27", 3), ("Mod27", 3), ("K4", 4)],
)
def test_centers(name, zorder):
    assert center(grp(name)).order == zorder


@pytest.mark.parametrize(
    "name,dorder",
    [("D8", 2), ("Q8", 2), ("S3", 3), ("A4", 4), ("Heis27", 3), ("Mod27", 3), ("C12", 1)],
)
def test_derived_subgroups(name, dorder):
    assert derived_subgroup(grp(name)).order == dorder


def test_derived_of_mod27_is_cube_of_a():
    G = grp("Mod27")
    a = G.generators[0]
    d = derived_subgroup(G)
    assert pow_element(G, a, 3) in d
    assert d.order == 3


@pytest.mark.parametrize("name", ["D8", "Q8", "S3", "A4", "Heis27", "Mod27"])
def test_commutator_subgroup_methods_agree(name):
    G = grp(name)
    w = whole_subgroup(G)
    ew = commutator_subgroup(w, w, method="elementwise")
    gen = commutator_subgroup(w, w, method="generated")
    assert ew == gen


def test_commutator_with_center_is_trivial():
    G = grp("D8")
    z = center(G)
    assert commutator_subgroup(whole_subgroup(G), z).order == 1


def test_commutator_of_cyclic_parts_of_d8():
    G = grp("D8")
    a, b = G.generators
    A = subgroup_closure(G, [a])
    B = subgroup_closure(G, [b])
    c = commutator_subgroup(A, B)
    assert c.order == 2
    assert pow_element(G, a, 2) in c


@pytest.mark.parametrize(
    "name,classnum",
    [("D8", 2), ("Q8", 2), ("Heis27", 2), ("Mod27", 2), ("K4", 1), ("S3", None), ("A4", None)],
)
def test_nilpotency_class(name, classnum):
    assert nilpotency_class(grp(name)) == classnum


def test_lower_central_series_orders():
    assert [s.order for s in lower_central_series(grp("D8"))] == [8, 2, 1]
    assert [s.order for s in lower_central_series(grp("S3"))] == [6, 3]


def test_derived_series_and_solubility():
    assert [s.order for s in derived_series(grp("A4"))] == [12, 4, 1]
    assert is_soluble(grp("A4"))
    assert is_soluble(grp("Q8"))


def test_subgroup_closure_in_d8():
    G = grp("D8")
    a, b = G.generators
    assert subgroup_closure(G, [a]).order == 4
    assert subgroup_closure(G, [pow_element(G, a, 2), b]).order == 4
    assert subgroup_closure(G, [a, b]).order == 8
    assert trivial_subgroup(G).order == 1
    assert whole_subgroup(G).order == 8


def test_normal_closure():
    G = grp("S3")
    a, b = G.generators
    assert subgroup_closure(G, [b]).order == 2
    assert normal_closure(G, [b]).order == 6
    assert normal_closure(G, [a]).order == 3
    D = grp("D8")
    assert normal_closure(D, [D.generators[1]]).order == 4


def test_intersection():
    G = grp("D8")
    a, b = G.generators
    A = subgroup_closure(G, [a])
    B = subgroup_closure(G, [pow_element(G, a, 2), b])
    meet = intersection(A, B)
    assert meet.order == 2
    assert pow_element(G, a, 2) in meet


def test_subgroup_normality():
    G = grp("D8")
    a, b = G.generators
    assert subgroup_closure(G, [a]).is_normal()
    assert not subgroup_closure(G, [b]).is_normal()
    assert center(G).is_normal()


def test_subgroup_as_group():
    G = grp("D8")
    a = G.generators[0]
    H = subgroup_closure(G, [a]).as_group(name="rot")
    assert H.order == 4
    assert H.is_abelian()
    assert H.element_order(a) == 4
    assert H.words == [(), (1,), (1, 1), (1, 1, 1)]


def test_quotient_of_d8_by_center():
    G = grp("D8")
    Q = quotient(G, center(G))
    assert Q.order == 4
    assert Q.is_abelian()
    assert exponent(Q) == 2
    assert Q.projection.kernel() == center(G)
    assert Q.projection.is_surjective()


def test_quotient_heis_by_center_is_three_by_three():
    G = grp("Heis27")
    Q = quotient(G, center(G))
    assert Q.order == 9
    assert Q.is_abelian()
    assert exponent(Q) == 3


def test_quotient_rejects_non_normal():
    G = grp("D8")
    with pytest.raises(ValueError, match="non-normal"):
        quotient(G, subgroup_closure(G, [G.generators[1]]))


def test_quotient_by_trivial_is_bijective():
    G = grp("Q8")
    Q = quotient(G, trivial_subgroup(G))
    assert Q.order == 8
    assert Q.projection.is_injective()


@pytest.mark.parametrize(
    "name,exp", [("K4", 2), ("D8", 4), ("Q8", 4), ("Heis27", 3), ("Mod27", 9), ("C12", 12)]
)
def test_exponent(name, exp):
    assert exponent(grp(name)) == exp


def test_power_subgroup():
    G = grp("C8")
    assert power_subgroup(G, 2).order == 4
    assert power_subgroup(G, 4).order == 2
    H = grp("Heis27")
    assert power_subgroup(H, 3).order == 1


def test_p_group_data():
    assert p_group_data(grp("D8")) == (2, 3)
    assert p_group_data(grp("Heis27")) == (3, 3)
    with pytest.raises(ValueError, match="prime power"):
        p_group_data(grp("C12"))


@pytest.mark.parametrize(
    "name,d",
    [("C8", 1), ("K4", 2), ("D8", 2), ("Q8", 2), ("Heis27", 2), ("Mod27", 2)],
)
def test_minimal_generator_count(name, d):
    assert minimal_generator_count(grp(name)) == d


@pytest.mark.parametrize(
    "name,flag",
    [
        ("C8", True),
        ("C9", True),
        ("K4", True),
        ("D8", False),
        ("Q8", False),
        ("Heis27", False),
        ("Mod27", True),
    ],
)
def test_is_powerful(name, flag):
    assert is_powerful(grp(name)) is flag


def test_direct_product_basics():
    G = direct_product(grp("C4"), grp("S3"))
    assert G.order == 24
    assert len(G.generators) == 3
    assert not G.is_abelian()
    assert center(G).order == 4
    x = G.embed(0, grp("C4").generators[0])
    y = G.embed(1, grp("S3").generators[0])
    assert G.mul(x, y) == (grp("C4").generators[0], grp("S3").generators[0])


def test_direct_product_projections():
    G = direct_product(grp("C4"), grp("C8"))
    p0 = G.project([0])
    assert p0.is_surjective()
    assert p0.kernel().order == 8
    p01 = G.project([0, 1])
    assert p01.is_injective() and p01.is_surjective()


def test_hom_d8_onto_c2():
    G, C2 = grp("D8"), grp("C2")
    f = Homomorphism(G, C2, [C2.identity, C2.generators[0]])
    assert f.is_surjective()
    ker = f.kernel()
    assert ker.order == 4
    assert G.generators[0] in ker


def test_hom_rejects_relator_violation():
    G, C4 = grp("D8"), grp("C4")
    g = C4.generators[0]
    with pytest.raises(HomomorphismError, match="relator"):
        Homomorphism(G, C4, [g, g])


def test_hom_rejects_wrong_arity_and_foreign_images():
    G, C2 = grp("D8"), grp("C2")
    with pytest.raises(HomomorphismError, match="images"):
        Homomorphism(G, C2, [C2.identity])
    with pytest.raises(HomomorphismError, match="outside"):
        Homomorphism(G, C2, ["nope", C2.identity])


def test_hom_product_law_check_without_presentation():
    # tuple groups carry no presentation, so the product law does the work
    A = direct_product(grp("C8"), grp("C4"))
    C8 = grp("C8")
    g = C8.generators[0]
    with pytest.raises(HomomorphismError, match="product law"):
        Homomorphism(A, C8, [g, g])
    ok = Homomorphism(A, C8, [g, pow_element(C8, g, 2)])
    assert ok.is_surjective()


def test_hom_sampled_check_catches_bad_map_on_large_domain():
    A = direct_product(grp("C8"), grp("C8"), grp("C2"))
    assert A.order == 128
    C8 = grp("C8")
    g = C8.generators[0]
    with pytest.raises(HomomorphismError, match="product law"):
        Homomorphism(A, C8, [g, g, g])


def test_hom_composition_via_application():
    G = grp("Mod27")
    Q = quotient(G, derived_subgroup(G))
    proj = Q.projection
    assert Q.order == 9
    for x in G.elements:
        for y in G.generators:
            assert proj(G.mul(x, y)) == Q.mul(proj(x), proj(y))


def test_subgroup_equality_and_ordering():
    G = grp("D8")
    a = G.generators[0]
    A1 = subgroup_closure(G, [a])
    A2 = subgroup_closure(G, [G.inv(a)])
    assert A1 == A2
    assert trivial_subgroup(G) <= A1 <= whole_subgroup(G)
    assert isinstance(A1, Subgroup)


def test_quotient_is_group_type():
    G = grp("D8")
    assert isinstance(quotient(G, center(G)), QuotientGroup)
