import numpy as np
import pytest

from isoclin.abelian import hom_to_abelian
from isoclin.aut import (
    alpha_constant_on_cosets,
    aut_subgroup,
    automorphism_group,
    class_preserving_witness,
    inner_automorphism_group,
    nth_class_preserving,
    quotient_hom,
    t2_alpha,
    t2_inverse,
)
from isoclin.catalog import catalog_names, get_group, make_cyclic
from isoclin.errors import HypothesisFails, NotCentral, NotHomomorphism, NotMember, NotNormal
from isoclin.group import Automorphism, center, conjugation_automorphism, generate, quotient, trivial_subgroup, whole
from isoclin.series import lower_central, upper_central

KNOWN_AUT = {
    "C1": 1, "C2": 1, "C3": 2, "C4": 2, "C2xC2": 6, "C6": 2, "S3": 6, "C2xC2xC2": 168,
    "C4xC2": 8, "C8": 4, "D4": 8, "Q8": 24, "C3xC3": 48, "D5": 20, "D6": 12, "Dic3": 12,
    "D8": 32, "Q16": 32, "SD16": 16, "M16": 16, "D4xC2": 64, "Q8xC2": 192, "S4": 24,
    "Heis3": 432, "C9:C3": 54,
}  # fmt: skip


@pytest.mark.parametrize("name", sorted(KNOWN_AUT))
def test_automorphism_counts(name):
    assert len(automorphism_group(get_group(name))) == KNOWN_AUT[name]


def test_identity_is_first_member():
    A = automorphism_group(get_group("Q8"))
    assert A.maps[0].tolist() == list(range(8))
    assert A.closed


def test_inner_examples():
    assert len(inner_automorphism_group(get_group("C4xC2"))) == 1
    assert len(inner_automorphism_group(get_group("D4"))) == 4
    assert len(inner_automorphism_group(get_group("S3"))) == 6


def test_aut_subgroup_examples():
    D4 = get_group("D4")
    full = automorphism_group(D4)
    assert aut_subgroup(D4, whole(D4), trivial_subgroup(D4)).keys() == full.keys()
    assert len(aut_subgroup(D4, trivial_subgroup(D4), center(D4))) == 1
    assert len(aut_subgroup(D4, trivial_subgroup(D4), trivial_subgroup(D4))) == 1
    assert len(aut_subgroup(D4, lower_central(D4, 2), center(D4))) == 4


def test_aut_subgroup_requires_normal():
    S3 = get_group("S3")
    with pytest.raises(NotNormal):
        aut_subgroup(S3, generate(S3, [1]), trivial_subgroup(S3))


def test_class_preserving_examples():
    assert len(nth_class_preserving(get_group("C6"), 1)) == 1
    D4 = get_group("D4")
    cp = nth_class_preserving(D4, 1)
    assert cp.keys() == inner_automorphism_group(D4).keys()
    assert len(nth_class_preserving(D4, 2)) == 1
    with pytest.raises(ValueError):
        nth_class_preserving(D4, 0)


def test_class_preserving_witness():
    D4 = get_group("D4")
    f = conjugation_automorphism(D4, 1)
    for g in range(8):
        x = class_preserving_witness(D4, 1, f, g)
        assert x is not None and D4.conjugation[x, g] == f(g)


@pytest.mark.parametrize("name", catalog_names(32))
def test_inner_inside_class_preserving_inside_aut(name):
    G = get_group(name)
    inn = inner_automorphism_group(G)
    cp = nth_class_preserving(G, 1)
    assert inn.issubset(cp)
    assert cp.closed
    for n in (1, 2, 3):
        assert nth_class_preserving(G, n + 1).issubset(nth_class_preserving(G, n))


@pytest.mark.parametrize("name", [n for n in catalog_names(24) if len(automorphism_group(get_group(n))) <= 200])
def test_inner_is_normal_in_aut(name):
    G = get_group(name)
    aut = automorphism_group(G)
    inn = inner_automorphism_group(G)
    for f in aut.maps:
        finv = np.argsort(f)
        for c in inn.maps:
            assert inn.index(f[c[finv]]) >= 0


def test_t2_alpha_examples():
    D4 = get_group("D4")
    M, N = lower_central(D4, 2), center(D4)
    q = quotient(D4, N)
    f = conjugation_automorphism(D4, 1)
    alpha = t2_alpha(D4, M, N, f)
    assert alpha(q.projection(4)) == 2  # s N -> [s, r] = r^2
    assert alpha(q.projection(1)) == 0  # r N -> 1
    assert alpha(q.projection(2)) == 0  # element of N
    ident = t2_alpha(D4, M, N, Automorphism.identity(D4))
    assert set(ident.images) == {0}


def test_t2_alpha_errors():
    D4 = get_group("D4")
    with pytest.raises(NotCentral):
        t2_alpha(D4, whole(D4), center(D4), Automorphism.identity(D4))
    f = conjugation_automorphism(D4, 4)
    with pytest.raises(NotMember):
        t2_alpha(D4, trivial_subgroup(D4), center(D4), f)


def test_t2_inverse_examples():
    D4 = get_group("D4")
    Z = center(D4)
    q = quotient(D4, Z)
    zero = quotient_hom(D4, Z, [0] * q.quotient.order)
    assert t2_inverse(D4, Z, Z, zero).images == tuple(range(8))
    autos = {t2_inverse(D4, Z, Z, quotient_hom(D4, Z, row)).images for row in hom_to_abelian(q.quotient, Z)}
    assert len(autos) == 4
    assert all(Automorphism.of(D4, a).is_automorphism() for a in autos)


def test_t2_inverse_hypotheses():
    D4 = get_group("D4")
    Z = center(D4)
    zero = quotient_hom(D4, trivial_subgroup(D4), [0] * 8)
    with pytest.raises(HypothesisFails):
        t2_inverse(D4, Z, trivial_subgroup(D4), zero)
    bad = quotient_hom(D4, Z, [0, 2, 2, 2])
    with pytest.raises(NotHomomorphism):
        t2_inverse(D4, Z, Z, bad)


def test_alpha_constant_on_cosets_for_members():
    G = get_group("D8")
    N = upper_central(G, 1)
    A = aut_subgroup(G, lower_central(G, 2), N)
    assert alpha_constant_on_cosets(G, N, A.maps).all()


def test_cyclic_aut():
    assert len(automorphism_group(make_cyclic(4))) == 2
