import numpy as np
import pytest
from oracles import center as oracle_center
from oracles import closure, comm, element_orders

from isoclin.catalog import catalog_names, get_group, make_cyclic, make_dihedral
from isoclin.errors import (
    ListTooShort,
    NoIdentityAtZero,
    NotAssociative,
    NotLatinSquare,
    NotNormal,
    ParseError,
    ValidationError,
)
from isoclin.group import (
    Automorphism,
    FiniteGroup,
    Homomorphism,
    Subgroup,
    center,
    commutator,
    commutator_table,
    conjugation_automorphism,
    direct_product,
    element_order,
    exponent,
    generate,
    left_normed_commutator,
    prime_support,
    quotient,
    trivial_subgroup,
    validate_cayley_table,
    whole,
)

# A loop of order 5 in which every element is its own inverse; no group of
# order 5 has that property, so the table cannot be associative.
LOOP5 = [
    [0, 1, 2, 3, 4],
    [1, 0, 3, 4, 2],
    [2, 4, 0, 1, 3],
    [3, 2, 4, 0, 1],
    [4, 3, 1, 2, 0],
]


def test_trivial_and_c2_tables():
    T = validate_cayley_table(1, [[0]])
    assert T.order == 1 and T.is_abelian
    C2 = validate_cayley_table(2, [[0, 1], [1, 0]])
    assert list(C2.element_orders) == [1, 2]


def test_idempotent_rejected():
    with pytest.raises((NotLatinSquare, NotAssociative)):
        validate_cayley_table(3, [[0, 1, 2], [1, 1, 0], [2, 0, 1]])


def test_nonassociative_latin_square_names_triple():
    with pytest.raises(NotAssociative) as info:
        validate_cayley_table(5, LOOP5)
    assert any(ch.isdigit() for ch in str(info.value))


def test_identity_must_be_zero():
    with pytest.raises(NoIdentityAtZero):
        validate_cayley_table(2, [[1, 0], [0, 1]])


def test_shape_mismatch_is_parse_error():
    with pytest.raises(ParseError):
        validate_cayley_table(3, [[0, 1], [1, 0]])


def test_validation_errors_are_value_errors():
    assert issubclass(NotAssociative, ValidationError)
    assert issubclass(ValidationError, ValueError)


def test_commutator_convention_d4():
    D4 = get_group("D4")
    r, s = 1, 4
    # [r, s] = r^-1 s^-1 r s = r^-2 = r^2
    assert commutator(D4, r, s) == 2
    assert left_normed_commutator(D4, [r, s]) == commutator(D4, r, s)
    assert left_normed_commutator(D4, [r, s, r]) == commutator(D4, 2, r) == 0


def test_left_normed_needs_two():
    with pytest.raises(ListTooShort):
        left_normed_commutator(get_group("D4"), [1])


@pytest.mark.parametrize("name", ["C6", "C2xC2xC2", "C4xC4"])
def test_abelian_commutators_vanish(name):
    G = get_group(name)
    assert not commutator_table(G).any()


def test_commutator_matches_oracle():
    G = get_group("S4")
    T = np.asarray(G.table)
    for a in range(0, 24, 5):
        for b in range(24):
            assert commutator(G, a, b) == comm(T, a, b)


def test_generate_examples():
    C6 = get_group("C6")
    assert generate(C6, []).elements == (0,)
    assert generate(C6, [0]).elements == (0,)
    assert generate(C6, [3]).order == 2
    S3 = get_group("S3")
    assert generate(S3, [1, 3]).order == 6


def test_center_examples():
    assert center(get_group("C4xC2")).is_whole()
    assert center(get_group("S3")).elements == (0,)
    assert center(get_group("D4")).elements == (0, 2)


@pytest.mark.parametrize("name", catalog_names(32))
def test_center_matches_oracle(name):
    G = get_group(name)
    assert set(center(G).elements) == oracle_center(np.asarray(G.table))


def test_quotient_examples():
    D4 = get_group("D4")
    q = quotient(D4, center(D4))
    assert q.quotient.order == 4
    assert sorted(q.quotient.element_orders) == [1, 2, 2, 2]
    same = quotient(D4, trivial_subgroup(D4))
    assert np.array_equal(same.quotient.table, D4.table)
    assert quotient(D4, whole(D4)).quotient.order == 1


def test_quotient_rejects_non_normal():
    S3 = get_group("S3")
    with pytest.raises(NotNormal):
        quotient(S3, generate(S3, [1]))


def test_quotient_representatives_are_minimal():
    G = get_group("D4xC2")
    q = quotient(G, center(G))
    for k in range(q.quotient.order):
        assert q.representative_array[k] == min(q.coset(k))


def test_direct_product_examples():
    K = direct_product(make_cyclic(2), make_cyclic(2))
    assert K.order == 4 and exponent(K) == 2
    D4 = get_group("D4")
    assert np.array_equal(direct_product(D4, make_cyclic(1)).table, D4.table)
    DD = get_group("D4xD4")
    assert DD.order == 64 and center(DD).order == 4
    assert generate(DD, [commutator(DD, a, b) for a in range(64) for b in range(64)]).order == 4


def test_orders_and_exponents():
    Q8 = get_group("Q8")
    assert element_order(Q8, 0) == 1
    assert exponent(Q8) == 4
    assert exponent(get_group("Heis3")) == 3
    for name in ("S4", "D8", "C9:C3"):
        G = get_group(name)
        assert list(G.element_orders) == element_orders(np.asarray(G.table))


def test_prime_support():
    assert prime_support(make_cyclic(1)) == set()
    assert prime_support(get_group("D4")) == {2}
    assert prime_support(get_group("C12")) == {2, 3}


def test_subgroup_membership_and_normality():
    D4 = get_group("D4")
    Z = center(D4)
    assert 2 in Z and 1 not in Z
    assert Z.is_normal() and Z.is_central()
    reflection = generate(D4, [4])
    assert not reflection.is_normal()
    assert set(reflection.elements) == closure(np.asarray(D4.table), [4])


def test_subgroup_group_relabels():
    D4 = get_group("D4")
    R = generate(D4, [1])
    Rg = R.group
    assert Rg.order == 4 and Rg.is_abelian
    assert list(R.local_index[list(R.elements)]) == [0, 1, 2, 3]


def test_homomorphism_operations():
    D4 = get_group("D4")
    f = conjugation_automorphism(D4, 1)
    assert f.is_automorphism()
    assert f.compose(f.inverse()).images == tuple(range(8))
    proj = quotient(D4, center(D4)).projection
    assert proj.kernel() == center(D4)
    assert proj.image().order == 4
    assert not proj.is_injective() and proj.is_surjective()


def test_automorphism_identity():
    G = make_dihedral(3)
    assert Automorphism.identity(G).images == tuple(range(6))


def test_bad_map_is_not_homomorphism():
    C4 = make_cyclic(4)
    h = Homomorphism(C4, C4, (0, 2, 1, 3))
    assert not h.is_homomorphism()


def test_finite_group_tables_are_frozen():
    G = make_cyclic(3)
    with pytest.raises(ValueError):
        G.table[0, 0] = 1


def test_subgroup_equality_is_by_parent_and_elements():
    G = make_cyclic(4)
    H = make_cyclic(4)
    assert Subgroup(G, (0, 2)) == Subgroup(G, (0, 2))
    assert Subgroup(G, (0, 2)) != Subgroup(H, (0, 2))


def test_finite_group_constructor_validates():
    with pytest.raises(ValidationError):
        FiniteGroup(np.array(LOOP5))
