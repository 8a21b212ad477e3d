import itertools

import numpy as np
import pytest
from oracles import lower_series_orders

from isoclin.catalog import catalog_names, get_group, make_cyclic
from isoclin.errors import WrongArity
from isoclin.group import center, commutator_subgroup, exponent, prime_support
from isoclin.series import (
    NotNilpotent,
    central_quotient,
    gamma_map_eval,
    gamma_map_table,
    is_nilpotent,
    lower_central,
    lower_central_series,
    nilpotency_class,
    upper_central,
    upper_central_series,
)


def test_lower_central_examples():
    assert lower_central(get_group("C12"), 2).is_trivial()
    S3 = get_group("S3")
    assert lower_central(S3, 2).order == 3
    assert lower_central(S3, 3).order == 3
    assert lower_central(S3, 1).is_whole()


def test_lower_central_index_checked():
    with pytest.raises(ValueError):
        lower_central(get_group("D4"), 0)
    with pytest.raises(ValueError):
        upper_central(get_group("D4"), -1)


def test_upper_central_examples():
    D8 = get_group("D8")
    assert upper_central(D8, 0).is_trivial()
    assert [upper_central(D8, i).order for i in range(4)] == [1, 2, 4, 16]
    assert upper_central(D8, 10).is_whole()


def test_class_examples():
    assert nilpotency_class(make_cyclic(5)) == 1
    assert nilpotency_class(make_cyclic(1)) == 0
    assert nilpotency_class(get_group("Q8")) == 2
    verdict = nilpotency_class(get_group("S3"))
    assert isinstance(verdict, NotNilpotent) and not verdict
    assert verdict.witness.order == 3
    assert not is_nilpotent(get_group("S4"))


@pytest.mark.parametrize("name", catalog_names(64))
def test_lower_series_matches_oracle(name):
    G = get_group(name)
    assert lower_central_series(G).orders() == lower_series_orders(np.asarray(G.table))


@pytest.mark.parametrize("name", catalog_names(64))
def test_series_lengths_agree(name):
    G = get_group(name)
    c = nilpotency_class(G)
    upper = upper_central_series(G)
    if isinstance(c, int):
        assert upper.terms[-1].is_whole()
        assert upper.stabilized_at == c
    else:
        assert not upper.terms[-1].is_whole()


@pytest.mark.parametrize("name", catalog_names(64))
def test_gamma_and_upper_commute(name):
    G = get_group(name)
    for n in range(1, 5):
        assert commutator_subgroup(G, lower_central(G, n), upper_central(G, n)).is_trivial()


def test_gamma_map_eval_examples():
    D4 = get_group("D4")
    assert gamma_map_eval(D4, 1, [1, 4]) == 2
    H = get_group("Heis3")
    x, y, z = 9, 1, 3  # a=1, b=1 and c=1 in the matrix coordinates
    assert gamma_map_eval(H, 1, [x, y]) == z
    assert center(H).elements == (0, z, 6)


def test_gamma_map_eval_arity():
    D4 = get_group("D4")
    with pytest.raises(WrongArity):
        gamma_map_eval(D4, 1, [1])
    with pytest.raises(WrongArity):
        gamma_map_eval(D4, 0, [1])


def test_gamma_map_vanishes_on_upper_term():
    G = get_group("D8")
    for n in (1, 2):
        Zn = upper_central(G, n)
        for z in Zn:
            for g in range(G.order):
                assert gamma_map_eval(G, n, [z] + [g] * n) == 0
                assert gamma_map_eval(G, n, [g] * n + [z]) == 0


@pytest.mark.parametrize("name", [n for n in catalog_names(16) if is_nilpotent(get_group(n))])
def test_gamma_map_well_defined_on_cosets(name):
    G = get_group(name)
    for n in (1, 2):
        q = central_quotient(G, n)
        if q.quotient.order > 8:
            continue
        table = gamma_map_table(G, n)
        cosets = [q.coset(k) for k in range(q.quotient.order)]
        for idx in itertools.product(range(q.quotient.order), repeat=n + 1):
            expected = table[idx]
            for reps in itertools.product(*(cosets[k] for k in idx)):
                assert gamma_map_eval(G, n, list(reps)) == expected


@pytest.mark.parametrize("name", catalog_names(64))
def test_exponent_lemma_exact_class(name):
    G = get_group(name)
    c = nilpotency_class(G)
    if not isinstance(c, int) or c < 2:
        return
    n = c - 1
    gamma = lower_central(G, n + 1)
    assert exponent(central_quotient(G, n).quotient) == int(np.lcm.reduce(G.element_orders[gamma.array]))


def test_prime_support_of_subgroup_quotient():
    # exp(H) | exp(G) implies the primes of H are among those of G
    names = catalog_names(32)
    for a in names:
        for b in names:
            G, H = get_group(a), get_group(b)
            if exponent(G) % exponent(H) == 0:
                assert prime_support(H) <= prime_support(G)
