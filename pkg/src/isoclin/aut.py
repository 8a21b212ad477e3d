"""Automorphism groups and the restricted subgroups ``Aut_N^M(G)`` and
``Aut_c^n(G)``.

Members are enumerated by generator-image backtracking. For the restricted
subgroups the candidate images of each generator are cut down first (a
generator in ``N`` must stay put, any other generator ``g`` can only go to
``gM``; for ``Aut_c^n`` only to conjugates of ``g`` by ``gamma_n``), and then
every surviving map is checked against the full definition.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterator

import numpy as np

from .errors import HypothesisFails, NotCentral, NotHomomorphism, NotMember, NotNormal, OrderLimitExceeded
from .group import (
    MAX_ORDER,
    Automorphism,
    FiniteGroup,
    Homomorphism,
    Subgroup,
    center,
    quotient,
)
from .search import all_homomorphisms, generating_sequence, lex_sort, profile_candidates
from .series import lower_central


@dataclass(frozen=True, eq=False)
class AutomorphismGroup:
    """A group of automorphisms of ``base`` stored as a sorted map array.

    Rows are in lexicographic order, so row 0 is always the identity.
    """

    base: FiniteGroup
    maps: np.ndarray

    def __post_init__(self):
        self.maps.setflags(write=False)

    def __len__(self) -> int:
        return int(self.maps.shape[0])

    @property
    def order(self) -> int:
        return len(self)

    def __iter__(self) -> Iterator[Automorphism]:
        for row in self.maps:
            yield Automorphism(self.base, self.base, tuple(int(x) for x in row))

    @property
    def members(self) -> list[Automorphism]:
        return list(self)

    @cached_property
    def _index(self) -> dict[bytes, int]:
        return {row.tobytes(): i for i, row in enumerate(self.maps)}

    def index(self, f) -> int:
        arr = np.asarray(f.images if isinstance(f, Homomorphism) else f, dtype=np.intp)
        return self._index.get(arr.tobytes(), -1)

    def __contains__(self, f) -> bool:
        return self.index(f) >= 0

    def keys(self) -> set[bytes]:
        return set(self._index)

    def issubset(self, other: AutomorphismGroup) -> bool:
        return self.keys() <= other.keys()

    @cached_property
    def closed(self) -> bool:
        """Closure under composition and inversion (checked, not assumed)."""
        keys = self._index
        n = self.base.order
        ident = np.arange(n)
        if ident.tobytes() not in keys:
            return False
        for f in self.maps:
            inv = np.empty(n, dtype=np.intp)
            inv[f] = ident
            if inv.tobytes() not in keys:
                return False
            for h in f[self.maps]:
                if h.tobytes() not in keys:
                    return False
        return True

    def composition_table(self) -> np.ndarray:
        """``table[i, j]`` = index of ``maps[i] o maps[j]``."""
        m = len(self)
        table = np.empty((m, m), dtype=np.intp)
        keys = self._index
        for i, f in enumerate(self.maps):
            for j, h in enumerate(f[self.maps]):
                k = keys.get(h.tobytes())
                if k is None:
                    raise NotMember("collection is not closed under composition")
                table[i, j] = k
        return table

    def as_group(self) -> FiniteGroup:
        return FiniteGroup(self.composition_table())


def _automorphism_group(G: FiniteGroup, maps: np.ndarray) -> AutomorphismGroup:
    maps = np.ascontiguousarray(lex_sort(np.asarray(maps, dtype=np.intp)))
    return AutomorphismGroup(G, maps)


def _check_limit(G: FiniteGroup) -> None:
    if G.order > MAX_ORDER:
        raise OrderLimitExceeded(f"order {G.order} exceeds the supported maximum {MAX_ORDER}")


def automorphism_group(G: FiniteGroup) -> AutomorphismGroup:
    _check_limit(G)
    gens = generating_sequence(G)
    maps = all_homomorphisms(G, G, gens, profile_candidates(G, G, gens), injective=True)
    return _automorphism_group(G, maps)


def inner_automorphism_group(G: FiniteGroup) -> AutomorphismGroup:
    """Conjugations ``g -> x^-1 g x`` for all ``x``."""
    return _automorphism_group(G, np.unique(G.conjugation, axis=0))


# -- Aut_N^M ------------------------------------------------------------------------


def aut_subgroup_mask(G: FiniteGroup, M: Subgroup, N: Subgroup, maps: np.ndarray) -> np.ndarray:
    """Rows of ``maps`` that fix ``N`` pointwise, act trivially on ``G/M`` and
    send ``M`` into itself."""
    maps = np.atleast_2d(maps)
    fixes_n = (maps[:, N.array] == N.array[None, :]).all(axis=1)
    drift = G.table[G.inverses[None, :], maps]  # g^-1 f(g)
    trivial_mod_m = M.mask[drift].all(axis=1)
    keeps_m = M.mask[maps[:, M.array]].all(axis=1)
    return fixes_n & trivial_mod_m & keeps_m


def aut_subgroup(G: FiniteGroup, M: Subgroup, N: Subgroup) -> AutomorphismGroup:
    """``Aut_N^M(G)``: automorphisms fixing ``N`` pointwise and acting
    trivially on ``G/M``."""
    _check_limit(G)
    for S, tag in ((M, "M"), (N, "N")):
        if S.parent is not G:
            raise NotNormal(f"{tag} is not a subgroup of this group")
        if not S.is_normal():
            raise NotNormal(f"{tag} (order {S.order}) is not normal")
    gens = generating_sequence(G)
    cands = []
    for g in gens:
        if g in N:
            cands.append([g])
        else:
            coset = G.table[g, M.array]
            cands.append([int(x) for x in coset if G.profile[x] == G.profile[g]])
    maps = all_homomorphisms(G, G, gens, cands, injective=True)
    return _automorphism_group(G, maps[aut_subgroup_mask(G, M, N, maps)])


# -- Aut_c^n ------------------------------------------------------------------------


def class_preserving_allowed(G: FiniteGroup, n: int) -> np.ndarray:
    """``allowed[g, y]``: ``y = x^-1 g x`` for some ``x`` in ``gamma_n(G)``."""
    gamma = lower_central(G, n)
    allowed = np.zeros((G.order, G.order), dtype=bool)
    conj = G.conjugation[gamma.array]  # rows x, columns g
    cols = np.broadcast_to(np.arange(G.order), conj.shape)
    allowed[cols.ravel(), conj.ravel()] = True
    return allowed


def nth_class_preserving(G: FiniteGroup, n: int) -> AutomorphismGroup:
    """``Aut_c^n(G)``: each ``g`` goes to ``x^-1 g x`` for some ``x`` in
    ``gamma_n(G)`` (the witness may depend on ``g``)."""
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    _check_limit(G)
    allowed = class_preserving_allowed(G, n)
    gens = generating_sequence(G)
    cands = [np.flatnonzero(allowed[g]).tolist() for g in gens]
    maps = all_homomorphisms(G, G, gens, cands, injective=True)
    ok = allowed[np.arange(G.order)[None, :], maps].all(axis=1) if maps.size else np.zeros(0, bool)
    return _automorphism_group(G, maps[ok])


def class_preserving_witness(G: FiniteGroup, n: int, f: Automorphism, g: int) -> int | None:
    """Smallest ``x`` in ``gamma_n(G)`` with ``f(g) = x^-1 g x``, if any."""
    for x in lower_central(G, n):
        if G.conjugation[x, g] == f(g):
            return x
    return None


# -- the map f -> (gN -> g^-1 f(g)) and its inverse ---------------------------------


def _require_central(G: FiniteGroup, M: Subgroup) -> None:
    if not M.issubset(center(G)):
        raise NotCentral(f"subgroup of order {M.order} is not central")


def alpha_rows(G: FiniteGroup, N: Subgroup, maps: np.ndarray) -> np.ndarray:
    """For each automorphism row, ``g^-1 f(g)`` at every coset representative
    of ``G/N`` (one column per quotient element)."""
    q = quotient(G, N)
    reps = q.representative_array
    maps = np.atleast_2d(maps)
    return G.table[G.inverses[reps][None, :], maps[:, reps]]


def alpha_constant_on_cosets(G: FiniteGroup, N: Subgroup, maps: np.ndarray) -> np.ndarray:
    """Per row: is ``g^-1 f(g)`` the same on every element of each coset?"""
    q = quotient(G, N)
    maps = np.atleast_2d(maps)
    drift = G.table[G.inverses[None, :], maps]
    at_reps = alpha_rows(G, N, maps)
    return (drift == at_reps[:, q.projection_array]).all(axis=1)


def t2_alpha(G: FiniteGroup, M: Subgroup, N: Subgroup, f: Automorphism) -> Homomorphism:
    """``gN -> g^-1 f(g)`` as a map from ``G/N`` into ``G`` (values in ``M``)."""
    _require_central(G, M)
    row = np.asarray(f.images, dtype=np.intp)
    if not aut_subgroup_mask(G, M, N, row)[0]:
        raise NotMember("automorphism is not in Aut_N^M(G)")
    if not alpha_constant_on_cosets(G, N, row)[0]:
        raise NotHomomorphism("g^-1 f(g) is not constant on cosets of N")
    q = quotient(G, N)
    return Homomorphism(q.quotient, G, tuple(int(x) for x in alpha_rows(G, N, row)[0]))


def t2_inverse(G: FiniteGroup, M: Subgroup, N: Subgroup, chi: Homomorphism) -> Automorphism:
    """``g -> g * chi(gN)`` for a homomorphism ``chi: G/N -> M``.

    The result is returned even when it fails to be an automorphism so that
    callers can test that claim themselves.
    """
    if not M.issubset(N):
        raise HypothesisFails("M is not contained in N")
    if not M.issubset(center(G)):
        raise HypothesisFails("M is not central")
    q = quotient(G, N)
    if chi.source is not q.quotient or chi.target is not G:
        raise NotHomomorphism("chi must map G/N into G")
    vals = chi.array
    if not M.mask[vals].all():
        raise NotHomomorphism("chi takes values outside M")
    if not np.array_equal(vals[q.quotient.table], G.table[vals[:, None], vals[None, :]]):
        raise NotHomomorphism("chi does not respect multiplication")
    images = G.table[np.arange(G.order), vals[q.projection_array]]
    return Automorphism.of(G, images)


def quotient_hom(G: FiniteGroup, N: Subgroup, values) -> Homomorphism:
    q = quotient(G, N)
    return Homomorphism(q.quotient, G, tuple(int(x) for x in values))
