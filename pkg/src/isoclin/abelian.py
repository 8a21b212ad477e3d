"""Finite abelian groups: primary components, cyclic decompositions and
Hom-groups."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import ExponentHypothesisFails, MixedPrimes, NotAbelian, NotHomomorphism, OrderLimitExceeded
from .group import FiniteGroup, Homomorphism, Subgroup, exponent, generate, prime_factors, quotient
from .search import lex_sort

Invariants = dict[int, tuple[int, ...]]

# Largest Hom-group materialized as explicit maps (members x source order cells).
MAX_HOM_CELLS = 40_000_000


def _require_abelian(A: FiniteGroup, what: str = "group") -> None:
    if not A.is_abelian:
        raise NotAbelian(f"{what} of order {A.order} is not abelian")


def _is_prime_power_of(n: int, p: int) -> bool:
    while n % p == 0:
        n //= p
    return n == 1


def primary_component(A: FiniteGroup, p: int) -> Subgroup:
    """Elements of ``A`` whose order is a power of ``p``."""
    _require_abelian(A)
    keep = [x for x in range(A.order) if _is_prime_power_of(int(A.element_orders[x]), p)]
    return Subgroup(A, tuple(keep))


@dataclass(frozen=True)
class AbelianDecomposition:
    parent: FiniteGroup
    primaries: dict[int, tuple[int, ...]]
    generators: dict[int, tuple[int, ...]]

    @property
    def factor_orders(self) -> list[int]:
        return [a for p in sorted(self.primaries) for a in self.primaries[p]]

    @property
    def factor_generators(self) -> list[int]:
        return [g for p in sorted(self.generators) for g in self.generators[p]]

    def invariants(self) -> Invariants:
        return dict(self.primaries)


def cyclic_decomposition(A: FiniteGroup) -> AbelianDecomposition:
    """Split each primary component into cyclic factors by repeatedly taking
    an element of maximal order modulo the factors found so far, lifted to an
    element of that same order."""
    _require_abelian(A)
    primaries: dict[int, tuple[int, ...]] = {}
    gens: dict[int, tuple[int, ...]] = {}
    t = A.table
    for p in prime_factors(A.order):
        P = primary_component(A, p).array
        found: list[int] = []
        span = generate(A, []).mask
        while int(span[P].sum()) < P.size:
            ord_mod = np.zeros(P.size, dtype=np.intp)
            pw = P.copy()
            k = 1
            while not ord_mod.all():
                ord_mod[(span[pw]) & (ord_mod == 0)] = k
                pw = t[pw, P]
                k += 1
            m = int(ord_mod.max())
            lifts = P[(ord_mod == m) & (A.element_orders[P] == m)]
            if lifts.size == 0:
                raise RuntimeError(f"no lift of order {m} found in the {p}-component")
            g = int(lifts.min())
            found.append(g)
            span = generate(A, found).mask
        primaries[p] = tuple(int(A.element_orders[g]) for g in found)
        gens[p] = tuple(found)
    return AbelianDecomposition(A, primaries, gens)


def invariants_from_orders(orders: np.ndarray, group_order: int) -> Invariants:
    """Primary invariants of a finite abelian group from its element orders.

    The count of elements killed by ``p^k`` is ``p^(sum_j min(e_j, k))`` for
    cyclic factors ``C_{p^e_j}``, which pins down the ``e_j``.
    """
    orders = np.asarray(orders)
    result: Invariants = {}
    for p in prime_factors(group_order):
        ranks = []
        k, prev_log = 1, 0
        full = group_order
        while full % p == 0:
            full //= p
        target = int(round(math.log(group_order // full, p)))
        while prev_log < target:
            cnt = int(np.count_nonzero((p**k) % orders == 0))
            log = int(round(math.log(cnt, p)))
            ranks.append(log - prev_log)
            prev_log = log
            k += 1
        ranks.append(0)
        factors: list[int] = []
        for e in range(len(ranks) - 1, 0, -1):
            factors += [p**e] * (ranks[e - 1] - ranks[e])
        result[p] = tuple(factors)
    return result


def abelian_invariants(A: FiniteGroup) -> Invariants:
    _require_abelian(A)
    return invariants_from_orders(A.element_orders, A.order)


def is_cyclic(A: FiniteGroup) -> bool:
    _require_abelian(A)
    return bool((A.element_orders == A.order).any())


def exponent_of_invariants(inv: Invariants) -> int:
    return math.prod(max(fs) for fs in inv.values() if fs) if inv else 1


@dataclass(frozen=True, eq=False)
class HomGroup:
    """``Hom(source, target)`` with every member stored as an image array.

    ``maps`` rows are sorted lexicographically; row 0 is the zero map.
    """

    source: FiniteGroup
    target: FiniteGroup
    maps: np.ndarray

    def __len__(self) -> int:
        return int(self.maps.shape[0])

    @property
    def order(self) -> int:
        return len(self)

    @property
    def members(self) -> list[Homomorphism]:
        return [Homomorphism(self.source, self.target, tuple(int(x) for x in row)) for row in self.maps]

    @cached_property
    def member_orders(self) -> np.ndarray:
        return np.lcm.reduce(self.target.element_orders[self.maps], axis=1)

    @cached_property
    def structure(self) -> Invariants:
        """Cyclic invariants of the Hom-group, read off its member orders."""
        if len(self) == 1:
            return {}
        return invariants_from_orders(self.member_orders, len(self))

    def is_closed(self) -> bool:
        keys = {row.tobytes() for row in self.maps}
        t = self.target.table
        for row in self.maps:
            prods = t[row[None, :], self.maps]
            if any(p.tobytes() not in keys for p in prods):
                return False
        return True


def gcd_count(A: FiniteGroup, B: FiniteGroup) -> int:
    """``prod_{i,j} gcd(a_i, b_j)`` over cyclic factor orders."""
    a = cyclic_decomposition(A).factor_orders
    b = cyclic_decomposition(B).factor_orders
    return math.prod(math.gcd(x, y) for x in a for y in b)


def hom_group(A: FiniteGroup, B: FiniteGroup) -> HomGroup:
    """All homomorphisms between two finite abelian groups.

    Each cyclic generator of order ``a`` may go to any target element of
    order dividing ``a``; every resulting map is then checked against the
    multiplication tables.
    """
    _require_abelian(A, "source")
    _require_abelian(B, "target")
    dec = cyclic_decomposition(A)
    gens = dec.factor_generators
    orders = dec.factor_orders
    choices = [np.flatnonzero(a % B.element_orders == 0) for a in orders]
    total = math.prod(c.size for c in choices)
    if total * A.order > MAX_HOM_CELLS:
        raise OrderLimitExceeded(f"Hom-group of order {total} is too large to materialize")

    # exponent coordinates of every element of A
    elems = np.zeros(1, dtype=np.intp)
    coords = np.zeros((1, 0), dtype=np.intp)
    for g, a in zip(gens, orders):
        pw = np.array([A.power(g, e) for e in range(a)], dtype=np.intp)
        elems = A.table[elems[:, None], pw[None, :]].ravel()
        coords = np.concatenate(
            [np.repeat(coords, a, axis=0), np.tile(np.arange(a), coords.shape[0])[:, None]], axis=1
        )
    if np.unique(elems).size != A.order:
        raise RuntimeError("cyclic factors do not form a direct decomposition")

    bt = B.table
    max_a = max(orders, default=1)
    bpow = np.zeros((B.order, max_a), dtype=np.intp)
    for e in range(1, max_a):
        bpow[:, e] = bt[bpow[:, e - 1], np.arange(B.order)]

    grids = np.meshgrid(*choices, indexing="ij") if choices else []
    picks = np.stack([gd.ravel() for gd in grids], axis=1) if choices else np.zeros((1, 0), dtype=np.intp)
    maps = np.zeros((picks.shape[0], A.order), dtype=np.intp)
    for col, elem in enumerate(elems):
        acc = np.zeros(picks.shape[0], dtype=np.intp)
        for i in range(len(gens)):
            acc = bt[acc, bpow[picks[:, i], coords[col, i]]]
        maps[:, elem] = acc

    step = max(1, MAX_HOM_CELLS // max(1, A.order * A.order))
    for start in range(0, maps.shape[0], step):
        part = maps[start : start + step]
        if not np.array_equal(part[:, A.table], bt[part[:, :, None], part[:, None, :]]):
            raise NotHomomorphism("generator images violate the multiplication table")
    return HomGroup(A, B, lex_sort(maps))


def hom_structure(A: FiniteGroup, B: FiniteGroup) -> Invariants:
    """Invariants of ``Hom(A, B)`` without listing members: it is the direct
    sum over cyclic factors ``C_a`` of ``A`` of the ``a``-torsion of ``B``."""
    _require_abelian(A, "source")
    _require_abelian(B, "target")
    merged: dict[int, list[int]] = {}
    for a in cyclic_decomposition(A).factor_orders:
        torsion = Subgroup(B, tuple(int(x) for x in np.flatnonzero(a % B.element_orders == 0)))
        for p, fs in invariants_from_orders(B.element_orders[torsion.array], torsion.order).items():
            merged.setdefault(p, []).extend(fs)
    return {p: tuple(sorted(fs, reverse=True)) for p, fs in sorted(merged.items()) if fs}


def _nontrivial(inv: Invariants) -> Invariants:
    return {p: fs for p, fs in inv.items() if fs}


@dataclass(frozen=True)
class MalyVerdict:
    prime: int | None
    source_structure: Invariants
    hom_structure: Invariants
    hom_isomorphic_to_source: bool
    target_cyclic: bool

    @property
    def agree(self) -> bool:
        return self.hom_isomorphic_to_source == self.target_cyclic


def maly_criterion(A: FiniteGroup, B: FiniteGroup, *, materialize: bool = False, strict: bool = True) -> MalyVerdict:
    """Compare ``Hom(A, B) ~ A`` against ``B`` cyclic for abelian p-groups.

    The two booleans are computed independently. With ``strict`` the
    hypothesis ``exp(A) | exp(B)`` is enforced; without it any same-prime
    pair is accepted (the equivalence can then fail, e.g. ``A = C4, B = C2``).
    """
    _require_abelian(A, "source")
    _require_abelian(B, "target")
    primes = set(prime_factors(A.order)) | set(prime_factors(B.order))
    if len(primes) > 1:
        raise MixedPrimes(f"orders {A.order} and {B.order} are not powers of one prime")
    if strict and exponent(B) % exponent(A):
        raise ExponentHypothesisFails(f"exp(A)={exponent(A)} does not divide exp(B)={exponent(B)}")
    hom = hom_group(A, B).structure if materialize else hom_structure(A, B)
    src = _nontrivial(abelian_invariants(A))
    hom = _nontrivial(hom)
    return MalyVerdict(
        prime=next(iter(primes), None),
        source_structure=src,
        hom_structure=hom,
        hom_isomorphic_to_source=hom == src,
        target_cyclic=is_cyclic(B),
    )


def abelianization(Q: FiniteGroup):
    from .series import lower_central

    return quotient(Q, lower_central(Q, 2))


def hom_to_abelian(Q: FiniteGroup, M: Subgroup) -> np.ndarray:
    """All homomorphisms from any finite group ``Q`` into the abelian
    subgroup ``M`` (of some other group), as rows of parent indices of ``M``.

    Maps factor through the abelianization of ``Q``.
    """
    Mg = M.group
    _require_abelian(Mg, "target subgroup")
    ab = abelianization(Q)
    hom = hom_group(ab.quotient, Mg)
    local = hom.maps[:, ab.projection_array]
    return lex_sort(M.array[local])
