"""Finite groups as validated Cayley tables over 0-based element indices.

Element 0 is always the identity. Every other object in the package
(subgroups, quotients, homomorphisms) is expressed in terms of these indices.
"""

from __future__ import annotations

import threading
import weakref
from dataclasses import dataclass
from functools import cached_property, reduce
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import (
    NoIdentityAtZero,
    NoInverse,
    NotAssociative,
    NotHomomorphism,
    NotLatinSquare,
    NotNormal,
    ListTooShort,
    OrderLimitExceeded,
    ParseError,
)

MAX_ORDER = 512
FULL_ASSOCIATIVITY_LIMIT = 256
_RANDOM_TRIPLES = 200_000


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


class FiniteGroup:
    """A finite group given by its multiplication table.

    ``table[a, b]`` is the index of the product ``a*b``. Construct through
    :func:`validate_cayley_table` unless the table is known to be a group
    table (the catalog constructors pass ``validate=False`` only after
    building tables from closed formulas, and tests re-validate them).
    """

    def __init__(
        self,
        table,
        names: Sequence[str] | None = None,
        *,
        label: str | None = None,
        validate: bool = True,
    ):
        arr = np.array(table, dtype=np.intp)
        if validate:
            _check_table(arr)
        self.table: np.ndarray = _freeze(arr)
        self.element_names: tuple[str, ...] | None = (
            tuple(str(s) for s in names) if names is not None else None
        )
        if self.element_names is not None and len(self.element_names) != self.order:
            raise ParseError(
                f"{len(self.element_names)} names given for a group of order {self.order}"
            )
        self.label = label

    def __repr__(self) -> str:
        tag = f" {self.label}" if self.label else ""
        return f"<FiniteGroup{tag} order={self.order}>"

    @property
    def order(self) -> int:
        return int(self.table.shape[0])

    def __len__(self) -> int:
        return self.order

    def elements(self) -> range:
        return range(self.order)

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inv(self, a: int) -> int:
        return int(self.inverses[a])

    def name(self, a: int) -> str:
        if self.element_names is not None:
            return self.element_names[a]
        return str(a)

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inv(a), -k
        result, base = 0, a
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    @cached_property
    def inverses(self) -> np.ndarray:
        rows, cols = np.nonzero(self.table == 0)
        inv = np.empty(self.order, dtype=np.intp)
        inv[rows] = cols
        return _freeze(inv)

    @cached_property
    def element_orders(self) -> np.ndarray:
        n = self.order
        orders = np.zeros(n, dtype=np.intp)
        idx = np.arange(n)
        pw = idx.copy()
        k = 1
        while not orders.all():
            orders[(pw == 0) & (orders == 0)] = k
            pw = self.table[pw, idx]
            k += 1
        return _freeze(orders)

    @cached_property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    @cached_property
    def centralizer_sizes(self) -> np.ndarray:
        commute = self.table == self.table.T
        return _freeze(commute.sum(axis=1).astype(np.intp))

    @cached_property
    def profile(self) -> np.ndarray:
        """Per-element isomorphism invariant: (order, centralizer size) packed."""
        return _freeze(self.element_orders * (self.order + 1) + self.centralizer_sizes)

    @cached_property
    def conjugation(self) -> np.ndarray:
        """``conjugation[x, g] = x^-1 g x``."""
        t, inv = self.table, self.inverses
        idx = np.arange(self.order)
        return _freeze(t[t[inv[:, None], idx[None, :]], idx[:, None]])


def _check_table(table: np.ndarray) -> None:
    if table.ndim != 2 or table.shape[0] != table.shape[1] or table.shape[0] < 1:
        raise ParseError(f"table must be a non-empty square matrix, got shape {table.shape}")
    n = table.shape[0]
    if n > MAX_ORDER:
        raise OrderLimitExceeded(f"order {n} exceeds the supported maximum {MAX_ORDER}")
    if table.min() < 0 or table.max() >= n:
        bad = np.argwhere((table < 0) | (table >= n))[0]
        raise NotLatinSquare(f"entry at cell ({bad[0]}, {bad[1]}) is out of range 0..{n - 1}")
    expected = np.arange(n)
    for axis, what in ((1, "row"), (0, "column")):
        ok = (np.sort(table, axis=axis) == (expected[None, :] if axis == 1 else expected[:, None])).all(axis=axis)
        if not ok.all():
            line = int(np.flatnonzero(~ok)[0])
            values = table[line] if axis == 1 else table[:, line]
            seen: set[int] = set()
            for pos, v in enumerate(values):
                if int(v) in seen:
                    cell = (line, pos) if axis == 1 else (pos, line)
                    raise NotLatinSquare(f"{what} {line} repeats value {int(v)} at cell {cell}")
                seen.add(int(v))
    if not (np.array_equal(table[0], expected) and np.array_equal(table[:, 0], expected)):
        bad_row = np.flatnonzero(table[0] != expected)
        bad_col = np.flatnonzero(table[:, 0] != expected)
        cell = (0, int(bad_row[0])) if bad_row.size else (int(bad_col[0]), 0)
        raise NoIdentityAtZero(f"element 0 is not the identity: cell {cell} = {int(table[cell])}")
    left = table == 0
    for a in range(n):
        bs = np.flatnonzero(left[a])
        if bs.size != 1 or table[bs[0], a] != 0:
            raise NoInverse(f"element {a} has no two-sided inverse")
    _check_associative(table)


def _check_associative(table: np.ndarray) -> None:
    n = table.shape[0]
    if n <= FULL_ASSOCIATIVITY_LIMIT:
        chunk = max(1, 2_000_000 // (n * n))
        for start in range(0, n, chunk):
            a = np.arange(start, min(n, start + chunk))
            left = table[table[a, :], :]  # (ab)c
            right = table[a][:, table]  # a(bc)
            bad = np.argwhere(left != right)
            if bad.size:
                i, b, c = bad[0]
                raise NotAssociative(f"triple ({int(a[i])}, {int(b)}, {int(c)}) is not associative")
        return
    rng = np.random.default_rng(0)
    a, b, c = rng.integers(0, n, size=(3, _RANDOM_TRIPLES))
    bad = np.flatnonzero(table[table[a, b], c] != table[a, table[b, c]])
    if bad.size:
        k = bad[0]
        raise NotAssociative(f"triple ({int(a[k])}, {int(b[k])}, {int(c[k])}) is not associative")
    # middle-element check for every x, y against a generating set
    gens = _loop_generators(table)
    for g in gens:
        left = table[table[:, g][:, None], np.arange(n)[None, :]]
        right = table[np.arange(n)[:, None], table[g][None, :]]
        bad = np.argwhere(left != right)
        if bad.size:
            x, y = bad[0]
            raise NotAssociative(f"triple ({int(x)}, {g}, {int(y)}) is not associative")


def _loop_generators(table: np.ndarray) -> list[int]:
    n = table.shape[0]
    mask = np.zeros(n, dtype=bool)
    mask[0] = True
    gens: list[int] = []
    while not mask.all():
        g = int(np.flatnonzero(~mask)[0])
        gens.append(g)
        mask = _closure_mask(table, gens)
    return gens


def _closure_mask(table: np.ndarray, gens: Sequence[int]) -> np.ndarray:
    n = table.shape[0]
    mask = np.zeros(n, dtype=bool)
    mask[0] = True
    gens_arr = np.asarray(sorted(set(int(g) for g in gens) - {0}), dtype=np.intp)
    if gens_arr.size == 0:
        return mask
    frontier = np.array([0], dtype=np.intp)
    while frontier.size:
        prod = table[np.ix_(frontier, gens_arr)].ravel()
        new = np.unique(prod[~mask[prod]])
        mask[new] = True
        frontier = new
    return mask


def validate_cayley_table(order: int, table, names: Sequence[str] | None = None, *, label: str | None = None) -> FiniteGroup:
    """Check that ``table`` is a group table with identity 0 and wrap it."""
    if not isinstance(order, (int, np.integer)) or order < 1:
        raise ParseError(f"order must be a positive integer, got {order!r}")
    if order > MAX_ORDER:
        raise OrderLimitExceeded(f"order {order} exceeds the supported maximum {MAX_ORDER}")
    try:
        arr = np.array(table, dtype=np.intp)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"table is not a rectangular integer matrix: {exc}") from None
    if arr.shape != (order, order):
        raise ParseError(f"table shape {arr.shape} does not match order {order}")
    return FiniteGroup(arr, names, label=label)


# -- subgroups ---------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Subgroup:
    parent: FiniteGroup
    elements: tuple[int, ...]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subgroup):
            return NotImplemented
        return self.parent is other.parent and self.elements == other.elements

    def __hash__(self) -> int:
        return hash((id(self.parent), self.elements))

    def __repr__(self) -> str:
        return f"<Subgroup order={self.order} of {self.parent!r}>"

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[int]:
        return iter(self.elements)

    def __contains__(self, a) -> bool:
        return bool(self.mask[int(a)])

    @cached_property
    def array(self) -> np.ndarray:
        return _freeze(np.array(self.elements, dtype=np.intp))

    @cached_property
    def mask(self) -> np.ndarray:
        m = np.zeros(self.parent.order, dtype=bool)
        m[list(self.elements)] = True
        return _freeze(m)

    def is_trivial(self) -> bool:
        return self.order == 1

    def is_whole(self) -> bool:
        return self.order == self.parent.order

    def issubset(self, other: Subgroup) -> bool:
        return bool(other.mask[self.array].all())

    def intersection(self, other: Subgroup) -> Subgroup:
        return Subgroup(self.parent, tuple(int(x) for x in np.flatnonzero(self.mask & other.mask)))

    def is_normal(self) -> bool:
        conj = self.parent.conjugation[:, self.array]
        return bool(self.mask[conj].all())

    def is_central(self) -> bool:
        return self.issubset(center(self.parent))

    def is_closed(self) -> bool:
        g = self.parent
        if 0 not in self.elements:
            return False
        prod = g.table[np.ix_(self.array, self.array)]
        return bool(self.mask[prod].all() and self.mask[g.inverses[self.array]].all())

    @cached_property
    def local_index(self) -> np.ndarray:
        """Parent index -> position in ``elements`` (-1 outside the subgroup)."""
        loc = np.full(self.parent.order, -1, dtype=np.intp)
        loc[self.array] = np.arange(self.order)
        return _freeze(loc)

    @cached_property
    def group(self) -> FiniteGroup:
        """The subgroup as a standalone group, relabelled by position."""
        sub = self.parent.table[np.ix_(self.array, self.array)]
        names = None
        if self.parent.element_names is not None:
            names = [self.parent.element_names[e] for e in self.elements]
        return FiniteGroup(self.local_index[sub], names, validate=False)


def subgroup(G: FiniteGroup, elements: Iterable[int]) -> Subgroup:
    """Wrap an element set already known to be closed."""
    return Subgroup(G, tuple(sorted({int(e) for e in elements})))


def trivial_subgroup(G: FiniteGroup) -> Subgroup:
    return Subgroup(G, (0,))


def whole(G: FiniteGroup) -> Subgroup:
    return Subgroup(G, tuple(range(G.order)))


def generate(G: FiniteGroup, seed: Iterable[int] = ()) -> Subgroup:
    """Smallest subgroup of ``G`` containing ``seed``."""
    mask = _closure_mask(G.table, list(seed))
    return Subgroup(G, tuple(int(x) for x in np.flatnonzero(mask)))


def center(G: FiniteGroup) -> Subgroup:
    central = (G.table == G.table.T).all(axis=1)
    return Subgroup(G, tuple(int(x) for x in np.flatnonzero(central)))


def centralizer(G: FiniteGroup, S: Iterable[int]) -> Subgroup:
    s = np.asarray(list(S), dtype=np.intp)
    commute = (G.table[:, s] == G.table[s, :].T).all(axis=1)
    return Subgroup(G, tuple(int(x) for x in np.flatnonzero(commute)))


# -- commutators --------------------------------------------------------------


def commutator(G: FiniteGroup, a: int, b: int) -> int:
    """``[a, b] = a^-1 b^-1 a b``."""
    t, inv = G.table, G.inverses
    return int(t[t[inv[a], inv[b]], t[a, b]])


def commutator_table(G: FiniteGroup) -> np.ndarray:
    t, inv = G.table, G.inverses
    return t[t[inv[:, None], inv[None, :]], t]


def left_normed_commutator(G: FiniteGroup, elems: Sequence[int]) -> int:
    """``[g1, g2, ..., gk] = [[g1, g2], ..., gk]``."""
    if len(elems) < 2:
        raise ListTooShort(f"a commutator needs at least 2 entries, got {len(elems)}")
    return reduce(lambda acc, x: commutator(G, acc, x), elems[1:], int(elems[0]))


def commutator_subgroup(G: FiniteGroup, A: Subgroup, B: Subgroup) -> Subgroup:
    """``[A, B]``, generated by all ``[a, b]``."""
    values = commutator_table(G)[np.ix_(A.array, B.array)]
    return generate(G, np.unique(values).tolist())


# -- element orders -------------------------------------------------------------


def element_order(G: FiniteGroup, a: int) -> int:
    return int(G.element_orders[a])


def exponent(G: FiniteGroup) -> int:
    return int(np.lcm.reduce(G.element_orders))


def subgroup_exponent(S: Subgroup) -> int:
    return int(np.lcm.reduce(S.parent.element_orders[S.array]))


def prime_factors(n: int) -> list[int]:
    primes, p = [], 2
    while p * p <= n:
        if n % p == 0:
            primes.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        primes.append(n)
    return primes


def prime_support(G: FiniteGroup) -> set[int]:
    return set(prime_factors(G.order))


# -- quotients ----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class QuotientData:
    parent: FiniteGroup
    divisor: Subgroup
    quotient: FiniteGroup
    projection: Homomorphism
    representatives: tuple[int, ...]

    @cached_property
    def projection_array(self) -> np.ndarray:
        return self.projection.array

    @cached_property
    def representative_array(self) -> np.ndarray:
        return _freeze(np.array(self.representatives, dtype=np.intp))

    def coset(self, q: int) -> tuple[int, ...]:
        return tuple(int(x) for x in np.flatnonzero(self.projection_array == q))


_quotient_cache: "weakref.WeakKeyDictionary[FiniteGroup, dict]" = weakref.WeakKeyDictionary()
_quotient_lock = threading.Lock()


def quotient(G: FiniteGroup, N: Subgroup) -> QuotientData:
    """``G/N`` on minimal-index coset representatives (memoized per group)."""
    if N.parent is not G:
        raise NotNormal("divisor is a subgroup of a different group")
    with _quotient_lock:
        per_group = _quotient_cache.setdefault(G, {})
        cached = per_group.get(N.elements)
    if cached is not None:
        return cached
    if not N.is_normal():
        raise NotNormal(f"subgroup of order {N.order} is not normal")
    coset_min = G.table[:, N.array].min(axis=1)
    reps = np.unique(coset_min)
    proj = np.searchsorted(reps, coset_min)
    qtable = proj[G.table[np.ix_(reps, reps)]]
    names = None
    if G.element_names is not None:
        names = [f"{G.element_names[r]}N" for r in reps]
    Q = FiniteGroup(qtable, names, validate=False)
    data = QuotientData(
        parent=G,
        divisor=N,
        quotient=Q,
        projection=Homomorphism(G, Q, tuple(int(x) for x in proj)),
        representatives=tuple(int(r) for r in reps),
    )
    with _quotient_lock:
        per_group = _quotient_cache.setdefault(G, {})
        return per_group.setdefault(N.elements, data)


def direct_product(G: FiniteGroup, H: FiniteGroup, *, label: str | None = None) -> FiniteGroup:
    """``G x H`` with ``(i, j)`` encoded as ``i*|H| + j``."""
    m = H.order
    if G.order * m > MAX_ORDER:
        raise OrderLimitExceeded(f"order {G.order * m} exceeds the supported maximum {MAX_ORDER}")
    t = G.table[:, None, :, None] * m + H.table[None, :, None, :]
    names = None
    if G.element_names is not None or H.element_names is not None:
        names = [f"({G.name(i)},{H.name(j)})" for i in range(G.order) for j in range(m)]
    return FiniteGroup(t.reshape(G.order * m, G.order * m), names, label=label, validate=False)


# -- homomorphisms ---------------------------------------------------------------


@dataclass(frozen=True)
class Homomorphism:
    """A map ``source -> target`` given by its image array.

    Construction does not check the homomorphism law; call :meth:`check` or
    :meth:`is_homomorphism` when the map comes from outside.
    """

    source: FiniteGroup
    target: FiniteGroup
    images: tuple[int, ...]

    def __post_init__(self):
        if len(self.images) != self.source.order:
            raise NotHomomorphism(
                f"image array has length {len(self.images)}, source has order {self.source.order}"
            )

    def __call__(self, a: int) -> int:
        return self.images[a]

    def __repr__(self) -> str:
        return f"{type(self).__name__}({list(self.images)})"

    @cached_property
    def array(self) -> np.ndarray:
        return _freeze(np.array(self.images, dtype=np.intp))

    def is_homomorphism(self) -> bool:
        f = self.array
        if f.min() < 0 or f.max() >= self.target.order:
            return False
        return bool(np.array_equal(f[self.source.table], self.target.table[f[:, None], f[None, :]]))

    def check(self) -> Homomorphism:
        if not self.is_homomorphism():
            raise NotHomomorphism("map does not respect multiplication")
        return self

    def is_injective(self) -> bool:
        return len(set(self.images)) == len(self.images)

    def is_surjective(self) -> bool:
        return len(set(self.images)) == self.target.order

    def is_bijective(self) -> bool:
        return self.source.order == self.target.order and self.is_injective()

    def kernel(self) -> Subgroup:
        return Subgroup(self.source, tuple(int(x) for x in np.flatnonzero(self.array == 0)))

    def image(self) -> Subgroup:
        return Subgroup(self.target, tuple(sorted(set(self.images))))

    def compose(self, inner: Homomorphism) -> Homomorphism:
        """``self o inner`` (apply ``inner`` first)."""
        return Homomorphism(inner.source, self.target, tuple(int(x) for x in self.array[inner.array]))

    def inverse(self) -> Homomorphism:
        if not self.is_bijective():
            raise NotHomomorphism("only bijective maps can be inverted")
        inv = np.empty(self.source.order, dtype=np.intp)
        inv[self.array] = np.arange(self.source.order)
        return Homomorphism(self.target, self.source, tuple(int(x) for x in inv))


@dataclass(frozen=True, repr=False)
class Automorphism(Homomorphism):
    def __post_init__(self):
        super().__post_init__()
        if self.source is not self.target:
            raise NotHomomorphism("an automorphism must have the same source and target")

    @classmethod
    def of(cls, G: FiniteGroup, images) -> Automorphism:
        return cls(G, G, tuple(int(x) for x in images))

    @classmethod
    def identity(cls, G: FiniteGroup) -> Automorphism:
        return cls(G, G, tuple(range(G.order)))

    def is_automorphism(self) -> bool:
        return self.is_bijective() and self.is_homomorphism()

    def compose(self, inner: Homomorphism) -> Homomorphism:
        result = super().compose(inner)
        if isinstance(inner, Automorphism) and inner.source is self.source:
            return Automorphism(self.source, self.source, result.images)
        return result

    def inverse(self) -> Automorphism:
        inv = super().inverse()
        return Automorphism(self.source, self.source, inv.images)


def identity_map(G: FiniteGroup) -> Automorphism:
    return Automorphism.identity(G)


def conjugation_automorphism(G: FiniteGroup, x: int) -> Automorphism:
    """``g -> x^-1 g x``."""
    return Automorphism.of(G, G.conjugation[x])
