"""Lower and upper central series, nilpotency class and the map
``(g_1 Z_n, ..., g_{n+1} Z_n) -> [g_1, ..., g_{n+1}]``."""

from __future__ import annotations

import threading
import weakref
from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from .errors import WrongArity
from .group import (
    FiniteGroup,
    QuotientData,
    Subgroup,
    center,
    commutator_subgroup,
    left_normed_commutator,
    quotient,
    trivial_subgroup,
    whole,
)


@dataclass(frozen=True)
class CentralSeries:
    kind: Literal["lower", "upper"]
    terms: tuple[Subgroup, ...]
    stabilized_at: int

    def __getitem__(self, i: int) -> Subgroup:
        """Term ``i`` in the paper-style numbering (lower from 1, upper from 0)."""
        pos = i - 1 if self.kind == "lower" else i
        if pos < 0:
            raise IndexError(f"no {self.kind} central term with index {i}")
        return self.terms[min(pos, len(self.terms) - 1)]

    def orders(self) -> list[int]:
        return [t.order for t in self.terms]


@dataclass(frozen=True)
class NotNilpotent:
    """Returned by :func:`nilpotency_class`; ``witness`` is the term where the
    lower central series stalls above the trivial subgroup."""

    witness: Subgroup

    def __bool__(self) -> bool:
        return False


_cache: "weakref.WeakKeyDictionary[FiniteGroup, dict]" = weakref.WeakKeyDictionary()
_lock = threading.Lock()


def _memo(G: FiniteGroup, key: str, build):
    with _lock:
        slot = _cache.setdefault(G, {})
        if key in slot:
            return slot[key]
    value = build()
    with _lock:
        return _cache[G].setdefault(key, value)


def lower_central_series(G: FiniteGroup) -> CentralSeries:
    def build():
        G_all = whole(G)
        terms = [G_all]
        while True:
            nxt = commutator_subgroup(G, terms[-1], G_all)
            if nxt == terms[-1]:
                break
            terms.append(nxt)
        return CentralSeries("lower", tuple(terms), len(terms))

    return _memo(G, "lower", build)


def upper_central_series(G: FiniteGroup) -> CentralSeries:
    def build():
        terms = [trivial_subgroup(G)]
        while True:
            q = quotient(G, terms[-1])
            zq = center(q.quotient)
            nxt = Subgroup(G, tuple(int(x) for x in np.flatnonzero(zq.mask[q.projection_array])))
            if nxt == terms[-1]:
                break
            terms.append(nxt)
        return CentralSeries("upper", tuple(terms), len(terms) - 1)

    return _memo(G, "upper", build)


def lower_central(G: FiniteGroup, i: int) -> Subgroup:
    """``gamma_i(G)``; ``gamma_1 = G``."""
    if i < 1:
        raise ValueError(f"lower central terms start at index 1, got {i}")
    return lower_central_series(G)[i]


def upper_central(G: FiniteGroup, i: int) -> Subgroup:
    """``Z_i(G)``; ``Z_0`` is trivial."""
    if i < 0:
        raise ValueError(f"upper central terms start at index 0, got {i}")
    return upper_central_series(G)[i]


def nilpotency_class(G: FiniteGroup) -> int | NotNilpotent:
    lower = lower_central_series(G)
    last = lower.terms[-1]
    if not last.is_trivial():
        return NotNilpotent(last)
    return len(lower.terms) - 1


def is_nilpotent(G: FiniteGroup) -> bool:
    return not isinstance(nilpotency_class(G), NotNilpotent)


def central_quotient(G: FiniteGroup, n: int) -> QuotientData:
    """``G / Z_n(G)``."""
    return quotient(G, upper_central(G, n))


def gamma_map_eval(G: FiniteGroup, n: int, coset_reps: Sequence[int]) -> int:
    if n < 1:
        raise WrongArity(f"level must be at least 1, got {n}")
    if len(coset_reps) != n + 1:
        raise WrongArity(f"expected {n + 1} coset representatives, got {len(coset_reps)}")
    return left_normed_commutator(G, [int(g) for g in coset_reps])


def gamma_map_table(G: FiniteGroup, n: int) -> np.ndarray:
    """All values of the level-``n`` commutator map on quotient representatives.

    The result has ``n + 1`` axes, each indexed by elements of ``G/Z_n(G)``;
    entry ``[q_1, ..., q_{n+1}]`` is ``[r(q_1), ..., r(q_{n+1})]`` with ``r``
    the minimal coset representative.
    """
    q = central_quotient(G, n)
    reps = q.representative_array
    t, inv = G.table, G.inverses
    comm = t[t[inv[:, None], inv[None, :]], t]
    vals = reps
    for _ in range(n):
        vals = comm[vals[..., None], reps.reshape((1,) * vals.ndim + (-1,))]
    return vals
