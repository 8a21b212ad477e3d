"""Backtracking over generator images.

A homomorphism out of ``G`` is fixed by the images of a generating sequence
``g_1, ..., g_k``. The search proceeds level by level: after choosing images
for ``g_1..g_j`` the partial map is extended over ``<g_1..g_j>`` along a
breadth-first word tree and every Cayley-graph edge ``x -> x*g_i`` inside that
subgroup is checked. Passing all edges is equivalent to the partial map being
a homomorphism on the subgroup. Whole batches of partial assignments are
checked at once with numpy; batches are processed depth-first in chunks so
enumeration order is lexicographic in the generator images.
"""

from __future__ import annotations

import threading
import weakref
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .errors import OrderLimitExceeded
from .group import FiniteGroup, _closure_mask

_CHUNK_CELLS = 4_000_000


def generating_sequence(G: FiniteGroup, pool: Sequence[int] | None = None) -> tuple[int, ...]:
    """Greedy generating sequence: each step adds the element that grows the
    generated subgroup the most (ties go to the smallest index).

    With ``pool`` the generators are drawn from that set only, and the result
    generates ``<pool>``.
    """
    if pool is None:
        return _default_sequence(G)
    return _greedy(G, sorted({int(p) for p in pool} - {0}))


_seq_cache: "weakref.WeakKeyDictionary[FiniteGroup, tuple[int, ...]]" = weakref.WeakKeyDictionary()
_seq_lock = threading.Lock()


def _default_sequence(G: FiniteGroup) -> tuple[int, ...]:
    with _seq_lock:
        hit = _seq_cache.get(G)
    if hit is not None:
        return hit
    seq = _greedy(G, list(range(1, G.order)))
    with _seq_lock:
        _seq_cache[G] = seq
    return seq


def _greedy(G: FiniteGroup, pool: list[int]) -> tuple[int, ...]:
    target = int(_closure_mask(G.table, pool).sum())
    gens: list[int] = []
    mask = _closure_mask(G.table, gens)
    while mask.sum() < target:
        best, best_size, best_mask = -1, -1, mask
        for x in pool:
            if mask[x]:
                continue
            new = _closure_mask(G.table, gens + [x])
            size = int(new.sum())
            if size > best_size:
                best, best_size, best_mask = x, size, new
                if size == target:
                    break
        gens.append(best)
        mask = best_mask
    return tuple(gens)


@dataclass(frozen=True)
class _Level:
    elems: np.ndarray  # elements of S_j in BFS order, identity excluded
    parents: np.ndarray
    gen_pos: np.ndarray
    members: np.ndarray  # all elements of S_j, sorted
    edge_x: np.ndarray
    edge_gen: np.ndarray
    edge_y: np.ndarray


def _word_plan(G: FiniteGroup, gens: Sequence[int]) -> list[_Level]:
    levels = []
    for j in range(1, len(gens) + 1):
        sub = list(gens[:j])
        seen = {0}
        order = [0]
        elems, parents, gpos = [], [], []
        head = 0
        while head < len(order):
            x = order[head]
            head += 1
            for i, g in enumerate(sub):
                y = int(G.table[x, g])
                if y not in seen:
                    seen.add(y)
                    order.append(y)
                    elems.append(y)
                    parents.append(x)
                    gpos.append(i)
        members = np.array(sorted(seen), dtype=np.intp)
        ex = np.repeat(members, j)
        eg = np.tile(np.arange(j), members.size)
        ey = G.table[ex, np.asarray(sub, dtype=np.intp)[eg]]
        levels.append(
            _Level(
                np.array(elems, dtype=np.intp),
                np.array(parents, dtype=np.intp),
                np.array(gpos, dtype=np.intp),
                members,
                ex,
                eg,
                ey,
            )
        )
    return levels


def _extend(level: _Level, H: FiniteGroup, images: np.ndarray, order: int) -> np.ndarray:
    maps = np.full((images.shape[0], order), -1, dtype=np.intp)
    maps[:, 0] = 0
    ht = H.table
    for e, p, gp in zip(level.elems, level.parents, level.gen_pos):
        maps[:, e] = ht[maps[:, p], images[:, gp]]
    return maps


def _prune(level: _Level, H: FiniteGroup, images: np.ndarray, order: int, injective: bool):
    maps = _extend(level, H, images, order)
    left = maps[:, level.edge_y]
    right = H.table[maps[:, level.edge_x], images[:, level.edge_gen]]
    ok = (left == right).all(axis=1)
    if injective and ok.any():
        vals = np.sort(maps[:, level.members], axis=1)
        ok &= ~(vals[:, 1:] == vals[:, :-1]).any(axis=1)
    return images[ok], maps[ok]


def iter_homomorphisms(
    G: FiniteGroup,
    H: FiniteGroup,
    gens: Sequence[int],
    candidates: Sequence[Sequence[int]],
    *,
    injective: bool = False,
) -> Iterator[np.ndarray]:
    """Yield batches (2-D arrays, one map per row) of homomorphisms ``G -> H``
    sending ``gens[i]`` into ``candidates[i]``.

    ``gens`` must generate ``G``. Batches come out in lexicographic order of
    the generator images when every candidate list is ascending.
    """
    gens = [int(g) for g in gens]
    if not gens:
        yield np.zeros((1, G.order), dtype=np.intp)
        return
    if int(_closure_mask(G.table, gens).sum()) != G.order:
        raise ValueError("generator sequence does not generate the group")
    plan = _word_plan(G, gens)
    cands = [np.asarray(sorted({int(c) for c in cs}), dtype=np.intp) for cs in candidates]
    if any(c.size == 0 for c in cands):
        return
    yield from _descend(plan, H, cands, np.zeros((1, 0), dtype=np.intp), 0, G.order, injective)


def _descend(plan, H, cands, batch, j, order, injective):
    k = len(plan)
    width = cands[j].size
    per_row = width * max(order, 1)
    step = max(1, _CHUNK_CELLS // per_row)
    for start in range(0, batch.shape[0], step):
        part = batch[start : start + step]
        expanded = np.concatenate(
            [np.repeat(part, width, axis=0), np.tile(cands[j], part.shape[0])[:, None]], axis=1
        )
        survivors, maps = _prune(plan[j], H, expanded, order, injective)
        if survivors.shape[0] == 0:
            continue
        if j + 1 == k:
            yield maps
        else:
            yield from _descend(plan, H, cands, survivors, j + 1, order, injective)


# Upper bound on the number of maps collected into one array.
MAX_MAPS = 2_000_000


def all_homomorphisms(G, H, gens, candidates, *, injective=False, limit: int = MAX_MAPS) -> np.ndarray:
    batches, total = [], 0
    for batch in iter_homomorphisms(G, H, gens, candidates, injective=injective):
        total += batch.shape[0]
        if total > limit:
            raise OrderLimitExceeded(f"more than {limit} maps; refusing to materialize")
        batches.append(batch)
    if not batches:
        return np.zeros((0, G.order), dtype=np.intp)
    return np.concatenate(batches, axis=0)


def lex_sort(maps: np.ndarray) -> np.ndarray:
    """Rows sorted lexicographically (first column most significant)."""
    if maps.shape[0] <= 1:
        return maps
    order = np.lexsort(maps.T[::-1])
    return maps[order]


def profile_candidates(G: FiniteGroup, H: FiniteGroup, gens: Sequence[int]) -> list[list[int]]:
    """Images allowed by (element order, centralizer size), both preserved by
    isomorphisms."""
    return [[int(h) for h in np.flatnonzero(H.profile == G.profile[g])] for g in gens]


def _profiles_match(G: FiniteGroup, H: FiniteGroup) -> bool:
    return G.order == H.order and np.array_equal(np.sort(G.profile), np.sort(H.profile))


def iter_isomorphisms(G: FiniteGroup, H: FiniteGroup) -> Iterator[np.ndarray]:
    """Batches of isomorphisms ``G -> H`` in generator-image order."""
    if not _profiles_match(G, H):
        return
    gens = generating_sequence(G)
    yield from iter_homomorphisms(G, H, gens, profile_candidates(G, H, gens), injective=True)


def find_isomorphism(G: FiniteGroup, H: FiniteGroup) -> np.ndarray | None:
    for batch in iter_isomorphisms(G, H):
        return batch[0]
    return None


def all_isomorphisms(G: FiniteGroup, H: FiniteGroup) -> np.ndarray:
    batches = list(iter_isomorphisms(G, H))
    if not batches:
        return np.zeros((0, G.order), dtype=np.intp)
    return np.concatenate(batches, axis=0)
