"""Brute-force reference implementations working on raw Cayley tables.

Nothing here calls into the package's algorithms, so agreement with the
package is evidence rather than tautology.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

CHUNK = 50_000


def is_hom_rows(maps: np.ndarray, ta: np.ndarray, tb: np.ndarray) -> np.ndarray:
    return (maps[:, ta] == tb[maps[:, :, None], maps[:, None, :]]).all(axis=(1, 2))


def brute_automorphisms(table: np.ndarray) -> set[tuple[int, ...]]:
    """Filter every bijection fixing the identity through the multiplication law."""
    n = table.shape[0]
    found = set()
    perms = itertools.permutations(range(1, n))
    while True:
        block = list(itertools.islice(perms, CHUNK))
        if not block:
            break
        maps = np.zeros((len(block), n), dtype=np.intp)
        maps[:, 1:] = block
        for row in maps[is_hom_rows(maps, table, table)]:
            found.add(tuple(int(x) for x in row))
    return found


def brute_homomorphisms(ta: np.ndarray, tb: np.ndarray) -> set[tuple[int, ...]]:
    """Filter every function with ``f(0) = 0`` through the multiplication law."""
    na, nb = ta.shape[0], tb.shape[0]
    total = nb ** (na - 1)
    found = set()
    for start in range(0, total, CHUNK):
        idx = np.arange(start, min(total, start + CHUNK), dtype=np.int64)
        maps = np.zeros((idx.size, na), dtype=np.intp)
        for col in range(na - 1, 0, -1):
            idx, maps[:, col] = np.divmod(idx, nb)
        for row in maps[is_hom_rows(maps, ta, tb)]:
            found.add(tuple(int(x) for x in row))
    return found


def element_orders(table: np.ndarray) -> list[int]:
    out = []
    for a in range(table.shape[0]):
        k, x = 1, a
        while x != 0:
            x = int(table[x, a])
            k += 1
        out.append(k)
    return out


def abelian_factor_orders(table: np.ndarray) -> list[int]:
    """Prime-power cyclic factors of an abelian group, from counting the
    elements killed by each prime power."""
    n = table.shape[0]
    orders = element_orders(table)
    factors = []
    p = 2
    m = n
    while m > 1:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            # ranks[k] = log_p #{x : x^(p^k) = 1}
            logs = [0]
            k = 1
            while logs[-1] < e:
                cnt = sum(1 for o in orders if (p**k) % o == 0)
                logs.append(round(math.log(cnt, p)))
                k += 1
            steps = [logs[i + 1] - logs[i] for i in range(len(logs) - 1)] + [0]
            for i in range(len(steps) - 1):
                factors += [p ** (i + 1)] * (steps[i] - steps[i + 1])
        p += 1
    return sorted(factors)


def gcd_product(ta: np.ndarray, tb: np.ndarray) -> int:
    a = abelian_factor_orders(ta)
    b = abelian_factor_orders(tb)
    return math.prod(math.gcd(x, y) for x in a for y in b)


def center(table: np.ndarray) -> set[int]:
    return {z for z in range(table.shape[0]) if (table[z, :] == table[:, z]).all()}


def closure(table: np.ndarray, gens) -> set[int]:
    got = {0}
    frontier = [0]
    gens = list(gens)
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = int(table[x, g])
                if y not in got:
                    got.add(y)
                    nxt.append(y)
        frontier = nxt
    return got


def inverse(table: np.ndarray, a: int) -> int:
    return int(np.flatnonzero(table[a] == 0)[0])


def comm(table: np.ndarray, a: int, b: int) -> int:
    ia, ib = inverse(table, a), inverse(table, b)
    return int(table[table[table[ia, ib], a], b])


def lower_series_orders(table: np.ndarray) -> list[int]:
    n = table.shape[0]
    cur = set(range(n))
    out = [n]
    while True:
        nxt = closure(table, {comm(table, x, g) for x in cur for g in range(n)})
        if len(nxt) == len(cur):
            return out
        out.append(len(nxt))
        cur = nxt


def brute_isomorphisms(ta: np.ndarray, tb: np.ndarray) -> list[tuple[int, ...]]:
    """Every bijection fixing the identity that respects multiplication, as
    sorted tuples (``ta`` and ``tb`` must have the same order)."""
    n = ta.shape[0]
    out = []
    perms = itertools.permutations(range(1, n))
    while True:
        block = list(itertools.islice(perms, CHUNK))
        if not block:
            break
        maps = np.zeros((len(block), n), dtype=np.intp)
        maps[:, 1:] = block
        out += [tuple(int(x) for x in r) for r in maps[is_hom_rows(maps, ta, tb)]]
    return sorted(out)
