"""Deterministic constructors for the test corpus and JSON group files."""

from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Callable

import numpy as np

from .errors import OrderLimitExceeded, ParameterOutOfRange, ParseError
from .group import MAX_ORDER, FiniteGroup, direct_product, validate_cayley_table


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % d for d in range(2, int(p**0.5) + 1))


def _check_order(n: int) -> None:
    if n > MAX_ORDER:
        raise OrderLimitExceeded(f"order {n} exceeds the supported maximum {MAX_ORDER}")


def make_cyclic(m: int) -> FiniteGroup:
    if m < 1:
        raise ParameterOutOfRange(f"cyclic order must be positive, got {m}")
    _check_order(m)
    i = np.arange(m)
    return FiniteGroup((i[:, None] + i[None, :]) % m, [f"a^{k}" for k in range(m)], label=f"C{m}", validate=False)


def make_dihedral(m: int) -> FiniteGroup:
    """Symmetries of the ``m``-gon, order ``2m``: ``r^i`` at index ``i`` and
    ``r^i s`` at index ``m + i``."""
    if m < 2:
        raise ParameterOutOfRange(f"dihedral parameter must be at least 2, got {m}")
    _check_order(2 * m)
    a, x = np.divmod(np.arange(2 * m), m)[::-1]  # a = rotation, x = reflection flag
    sign = np.where(x == 1, -1, 1)
    rot = (a[:, None] + sign[:, None] * a[None, :]) % m
    flag = (x[:, None] + x[None, :]) % 2
    names = [f"r^{i}" for i in range(m)] + [f"r^{i}s" for i in range(m)]
    return FiniteGroup(rot + m * flag, names, label=f"D{m}", validate=False)


def make_quaternion(order: int) -> FiniteGroup:
    """Generalized quaternion group of order ``2^k`` (``k >= 3``):
    ``a^i`` at index ``i``, ``a^i b`` at index ``m + i`` with ``m = order/2``,
    ``b^2 = a^(m/2)`` and ``b^-1 a b = a^-1``."""
    k = order.bit_length() - 1
    if order < 8 or order != 1 << k:
        raise ParameterOutOfRange(f"quaternion order must be 2^k with k >= 3, got {order}")
    _check_order(order)
    m = order // 2
    table = np.empty((order, order), dtype=np.intp)
    for u in range(order):
        i, x = u % m, u // m
        for v in range(order):
            j, y = v % m, v // m
            if x == 0:
                table[u, v] = (i + j) % m + m * y
            elif y == 0:
                table[u, v] = (i - j) % m + m
            else:
                table[u, v] = (i - j + m // 2) % m
    names = [f"a^{i}" for i in range(m)] + [f"a^{i}b" for i in range(m)]
    return FiniteGroup(table, names, label=f"Q{order}", validate=False)


def make_symmetric(k: int) -> FiniteGroup:
    """Permutations of ``0..k-1`` in lexicographic order; ``(s*t)(x) = s(t(x))``."""
    if not 1 <= k <= 4:
        raise ParameterOutOfRange(f"symmetric degree must be in 1..4, got {k}")
    perms = list(itertools.permutations(range(k)))
    index = {p: i for i, p in enumerate(perms)}
    table = [[index[tuple(s[t[x]] for x in range(k))] for t in perms] for s in perms]
    names = ["".join(map(str, p)) for p in perms]
    return FiniteGroup(table, names, label=f"S{k}", validate=False)


def make_heisenberg(p: int) -> FiniteGroup:
    """Upper unitriangular 3x3 matrices over GF(p), enumerated row-major by
    their entries ``(a, c, b)`` in ``[[1, a, c], [0, 1, b], [0, 0, 1]]``."""
    if not _is_prime(p) or p == 2:
        raise ParameterOutOfRange(f"Heisenberg construction needs an odd prime, got {p}")
    _check_order(p**3)
    idx = np.arange(p**3)
    a, c, b = idx // (p * p), (idx // p) % p, idx % p
    na = (a[:, None] + a[None, :]) % p
    nb = (b[:, None] + b[None, :]) % p
    nc = (c[:, None] + c[None, :] + a[:, None] * b[None, :]) % p
    names = [f"[{ai},{ci},{bi}]" for ai, ci, bi in zip(a, c, b)]
    return FiniteGroup(na * p * p + nc * p + nb, names, label=f"Heis{p}", validate=False)


def make_elementary_abelian(p: int, rank: int) -> FiniteGroup:
    if not _is_prime(p) or rank < 0:
        raise ParameterOutOfRange(f"need a prime and a non-negative rank, got p={p}, rank={rank}")
    _check_order(p**rank)
    n = p**rank
    idx = np.arange(n)
    table = np.zeros((n, n), dtype=np.intp)
    for d in range(rank):
        w = p**d
        table += (((idx[:, None] // w) % p + (idx[None, :] // w) % p) % p) * w
    return FiniteGroup(table, label=f"C{p}^{rank}", validate=False)


def make_semidirect_cyclic(m: int, k: int, r: int) -> FiniteGroup:
    """``C_m x| C_k = <x, y | x^m, y^k, y x y^-1 = x^r>``; ``x^i y^j`` sits at
    index ``j*m + i``."""
    if m < 1 or k < 1 or np.gcd(r, m) != 1 or pow(r, k, m) != 1 % m:
        raise ParameterOutOfRange(f"need gcd(r, m) = 1 and r^k = 1 mod m, got m={m}, k={k}, r={r}")
    _check_order(m * k)
    idx = np.arange(m * k)
    i, j = idx % m, idx // m
    rpow = np.array([pow(r, e, m) for e in range(k)])
    ni = (i[:, None] + i[None, :] * rpow[j][:, None]) % m
    nj = (j[:, None] + j[None, :]) % k
    names = [f"x^{a}y^{b}" for a, b in zip(i, j)]
    return FiniteGroup(nj * m + ni, names, label=f"C{m}:C{k}", validate=False)


# -- the named corpus ---------------------------------------------------------


@dataclass(frozen=True)
class Notes:
    """Textbook invariants recorded for regression: order, nilpotency class
    (``None`` when not nilpotent), centre order, derived subgroup order and
    exponent."""

    order: int
    nilpotency_class: int | None
    center_order: int
    derived_order: int
    exponent: int


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    group: FiniteGroup
    notes: Notes


def _prod(*names: str) -> Callable[[], FiniteGroup]:
    def build() -> FiniteGroup:
        g = get_group(names[0])
        for other in names[1:]:
            g = direct_product(g, get_group(other))
        g.label = "x".join(names)
        return g

    return build


def _cyc(m: int) -> Callable[[], FiniteGroup]:
    return lambda: make_cyclic(m)


def _labelled(build: Callable[[], FiniteGroup], name: str) -> Callable[[], FiniteGroup]:
    def wrapped() -> FiniteGroup:
        g = build()
        g.label = name
        return g

    return wrapped


N = Notes
_SPECS: dict[str, tuple[Callable[[], FiniteGroup], Notes]] = {
    "C1": (_cyc(1), N(1, 0, 1, 1, 1)),
    "C2": (_cyc(2), N(2, 1, 2, 1, 2)),
    "C3": (_cyc(3), N(3, 1, 3, 1, 3)),
    "C4": (_cyc(4), N(4, 1, 4, 1, 4)),
    "C5": (_cyc(5), N(5, 1, 5, 1, 5)),
    "C6": (_cyc(6), N(6, 1, 6, 1, 6)),
    "C7": (_cyc(7), N(7, 1, 7, 1, 7)),
    "C8": (_cyc(8), N(8, 1, 8, 1, 8)),
    "C9": (_cyc(9), N(9, 1, 9, 1, 9)),
    "C10": (_cyc(10), N(10, 1, 10, 1, 10)),
    "C12": (_cyc(12), N(12, 1, 12, 1, 12)),
    "C16": (_cyc(16), N(16, 1, 16, 1, 16)),
    "C2xC2": (_prod("C2", "C2"), N(4, 1, 4, 1, 2)),
    "C4xC2": (_prod("C4", "C2"), N(8, 1, 8, 1, 4)),
    "C2xC2xC2": (_prod("C2", "C2", "C2"), N(8, 1, 8, 1, 2)),
    "C3xC3": (_prod("C3", "C3"), N(9, 1, 9, 1, 3)),
    "C6xC2": (_prod("C6", "C2"), N(12, 1, 12, 1, 6)),
    "C4xC4": (_prod("C4", "C4"), N(16, 1, 16, 1, 4)),
    "C8xC2": (_prod("C8", "C2"), N(16, 1, 16, 1, 8)),
    "C4xC2xC2": (_prod("C4", "C2", "C2"), N(16, 1, 16, 1, 4)),
    "C2^4": (_labelled(lambda: make_elementary_abelian(2, 4), "C2^4"), N(16, 1, 16, 1, 2)),
    "C12xC2": (_prod("C12", "C2"), N(24, 1, 24, 1, 12)),
    "C9xC3": (_prod("C9", "C3"), N(27, 1, 27, 1, 9)),
    "C3^3": (_labelled(lambda: make_elementary_abelian(3, 3), "C3^3"), N(27, 1, 27, 1, 3)),
    "C2^5": (_labelled(lambda: make_elementary_abelian(2, 5), "C2^5"), N(32, 1, 32, 1, 2)),
    "C4xC4xC2": (_prod("C4", "C4", "C2"), N(32, 1, 32, 1, 4)),
    "S3": (_labelled(lambda: make_symmetric(3), "S3"), N(6, None, 1, 3, 6)),
    "D4": (_labelled(lambda: make_dihedral(4), "D4"), N(8, 2, 2, 2, 4)),
    "Q8": (_labelled(lambda: make_quaternion(8), "Q8"), N(8, 2, 2, 2, 4)),
    "D5": (_labelled(lambda: make_dihedral(5), "D5"), N(10, None, 1, 5, 10)),
    "D6": (_labelled(lambda: make_dihedral(6), "D6"), N(12, None, 2, 3, 6)),
    "Dic3": (_labelled(lambda: make_semidirect_cyclic(3, 4, 2), "Dic3"), N(12, None, 2, 3, 12)),
    "D8": (_labelled(lambda: make_dihedral(8), "D8"), N(16, 3, 2, 4, 8)),
    "Q16": (_labelled(lambda: make_quaternion(16), "Q16"), N(16, 3, 2, 4, 8)),
    "SD16": (_labelled(lambda: make_semidirect_cyclic(8, 2, 3), "SD16"), N(16, 3, 2, 4, 8)),
    "M16": (_labelled(lambda: make_semidirect_cyclic(8, 2, 5), "M16"), N(16, 2, 4, 2, 8)),
    "D4xC2": (_prod("D4", "C2"), N(16, 2, 4, 2, 4)),
    "Q8xC2": (_prod("Q8", "C2"), N(16, 2, 4, 2, 4)),
    "S4": (_labelled(lambda: make_symmetric(4), "S4"), N(24, None, 1, 12, 12)),
    "D4xC3": (_prod("D4", "C3"), N(24, 2, 6, 2, 12)),
    "Q8xC3": (_prod("Q8", "C3"), N(24, 2, 6, 2, 12)),
    "Heis3": (_labelled(lambda: make_heisenberg(3), "Heis3"), N(27, 2, 3, 3, 3)),
    "C9:C3": (_labelled(lambda: make_semidirect_cyclic(9, 3, 4), "C9:C3"), N(27, 2, 3, 3, 9)),
    "D16": (_labelled(lambda: make_dihedral(16), "D16"), N(32, 4, 2, 8, 16)),
    "Q32": (_labelled(lambda: make_quaternion(32), "Q32"), N(32, 4, 2, 8, 16)),
    "D4xC4": (_prod("D4", "C4"), N(32, 2, 8, 2, 4)),
    "Q8xC4": (_prod("Q8", "C4"), N(32, 2, 8, 2, 4)),
    "D4xC2xC2": (_prod("D4", "C2", "C2"), N(32, 2, 8, 2, 4)),
    "Q8xC2xC2": (_prod("Q8", "C2", "C2"), N(32, 2, 8, 2, 4)),
    "D8xC2": (_prod("D8", "C2"), N(32, 3, 4, 4, 8)),
    "Heis3xC2": (_prod("Heis3", "C2"), N(54, 2, 6, 3, 6)),
    "D4xD4": (_prod("D4", "D4"), N(64, 2, 4, 4, 4)),
    "D4xQ8": (_prod("D4", "Q8"), N(64, 2, 4, 4, 4)),
    "Q8xQ8": (_prod("Q8", "Q8"), N(64, 2, 4, 4, 4)),
    "D16xC2": (_prod("D16", "C2"), N(64, 4, 4, 8, 16)),
    "D4xC3xC3": (_prod("D4", "C3", "C3"), N(72, 2, 18, 2, 12)),
    "Heis5": (_labelled(lambda: make_heisenberg(5), "Heis5"), N(125, 2, 5, 5, 5)),
}
del N


def catalog_names(max_order: int | None = None) -> list[str]:
    """Catalog names ordered by (order, name)."""
    names = [n for n, (_, notes) in _SPECS.items() if max_order is None or notes.order <= max_order]
    return sorted(names, key=lambda n: (_SPECS[n][1].order, n))


@lru_cache(maxsize=None)
def get_group(name: str) -> FiniteGroup:
    try:
        build, _ = _SPECS[name]
    except KeyError:
        raise KeyError(f"unknown catalog group {name!r}") from None
    return build()


def get_entry(name: str) -> CatalogEntry:
    return CatalogEntry(name, get_group(name), _SPECS[name][1])


def catalog(max_order: int | None = None) -> list[CatalogEntry]:
    return [get_entry(n) for n in catalog_names(max_order)]


# -- files -------------------------------------------------------------------------


def group_to_json(G: FiniteGroup) -> dict:
    doc: dict = {"order": G.order, "table": G.table.tolist()}
    if G.element_names is not None:
        doc["names"] = list(G.element_names)
    return doc


def group_from_json(doc) -> FiniteGroup:
    if not isinstance(doc, dict) or "order" not in doc or "table" not in doc:
        raise ParseError('group document must be an object with "order" and "table"')
    order, table = doc["order"], doc["table"]
    if not isinstance(order, int) or isinstance(order, bool):
        raise ParseError(f'"order" must be an integer, got {order!r}')
    if not isinstance(table, list) or not all(isinstance(row, list) for row in table):
        raise ParseError('"table" must be a list of rows')
    if len(table) != order or any(len(row) != order for row in table):
        raise ParseError(f"table is not {order}x{order}")
    if not all(isinstance(v, int) and not isinstance(v, bool) for row in table for v in row):
        raise ParseError("table entries must be integers")
    names = doc.get("names")
    if names is not None and (not isinstance(names, list) or len(names) != order):
        raise ParseError(f'"names" must be a list of {order} strings')
    return validate_cayley_table(order, table, names)


def save_group(G: FiniteGroup, path) -> None:
    Path(path).write_text(json.dumps(group_to_json(G)) + "\n")


def load_group(path) -> FiniteGroup:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: not valid JSON ({exc})") from None
    return group_from_json(doc)


_PRODUCT = re.compile(r"^[A-Za-z0-9:^]+(x[A-Za-z0-9:^]+)+$")


def resolve_group(spec: str) -> FiniteGroup:
    """A catalog name, a product of catalog names joined by ``x``, or a path
    to a JSON group file."""
    if spec in _SPECS:
        return get_group(spec)
    path = Path(spec)
    if path.suffix == ".json" or path.exists():
        if not path.exists():
            raise FileNotFoundError(f"no such group file: {spec}")
        G = load_group(path)
        G.label = path.stem
        return G
    if _PRODUCT.match(spec):
        parts = spec.split("x")
        if all(p in _SPECS for p in parts):
            return _prod(*parts)()
    m = re.fullmatch(r"C(\d+)", spec)
    if m:
        return make_cyclic(int(m.group(1)))
    m = re.fullmatch(r"D(\d+)", spec)
    if m:
        return make_dihedral(int(m.group(1)))
    raise KeyError(f"cannot resolve group {spec!r}: not a catalog name or file")

