"""n-isoclinism search, the transfer ``f -> theta_f`` between restricted
automorphism groups, and the cyclicity verdict for ``Aut_{Z_n}^M(G)``.

An n-isoclinism from ``G`` to ``H`` is a pair of isomorphisms
``alpha: G/Z_n(G) -> H/Z_n(H)`` and ``beta: gamma_{n+1}(G) -> gamma_{n+1}(H)``
with ``beta([g_1, ..., g_{n+1}]) = [h_1, ..., h_{n+1}]`` whenever
``alpha(g_i Z_n(G)) = h_i Z_n(H)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .abelian import abelian_invariants, is_cyclic, primary_component
from .aut import (
    AutomorphismGroup,
    alpha_constant_on_cosets,
    aut_subgroup,
    aut_subgroup_mask,
    inner_automorphism_group,
    nth_class_preserving,
)
from .errors import HypothesisFails, NotMember, WrongDomains
from .group import (
    Automorphism,
    FiniteGroup,
    Homomorphism,
    QuotientData,
    Subgroup,
    center,
    generate,
    prime_support,
    quotient,
)
from .search import all_homomorphisms, find_isomorphism, generating_sequence, iter_isomorphisms
from .series import (
    central_quotient,
    gamma_map_table,
    lower_central,
    lower_central_series,
    upper_central,
    upper_central_series,
)

_BETA_CELLS = 4_000_000


@dataclass(frozen=True, eq=False)
class Isoclinism:
    """``alpha`` acts on the central quotients; ``beta`` acts on the
    ``gamma_{n+1}`` subgroups, each relabelled as a standalone group (see
    :attr:`Subgroup.group`). Use :meth:`beta_of` for parent indices."""

    n: int
    source: FiniteGroup
    target: FiniteGroup
    alpha: Homomorphism
    beta: Homomorphism
    diagram_checked: bool = False

    @cached_property
    def source_quotient(self) -> QuotientData:
        return central_quotient(self.source, self.n)

    @cached_property
    def target_quotient(self) -> QuotientData:
        return central_quotient(self.target, self.n)

    @cached_property
    def source_gamma(self) -> Subgroup:
        return lower_central(self.source, self.n + 1)

    @cached_property
    def target_gamma(self) -> Subgroup:
        return lower_central(self.target, self.n + 1)

    @cached_property
    def beta_array(self) -> np.ndarray:
        """``beta`` on parent indices of ``G`` (``-1`` outside ``gamma_{n+1}(G)``)."""
        full = np.full(self.source.order, -1, dtype=np.intp)
        full[self.source_gamma.array] = self.target_gamma.array[self.beta.array]
        return full

    @cached_property
    def alpha_inverse_array(self) -> np.ndarray:
        inv = np.empty(self.alpha.target.order, dtype=np.intp)
        inv[self.alpha.array] = np.arange(self.alpha.source.order)
        return inv

    def beta_of(self, x: int) -> int:
        value = int(self.beta_array[x])
        if value < 0:
            raise NotMember(f"element {x} is not in gamma_{self.n + 1} of the source")
        return value

    def inverse(self) -> Isoclinism:
        return Isoclinism(
            self.n, self.target, self.source, self.alpha.inverse(), self.beta.inverse(), self.diagram_checked
        )

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "alpha": list(self.alpha.images),
            "beta": {int(x): int(self.beta_array[x]) for x in self.source_gamma.elements},
            "diagram_checked": self.diagram_checked,
        }


@dataclass(frozen=True)
class NotIsoclinic:
    reason: str

    def __bool__(self) -> bool:
        return False


def build_isoclinism(G: FiniteGroup, H: FiniteGroup, n: int, alpha_map, beta_map) -> Isoclinism:
    """Assemble an (unchecked) pair from an ``alpha`` array over quotient
    indices and a ``beta`` array over parent indices of ``G`` (entries outside
    ``gamma_{n+1}(G)`` are ignored)."""
    qg, qh = central_quotient(G, n), central_quotient(H, n)
    gg, gh = lower_central(G, n + 1), lower_central(H, n + 1)
    beta_map = np.asarray(beta_map, dtype=np.intp)
    local = gh.local_index[beta_map[gg.array]]
    alpha = Homomorphism(qg.quotient, qh.quotient, tuple(int(x) for x in alpha_map))
    beta = Homomorphism(gg.group, gh.group, tuple(int(x) for x in local))
    return Isoclinism(n, G, H, alpha, beta)


def identity_isoclinism(G: FiniteGroup, n: int) -> Isoclinism:
    q = central_quotient(G, n)
    return build_isoclinism(G, G, n, np.arange(q.quotient.order), np.arange(G.order))


def _diagram_rhs(TH: np.ndarray, alpha: np.ndarray) -> np.ndarray:
    """``TH[alpha[q_1], ..., alpha[q_{n+1}]]`` for every tuple, flattened."""
    k = TH.ndim
    return TH[np.ix_(*([alpha] * k))].ravel()


def is_n_homoclinism(G: FiniteGroup, H: FiniteGroup, n: int, alpha: Homomorphism, beta: Homomorphism) -> bool:
    """Both maps homomorphisms and the commutator diagram commutes on every
    ``(n+1)``-tuple of quotient elements."""
    qg, qh = central_quotient(G, n), central_quotient(H, n)
    gg, gh = lower_central(G, n + 1), lower_central(H, n + 1)
    if alpha.source is not qg.quotient or alpha.target is not qh.quotient:
        raise WrongDomains("alpha must map G/Z_n(G) to H/Z_n(H)")
    if beta.source is not gg.group or beta.target is not gh.group:
        raise WrongDomains("beta must map gamma_{n+1}(G) to gamma_{n+1}(H)")
    if not (alpha.is_homomorphism() and beta.is_homomorphism()):
        return False
    TG = gamma_map_table(G, n).ravel()
    lhs = gh.array[beta.array[gg.local_index[TG]]]
    rhs = _diagram_rhs(gamma_map_table(H, n), alpha.array)
    return bool(np.array_equal(lhs, rhs))


def is_n_isoclinism(iso: Isoclinism) -> bool:
    return (
        iso.alpha.is_bijective()
        and iso.beta.is_bijective()
        and is_n_homoclinism(iso.source, iso.target, iso.n, iso.alpha, iso.beta)
    )


def find_n_isoclinism(
    G: FiniteGroup, H: FiniteGroup, n: int, *, exhaustive: bool = False
) -> Isoclinism | NotIsoclinic | list[Isoclinism]:
    """Search isomorphisms ``alpha`` of the central quotients in generator-image
    order; for each, ``beta`` is forced on commutator values by the diagram
    and must extend to an isomorphism of the ``gamma_{n+1}`` subgroups.

    Returns the first valid pair, or with ``exhaustive=True`` every valid
    pair (possibly an empty list).
    """
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    qg, qh = central_quotient(G, n), central_quotient(H, n)
    gg, gh = lower_central(G, n + 1), lower_central(H, n + 1)
    if qg.quotient.order != qh.quotient.order or gg.order != gh.order:
        reason = (
            f"|G/Z_{n}| = {qg.quotient.order} vs {qh.quotient.order}, "
            f"|gamma_{n + 1}| = {gg.order} vs {gh.order}"
        )
        return [] if exhaustive else NotIsoclinic(reason)

    TG = gamma_map_table(G, n).ravel()
    TH = gamma_map_table(H, n)
    values = np.unique(TG)
    if generate(G, values.tolist()) != gg:
        raise RuntimeError("commutator values do not generate gamma_{n+1}")
    gens_local = generating_sequence(gg.group, pool=gg.local_index[values].tolist())
    gens_parent = gg.array[list(gens_local)]
    tuple_idx = np.unravel_index(np.arange(TG.size), TH.shape)

    found: list[Isoclinism] = []
    for batch in iter_isomorphisms(qg.quotient, qh.quotient):
        step = max(1, _BETA_CELLS // max(TG.size, G.order))
        for start in range(0, batch.shape[0], step):
            part = batch[start : start + step]
            vh = TH[tuple(part[:, ix] for ix in tuple_idx)]
            beta = np.full((part.shape[0], G.order), -1, dtype=np.intp)
            rows = np.arange(part.shape[0])[:, None]
            beta[rows, TG[None, :]] = vh
            consistent = (beta[:, TG] == vh).all(axis=1)
            for r in np.flatnonzero(consistent):
                iso = _complete(G, H, n, part[r], beta[r], gens_local, gens_parent, values)
                if iso is None:
                    continue
                if not exhaustive:
                    return iso
                found.append(iso)
    if exhaustive:
        return found
    return NotIsoclinic("no quotient isomorphism extends to an isoclinism")


def _complete(G, H, n, alpha_row, beta_row, gens_local, gens_parent, values) -> Isoclinism | None:
    gg, gh = lower_central(G, n + 1), lower_central(H, n + 1)
    targets = gh.local_index[beta_row[gens_parent]]
    if (targets < 0).any():
        return None
    maps = all_homomorphisms(gg.group, gh.group, gens_local, [[int(t)] for t in targets], injective=True)
    if maps.shape[0] != 1:
        return None
    ext = gh.array[maps[0]]  # beta on gg, parent indices of H
    full = np.full(G.order, -1, dtype=np.intp)
    full[gg.array] = ext
    if not np.array_equal(full[values], beta_row[values]):
        return None
    iso = build_isoclinism(G, H, n, alpha_row, full)
    if not is_n_isoclinism(iso):
        return None
    return Isoclinism(iso.n, G, H, iso.alpha, iso.beta, diagram_checked=True)


# -- theta_f and Psi ---------------------------------------------------------------


def domain_subgroup(G: FiniteGroup, n: int) -> AutomorphismGroup:
    """``Aut_{Z_n(G)}^{gamma_{n+1}(G)}(G)``."""
    return aut_subgroup(G, lower_central(G, n + 1), upper_central(G, n))


def theta_rows(iso: Isoclinism, maps: np.ndarray) -> np.ndarray:
    """``theta_f(h) = h * beta(g^-1 f(g))`` with ``alpha(g Z_n) = h Z_n``, one
    row per automorphism row of ``maps``; ``g`` is the minimal coset
    representative."""
    G, H = iso.source, iso.target
    maps = np.atleast_2d(maps)
    reps = iso.source_quotient.representative_array
    drift = G.table[G.inverses[reps][None, :], maps[:, reps]]
    moved = iso.beta_array[drift]
    if (moved < 0).any():
        raise NotMember("g^-1 f(g) leaves gamma_{n+1}(G)")
    qg_of_h = iso.alpha_inverse_array[iso.target_quotient.projection_array]
    return H.table[np.arange(H.order)[None, :], moved[:, qg_of_h]]


def theta_f(iso: Isoclinism, f: Automorphism) -> Automorphism:
    G = iso.source
    row = np.asarray(f.images, dtype=np.intp)
    zn = upper_central(G, iso.n)
    if not aut_subgroup_mask(G, iso.source_gamma, zn, row)[0]:
        raise NotMember("automorphism is not in Aut_{Z_n(G)}^{gamma_{n+1}(G)}(G)")
    return Automorphism.of(iso.target, theta_rows(iso, row)[0])


def _row_set(maps: np.ndarray) -> set[bytes]:
    return {np.ascontiguousarray(r).tobytes() for r in maps}


@dataclass
class PsiReport:
    iso: Isoclinism
    domain: AutomorphismGroup
    codomain: AutomorphismGroup
    images: np.ndarray = field(repr=False)
    well_defined: bool
    lands_in_codomain: bool
    is_bijective: bool
    is_homomorphism: bool
    class_preserving_image_equal: bool
    inverse_round_trip: bool
    class_preserving_orders: tuple[int, int]

    @property
    def psi_pairs(self) -> list[tuple[Automorphism, Automorphism]]:
        G, H = self.iso.source, self.iso.target
        return [(Automorphism.of(G, f), Automorphism.of(H, t)) for f, t in zip(self.domain.maps, self.images)]

    @property
    def passed(self) -> bool:
        return all(
            (
                self.well_defined,
                self.lands_in_codomain,
                self.is_bijective,
                self.is_homomorphism,
                self.class_preserving_image_equal,
                self.inverse_round_trip,
            )
        )

    def as_dict(self) -> dict:
        return {
            "domain_order": len(self.domain),
            "codomain_order": len(self.codomain),
            "well_defined": self.well_defined,
            "lands_in_codomain": self.lands_in_codomain,
            "is_bijective": self.is_bijective,
            "is_homomorphism": self.is_homomorphism,
            "class_preserving_orders": list(self.class_preserving_orders),
            "class_preserving_image_equal": self.class_preserving_image_equal,
            "inverse_round_trip": self.inverse_round_trip,
        }


def _theta_membership(iso: Isoclinism, images: np.ndarray) -> bool:
    """Each image is an automorphism of ``H`` fixing ``Z_n(H)`` pointwise with
    ``h^-1 theta(h)`` in ``gamma_{n+1}(H)``."""
    H = iso.target
    if images.shape[0] == 0:
        return True
    srt = np.sort(images, axis=1)
    bijective = (srt == np.arange(H.order)[None, :]).all()
    hom = all(np.array_equal(t[H.table], H.table[t[:, None], t[None, :]]) for t in images)
    zn = upper_central(H, iso.n)
    return bool(bijective and hom and aut_subgroup_mask(H, iso.target_gamma, zn, images).all())


def _composition_is_respected(domain: AutomorphismGroup, images: np.ndarray) -> bool:
    for i, f in enumerate(domain.maps):
        comp = f[domain.maps]  # f o f_j for every j
        idx = [domain.index(c) for c in comp]
        if min(idx) < 0:
            return False
        if not np.array_equal(images[idx], images[i][images]):
            return False
    return True


def psi(iso: Isoclinism) -> PsiReport:
    G, H, n = iso.source, iso.target, iso.n
    dom = domain_subgroup(G, n)
    cod = domain_subgroup(H, n)
    images = theta_rows(iso, dom.maps)
    well_defined = bool(alpha_constant_on_cosets(G, upper_central(G, n), dom.maps).all())
    lands = _theta_membership(iso, images) and all(cod.index(t) >= 0 for t in images)
    image_keys = _row_set(images)
    bijective = len(image_keys) == len(dom) and image_keys == cod.keys()
    hom = _composition_is_respected(dom, images)

    cp_g = nth_class_preserving(G, n)
    cp_h = nth_class_preserving(H, n)
    cp_idx = [dom.index(f) for f in cp_g.maps]
    if min(cp_idx, default=0) < 0:
        cp_equal = False
    else:
        cp_equal = _row_set(images[cp_idx]) == cp_h.keys()

    back = theta_rows(iso.inverse(), images)
    round_trip = bool(np.array_equal(back, dom.maps))
    return PsiReport(
        iso=iso,
        domain=dom,
        codomain=cod,
        images=images,
        well_defined=well_defined,
        lands_in_codomain=lands,
        is_bijective=bijective,
        is_homomorphism=hom,
        class_preserving_image_equal=cp_equal,
        inverse_round_trip=round_trip,
        class_preserving_orders=(len(cp_g), len(cp_h)),
    )


# -- Hekster's invariants ---------------------------------------------------------------


@dataclass
class PropertyResult:
    passed: bool
    counterexample: dict | None = None

    def as_dict(self) -> dict:
        out: dict = {"passed": self.passed}
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        return out


@dataclass
class HeksterReport:
    coset_image: PropertyResult
    conjugation: PropertyResult
    central_intersections: PropertyResult
    levels_checked: int

    @property
    def passed(self) -> bool:
        return self.coset_image.passed and self.conjugation.passed and self.central_intersections.passed

    def as_dict(self) -> dict:
        return {
            "coset_image": self.coset_image.as_dict(),
            "conjugation": self.conjugation.as_dict(),
            "central_intersections": self.central_intersections.as_dict(),
            "levels_checked": self.levels_checked,
        }


def hekster_invariant_check(iso: Isoclinism) -> HeksterReport:
    """Exhaustively check, for ``x`` in ``gamma_{n+1}(G)``:
    ``alpha(x Z_n(G)) = beta(x) Z_n(H)``;
    ``beta(g^-1 x g) = h^-1 beta(x) h`` for all ``g`` and all ``h`` in ``alpha(g Z_n(G))``;
    and ``beta(gamma_{n+1}(G) & Z_i(G)) = gamma_{n+1}(H) & Z_i(H)`` for every ``i``.
    """
    G, H = iso.source, iso.target
    gg, gh = iso.source_gamma, iso.target_gamma
    beta = iso.beta_array
    proj_g = iso.source_quotient.projection_array
    proj_h = iso.target_quotient.projection_array
    alpha = iso.alpha.array
    X = gg.array
    bx = beta[X]

    bad = np.flatnonzero(alpha[proj_g[X]] != proj_h[bx])
    coset = PropertyResult(True)
    if bad.size:
        x = int(X[bad[0]])
        coset = PropertyResult(False, {"x": x, "alpha_xZ": int(alpha[proj_g[x]]), "beta_x_Z": int(proj_h[beta[x]])})

    conj = PropertyResult(True)
    for g in range(G.order):
        hs = np.flatnonzero(proj_h == alpha[proj_g[g]])
        lhs = beta[G.conjugation[g, X]]  # beta(g^-1 x g)
        rhs = H.conjugation[hs[:, None], bx[None, :]]  # h^-1 beta(x) h
        mism = np.argwhere(rhs != lhs[None, :])
        if mism.size:
            hi, xi = mism[0]
            conj = PropertyResult(False, {"g": g, "h": int(hs[hi]), "x": int(X[xi])})
            break

    levels = max(upper_central_series(G).stabilized_at, upper_central_series(H).stabilized_at) + 1
    inter = PropertyResult(True)
    for i in range(levels + 1):
        zg = gg.intersection(upper_central(G, i))
        zh = gh.intersection(upper_central(H, i))
        image = set(int(v) for v in beta[zg.array])
        if image != set(zh.elements):
            inter = PropertyResult(False, {"i": i, "image": sorted(image), "expected": list(zh.elements)})
            break
    return HeksterReport(coset, conj, inter, levels + 1)


# -- Aut_{Z_n}^M(G) versus Inn(G/Z_{n-1}(G)) -------------------------------------------


def are_isomorphic(A: FiniteGroup, B: FiniteGroup) -> bool:
    if A.order != B.order:
        return False
    if A.is_abelian and B.is_abelian:
        return abelian_invariants(A) == abelian_invariants(B)
    if A.is_abelian != B.is_abelian:
        return False
    return find_isomorphism(A, B) is not None


def _cyclic_components(M: Subgroup, primes) -> dict[int, bool]:
    Mg = M.group
    return {p: is_cyclic(primary_component(Mg, p).group) for p in sorted(primes)}


@dataclass
class T5Verdict:
    group: str
    M: tuple[int, ...]
    n: int
    lhs_order: int
    rhs_order: int
    isomorphic: bool
    cyclicity_condition: bool
    primes_tested: tuple[int, ...]
    cyclicity_condition_statement: bool
    primes_statement: tuple[int, ...]
    components: dict[int, bool]

    @property
    def readings_agree(self) -> bool:
        return self.cyclicity_condition == self.cyclicity_condition_statement

    @property
    def holds(self) -> bool:
        return self.isomorphic == self.cyclicity_condition

    def as_dict(self) -> dict:
        return {
            "group": self.group,
            "M_order": len(self.M),
            "n": self.n,
            "lhs_order": self.lhs_order,
            "rhs_order": self.rhs_order,
            "isomorphic": self.isomorphic,
            "cyclicity_condition": self.cyclicity_condition,
            "primes_tested": list(self.primes_tested),
            "cyclicity_condition_statement_reading": self.cyclicity_condition_statement,
            "primes_statement_reading": list(self.primes_statement),
            "readings_agree": self.readings_agree,
            "holds": self.holds,
        }


def t5_verdict(G: FiniteGroup, M: Subgroup, n: int) -> T5Verdict:
    """Decide ``Aut_{Z_n(G)}^M(G) ~ Inn(G/Z_{n-1}(G))`` by building both
    groups, and evaluate cyclicity of the primary parts of ``M``.

    The prime set is taken from ``G/Z_n(G)``; the variant over
    ``G/Z_{n-1}(G)`` is reported alongside.
    """
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    if M.parent is not G:
        raise HypothesisFails("M is not a subgroup of G")
    if not M.issubset(center(G)):
        raise HypothesisFails("M is not central")
    if not lower_central(G, n + 1).issubset(M):
        raise HypothesisFails(f"gamma_{n + 1}(G) is not contained in M")
    zn, zn1 = upper_central(G, n), upper_central(G, n - 1)
    lhs = aut_subgroup(G, M, zn)
    rhs = inner_automorphism_group(quotient(G, zn1).quotient)
    iso = len(lhs) == len(rhs) and are_isomorphic(lhs.as_group(), rhs.as_group())
    primes = prime_support(quotient(G, zn).quotient)
    primes_stmt = prime_support(quotient(G, zn1).quotient)
    comps = _cyclic_components(M, primes | primes_stmt)
    return T5Verdict(
        group=G.label or f"order-{G.order}",
        M=M.elements,
        n=n,
        lhs_order=len(lhs),
        rhs_order=len(rhs),
        isomorphic=iso,
        cyclicity_condition=all(comps[p] for p in primes),
        primes_tested=tuple(sorted(primes)),
        cyclicity_condition_statement=all(comps[p] for p in primes_stmt),
        primes_statement=tuple(sorted(primes_stmt)),
        components=comps,
    )


def central_subgroups_containing(G: FiniteGroup, floor: Subgroup) -> list[Subgroup]:
    """Every subgroup ``M`` with ``floor <= M <= Z(G)``, sorted by (order, elements)."""
    Z = center(G)
    if not floor.issubset(Z):
        return []
    seen = {floor.elements: floor}
    frontier = [floor]
    while frontier:
        nxt = []
        for S in frontier:
            for z in Z.elements:
                if z in S:
                    continue
                T = generate(G, list(S.elements) + [z])
                if T.elements not in seen:
                    seen[T.elements] = T
                    nxt.append(T)
        frontier = nxt
    return sorted(seen.values(), key=lambda S: (S.order, S.elements))


def nilpotent_levels(G: FiniteGroup) -> list[int]:
    """Levels ``n >= 1`` with ``class(G) <= n + 1`` worth testing: ``class - 1``
    (the non-degenerate case) and ``class`` (both sides trivial)."""
    c = len(lower_central_series(G).terms) - 1
    return sorted({max(1, c - 1), max(1, c)})
