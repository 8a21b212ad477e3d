"""Verification suites over the catalog.

Each suite returns a :class:`SuiteResult` whose instances are plain dicts,
sorted by group name and then parameters, so that JSON dumps are stable
from run to run. Nothing time-dependent is recorded.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations_with_replacement

import numpy as np

from .abelian import abelianization, gcd_count, hom_to_abelian, maly_criterion
from .aut import alpha_constant_on_cosets, alpha_rows, aut_subgroup, nth_class_preserving
from .catalog import catalog_names, get_group
from .group import (
    FiniteGroup,
    Subgroup,
    center,
    exponent,
    generate,
    prime_factors,
    quotient,
    subgroup_exponent,
    trivial_subgroup,
)
from .isoclinism import (
    central_subgroups_containing,
    domain_subgroup,
    find_n_isoclinism,
    hekster_invariant_check,
    nilpotent_levels,
    psi,
    t5_verdict,
)
from .series import (
    central_quotient,
    lower_central,
    lower_central_series,
    nilpotency_class,
    upper_central,
    upper_central_series,
)

SUITES = ("t2", "t4", "t5", "hekster", "lemmas")


@dataclass
class SuiteResult:
    name: str
    max_order: int
    instances: list[dict] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(inst["passed"] for inst in self.instances)

    @property
    def failures(self) -> list[dict]:
        return [inst for inst in self.instances if not inst["passed"]]

    def as_dict(self) -> dict:
        return {
            "suite": self.name,
            "max_order": self.max_order,
            "passed": self.passed,
            "instances_run": len(self.instances),
            "failures": len(self.failures),
            "notes": list(self.notes),
            "instances": self.instances,
        }


def _sorted(instances: list[dict], *keys: str) -> list[dict]:
    return sorted(instances, key=lambda d: tuple(_key(d[k]) for k in keys))


def _key(v):
    return (0, v, "") if isinstance(v, int) else (1, 0, str(v))


def _groups(max_order: int) -> list[tuple[str, FiniteGroup]]:
    return [(name, get_group(name)) for name in sorted(catalog_names(max_order))]


# -- Aut_N^M(G) versus Hom(G/N, M) -----------------------------------------------------


def candidate_subgroups(G: FiniteGroup) -> list[tuple[str, Subgroup]]:
    """Lower and upper central terms, the center and every cyclic central
    subgroup, deduplicated (first label wins)."""
    out: dict[tuple[int, ...], str] = {}

    def add(label, S):
        out.setdefault(S.elements, label)

    add("trivial", trivial_subgroup(G))
    for i in range(1, len(lower_central_series(G).terms) + 1):
        add(f"gamma{i}", lower_central(G, i))
    Z = center(G)
    for i in range(0, len(upper_central_series(G).terms) + 1):
        add(f"Z{i}", upper_central(G, i))
    add("center", Z)
    for z in Z.elements:
        add(f"<{z}>", generate(G, [z]))
    subs = [(label, Subgroup(G, elems)) for elems, label in out.items()]
    return sorted(subs, key=lambda t: (t[1].order, t[1].elements))


def t2_instance(G: FiniteGroup, M: Subgroup, N: Subgroup) -> dict:
    A = aut_subgroup(G, M, N)
    Q = quotient(G, N).quotient
    homs = hom_to_abelian(Q, M)
    rows = alpha_rows(G, N, A.maps)
    constant = bool(alpha_constant_on_cosets(G, N, A.maps).all())
    in_m = bool(M.mask[rows].all())
    keys = {r.tobytes() for r in rows}
    hom_keys = {np.ascontiguousarray(r).tobytes() for r in homs}
    injective = len(keys) == len(A)
    onto = keys == hom_keys
    is_hom = True
    for i, f in enumerate(A.maps):
        composed = alpha_rows(G, N, f[A.maps])
        if not np.array_equal(composed, G.table[rows[i][None, :], rows]):
            is_hom = False
            break
    ab = abelianization(Q).quotient
    formula = gcd_count(ab, M.group)
    passed = len(A) == len(homs) == formula and constant and in_m and injective and onto and is_hom
    return {
        "aut_order": len(A),
        "hom_order": len(homs),
        "gcd_formula": formula,
        "phi_well_defined": constant and in_m,
        "phi_injective": injective,
        "phi_surjective": onto,
        "phi_homomorphism": is_hom,
        "passed": bool(passed),
    }


def run_t2(max_order: int = 32) -> SuiteResult:
    res = SuiteResult("t2", max_order)
    for name, G in _groups(max_order):
        cands = candidate_subgroups(G)
        Z = center(G)
        for m_label, M in cands:
            if not M.issubset(Z):
                continue
            for n_label, N in cands:
                if not M.issubset(N) or not N.is_normal():
                    continue
                inst = {"group": name, "M": m_label, "N": n_label, "M_order": M.order, "N_order": N.order}
                inst.update(t2_instance(G, M, N))
                res.instances.append(inst)
    res.instances = _sorted(res.instances, "group", "M_order", "M", "N_order", "N")
    return res


# -- Psi between isoclinic pairs ------------------------------------------------------


def _signature(G: FiniteGroup, n: int) -> tuple[int, int]:
    return central_quotient(G, n).quotient.order, lower_central(G, n + 1).order


def isoclinic_pairs(max_order: int, levels=(1, 2)):
    """Unordered pairs of catalog groups (a group paired with itself
    included) found n-isoclinic, with the first witness, in canonical order."""
    groups = _groups(max_order)
    found = []
    for n in levels:
        for (a, G), (b, H) in combinations_with_replacement(groups, 2):
            if _signature(G, n) != _signature(H, n):
                continue
            iso = find_n_isoclinism(G, H, n)
            if iso:
                found.append((a, b, n, iso))
    return found


def run_t4(max_order: int = 32, pairs=None) -> SuiteResult:
    res = SuiteResult("t4", max_order)
    for a, b, n, iso in pairs if pairs is not None else isoclinic_pairs(max_order):
        report = psi(iso)
        inst = {"G": a, "H": b, "n": n}
        inst.update(report.as_dict())
        inst["passed"] = report.passed
        res.instances.append(inst)
    res.instances = _sorted(res.instances, "G", "H", "n")
    return res


def run_hekster(max_order: int = 32, pairs=None) -> SuiteResult:
    """Every valid (alpha, beta) for each isoclinic pair, not only the first."""
    res = SuiteResult("hekster", max_order)
    for a, b, n, iso in pairs if pairs is not None else isoclinic_pairs(max_order):
        witnesses = find_n_isoclinism(iso.source, iso.target, n, exhaustive=True)
        reports = [hekster_invariant_check(w) for w in witnesses]
        bad = next((r for r in reports if not r.passed), None)
        inst = {"G": a, "H": b, "n": n, "isoclinisms_checked": len(reports)}
        inst.update((bad or reports[0]).as_dict())
        inst["passed"] = bad is None and len(reports) > 0
        res.instances.append(inst)
    res.instances = _sorted(res.instances, "G", "H", "n")
    return res


# -- cyclicity verdict ----------------------------------------------------------------


def run_t5(max_order: int = 64) -> SuiteResult:
    res = SuiteResult("t5", max_order)
    disagreements = []
    for name, G in _groups(max_order):
        c = nilpotency_class(G)
        if G.is_abelian or not isinstance(c, int):
            continue
        for n in nilpotent_levels(G):
            floor = lower_central(G, n + 1)
            for M in central_subgroups_containing(G, floor):
                v = t5_verdict(G, M, n)
                inst = v.as_dict()
                inst["group"] = name
                inst["nilpotency_class"] = c
                inst["M"] = list(M.elements)
                inst["passed"] = v.holds
                res.instances.append(inst)
                if not v.readings_agree:
                    disagreements.append(f"{name} n={n} |M|={M.order}")
    res.instances = _sorted(res.instances, "group", "n", "M_order", "M")
    if disagreements:
        counts = Counter(disagreements)
        listed = ", ".join(f"{k} (x{v})" if v > 1 else k for k, v in sorted(counts.items()))
        res.notes.append("prime readings G/Z_n and G/Z_(n-1) disagree on: " + listed)
    return res


# -- lemmas ---------------------------------------------------------------------------


def run_lemmas(max_order: int = 32) -> SuiteResult:
    res = SuiteResult("lemmas", max_order)
    groups = _groups(max_order)
    for name, G in groups:
        for n in (1, 2, 3):
            cp = nth_class_preserving(G, n)
            dom = domain_subgroup(G, n)
            res.instances.append(
                {
                    "lemma": "class_preserving_inside",
                    "group": name,
                    "n": n,
                    "class_preserving_order": len(cp),
                    "domain_order": len(dom),
                    "passed": cp.issubset(dom),
                }
            )
        c = nilpotency_class(G)
        if isinstance(c, int) and c >= 2:
            n = c - 1
            lhs = exponent(central_quotient(G, n).quotient)
            rhs = subgroup_exponent(lower_central(G, n + 1))
            res.instances.append(
                {
                    "lemma": "exponent_match",
                    "group": name,
                    "n": n,
                    "quotient_exponent": lhs,
                    "gamma_exponent": rhs,
                    "passed": lhs == rhs,
                }
            )
    abelian = [(name, G) for name, G in groups if G.is_abelian and len(prime_factors(G.order)) == 1]
    literal_failures = []
    for a, A in abelian:
        for b, B in abelian:
            if prime_factors(A.order) != prime_factors(B.order):
                continue
            v = maly_criterion(A, B, strict=False)
            if exponent(B) % exponent(A) == 0:
                res.instances.append(
                    {
                        "lemma": "maly",
                        "group": a,
                        "target": b,
                        "hom_isomorphic_to_source": v.hom_isomorphic_to_source,
                        "target_cyclic": v.target_cyclic,
                        "passed": v.agree,
                    }
                )
            elif not v.agree:
                literal_failures.append(f"{a}->{b}")
    if literal_failures:
        res.notes.append(
            f"exp(B) | exp(A) pairs where the equivalence fails: {len(literal_failures)}, "
            f"first {', '.join(literal_failures[:5])}"
        )
    res.instances.sort(key=lambda d: (d["lemma"], d["group"], d.get("n", 0), d.get("target", "")))
    return res


def run_suite(name: str, max_order: int) -> list[SuiteResult]:
    """Run one suite (or ``all``) and return results in a fixed order."""
    names = SUITES if name == "all" else (name,)
    pairs = None
    out = []
    for s in names:
        if s in ("t4", "hekster") and pairs is None:
            pairs = isoclinic_pairs(max_order)
        if s == "t2":
            out.append(run_t2(max_order))
        elif s == "t4":
            out.append(run_t4(max_order, pairs))
        elif s == "hekster":
            out.append(run_hekster(max_order, pairs))
        elif s == "t5":
            out.append(run_t5(max_order))
        elif s == "lemmas":
            out.append(run_lemmas(max_order))
        else:
            raise ValueError(f"unknown suite {s!r}")
    return out

