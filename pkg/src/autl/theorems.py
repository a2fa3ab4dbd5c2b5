"""Executable checks of the absolute-central-automorphism results, and the census.

Each checker returns a :class:`Verdict` that is ``holds``, ``fails`` or
``not_applicable``.  ``not_applicable`` means a hypothesis of the result is
not met by the group; such groups are never counted as evidence.  A ``fails``
verdict always carries a witness dictionary with the quantities involved.

Per-group quantities (Aut(G), L(G), quotients ...) are computed once in a
:class:`GroupData` and shared by every checker.
"""
from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import cached_property
from typing import Any, Optional

import numpy as np

from .abelian import (
    AbelianInvariants,
    abelian_invariants,
    hom_group,
    hom_invariants,
    hom_order,
    rank,
)
from .automorphisms import (
    AutomorphismSet,
    absolute_centre,
    absolute_central_automorphisms,
    autl_fixing_centre,
    automorphism_group,
    central_automorphisms,
    constrained_autl,
    inner_automorphisms,
    is_automorphism,
)
from .cache import AutCache
from .config import RunConfig
from .core import (
    Group,
    Subgroup,
    centre,
    derived_subgroup,
    exponent,
    is_cyclic,
    is_normal,
    is_p_group,
    nilpotency_class,
    power_subgroup,
    quotient_group,
    subgroup_join,
)
from .errors import AutlError, NotNilpotent, OracleCapExceeded

log = logging.getLogger(__name__)

HOLDS = "holds"
FAILS = "fails"
NOT_APPLICABLE = "not_applicable"

RESULT_IDS = (
    "Lem2.1", "Prop2.4", "Lem2.5", "Lem2.6", "Lem2.7", "Lem2.8",
    "Lem3.1", "Prop3.2", "Thm3.3", "Thm3.4", "DualRoute",
)


@dataclass(frozen=True)
class Verdict:
    result_id: str
    status: str
    witness: Optional[dict] = None
    reason: str = ""

    def __post_init__(self) -> None:
        if self.status not in (HOLDS, FAILS, NOT_APPLICABLE):
            raise ValueError(f"bad status {self.status!r}")
        if self.result_id not in RESULT_IDS:
            raise ValueError(f"unknown result id {self.result_id!r}")
        if (self.status == FAILS) != (self.witness is not None):
            raise ValueError("a witness is required exactly for failing verdicts")


def _verdict(result_id: str, ok: bool, witness: dict, reason: str = "") -> Verdict:
    return Verdict(result_id, HOLDS if ok else FAILS, None if ok else witness, reason)


def _na(result_id: str, reason: str) -> Verdict:
    return Verdict(result_id, NOT_APPLICABLE, None, reason)


def _inv(x: Optional[AbelianInvariants]) -> Optional[list[int]]:
    return None if x is None else x.as_list()


class GroupData:
    """Lazily computed invariants of one group, shared by all checkers."""

    def __init__(self, G: Group, config: Optional[RunConfig] = None, cache: Optional[AutCache] = None):
        self.G = G
        self.config = config or RunConfig(parallelism_degree=1)
        self.cache = cache or AutCache(self.config.cache_dir)

    @cached_property
    def p(self) -> Optional[int]:
        return is_p_group(self.G)

    @cached_property
    def nonabelian(self) -> bool:
        return not self.G.is_abelian

    @cached_property
    def nil_class(self) -> Optional[int]:
        try:
            return nilpotency_class(self.G)
        except NotNilpotent:
            return None

    @cached_property
    def Z(self) -> Subgroup:
        return centre(self.G)

    @cached_property
    def derived(self) -> Subgroup:
        return derived_subgroup(self.G)

    @cached_property
    def aut(self) -> AutomorphismSet:
        cfg = self.config
        return self.cache.get_or_compute(
            self.G,
            lambda G: automorphism_group(G, cap=cfg.aut_enumeration_cap, timeout=cfg.per_group_timeout_seconds),
        )

    @cached_property
    def L(self) -> Subgroup:
        return absolute_centre(self.G, self.aut)

    @cached_property
    def exp_L(self) -> int:
        """``p^n``; 1 when L is trivial."""
        return exponent(self.L)

    @cached_property
    def G_pn(self) -> Subgroup:
        return power_subgroup(self.G, self.exp_L)

    @cached_property
    def LG_pn(self) -> Subgroup:
        return subgroup_join(self.L, self.G_pn)

    @cached_property
    def inn(self) -> AutomorphismSet:
        return inner_automorphisms(self.G)

    @cached_property
    def autc(self) -> AutomorphismSet:
        return central_automorphisms(self.aut)

    @cached_property
    def autl(self) -> AutomorphismSet:
        return absolute_central_automorphisms(self.aut, self.L)

    @cached_property
    def autLZ(self) -> AutomorphismSet:
        return autl_fixing_centre(self.aut, self.L)

    @cached_property
    def autl_constrained(self) -> AutomorphismSet:
        return constrained_autl(self.G, self.L, timeout=self.config.per_group_timeout_seconds)

    @cached_property
    def G_mod_Z(self) -> Group:
        return quotient_group(self.G, self.Z, f"{self.G.label}/Z").image

    @cached_property
    def G_mod_L(self) -> Group:
        return quotient_group(self.G, self.L, f"{self.G.label}/L").image

    def _inv_or_none(self, H: Group) -> Optional[AbelianInvariants]:
        return abelian_invariants(H) if H.is_abelian else None

    @cached_property
    def inv_G_mod_Z(self) -> Optional[AbelianInvariants]:
        return self._inv_or_none(self.G_mod_Z)

    @cached_property
    def inv_G_mod_L(self) -> Optional[AbelianInvariants]:
        return self._inv_or_none(self.G_mod_L)

    def _abelianised(self, N: Subgroup) -> AbelianInvariants:
        # Hom into an abelian group factors through the largest abelian quotient
        K = subgroup_join(N, self.derived)
        return abelian_invariants(quotient_group(self.G, K).image)

    @cached_property
    def ab_G_mod_Z(self) -> AbelianInvariants:
        return self._abelianised(self.Z)

    @cached_property
    def ab_G_mod_L(self) -> AbelianInvariants:
        return self._abelianised(self.L)

    @cached_property
    def ab_G_mod_LGpn(self) -> AbelianInvariants:
        return self._abelianised(self.LG_pn)

    @cached_property
    def inv_L(self) -> AbelianInvariants:
        return abelian_invariants(self.L)

    @cached_property
    def exp_G_mod_Z(self) -> int:
        return exponent(self.G_mod_Z)

    @cached_property
    def L_cyclic(self) -> bool:
        return is_cyclic(self.L)

    @cached_property
    def Gprime_in_L(self) -> bool:
        return self.derived <= self.L

    @cached_property
    def Z_eq_LGpn(self) -> bool:
        return self.Z == self.LG_pn

    @cached_property
    def autl_eq_inn(self) -> bool:
        return self.autl == self.inn

    @cached_property
    def inn_eq_autLZ(self) -> bool:
        return self.inn == self.autLZ

    @property
    def is_nonabelian_p_group(self) -> bool:
        return self.p is not None and self.nonabelian


def _data(G, data: Optional[GroupData]) -> GroupData:
    if data is not None:
        return data
    return G if isinstance(G, GroupData) else GroupData(G)


# --- checkers --------------------------------------------------------------

def check_lemma_2_1(H: Group, K: Group, oracle_cap: int = 1 << 16) -> Verdict:
    """Hom(H, K) is isomorphic to H for abelian p-group H of exponent p^c and
    cyclic K with p^c dividing |K|."""
    rid = "Lem2.1"
    p = is_p_group(H)
    if p is None or not H.is_abelian:
        return _na(rid, "H is not a nontrivial abelian p-group")
    e = exponent(H)
    if not is_cyclic(K) or not K.is_abelian:
        return _na(rid, "K is not cyclic")
    if K.order % e:
        return _na(rid, f"exp(H)={e} does not divide |K|={K.order}")
    inv_h = abelian_invariants(H)
    inv_k = abelian_invariants(K)
    formula = hom_invariants(inv_h, inv_k)
    witness = {"H": H.label, "K": K.label, "inv_H": inv_h.as_list(), "hom_invariants": formula.as_list()}
    ok = formula == inv_h and hom_order(inv_h, inv_k) == H.order
    try:
        homs = hom_group(H, K, cap=oracle_cap)
    except OracleCapExceeded:
        homs = None
    if homs is not None:
        oracle_inv = abelian_invariants(homs)
        witness.update(oracle_count=homs.order, oracle_invariants=oracle_inv.as_list())
        ok = ok and homs.order == H.order and oracle_inv == inv_h
    return _verdict(rid, ok, witness)


def check_lemma_2_1_in_group(G: Group, data: Optional[GroupData] = None) -> Verdict:
    """The Lem2.1 instance that underlies the Thm3.4 count: H = G/Z(G), K = L(G)."""
    d = _data(G, data)
    if d.p is None or not d.nonabelian:
        return _na("Lem2.1", "not a nonabelian p-group")
    if not d.G_mod_Z.is_abelian:
        return _na("Lem2.1", "G/Z(G) is not abelian")
    return check_lemma_2_1(d.G_mod_Z, d.L.as_group(f"L({d.G.label})"))


def check_prop_2_4(G, data: Optional[GroupData] = None) -> Verdict:
    """Aut_l(G) is isomorphic to Hom(G/L(G), L(G))."""
    d = _data(G, data)
    lhs = abelian_invariants(d.autl)
    rhs = hom_invariants(d.ab_G_mod_L, d.inv_L)
    ok = lhs == rhs and d.autl.order == hom_order(d.ab_G_mod_L, d.inv_L)
    return _verdict("Prop2.4", ok, {"group": d.G.label, "inv_Autl": lhs.as_list(), "inv_Hom": rhs.as_list()})


def check_lemma_2_5(G, data: Optional[GroupData] = None) -> Verdict:
    """Aut^{L}_{Z}(G) is isomorphic to Hom(G/Z(G), L(G))."""
    d = _data(G, data)
    lhs = abelian_invariants(d.autLZ)
    rhs = hom_invariants(d.ab_G_mod_Z, d.inv_L)
    return _verdict("Lem2.5", lhs == rhs, {"group": d.G.label, "inv_AutLZ": lhs.as_list(), "inv_Hom": rhs.as_list()})


def _bound_gate(d: GroupData) -> Optional[str]:
    if d.p is None:
        return "not a p-group"
    if not d.nonabelian or d.nil_class != 2:
        return "not of nilpotency class 2"
    if d.exp_G_mod_Z > d.exp_L:
        return f"exp(G/Z)={d.exp_G_mod_Z} exceeds exp(L)={d.exp_L}"
    return None


def _bound_quantities(d: GroupData) -> dict:
    r = rank(d.inv_G_mod_Z)
    s = rank(d.inv_L)
    bound = d.G_mod_Z.order * d.p ** (r * (s - 1))
    return {"group": d.G.label, "r": r, "s": s, "bound": bound}


def check_lemma_2_6(G, data: Optional[GroupData] = None) -> Verdict:
    """|Hom(G/Z, L)| >= |G/Z| p^(r(s-1)) for class-2 groups with exp(G/Z) <= exp(L)."""
    d = _data(G, data)
    gate = _bound_gate(d)
    if gate:
        return _na("Lem2.6", gate)
    w = _bound_quantities(d)
    w["hom_order"] = hom_order(d.inv_G_mod_Z, d.inv_L)
    return _verdict("Lem2.6", w["r"] >= 2 and w["hom_order"] >= w["bound"], w)


def check_lemma_2_7(G, data: Optional[GroupData] = None) -> Verdict:
    """|Aut_l(G)| >= |G/Z| p^(r(s-1)) under the same hypotheses."""
    d = _data(G, data)
    gate = _bound_gate(d)
    if gate:
        return _na("Lem2.7", gate)
    w = _bound_quantities(d)
    w["autl_order"] = d.autl.order
    return _verdict("Lem2.7", w["r"] >= 2 and w["autl_order"] >= w["bound"], w)


def check_lemma_2_8(G, data: Optional[GroupData] = None) -> Verdict:
    """G/L(G) abelian iff Inn(G) <= Aut_l(G)."""
    d = _data(G, data)
    lhs = d.G_mod_L.is_abelian
    rhs = d.inn.issubset(d.autl)
    return _verdict("Lem2.8", lhs == rhs, {"group": d.G.label, "G_mod_L_abelian": lhs, "inn_in_autl": rhs})


def check_lemma_3_1(G, data: Optional[GroupData] = None) -> Verdict:
    """Aut_l(G) = Inn(G) forces L(G) cyclic (nonabelian p-groups)."""
    d = _data(G, data)
    if not d.is_nonabelian_p_group:
        return _na("Lem3.1", "not a nonabelian p-group")
    if not d.autl_eq_inn:
        return _na("Lem3.1", "Aut_l(G) != Inn(G)")
    return _verdict("Lem3.1", d.L_cyclic, {"group": d.G.label, "inv_L": d.inv_L.as_list()})


def check_prop_3_2(G, data: Optional[GroupData] = None) -> Verdict:
    """For odd p, Aut_l(G) = Inn(G) forces exp(G/Z) = exp(L)."""
    d = _data(G, data)
    if not d.is_nonabelian_p_group:
        return _na("Prop3.2", "not a nonabelian p-group")
    if d.p == 2:
        return _na("Prop3.2", "p = 2")
    if not d.autl_eq_inn:
        return _na("Prop3.2", "Aut_l(G) != Inn(G)")
    return _verdict("Prop3.2", d.exp_G_mod_Z == d.exp_L,
                    {"group": d.G.label, "exp_G_mod_Z": d.exp_G_mod_Z, "exp_L": d.exp_L})


def check_thm_3_3(G, data: Optional[GroupData] = None) -> Verdict:
    """Inn(G) = Aut^L_Z(G) iff G' <= L(G) and L(G) cyclic."""
    d = _data(G, data)
    if not d.is_nonabelian_p_group:
        return _na("Thm3.3", "not a nonabelian p-group")
    lhs = d.inn_eq_autLZ
    rhs = d.Gprime_in_L and d.L_cyclic
    return _verdict("Thm3.3", lhs == rhs, {
        "group": d.G.label, "inn_eq_autLZ": lhs, "Gprime_in_L": d.Gprime_in_L, "L_cyclic": d.L_cyclic,
        "inn_order": d.inn.order, "autLZ_order": d.autLZ.order,
    })


def check_thm_3_4(G, data: Optional[GroupData] = None) -> Verdict:
    """Aut_l(G) = Inn(G) iff G' <= L, L cyclic and Z(G) = L(G) G^(p^n), p^n = exp(L)."""
    d = _data(G, data)
    if not d.is_nonabelian_p_group:
        return _na("Thm3.4", "not a nonabelian p-group")
    lhs = d.autl_eq_inn
    rhs = d.Gprime_in_L and d.L_cyclic and d.Z_eq_LGpn
    return _verdict("Thm3.4", lhs == rhs, {
        "group": d.G.label, "autl_eq_inn": lhs, "Gprime_in_L": d.Gprime_in_L, "L_cyclic": d.L_cyclic,
        "Z_eq_LGpn": d.Z_eq_LGpn, "autl_order": d.autl.order, "inn_order": d.inn.order,
    })


def check_dual_route(G, data: Optional[GroupData] = None) -> Verdict:
    """Coset-constrained search and filtering Aut(G) give the same Aut_l(G)."""
    d = _data(G, data)
    ok = d.autl_constrained == d.autl
    return _verdict("DualRoute", ok, {
        "group": d.G.label, "filter_order": d.autl.order, "constrained_order": d.autl_constrained.order,
    })


CHECKERS = (
    check_lemma_2_1_in_group, check_prop_2_4, check_lemma_2_5, check_lemma_2_6, check_lemma_2_7,
    check_lemma_2_8, check_lemma_3_1, check_prop_3_2, check_thm_3_3, check_thm_3_4, check_dual_route,
)


# --- engine self-consistency ----------------------------------------------

def _all_automorphisms(G: Group, images: np.ndarray, batch: int = 256) -> bool:
    if images.shape[0] == 0:
        return False
    if not np.all(images[:, 0] == 0):
        return False
    srt = np.sort(images, axis=1)
    if not np.all(srt == np.arange(G.order)):
        return False
    t = G.table
    for s in range(0, images.shape[0], batch):
        imgs = images[s:s + batch]
        lhs = imgs[:, t]  # img[x_i x_j]
        rhs = t[imgs[:, :, None], imgs[:, None, :]]
        if not np.array_equal(lhs, rhs):
            return False
    return True


def engine_invariant_problems(d: GroupData) -> list[str]:
    """Every closure/normality/containment property the engine promises; empty when all pass."""
    problems = []
    G = d.G
    sets = {"Aut": d.aut, "Inn": d.inn, "Aut_c": d.autc, "Aut_l": d.autl, "Aut^L_Z": d.autLZ}
    for name, A in sets.items():
        if not A.is_closed():
            problems.append(f"{name} not closed or missing identity")
        if not _all_automorphisms(G, A.images):
            problems.append(f"{name} has a member that is not an automorphism")
    if not (d.inn.issubset(d.aut) and d.autc.issubset(d.aut) and d.autl.issubset(d.autc)):
        problems.append("containment Aut_l <= Aut_c <= Aut or Inn <= Aut fails")
    if not d.inn.is_normal_in(d.aut):
        problems.append("Inn not normal in Aut")
    if not d.autl.is_abelian:
        problems.append("Aut_l not abelian")
    if not d.autl.is_normal_in(d.aut):
        problems.append("Aut_l not normal in Aut")
    if not d.L <= d.Z:
        problems.append("L not contained in Z")
    if not np.all(d.L.members[d.aut.images[:, d.L.elements]]):
        problems.append("L not invariant under Aut")
    if d.inn.order * d.Z.order != G.order:
        problems.append("|Inn| |Z| != |G|")
    if not (is_normal(G, d.Z) and is_normal(G, d.derived)):
        problems.append("centre or derived subgroup not normal")
    if not np.all(d.G_pn.members[d.aut.images[:, d.G_pn.elements]]):
        problems.append("power subgroup not characteristic")
    if d.autl != d.autl_constrained:
        problems.append("dual-route Aut_l mismatch")
    return problems


# --- reports and census ----------------------------------------------------

@dataclass
class TheoremReport:
    label: str
    order: int
    table_hash: str
    prime: Optional[int] = None
    nonabelian: Optional[bool] = None
    nilpotency_class: Optional[int] = None
    order_Z: Optional[int] = None
    order_Gprime: Optional[int] = None
    order_L: Optional[int] = None
    exp_L: Optional[int] = None
    exp_G_mod_Z: Optional[int] = None
    order_G_pn: Optional[int] = None
    order_LG_pn: Optional[int] = None
    inv_G_mod_Z: Optional[list[int]] = None
    inv_G_mod_L: Optional[list[int]] = None
    inv_L: Optional[list[int]] = None
    aut_order: Optional[int] = None
    inn_order: Optional[int] = None
    autc_order: Optional[int] = None
    autl_order: Optional[int] = None
    autLZ_order: Optional[int] = None
    inv_autl: Optional[list[int]] = None
    inv_autLZ: Optional[list[int]] = None
    L_cyclic: Optional[bool] = None
    Gprime_in_L: Optional[bool] = None
    Z_eq_LGpn: Optional[bool] = None
    autl_eq_inn: Optional[bool] = None
    inn_eq_autLZ: Optional[bool] = None
    verdicts: list[Verdict] = field(default_factory=list)
    error: Optional[str] = None

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, raw: dict) -> "TheoremReport":
        raw = dict(raw)
        raw["verdicts"] = [Verdict(**v) for v in raw.get("verdicts", [])]
        return cls(**raw)

    def verdict(self, result_id: str) -> Optional[Verdict]:
        return next((v for v in self.verdicts if v.result_id == result_id), None)

    @property
    def has_failure(self) -> bool:
        return any(v.status == FAILS for v in self.verdicts)

    def consistency_problems(self) -> list[str]:
        out = []
        if self.autl_eq_inn and self.autl_order != self.inn_order:
            out.append("autl_eq_inn but orders differ")
        if self.aut_order:
            for name in ("inn_order", "autc_order", "autl_order", "autLZ_order"):
                v = getattr(self, name)
                if v is not None and self.aut_order % v:
                    out.append(f"{name} does not divide |Aut|")
        return out


def analyse(G: Group, config: Optional[RunConfig] = None, cache: Optional[AutCache] = None,
            data: Optional[GroupData] = None) -> TheoremReport:
    """Compute every invariant and run every checker on one group.

    Errors inside the computation (cap, timeout, anything else) are recorded
    in ``report.error`` instead of propagating.  Pass ``data`` to reuse
    quantities already computed for ``G``.
    """
    report = TheoremReport(label=G.label, order=G.order, table_hash=G.digest)
    d = data if data is not None else GroupData(G, config, cache)
    try:
        report.prime = d.p
        report.nonabelian = d.nonabelian
        report.nilpotency_class = d.nil_class
        report.order_Z = d.Z.order
        report.order_Gprime = d.derived.order
        report.aut_order = d.aut.order
        report.order_L = d.L.order
        report.exp_L = d.exp_L
        report.exp_G_mod_Z = d.exp_G_mod_Z
        report.order_G_pn = d.G_pn.order
        report.order_LG_pn = d.LG_pn.order
        report.inv_G_mod_Z = _inv(d.inv_G_mod_Z)
        report.inv_G_mod_L = _inv(d.inv_G_mod_L)
        report.inv_L = d.inv_L.as_list()
        report.inn_order = d.inn.order
        report.autc_order = d.autc.order
        report.autl_order = d.autl.order
        report.autLZ_order = d.autLZ.order
        report.inv_autl = abelian_invariants(d.autl).as_list()
        report.inv_autLZ = abelian_invariants(d.autLZ).as_list()
        report.L_cyclic = d.L_cyclic
        report.Gprime_in_L = d.Gprime_in_L
        report.Z_eq_LGpn = d.Z_eq_LGpn
        report.autl_eq_inn = d.autl_eq_inn
        report.inn_eq_autLZ = d.inn_eq_autLZ
        report.verdicts = [check(G, d) for check in CHECKERS]
    except AutlError as exc:
        report.error = f"{type(exc).__name__}: {exc}"
    except Exception as exc:  # recorded, never aborts a census
        log.exception("unexpected failure on %s", G.label)
        report.error = f"{type(exc).__name__}: {exc}"
    return report


@dataclass
class CensusSummary:
    groups: int
    errors: list[str]
    counts: dict[str, dict[str, int]]
    autl_eq_inn: list[str]
    p2_exponent_observations: list[dict]

    @property
    def total_fails(self) -> int:
        return sum(c[FAILS] for c in self.counts.values())

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class CensusResult:
    reports: list[TheoremReport]
    summary: CensusSummary


def summarise(reports: list[TheoremReport]) -> CensusSummary:
    counts = {rid: {HOLDS: 0, FAILS: 0, NOT_APPLICABLE: 0} for rid in RESULT_IDS}
    for r in reports:
        for v in r.verdicts:
            counts[v.result_id][v.status] += 1
    eq = [r.label for r in reports if r.error is None and r.nonabelian and r.prime and r.autl_eq_inn]
    p2 = [
        {"group": r.label, "exp_G_mod_Z": r.exp_G_mod_Z, "exp_L": r.exp_L}
        for r in reports
        if r.error is None and r.prime == 2 and r.nonabelian and r.autl_eq_inn
    ]
    return CensusSummary(
        groups=len(reports),
        errors=[f"{r.label}: {r.error}" for r in reports if r.error],
        counts=counts,
        autl_eq_inn=eq,
        p2_exponent_observations=p2,
    )


def _worker(args: tuple[Group, RunConfig]) -> TheoremReport:
    G, cfg = args
    return analyse(G, cfg, AutCache(cfg.cache_dir))


def census(groups: list[Group], config: Optional[RunConfig] = None) -> CensusResult:
    """Analyse every group; reports come back in input order whatever the parallelism."""
    cfg = config or RunConfig(parallelism_degree=1)
    jobs = min(cfg.parallelism_degree, max(len(groups), 1))
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(_worker, [(G, cfg) for G in groups]))
    else:
        cache = AutCache(cfg.cache_dir)
        reports = [analyse(G, cfg, cache) for G in groups]
    return CensusResult(reports, summarise(reports))
