from collections import Counter

import pytest

from corpus import analysed
from autl.abelian import hom_order
from autl.config import RunConfig
from autl.constructions import builtin
from autl.theorems import (
    FAILS,
    HOLDS,
    NOT_APPLICABLE,
    RESULT_IDS,
    GroupData,
    TheoremReport,
    Verdict,
    analyse,
    census,
    check_dual_route,
    check_lemma_2_1,
    check_lemma_2_5,
    check_lemma_2_6,
    check_lemma_2_7,
    check_lemma_2_8,
    check_lemma_3_1,
    check_prop_2_4,
    check_prop_3_2,
    check_thm_3_3,
    check_thm_3_4,
    engine_invariant_problems,
)


def status(v):
    return v.status


# --- per-checker examples ---------------------------------------------------

def test_lemma_2_1_examples():
    assert check_lemma_2_1(builtin("C4xC2"), builtin("C8")).status == HOLDS
    v = check_lemma_2_1(builtin("C4xC2"), builtin("C8"))
    assert v.witness is None
    assert check_lemma_2_1(builtin("C2"), builtin("C3")).status == NOT_APPLICABLE
    assert check_lemma_2_1(builtin("C1"), builtin("C4")).status == NOT_APPLICABLE
    assert check_lemma_2_1(builtin("C2"), builtin("C2xC2")).status == NOT_APPLICABLE
    assert check_lemma_2_1(builtin("C6"), builtin("C6")).status == NOT_APPLICABLE


def test_prop_2_4_examples(q8, heis3):
    for G in (builtin("C2"), q8, heis3):
        assert check_prop_2_4(G).status == HOLDS
    d = GroupData(q8)
    assert d.autl.order == 4 and d.inv_L.as_list() == [2]


def test_lemma_2_5_examples(q8, heis3):
    assert check_lemma_2_5(q8).status == HOLDS and GroupData(q8).autLZ.order == 4
    assert check_lemma_2_5(heis3).status == HOLDS and GroupData(heis3).autLZ.order == 1
    assert check_lemma_2_5(builtin("C4xC2")).status == HOLDS


def test_lemmas_2_6_2_7_examples(q8, heis3):
    for check in (check_lemma_2_6, check_lemma_2_7):
        v = check(q8)
        assert v.status == HOLDS
        assert check(heis3).status == NOT_APPLICABLE
        assert check(builtin("C4")).status == NOT_APPLICABLE
    # the quantities behind the Q8 verdict
    d = GroupData(q8)
    assert hom_order(d.inv_G_mod_Z, d.inv_L) == 4


def test_lemma_2_8_examples(q8, heis3):
    for G in (builtin("C4xC2"), q8, heis3):
        assert check_lemma_2_8(G).status == HOLDS
    d = GroupData(heis3)
    assert not d.G_mod_L.is_abelian and not d.inn.issubset(d.autl)


def test_lemma_3_1_examples(q8, heis3):
    assert check_lemma_3_1(q8).status == HOLDS
    assert check_lemma_3_1(heis3).reason == "Aut_l(G) != Inn(G)"
    assert check_lemma_3_1(builtin("C8")).status == NOT_APPLICABLE


def test_prop_3_2_examples(q8, heis3):
    assert check_prop_3_2(q8).reason == "p = 2"
    assert check_prop_3_2(heis3).reason == "Aut_l(G) != Inn(G)"
    assert check_prop_3_2(builtin("C9")).status == NOT_APPLICABLE


@pytest.mark.parametrize("name,lhs", [("Q8", True), ("heisenberg3", False), ("D8", True)])
def test_thm_3_3_examples(name, lhs):
    d = GroupData(builtin(name))
    assert check_thm_3_3(d.G, d).status == HOLDS
    assert d.inn_eq_autLZ is lhs
    assert (d.Gprime_in_L and d.L_cyclic) is lhs


@pytest.mark.parametrize("name,lhs", [("Q8", True), ("heisenberg3", False), ("D8", True)])
def test_thm_3_4_examples(name, lhs):
    d = GroupData(builtin(name))
    assert check_thm_3_4(d.G, d).status == HOLDS
    assert d.autl_eq_inn is lhs


def test_heisenberg_power_subgroup_convention(heis3):
    d = GroupData(heis3)
    assert d.exp_L == 1 and d.G_pn.order == 27 and not d.Z_eq_LGpn


def test_dual_route_examples(q8, d8, heis3):
    for G in (q8, d8, heis3):
        assert check_dual_route(G).status == HOLDS


def test_non_p_group_gating():
    d = GroupData(builtin("D6"))
    for check in (check_lemma_2_6, check_lemma_3_1, check_prop_3_2, check_thm_3_3, check_thm_3_4):
        assert check(d.G, d).reason == ("not a p-group" if check is check_lemma_2_6 else "not a nonabelian p-group")
    assert check_prop_2_4(d.G, d).status == HOLDS


# --- verdict and report plumbing ---------------------------------------------

def test_verdict_witness_contract():
    with pytest.raises(ValueError):
        Verdict("Thm3.4", FAILS, None)
    with pytest.raises(ValueError):
        Verdict("Thm3.4", HOLDS, {"x": 1})
    with pytest.raises(ValueError):
        Verdict("Thm9.9", HOLDS, None)


def test_report_round_trip(q8):
    r = analyse(q8)
    assert TheoremReport.from_dict(r.to_dict()) == r
    assert r.verdict("Thm3.4").status == HOLDS
    assert [v.result_id for v in r.verdicts] == list(RESULT_IDS)


def test_analyse_records_errors_instead_of_raising():
    G = builtin("C2xC2xC2xC2")  # |Aut| = 20160
    r = analyse(G, RunConfig(aut_enumeration_cap=100, parallelism_degree=1))
    assert r.error and "EnumerationCapExceeded" in r.error
    assert r.verdicts == []


# --- census examples --------------------------------------------------------

def test_census_d8_q8():
    res = census([builtin("D8"), builtin("Q8")])
    assert res.summary.autl_eq_inn == ["D8", "Q8"]
    assert res.summary.total_fails == 0
    assert [r.label for r in res.reports] == ["D8", "Q8"]


def test_census_heisenberg():
    res = census([builtin("heisenberg3")])
    assert res.summary.autl_eq_inn == [] and res.summary.total_fails == 0


def test_census_empty():
    res = census([])
    assert res.reports == [] and res.summary.groups == 0 and res.summary.total_fails == 0


def test_census_survives_errors():
    cfg = RunConfig(aut_enumeration_cap=100, parallelism_degree=1)
    res = census([builtin("C2xC2xC2xC2"), builtin("Q8")], cfg)
    assert len(res.summary.errors) == 1 and res.reports[1].error is None


# --- corpus-wide properties -------------------------------------------------

@pytest.fixture(scope="module")
def corpus():
    return analysed()


def test_no_fails_and_no_errors(corpus):
    for d, r in corpus:
        assert r.error is None, r.label
        assert not r.has_failure, [v for v in r.verdicts if v.status == FAILS]
        assert r.consistency_problems() == []


def test_not_applicable_branches_are_exercised(corpus):
    gated = [(v.result_id, v.reason) for _, r in corpus for v in r.verdicts if v.status == NOT_APPLICABLE]
    for key in [
        ("Lem2.6", "not a p-group"), ("Lem2.6", "not of nilpotency class 2"), ("Lem2.6", "exp(G/Z)"),
        ("Lem2.7", "not of nilpotency class 2"), ("Lem2.7", "exp(G/Z)"),
        ("Lem3.1", "not a nonabelian p-group"), ("Lem3.1", "Aut_l(G) != Inn(G)"),
        ("Prop3.2", "not a nonabelian p-group"), ("Prop3.2", "p = 2"), ("Prop3.2", "Aut_l(G) != Inn(G)"),
        ("Thm3.3", "not a nonabelian p-group"), ("Thm3.4", "not a nonabelian p-group"),
        ("Lem2.1", "not a nonabelian p-group"),
    ]:
        rid, prefix = key
        assert sum(1 for g in gated if g[0] == rid and g[1].startswith(prefix)) > 0, key
    applicable = Counter(v.result_id for _, r in corpus for v in r.verdicts if v.status == HOLDS)
    for rid in ("Lem2.1", "Lem2.6", "Lem2.7", "Lem2.8", "Lem3.1", "Thm3.3", "Thm3.4"):
        assert applicable[rid] > 0, rid


def test_thm_3_4_forward_decomposition(corpus):
    for d, r in corpus:
        if r.nonabelian and r.prime and r.autl_eq_inn:
            assert r.Gprime_in_L and r.L_cyclic and r.Z_eq_LGpn, r.label


def test_lemma_3_1_consistent_with_thm_3_4(corpus):
    for d, r in corpus:
        v31 = r.verdict("Lem3.1")
        if v31.status != NOT_APPLICABLE:
            assert r.verdict("Thm3.4").status == HOLDS
            assert r.L_cyclic is True


def test_autl_order_is_hom_order(corpus):
    for d, r in corpus:
        assert r.autl_order == hom_order(d.ab_G_mod_L, d.inv_L), r.label


def test_injection_chain(corpus):
    seen = 0
    for d, r in corpus:
        if r.nilpotency_class != 2 or not d.LG_pn <= d.Z:
            continue
        seen += 1
        a = hom_order(d.ab_G_mod_Z, d.inv_L)
        b = hom_order(d.ab_G_mod_LGpn, d.inv_L)
        c = hom_order(d.ab_G_mod_L, d.inv_L)
        assert a <= b <= c, r.label
    assert seen > 0


def test_engine_invariants_on_corpus(corpus):
    for d, r in corpus:
        assert engine_invariant_problems(d) == [], r.label
