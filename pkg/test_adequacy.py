#!/usr/bin/env python
"""
Test script for the adequacy assessment service.
"""
import logging
import sys

import pytest

from app.algebra.cohom import h0_dim
from app.algebra.liealg import spanning_sum_A, spanning_sum_A_direct, spanning_sum_B, spanning_sum_B_direct
from app.algebra.matgrp import builtin_spec, enumerate_group, random_subgroup_search, sp_part
from app.algebra.repmod import abs_irreducible, natural_module
from app.models.errors import CapExceeded
from app.models.schemas import REPORT_COLUMNS, AdequacyReport
from app.services.adequacy_service import (
    GSP4_F3_CLASSES,
    SP4_NONADEQUATE_CLASSES,
    assess,
    g_irreducible,
    induced_checks,
    lie_data_for,
    match_known_classes,
    reasonable_precheck,
    symp_irred_equivalence,
    tidy_check,
)
from app.services.fixture_service import FIXTURES, fixture_spec

# Set up logging
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
    handlers=[logging.StreamHandler(sys.stdout)]
)


@pytest.fixture(scope="module")
def wreath():
    return enumerate_group(fixture_spec("imprimitive_1152"))


@pytest.fixture(scope="module")
def wreath_report(wreath):
    return assess(wreath, seed=1)


def _report(**overrides) -> AdequacyReport:
    fields = dict(
        order_gamma_prime=103680, order_gamma=51840, similitude_surjective=True, abs_irred=True,
        condA=True, condB=True, span_dim_A=10, span_dim_B=10, lie_dim=10, h0_adjoint_dual=0,
        h1_trivial=0, h1_adjoint=0, adequate=True, tidy=True, induced=False, split_induced=False,
        seed=0, version="test",
    )
    fields.update(overrides)
    return AdequacyReport(**fields)


def test_known_tables_are_consistent():
    assert {c.order_gamma for c in SP4_NONADEQUATE_CLASSES if c.p == 3} == {96, 240, 384, 1440, 1152}
    assert all(c.adequate is False for c in SP4_NONADEQUATE_CLASSES)
    for c in GSP4_F3_CLASSES:
        assert c.order_gamma_prime == 2 * c.order_gamma
        # adequacy needs the vanishing of both cohomology groups
        if c.adequate:
            assert c.h1_adjoint == 0 and c.h1_trivial == 0


def test_wreath_product_is_not_adequate(wreath_report):
    r = wreath_report
    assert r.order_gamma == 1152
    assert r.abs_irred is True
    assert r.condA is True
    assert r.h1_adjoint == 0
    assert r.h1_trivial == 1
    assert r.adequate is False
    assert r.induced is True
    assert r.split_induced is True
    assert r.tidy is False
    assert "sp4-nonadequate:p3:1152:C2^2.A4wrC2" in r.table_rows


def test_wreath_product_precheck(wreath, wreath_report):
    pre = reasonable_precheck(wreath, wreath_report)
    assert pre.kind == "PRECHECK"
    assert pre.passes is False
    assert "h1_trivial" in pre.obstructions


def test_csv_row_follows_columns(wreath_report):
    row = wreath_report.csv_row()
    assert len(row) == len(REPORT_COLUMNS)
    values = dict(zip(REPORT_COLUMNS, row))
    assert values["order_gamma"] == "1152"
    assert values["adequate"] == "FALSE"
    assert values["h1_trivial"] == "1"


@pytest.mark.parametrize("name", ["sl2_f11", "sl2_f13"])
def test_sl2_in_gl2_is_adequate(name):
    r = assess(enumerate_group(fixture_spec(name)), seed=2)
    assert r.abs_irred is True
    assert r.adequate is True
    assert r.h1_adjoint == 0 and r.h1_trivial == 0


def test_cyclic_rotation_is_not_adequate():
    r = assess(enumerate_group(fixture_spec("cyclic4_gl2_f3")))
    assert r.order_gamma == 4
    assert r.abs_irred is False
    assert r.adequate is False


def test_torus_report():
    r = assess(enumerate_group(fixture_spec("diag_torus")))
    assert (r.order_gamma_prime, r.order_gamma) == (8, 4)
    assert r.similitude_surjective is True
    assert r.abs_irred is False
    assert r.condA is False
    assert r.adequate is False
    assert r.tidy is False
    assert not r.induced and not r.split_induced


def test_similitude_equal_to_eigenvalue_ratio_is_not_tidy():
    G = enumerate_group(fixture_spec("similitude_cyclic_f3"))
    assert G.order == 2
    tidy, witness = tidy_check(G)
    assert tidy is False
    assert witness is None


def test_non_gsp_groups_are_not_tidy():
    tidy, _ = tidy_check(enumerate_group(builtin_spec("SL2", 3)))
    assert tidy is False


def test_form_irreducibility():
    assert g_irreducible(enumerate_group(fixture_spec("block_sp2xsp2"))) is True
    assert g_irreducible(enumerate_group(fixture_spec("isotropic_stabilizer"))) is False
    assert g_irreducible(enumerate_group(builtin_spec("SL2", 3)), limit=0) is None


def test_symplectic_irreducibility_criterion():
    check = symp_irred_equivalence(enumerate_group(fixture_spec("block_sp2xsp2")))
    assert check.abs_irred is False
    assert check.g_irred is True
    assert check.centralizer_is_pm1 is False
    assert check.holds is True


def test_induced_checks(wreath):
    assert induced_checks(wreath) == (True, True)
    assert induced_checks(enumerate_group(fixture_spec("block_sp2xsp2"))) == (False, False)
    assert induced_checks(enumerate_group(builtin_spec("SL2", 3))) == (False, False)


def test_match_known_gsp4_row():
    labels = match_known_classes(_report(), 3, "GSp")
    assert labels == ["gsp4-f3:103680/51840:24"]
    assert match_known_classes(_report(tidy=False), 3, "GSp") == []
    assert match_known_classes(_report(), 5, "GSp") == []


def test_match_known_nonadequate_classes_share_fingerprints():
    report = _report(order_gamma_prime=96, order_gamma=96, similitude_surjective=False,
                     adequate=False, h1_adjoint=1, h1_trivial=0)
    assert match_known_classes(report, 3, "Sp") == ["sp4-nonadequate:p3:96:SL(2,3).C2^2"]
    report = _report(order_gamma_prime=480, order_gamma=480, similitude_surjective=False,
                     adequate=False, h1_adjoint=1, h1_trivial=0)
    assert len(match_known_classes(report, 5, "Sp")) == 2


def _oracle_corpus(max_order: int = 500):
    specs = [fixture_spec(name) for name in sorted(FIXTURES)]
    specs += [builtin_spec(name, p) for name in ("SL2", "GL2") for p in (3, 5)]
    corpus = []
    for spec in specs:
        try:
            G = enumerate_group(spec, cap=max_order)
        except CapExceeded:
            continue
        corpus.append(sp_part(G) if spec.ambient == "GSp" else G)
    return corpus


def test_span_and_direct_forms_agree_on_small_groups():
    corpus = _oracle_corpus()
    assert len(corpus) >= 6
    for G in corpus:
        lie = lie_data_for(G)
        span_a, span_b = spanning_sum_A(G, lie), spanning_sum_B(G, lie)
        assert spanning_sum_B_direct(G, lie) == span_b.verdict, G.label
        assert spanning_sum_A_direct(G, lie) == span_a.verdict, G.label


@pytest.mark.slow
@pytest.mark.parametrize("p", [3, 5])
def test_sp4_search_irreducible_classes_span(p):
    spec = builtin_spec("Sp4", p)
    # Sp4(F_5) is sampled without enumeration; 2-generated subgroups past the cap are skipped
    ambient = enumerate_group(spec) if p == 3 else spec
    found = random_subgroup_search(ambient, seed=42, num_gens=2, samples=200, cap=None if p == 3 else 20000)
    allowed = {c.order_gamma for c in SP4_NONADEQUATE_CLASSES if c.p == 3}
    for H in found:
        if not abs_irreducible(natural_module(H)):
            continue
        lie = lie_data_for(H)
        assert spanning_sum_A(H, lie).verdict is True, H.label
        assert h0_dim(lie.adjoint_module(H)) == 0, H.label
        if p == 3 and assess(H, seed=42, oracle=False).adequate is False:
            assert H.order in allowed, H.label


@pytest.mark.slow
def test_gsp4_f3_row():
    r = assess(enumerate_group(builtin_spec("GSp4", 3)), seed=3)
    observed = (r.order_gamma_prime, r.order_gamma, r.condA, r.condB, r.h1_adjoint, r.h1_trivial,
                r.adequate, r.tidy, r.induced, r.split_induced)
    assert observed == (103680, 51840, True, True, 0, 0, True, True, False, False)
    assert "gsp4-f3:103680/51840:24" in r.table_rows


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
