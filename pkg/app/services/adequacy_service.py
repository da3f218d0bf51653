"""
Adequacy assessment service.

This module assembles the verdicts for one enumerated group: absolute
irreducibility, the spanning conditions, the cohomological vanishing
conditions, tidiness, induced structure and the comparison with the
classified non-adequate classes of small symplectic groups.
"""
import logging
import time
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from app.algebra.cohom import h0_dim, h1_dim
from app.algebra.ff import roots_in_splitting_field
from app.algebra.liealg import ClassicalLieData, spanning_sum_A, spanning_sum_A_direct, spanning_sum_B, spanning_sum_B_direct
from app.algebra.linalg import Mat, charpoly_array, format_matrix
from app.algebra.matgrp import (
    EnumeratedGroup,
    centralizer_in_ambient,
    encode_matrices,
    fingerprint,
    index2_subgroups,
    similitude_image,
    sp_part,
)
from app.algebra.repmod import (
    abs_irreducible,
    chop,
    natural_module,
    restrict,
    self_duality_witness,
    simple_submodules,
    trivial_module,
)
from app.config.settings import settings
from app.models.errors import InvariantViolation
from app.models.schemas import AdequacyReport, PrecheckReport

# Set up logging
logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class KnownClass:
    """A classified conjugacy class used to name assessed groups."""
    label: str
    p: int
    order_gamma_prime: int
    order_gamma: int
    h1_adjoint: int
    h1_trivial: int
    condA: Optional[bool] = None
    condB: Optional[bool] = None
    adequate: Optional[bool] = None
    tidy: Optional[bool] = None
    induced: Optional[bool] = None
    split_induced: Optional[bool] = None


def _nonadequate(p: int, order: int, structure: str, h1a: int, h1t: int) -> KnownClass:
    return KnownClass(f"sp4-nonadequate:p{p}:{order}:{structure}", p, order, order, h1a, h1t, adequate=False)


# Absolutely irreducible subgroups of Sp4(F_p) that are not adequate
SP4_NONADEQUATE_CLASSES = [
    _nonadequate(3, 96, "D4.A4", 0, 1),
    _nonadequate(3, 96, "SL(2,3).C2^2", 1, 0),
    _nonadequate(3, 240, "C2.S5", 1, 0),
    _nonadequate(3, 384, "Q8^2.C6", 0, 1),
    _nonadequate(3, 1440, "C2.A6.C2", 1, 0),
    _nonadequate(3, 1152, "C2^2.A4wrC2", 0, 1),
    _nonadequate(5, 160, "(C4.C2^3):C5", 0, 1),
    _nonadequate(5, 480, "D4.A5", 1, 0),
    _nonadequate(5, 480, "(C2xSL(2,5)):C2", 1, 0),
    _nonadequate(5, 720, "S3xSL(2,5)", 1, 0),
    _nonadequate(5, 28800, "C2^2.A5^2.C2", 1, 0),
]

_T, _F = True, False

# Subgroups of GSp4(F_3) with surjective similitude and abs-irreducible Sp-part:
# (|G'|, |G|, A, B, h1 adjoint, h1 trivial, adequate, tidy, induced, split-induced)
_GSP4_F3_ROWS = [
    (64, 32, _T, _F, 0, 0, _T, _T, _T, _T),
    (64, 32, _T, _F, 0, 0, _T, _T, _T, _T),
    (64, 32, _T, _F, 0, 0, _T, _T, _T, _T),
    (64, 32, _T, _F, 0, 0, _T, _T, _T, _T),
    (80, 40, _T, _T, 0, 0, _T, _T, _T, _F),
    (128, 64, _T, _F, 0, 0, _T, _T, _T, _T),
    (128, 64, _T, _F, 0, 0, _T, _T, _T, _T),
    (128, 64, _T, _F, 0, 0, _T, _F, _T, _T),
    (128, 64, _T, _F, 0, 0, _T, _F, _T, _T),
    (192, 96, _T, _F, 1, 0, _F, _T, _T, _F),
    (192, 96, _T, _F, 0, 1, _F, _T, _T, _T),
    (192, 96, _T, _F, 1, 0, _F, _T, _T, _F),
    (192, 96, _T, _F, 0, 1, _F, _T, _T, _F),
    (192, 96, _T, _F, 0, 0, _T, _T, _T, _T),
    (256, 128, _T, _T, 0, 0, _T, _T, _T, _T),
    (384, 192, _T, _T, 0, 0, _T, _T, _T, _F),
    (480, 240, _T, _T, 1, 0, _F, _T, _T, _F),
    (480, 240, _T, _T, 0, 0, _T, _T, _T, _F),
    (640, 320, _T, _T, 0, 0, _T, _F, _F, _F),
    (768, 384, _T, _T, 0, 0, _T, _T, _T, _T),
    (768, 384, _T, _T, 0, 1, _F, _T, _T, _T),
    (2304, 1152, _T, _T, 0, 1, _F, _T, _T, _T),
    (2880, 1440, _T, _T, 1, 0, _F, _T, _T, _F),
    (3840, 1920, _T, _T, 0, 0, _T, _T, _F, _F),
    (103680, 51840, _T, _T, 0, 0, _T, _T, _F, _F),
]

GSP4_F3_CLASSES = [
    KnownClass(f"gsp4-f3:{row[0]}/{row[1]}:{i}", 3, row[0], row[1], row[4], row[5],
               condA=row[2], condB=row[3], adequate=row[6], tidy=row[7], induced=row[8], split_induced=row[9])
    for i, row in enumerate(_GSP4_F3_ROWS)
]


def match_known_classes(report: AdequacyReport, p: int, ambient: str) -> List[str]:
    """Labels of the classified classes sharing the report's fingerprint."""
    matches = []
    if report.abs_irred and report.adequate is False:
        for row in SP4_NONADEQUATE_CLASSES:
            if (row.p, row.order_gamma, row.h1_adjoint, row.h1_trivial) == (
                    p, report.order_gamma, report.h1_adjoint, report.h1_trivial):
                matches.append(row.label)
    if ambient == "GSp" and report.similitude_surjective:
        observed = (report.order_gamma_prime, report.order_gamma, report.condA, report.condB,
                    report.h1_adjoint, report.h1_trivial, report.adequate, report.tidy,
                    report.induced, report.split_induced)
        for row in GSP4_F3_CLASSES:
            expected = (row.order_gamma_prime, row.order_gamma, row.condA, row.condB, row.h1_adjoint,
                        row.h1_trivial, row.adequate, row.tidy, row.induced, row.split_induced)
            if row.p == p and expected == observed:
                matches.append(row.label)
    return matches


# -- individual checks ------------------------------------------------------------------

def lie_data_for(G: EnumeratedGroup) -> ClassicalLieData:
    """Lie data of the derived ambient: GSp groups are assessed through sp."""
    ambient = G.spec.ambient
    lie_ambient = "Sp" if ambient in ("Sp", "GSp") else ambient
    return ClassicalLieData(G.field, lie_ambient, G.n, G.spec.form)


def tidy_check(Gp: EnumeratedGroup) -> Tuple[bool, Optional[np.ndarray]]:
    """
    Look for g with nu(g) != 1 such that no ratio of distinct eigenvalues equals nu(g).

    Returns:
        (tidy, witness); only class representatives are examined since the
        condition is invariant under conjugation
    """
    if Gp.spec.ambient != "GSp":
        return False, None
    F = Gp.field
    if not F.is_prime:
        logger.warning(f"tidiness of {Gp.label} over F_{F.q} is not evaluated")
        return False, None
    nus = Gp.similitudes
    for i in Gp.classes.reps:
        nu = int(nus[i])
        if nu == 1:
            continue
        g = Gp.elements[i]
        E, roots = roots_in_splitting_field(charpoly_array(F, g))
        distinct = sorted(set(roots))
        if all(E.mul(b, nu) != a for a in distinct for b in distinct if a != b):
            logger.debug(f"{Gp.label}: tidy witness is class representative {i} with nu {nu}")
            return True, g
    return False, None


def induced_checks(Gamma: EnumeratedGroup, abs_irred: Optional[bool] = None,
                   seed: Optional[int] = None) -> Tuple[bool, bool]:
    """
    Induced and split-induced flags from the index-2 subgroups.

    induced: the natural module of some index-2 subgroup is not absolutely irreducible.
    split_induced: for some index-2 subgroup it is not even irreducible over F_p.
    """
    V = natural_module(Gamma)
    if abs_irred is None:
        abs_irred = abs_irreducible(V)
    if not abs_irred:
        return False, False
    induced = split = False
    for H in index2_subgroups(Gamma):
        VH = restrict(V, H)
        if abs_irreducible(VH):
            continue
        induced = True
        factors = chop(VH, seed=seed)
        if len(factors) > 1 or factors[0][1] > 1 or factors[0][0].dim < V.dim:
            split = True
            break
    logger.info(f"{Gamma.label}: induced {induced}, split-induced {split}")
    return induced, split


def g_irreducible(Gamma: EnumeratedGroup, limit: Optional[int] = None) -> Optional[bool]:
    """
    No simple submodule of the natural module is isotropic for the form.

    Without a form this is plain irreducibility. None when the submodule
    enumeration is over its limit.
    """
    F, J = Gamma.field, Gamma.spec.form
    V = natural_module(Gamma)
    simples = simple_submodules(V, limit=limit)
    if simples is None:
        return None
    if J is None:
        return len(simples) == 1 and simples[0].rank == V.dim
    for W in simples:
        restricted = F.matmul(F.matmul(W.basis, J), W.basis.T)
        if not np.any(restricted):
            logger.debug(f"{Gamma.label}: isotropic simple submodule of dimension {W.rank}")
            return False
    return True


@dataclass
class SympIrredCheck:
    abs_irred: bool
    g_irred: Optional[bool]
    centralizer_is_pm1: Optional[bool]

    @property
    def holds(self) -> Optional[bool]:
        if self.g_irred is None or self.centralizer_is_pm1 is None:
            return None
        return self.abs_irred == (self.g_irred and self.centralizer_is_pm1)


def symp_irred_equivalence(Gamma: EnumeratedGroup) -> SympIrredCheck:
    """Absolute irreducibility against form-irreducibility plus a centralizer of {+-1}."""
    F, n = Gamma.field, Gamma.n
    abs_irred = abs_irreducible(natural_module(Gamma))
    gi = g_irreducible(Gamma)
    cent = centralizer_in_ambient(Gamma)
    pm = None
    if cent is not None:
        ident = np.eye(n, dtype=np.int64)
        expected = np.sort(encode_matrices(F, np.stack([ident, F.vneg(ident)])))
        pm = bool(np.array_equal(np.sort(encode_matrices(F, cent)), expected))
    return SympIrredCheck(abs_irred, gi, pm)


# -- assembly -------------------------------------------------------------------------------

def _combine(condA: Optional[bool], h0: int, h1_trivial: int, h1_adjoint: int) -> Optional[bool]:
    if condA is False or h0 or h1_trivial or h1_adjoint:
        return False
    return None if condA is None else True


def assess(Gp: EnumeratedGroup, seed: Optional[int] = None, oracle: bool = True) -> AdequacyReport:
    """
    Full adequacy report for a group G'.

    Args:
        Gp: enumerated group in GSp, Sp, SO, O, GL or SL
        seed: seed for the randomized module algorithms, settings.SEED by default
        oracle: cross-check the spanning conditions by direct quantification for
            groups of order at most settings.ORACLE_MAX_ORDER

    Returns:
        The AdequacyReport; verdicts are taken on Gamma = G' meet Sp for GSp inputs
    """
    seed = settings.SEED if seed is None else seed
    started = time.perf_counter()
    notes: List[str] = []
    F, ambient = Gp.field, Gp.spec.ambient
    Gamma = sp_part(Gp) if ambient == "GSp" else Gp
    lie = lie_data_for(Gp)

    surjective = False
    if ambient == "GSp":
        surjective = len(similitude_image(Gp)) == F.q - 1
        if not surjective:
            notes.append("similitude_not_surjective")

    V = natural_module(Gamma)
    abs_irred = abs_irreducible(V)
    adjoint_dual = lie.adjoint_dual_module(Gamma)
    h0 = h0_dim(adjoint_dual)
    h1_adjoint = h1_dim(adjoint_dual)
    h1_trivial = h1_dim(trivial_module(Gamma))

    span_a = spanning_sum_A(Gamma, lie)
    span_b = spanning_sum_B(Gamma, lie)
    if span_a.lower_bound:
        notes.append("LOWER_BOUND")

    oracle_b = None
    if oracle and Gamma.order <= settings.ORACLE_MAX_ORDER:
        oracle_b = spanning_sum_B_direct(Gamma, lie)
        oracle_a = spanning_sum_A_direct(Gamma, lie) if span_a.verdict is not None else None
        if oracle_b is None:
            notes.append("oracle_skipped")
        elif oracle_b != span_b.verdict:
            raise InvariantViolation("condition (B) span and direct forms disagree",
                                     {"span": span_b.verdict, "direct": oracle_b, "label": Gp.label})
        if oracle_a is not None and oracle_a != span_a.verdict:
            raise InvariantViolation("spanning condition span and direct forms disagree",
                                     {"span": span_a.verdict, "direct": oracle_a, "label": Gp.label})

    tidy, witness = tidy_check(Gp)
    induced, split = induced_checks(Gamma, abs_irred, seed=seed)
    gi = g_irreducible(Gamma) if Gamma.spec.form is not None else None
    duality = self_duality_witness(lie.adjoint_module(Gamma), seed=seed)

    report = AdequacyReport(
        label=Gp.label,
        order_gamma_prime=Gp.order,
        order_gamma=Gamma.order,
        similitude_surjective=surjective,
        abs_irred=abs_irred,
        condA=span_a.verdict,
        condB=span_b.verdict,
        span_dim_A=span_a.dim,
        span_dim_B=span_b.dim,
        lie_dim=lie.dim0,
        h0_adjoint_dual=h0,
        h1_trivial=h1_trivial,
        h1_adjoint=h1_adjoint,
        adequate=_combine(span_a.verdict, h0, h1_trivial, h1_adjoint),
        tidy=tidy,
        tidy_witness=None if witness is None else format_matrix(Mat(F, witness)),
        induced=induced,
        split_induced=split,
        g_irreducible=gi,
        oracle_B=oracle_b,
        self_duality_witness=None if duality is None else duality.tolist(),
        fingerprint=fingerprint(Gp),
        notes=notes,
        seed=seed,
        version=settings.VERSION,
    )
    report.table_rows = match_known_classes(report, F.p, ambient)
    if len(report.table_rows) > 1:
        report.notes.append("fingerprint_shared:" + "|".join(report.table_rows))
    logger.info(f"Assessed {Gp.label or Gp.order}: adequate {report.adequate}, "
                f"abs_irred {abs_irred} in {time.perf_counter() - started:.1f}s")
    return report


def reasonable_precheck(Gp: EnumeratedGroup, report: Optional[AdequacyReport] = None) -> PrecheckReport:
    """
    Finite-group part of the reasonableness condition for Gamma = G' meet Sp.

    Only the data a finite computation can see is reported; the result is a
    precheck, never a verdict on a Galois representation.
    """
    if report is None:
        report = assess(Gp, oracle=False)
    obstructions = []
    if report.condA is not True:
        obstructions.append("condA" if report.condA is False else "condA_indeterminate")
    if report.h0_adjoint_dual:
        obstructions.append("h0_adjoint_dual")
    if report.h1_trivial:
        obstructions.append("h1_trivial")
    passes = None if obstructions == ["condA_indeterminate"] else not obstructions
    return PrecheckReport(condA=report.condA, h0_adjoint_dual=report.h0_adjoint_dual,
                          h1_trivial=report.h1_trivial, passes=passes, obstructions=obstructions)
