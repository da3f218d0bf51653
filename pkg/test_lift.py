#!/usr/bin/env python
"""
Test script for invariant summand lifts and the Lie algebra lift L0.
"""
import logging
import sys

import numpy as np
import pytest

from app.algebra.ff import Poly, field_create
from app.algebra.liealg import ClassicalLieData
from app.algebra.linalg import RingDesc, Summand, charpoly_array
from app.algebra.lift import (
    LiftProblem,
    cayley_transform,
    center_of_l0,
    epsilon_part,
    family_lift,
    hensel_factor,
    invariant_lines_bruteforce,
    invariant_summand_lift,
    is_topnil_vector,
    l0_of,
    lift_check,
    random_gsp4_element,
    similitude_over,
    topnil_part,
)
from app.algebra.matgrp import is_semisimple, standard_form
from app.models.errors import (
    EigenvaluesNotRational,
    InputError,
    NotCommuting,
    NotCoprime,
    ResidueNotSemisimple,
)

# Set up logging
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
    handlers=[logging.StreamHandler(sys.stdout)]
)

F_EXAMPLE = np.array([[1, 1], [3, 2]])


@pytest.fixture
def Z9():
    return RingDesc.zmod(3, 2)


def test_hensel_factor_over_z9(Z9):
    F3 = field_create(3)
    chi = charpoly_array(Z9, F_EXAMPLE)
    p, q, r, s = hensel_factor(Z9, chi, Poly.x_minus(F3, 1), Poly.x_minus(F3, 2))
    assert p.coeffs == (2, 1)  # x - 7
    assert q.coeffs == (4, 1)  # x - 5
    assert p * q == chi
    assert r * p + s * q == Poly(Z9, (1,))


def test_hensel_factor_rejects_bad_splits(Z9):
    F3 = field_create(3)
    chi = charpoly_array(Z9, F_EXAMPLE)
    with pytest.raises(NotCoprime):
        hensel_factor(Z9, chi, Poly.x_minus(F3, 1), Poly.x_minus(F3, 1))
    with pytest.raises(InputError):
        hensel_factor(Z9, chi, Poly.x_minus(F3, 0), Poly.x_minus(F3, 2))


def test_eigenline_lift_over_z9(Z9):
    problem = LiftProblem.for_eigenvalue(Z9, F_EXAMPLE, 1)
    assert problem.residue_target.basis.tolist() == [[1, 0]]
    N = invariant_summand_lift(problem)
    assert N.basis.tolist() == [[1, 6]]
    # the lift is the only stable line over the residual eigenline
    lines = invariant_lines_bruteforce(Z9, F_EXAMPLE, problem.residue_target)
    assert lines == [N]


def test_larger_factor_set_contains_smaller(Z9):
    f = np.array([[1, 3, 0], [0, 2, 3], [3, 0, 0]])
    F3 = field_create(3)
    small = invariant_summand_lift(LiftProblem.for_factors(Z9, f, [Poly.x_minus(F3, 1)]))
    large = invariant_summand_lift(LiftProblem.for_factors(Z9, f, [Poly.x_minus(F3, 1), Poly.x_minus(F3, 2)]))
    assert small.rank == 1
    assert large.rank == 2
    assert large.contains_summand(small)


def test_topologically_nilpotent_part(Z9):
    f = np.diag([2, 3])
    T = topnil_part(Z9, f)
    assert T.basis.tolist() == [[0, 1]]
    assert is_topnil_vector(Z9, f, np.array([0, 1]))
    assert not is_topnil_vector(Z9, f, np.array([1, 0]))
    assert topnil_part(Z9, np.diag([1, 2])).rank == 0
    assert topnil_part(Z9, np.array([[3, 1], [0, 6]])).rank == 2


def test_family_lift_of_commuting_diagonals(Z9):
    f1 = np.diag([1, 2, 2])
    f2 = np.diag([1, 1, 2])
    S = family_lift(Z9, [f1, f2], [(2, 1)])
    assert S.basis.tolist() == [[0, 1, 0]]
    both = family_lift(Z9, [f1, f2], [(1, 1), (2, 2)])
    assert both.basis.tolist() == [[1, 0, 0], [0, 0, 1]]


def test_family_lift_errors(Z9):
    with pytest.raises(NotCommuting):
        family_lift(Z9, [np.array([[1, 1], [0, 1]]), np.array([[1, 0], [1, 1]])], [(1, 1)])
    with pytest.raises(EigenvaluesNotRational):
        family_lift(Z9, [np.array([[0, 1], [8, 0]])], [(1,)])


def test_l0_of_torus_element(Z9):
    g = np.diag([2, 1, 1, 5])
    assert similitude_over(Z9, g) == 1
    lift = l0_of(Z9, g, ambient="Sp")
    assert lift.lie.ambient == "Sp"
    # residually the centralizer is sp2 x sp2
    assert lift.L0.rank == 6
    assert lift.L1.rank == 4
    assert center_of_l0(lift).rank == 0


def test_l0_of_similitude_element(Z9):
    g = np.diag([1, 1, 2, 2])
    lift = l0_of(Z9, g)
    assert lift.lie.ambient == "GSp"
    assert lift.L0.rank + lift.L1.rank == lift.lie.dim


# similitude 73: 1 mod 9 but 19 mod 27, residue the identity
G_NU_ONE_MOD_9 = np.array([[19, 21, 18, 18], [24, 1, 12, 9], [12, 3, 19, 6], [18, 21, 12, 19]])


def test_l0_commutes_with_reduction(Z9):
    Z27 = RingDesc.zmod(3, 3)
    g_bar = Z27.reduce_to(G_NU_ONE_MOD_9, 2)
    assert similitude_over(Z27, G_NU_ONE_MOD_9) == 19
    assert similitude_over(Z9, g_bar) == 1
    top = l0_of(Z27, G_NU_ONE_MOD_9)
    bottom = l0_of(Z9, g_bar)
    assert top.lie.ambient == bottom.lie.ambient == "GSp"
    assert top.L0.rank == bottom.L0.rank == 11
    assert Summand.from_rows(Z9, 11, Z27.reduce_to(top.L0.basis, 2)) == bottom.L0


def test_l0_ambient_must_contain_g():
    Z27 = RingDesc.zmod(3, 3)
    with pytest.raises(InputError):
        l0_of(Z27, G_NU_ONE_MOD_9, ambient="Sp")
    with pytest.raises(InputError):
        l0_of(Z27, G_NU_ONE_MOD_9, ambient="GL")


def test_l0_needs_semisimple_residue(Z9):
    g = np.array([[1, 1, 0, 0], [0, 1, 0, 0], [0, 0, 1, 8], [0, 0, 0, 1]])
    with pytest.raises(ResidueNotSemisimple):
        l0_of(Z9, g)


def test_epsilon_part_of_identity_is_everything():
    D = RingDesc.dual(3)
    lie = ClassicalLieData(D, "GSp", 4)
    assert epsilon_part(lie, np.eye(4, dtype=np.int64)).rank == 11
    with pytest.raises(ValueError):
        epsilon_part(ClassicalLieData(RingDesc.zmod(3, 2), "GSp", 4), np.eye(4, dtype=np.int64))


def test_cayley_transform_is_symplectic(Z9):
    lie = ClassicalLieData(Z9, "Sp", 4)
    Y = lie.to_matrix(np.arange(lie.dim0) % 9)
    g = cayley_transform(Z9, Z9.vmul(Y, np.full_like(Y, 3)))
    J = standard_form(Z9, "Sp", 4)
    assert np.array_equal(Z9.matmul(Z9.matmul(g.T, J), g), J)
    assert np.array_equal(Z9.vresidue(g), np.eye(4, dtype=np.int64))


def test_random_gsp4_element_has_requested_similitude(Z9):
    rng = np.random.default_rng(4)
    g = random_gsp4_element(Z9, rng, similitude=2)
    assert similitude_over(Z9, g) == 2
    assert is_semisimple(field_create(3), Z9.vresidue(g))


def test_lift_check_passes():
    summary = lift_check(seed=5, trials=2)
    assert summary.ok
    assert summary.ring == "Zmod[3,2]"
    for tally in summary.properties.values():
        assert tally.passed + tally.failed + tally.skipped == 2
    assert "centralizer_translation" in summary.properties


@pytest.mark.slow
@pytest.mark.parametrize("p,N", [(3, 2), (5, 2), (3, 3), (5, 3)])
def test_lift_check_at_scale(p, N):
    summary = lift_check(seed=11, trials=100, p=p, N=N)
    failed = {name: t.failed for name, t in summary.properties.items() if t.failed}
    assert failed == {}
    for name in ("uniqueness", "conjugation", "centralizer_translation", "change_of_ring", "bracket_closure"):
        assert summary.properties[name].passed > 0, name


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
