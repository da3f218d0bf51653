#!/usr/bin/env python
"""
Test script for classical Lie algebras, spanning conditions, root data and
Taylor-Wiles places.
"""
import logging
import sys

import numpy as np
import pytest

from app.algebra.ff import field_create
from app.algebra.liealg import (
    BUILTIN_ROOT_DATA,
    ClassicalLieData,
    gsp4_torus_element,
    is_ad_regular,
    is_tw_place_residue,
    levi_dimension,
    lieZ_of_centralizer,
    nilpotent_rank,
    parse_root_datum,
    pretty_good_primes,
    reflections_permute_roots,
    spanning_sum_A,
    spanning_sum_B,
    tw_delta,
    weyl_group_order,
    z_centralizer_gl,
)
from app.algebra.matgrp import enumerate_group, sp_part
from app.models.errors import InputError, NotSemisimple, ResidueConditionViolated
from app.services.fixture_service import diagonal_torus

# Set up logging
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
    handlers=[logging.StreamHandler(sys.stdout)]
)


@pytest.fixture(scope="module")
def sp4_f7():
    return ClassicalLieData(field_create(7), "Sp", 4)


@pytest.mark.parametrize("ambient,n,p,dim,dim0", [
    ("Sp", 4, 3, 10, 10),
    ("GSp", 4, 3, 11, 10),
    ("GL", 2, 3, 4, 3),
    ("SL", 2, 5, 3, 3),
    ("O", 3, 5, 3, 3),
])
def test_dimensions(ambient, n, p, dim, dim0):
    lie = ClassicalLieData(field_create(p), ambient, n)
    assert lie.dim == dim
    assert lie.dim0 == dim0


def test_gl_needs_p_prime_to_n():
    with pytest.raises(InputError):
        ClassicalLieData(field_create(3), "GL", 3)


def test_basis_preserves_form(sp4_f7):
    F, J = sp4_f7.ring, sp4_f7.J
    for A in sp4_f7.basis_matrices():
        assert not np.any(F.vadd(F.matmul(A.T, J), F.matmul(J, A)))


def test_projection_lands_in_g0(sp4_f7):
    F = sp4_f7.ring
    rng = np.random.default_rng(0)
    A = rng.integers(7, size=(4, 4))
    P = sp4_f7.project(A)
    assert sp4_f7.contains(P)
    assert np.array_equal(sp4_f7.project(P), P)
    # the GL projection removes the trace
    gl = ClassicalLieData(F, "GL", 2)
    assert np.trace(gl.project(np.array([[1, 2], [3, 4]]))) % 7 == 0


def test_adjoint_is_multiplicative(sp4_f7):
    F = sp4_f7.ring
    g = gsp4_torus_element(F, 2, 3, 1)
    h = np.array([[1, 1, 0, 0], [0, 1, 0, 0], [0, 0, 1, 6], [0, 0, 0, 1]])
    lhs = sp4_f7.adjoint(F.matmul(g, h))
    rhs = F.matmul(sp4_f7.adjoint(g), sp4_f7.adjoint(h))
    assert np.array_equal(lhs, rhs)


def test_bracket_is_antisymmetric(sp4_f7):
    F = sp4_f7.ring
    x = np.arange(10) % 7
    y = (3 * np.arange(10) + 1) % 7
    assert np.array_equal(sp4_f7.bracket(x, y), F.vneg(sp4_f7.bracket(y, x)))


def test_lie_center_of_regular_torus_element(sp4_f7):
    F = sp4_f7.ring
    g = np.diag([2, 3, 5, 4])
    assert sp4_f7.fixed_dim(g) == sp4_f7.rank
    assert lieZ_of_centralizer(g, sp4_f7).dim == 2
    minus_one = np.diag([F.neg(1)] * 4)
    assert lieZ_of_centralizer(minus_one, sp4_f7).dim == 0
    with pytest.raises(NotSemisimple):
        lieZ_of_centralizer(np.array([[1, 1, 0, 0], [0, 1, 0, 0], [0, 0, 1, 6], [0, 0, 0, 1]]), sp4_f7)


def test_center_of_centralizer_in_gl():
    F = field_create(7)
    assert z_centralizer_gl(F, np.diag([2, 3, 5, 4])).rank == 4
    assert z_centralizer_gl(F, np.diag([1, 1, 6, 6])).rank == 2
    with pytest.raises(NotSemisimple):
        z_centralizer_gl(F, np.array([[1, 1], [0, 1]]))


def test_spanning_fails_for_torus():
    Gamma = sp_part(enumerate_group(diagonal_torus(3)))
    lie = ClassicalLieData(Gamma.field, "Sp", 4)
    A = spanning_sum_A(Gamma, lie)
    assert A.verdict is False
    assert A.dim < lie.dim0
    B = spanning_sum_B(Gamma, lie)
    assert B.verdict is False
    assert B.contributors == 0


def test_nilpotent_rank_equals_rank(sp4_f7):
    r, witness = nilpotent_rank(sp4_f7, seed=11)
    assert r == sp4_f7.rank
    assert is_ad_regular(witness, sp4_f7)
    assert not is_ad_regular(np.zeros(sp4_f7.dim0, dtype=np.int64), sp4_f7)


@pytest.mark.parametrize("name,bad,weyl", [
    ("C2", [2], 8),
    ("B2", [2], 8),
    ("GL2", [], 2),
    ("A1", [2], 2),
    ("A1xA1", [2], 4),
])
def test_builtin_root_data(name, bad, weyl):
    datum = BUILTIN_ROOT_DATA[name]
    datum.validate()
    assert pretty_good_primes(datum, 50) == bad
    assert weyl_group_order(datum) == weyl
    assert reflections_permute_roots(datum)


def test_parse_root_datum():
    text = "# GL2\n2\n1,-1 ; 1,-1\n-1 1 ; -1 1\n"
    datum = parse_root_datum(text, name="gl2")
    assert datum.rank == 2
    assert datum.roots == ((1, -1), (-1, 1))
    assert pretty_good_primes(datum, 50) == []


@pytest.mark.parametrize("text", [
    "",
    "two\n1;1\n",
    "1\n2 1\n",
    "1\n1 ; 1\n-1 ; -1\n",
    "1\n2 ; 1\n",
    "1\n2 ; x\n",
])
def test_parse_root_datum_errors(text):
    with pytest.raises(InputError):
        parse_root_datum(text)


@pytest.mark.parametrize("coords,n_v,levi", [
    ((1, 2, 3), 2, 3),
    ((1, 1, 1), 0, 11),
    ((2, 2, 1), 1, 5),
])
def test_tw_delta(coords, n_v, levi):
    F = field_create(5)
    delta = tw_delta(F, coords, q_v=11)
    assert delta.n_v == n_v
    assert delta.levi_dim == levi
    assert delta.p_exponent == 1
    assert delta.order == 5 ** n_v
    lie = ClassicalLieData(F, "GSp", 4)
    assert levi_dimension(lie, gsp4_torus_element(F, *coords)) == levi


def test_tw_place_residue():
    F = field_create(5)
    assert is_tw_place_residue(F, np.diag([1, 2, 3, 4]), 11)
    assert not is_tw_place_residue(F, np.diag([1, 2, 3, 4]), 7)
    assert not is_tw_place_residue(F, np.array([[1, 1], [0, 1]]), 11)


def test_tw_delta_needs_q_congruent_to_one():
    with pytest.raises(ResidueConditionViolated):
        tw_delta(field_create(5), (1, 2, 3), q_v=7)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
