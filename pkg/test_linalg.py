#!/usr/bin/env python
"""
Test script for dense linear algebra over finite fields and chain rings.
"""
import logging
import sys

import numpy as np
import pytest

from app.algebra.ff import field_create
from app.algebra.linalg import (
    Mat,
    RingDesc,
    RowSpaceAccumulator,
    Summand,
    charpoly_array,
    format_matrix,
    inverse_array,
    kernel_array,
    kernel_local,
    minpoly_array,
    parse_matrix,
    rank_array,
    rref_array,
    smith_form_Z,
    smith_form_local,
    solve_array,
    summand_saturate,
)
from app.models.errors import InputError, NotSplit

# Set up logging
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
    handlers=[logging.StreamHandler(sys.stdout)]
)


@pytest.fixture
def F5():
    return field_create(5)


@pytest.fixture
def Z9():
    return RingDesc.zmod(3, 2)


def test_rref_normalizes_pivots(F5):
    M = np.array([[2, 4, 1], [1, 2, 3], [0, 0, 1]])
    red, pivots, split = rref_array(F5, M)
    assert split
    assert pivots == [0, 2]
    assert red.tolist() == [[1, 2, 0], [0, 0, 1]]


def test_kernel_annihilates(F5):
    M = np.array([[1, 2, 3], [0, 1, 4]])
    K = kernel_array(F5, M)
    assert K.shape == (1, 3)
    assert not np.any(F5.matmul(M, K.T))


def test_inverse_and_solve(F5):
    M = np.array([[1, 2], [3, 4]])
    inv = inverse_array(F5, M)
    assert F5.matmul(M, inv).tolist() == [[1, 0], [0, 1]]
    X = solve_array(F5, M, np.array([1, 0]))
    assert F5.matmul(M, X).ravel().tolist() == [1, 0]
    assert solve_array(F5, np.array([[1, 1], [2, 2]]), np.array([1, 0])) is None
    with pytest.raises(ZeroDivisionError):
        inverse_array(F5, np.array([[1, 2], [2, 4]]))


def test_extension_field_rank():
    F9 = field_create(3, 2)
    t = F9.encode_vector([0, 1])
    # rows (1, t) and (t, -1) are proportional since t * t = -1
    M = np.array([[1, t], [t, F9.neg(1)]])
    assert rank_array(F9, M) == 1


def test_inverse_over_truncated_ring(Z9):
    M = np.array([[1, 3], [3, 1]])
    inv = inverse_array(Z9, M)
    assert Z9.matmul(M, inv).tolist() == [[1, 0], [0, 1]]


def test_non_split_system_is_rejected(Z9):
    _, pivots, split = rref_array(Z9, np.array([[3, 0]]))
    assert pivots == []
    assert not split
    with pytest.raises(NotSplit):
        kernel_array(Z9, np.array([[3, 0]]))


def test_summand_saturation(Z9):
    assert summand_saturate(Z9, [[3, 0]]) is None
    S = summand_saturate(Z9, [[1, 3], [2, 6]])
    assert S is not None and S.rank == 1
    assert S.basis.tolist() == [[1, 3]]
    assert S.contains(np.array([4, 3]))
    assert not S.contains(np.array([0, 3]))
    assert S.reduce().basis.tolist() == [[1, 0]]


def test_summand_equality_is_basis_equality(Z9):
    a = Summand.from_rows(Z9, 2, [[2, 6]])
    b = Summand.from_rows(Z9, 2, [[1, 3]])
    assert a == b
    assert hash(a) == hash(b)
    assert (a + Summand.from_rows(Z9, 2, [[0, 1]])) == Summand.full(Z9, 2)


def test_kernel_local_keeps_largest_summand(Z9):
    S = kernel_local(Z9, np.array([[3, 0]]))
    assert S.basis.tolist() == [[0, 1]]


def test_dual_numbers_arithmetic():
    D = RingDesc.dual(3)
    eps = 3  # 0 + 1*e
    assert D.mul(eps, eps) == 0
    unit = 1 + 2 * 3  # 1 + 2e
    assert D.mul(unit, D.inv(unit)) == 1
    assert D.valuation(eps) == 1
    with pytest.raises(ZeroDivisionError):
        D.inv(eps)


def test_charpoly_over_truncated_ring(Z9):
    f = charpoly_array(Z9, np.array([[1, 1], [3, 2]]))
    # x^2 - 3x - 1 = (x - 7)(x - 5) mod 9
    assert f.coeffs == (8, 6, 1)


def test_minpoly_of_diagonal_matrix():
    F3 = field_create(3)
    m = minpoly_array(F3, np.diag([1, 1, 2]))
    assert m.coeffs == (2, 0, 1)


def test_row_space_accumulator(F5):
    acc = RowSpaceAccumulator(F5, 3)
    assert acc.add_rows(np.array([[1, 0, 0], [2, 0, 0]])) == 1
    assert acc.add_rows(np.array([[0, 1, 0]])) == 2
    assert acc.add_rows(np.array([[1, 1, 0]])) == 2
    assert acc.add_rows(np.array([[0, 0, 3]])) == 3
    assert acc.full


def test_smith_form_over_integers():
    M = [[2, 4, 4], [-6, 6, 12], [10, -4, -16]]
    diag, U, V = smith_form_Z(M)
    assert diag == [2, 6, 12]
    D = np.array(U) @ np.array(M) @ np.array(V)
    assert np.array_equal(D, np.diag([2, 6, 12]))


def test_smith_form_of_rank_deficient_matrix():
    diag, _, _ = smith_form_Z([[1, 2], [2, 4]])
    assert diag == [1]


def test_smith_form_over_truncated_ring(Z9):
    M = np.array([[3, 1], [6, 3]])
    diag, U, D, V = smith_form_local(Z9, M)
    assert np.array_equal(Z9.matmul(Z9.matmul(U, M), V), D)
    assert D[0, 1] == 0 and D[1, 0] == 0
    assert [Z9.valuation(d) for d in diag] == [0, 1]


def test_matrix_text_encoding():
    M = parse_matrix("Zmod[3,2]:1,1;3,2")
    assert M.data.tolist() == [[1, 1], [3, 2]]
    assert format_matrix(M) == "Zmod[3,2]:1,1;3,2"
    D = parse_matrix("Dual[3]:(1,0),(0,2);0,2")
    assert D.data.tolist() == [[1, 6], [0, 2]]
    assert format_matrix(D) == "Dual[3]:(1,0),(0,2);(0,0),(2,0)"
    assert (M @ Mat.identity(M.ring, 2)) == M


@pytest.mark.parametrize("text", ["1,2;3,4", "Zmod[3,2]:1,2;3", "Zmod[3,2]:1,x;3,4"])
def test_matrix_text_errors(text):
    with pytest.raises(InputError):
        parse_matrix(text)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
