#!/usr/bin/env python
"""
Test script for height counting with unit conditions.
"""
import logging
import math
import sys

import pytest
from pydantic import ValidationError

from app.algebra.heights import (
    NumberFieldInvariants,
    brute_count_Q,
    count_ratio_table,
    local_factor,
    rational_invariants,
    schanuel_constant,
)
from app.models.errors import InputError

# Set up logging
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
    handlers=[logging.StreamHandler(sys.stdout)]
)


@pytest.mark.parametrize("primes,expected", [
    ([], 12 / math.pi ** 2),
    ([2], 4 / math.pi ** 2),
    ([2, 3], 2 / math.pi ** 2),
])
def test_rational_constants(primes, expected):
    assert schanuel_constant(rational_invariants(), primes) == pytest.approx(expected, rel=1e-12)


def test_local_factor():
    assert local_factor(2) == pytest.approx(1 / 3)
    assert local_factor(5) == pytest.approx(16 / 24)


def test_constant_rejects_bad_norms():
    with pytest.raises(InputError):
        schanuel_constant(rational_invariants(), [1])


def test_invariants_are_validated():
    with pytest.raises(ValidationError):
        NumberFieldInvariants(degree=2, r1=1, r2=0, class_number=1, regulator=1.0,
                              roots_of_unity=2, discriminant=5, zeta_at_2=1.6)
    with pytest.raises(ValidationError):
        NumberFieldInvariants(degree=1, r1=1, r2=0, class_number=1, regulator=1.0,
                              roots_of_unity=3, discriminant=1, zeta_at_2=1.6)


def test_small_counts():
    # -1, 0, 1 over denominator 1
    assert brute_count_Q([], 1) == 3
    # 2 excludes 0 and +-2
    assert brute_count_Q([2], 2) == 2
    # 0/1, +-1/1, +-1/2, +-2/1
    assert brute_count_Q([], 2) == 7


def test_count_input_errors():
    with pytest.raises(InputError):
        brute_count_Q([4], 10)
    with pytest.raises(InputError):
        brute_count_Q([], 0)


def test_threaded_count_matches_serial():
    assert brute_count_Q([3], 700, threads=4) == brute_count_Q([3], 700, threads=1)


@pytest.mark.parametrize("primes", [[], [2], [2, 3]])
def test_ratio_approaches_one(primes):
    rows = count_ratio_table(primes, [200, 2000])
    assert [r["X"] for r in rows] == [200, 2000]
    assert abs(rows[-1]["ratio"] - 1) < 0.03


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
