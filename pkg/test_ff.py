#!/usr/bin/env python
"""
Test script for finite fields and polynomial factorization.
"""
import logging
import sys

import pytest

from app.algebra.ff import (
    Poly,
    element_order,
    field_create,
    field_element_decode,
    field_element_encode,
    frobenius,
    is_irreducible,
    poly_factor,
    poly_gcd,
    primitive_element,
    roots_in_splitting_field,
)

# Set up logging
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
    handlers=[logging.StreamHandler(sys.stdout)]
)


def test_modulus_is_least_irreducible():
    F9 = field_create(3, 2)
    assert F9.modulus == (1, 0, 1)  # t^2 + 1
    assert F9.q == 9
    assert str(F9) == "F_3^2"
    # x^2 + 1 splits over F_5, so the least monic irreducible is x^2 + 2
    assert field_create(5, 2).modulus == (2, 0, 1)


@pytest.mark.parametrize("p", [2, 4, 9])
def test_rejects_unsupported_characteristic(p):
    with pytest.raises(ValueError):
        field_create(p)


@pytest.mark.parametrize("p,k", [(3, 1), (3, 2), (5, 2), (7, 1)])
def test_inverses_and_distributivity(p, k):
    F = field_create(p, k)
    for a in range(1, F.q):
        assert F.mul(a, F.inv(a)) == 1
    a, b, c = 1 % F.q, F.q - 1, F.q // 2
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.add(b, F.neg(b)) == 0


def test_zero_has_no_inverse():
    with pytest.raises(ZeroDivisionError):
        field_create(3, 2).inv(0)


def test_primitive_element_generates_units():
    for p, k in [(3, 1), (5, 1), (3, 2), (5, 2)]:
        F = field_create(p, k)
        w = primitive_element(F)
        assert element_order(F, w) == F.q - 1
        powers = {F.pow(w, e) for e in range(F.q - 1)}
        assert powers == set(range(1, F.q))


def test_frobenius_is_multiplicative_and_fixes_prime_field():
    F = field_create(3, 2)
    for a in range(F.q):
        for b in range(F.q):
            assert frobenius(F, F.mul(a, b)) == F.mul(frobenius(F, a), frobenius(F, b))
    assert [frobenius(F, a) for a in range(3)] == [0, 1, 2]


def test_element_text_encoding():
    F = field_create(3, 2)
    t = F.encode_vector([0, 1])
    assert field_element_encode(F, t) == "0,1"
    assert field_element_decode(F, "0,1") == t
    assert field_element_decode(F, "(2,1)") == F.encode_vector([2, 1])
    # bare integers are constants
    assert field_element_decode(F, 2) == 2
    assert field_element_decode(field_create(7), 9) == 2


def test_factorization_over_prime_fields():
    F3, F5 = field_create(3), field_create(5)
    x2_plus_1 = (1, 0, 1)
    assert is_irreducible(Poly(F3, x2_plus_1))
    assert not is_irreducible(Poly(F5, x2_plus_1))
    factors = poly_factor(Poly(F5, x2_plus_1))
    assert [(g.coeffs, m) for g, m in factors] == [((2, 1), 1), ((3, 1), 1)]
    # (x - 1)^2 (x + 1) over F_3
    f = Poly.x_minus(F3, 1) * Poly.x_minus(F3, 1) * Poly.x_minus(F3, 2)
    assert [(g.coeffs, m) for g, m in poly_factor(f)] == [((1, 1), 1), ((2, 1), 2)]


def test_gcd_and_division():
    F = field_create(7)
    a = Poly.x_minus(F, 2) * Poly.x_minus(F, 3)
    b = Poly.x_minus(F, 3) * Poly.x_minus(F, 5)
    assert poly_gcd(a, b) == Poly.x_minus(F, 3)
    q, r = a.divmod(Poly.x_minus(F, 2))
    assert q == Poly.x_minus(F, 3)
    assert r.is_zero
    with pytest.raises(ZeroDivisionError):
        a.divmod(Poly(F, ()))


def test_roots_in_splitting_field():
    F3 = field_create(3)
    E, roots = roots_in_splitting_field(Poly(F3, (1, 0, 1)))
    assert E.q == 9
    assert len(roots) == 2
    lifted = Poly(E, (1, 0, 1))
    assert all(lifted.evaluate(r) == 0 for r in roots)
    # roots of an irreducible quadratic are Frobenius conjugates
    assert frobenius(E, roots[0]) == roots[1]


def test_roots_with_multiplicity_stay_in_prime_field():
    F5 = field_create(5)
    f = Poly.x_minus(F5, 4) * Poly.x_minus(F5, 4) * Poly.x_minus(F5, 1)
    E, roots = roots_in_splitting_field(f)
    assert E.q == 5
    assert roots == [1, 4, 4]


def test_mixed_degree_splitting_field():
    # (x^2 + 1)(x^3 - x - 1) over F_3 splits over F_{3^6}
    F3 = field_create(3)
    f = Poly(F3, (1, 0, 1)) * Poly(F3, (2, 2, 0, 1))
    E, roots = roots_in_splitting_field(f)
    assert E.k == 6
    assert len(roots) == 5
    assert all(Poly(E, f.coeffs).evaluate(r) == 0 for r in roots)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
