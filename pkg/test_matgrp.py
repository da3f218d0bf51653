#!/usr/bin/env python
"""
Test script for matrix group enumeration, subgroups and the subgroup search.
"""
import logging
import re
import sys

import numpy as np
import pytest

from app.algebra.ff import field_create
from app.algebra.liealg import ClassicalLieData
from app.algebra.linalg import inverse_array
from app.algebra.matgrp import (
    GroupSpec,
    builtin_spec,
    center,
    centralizer_in_ambient,
    conjugacy_classes,
    decode_codes,
    derived_subgroup,
    encode_matrices,
    enumerate_group,
    fingerprint,
    hom_dim,
    hom_to_Fp_dim,
    index2_subgroups,
    is_regular_semisimple,
    is_semisimple,
    normalizer,
    random_subgroup_search,
    sample_ambient_elements,
    similitude_image,
    sp_part,
    standard_form,
    subgroup_conjugacy_test,
    symplectic_adapted_basis,
)
from app.models.errors import CapExceeded, InputError, InvalidGenerator
from app.services.fixture_service import diagonal_torus

# Set up logging
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
    handlers=[logging.StreamHandler(sys.stdout)]
)


@pytest.fixture(scope="module")
def sl2_f3():
    return enumerate_group(builtin_spec("SL2", 3))


@pytest.fixture(scope="module")
def gl2_f3():
    return enumerate_group(builtin_spec("GL2", 3))


@pytest.mark.parametrize("name,p,k,order", [
    ("SL2", 3, 1, 24),
    ("SL2", 5, 1, 120),
    ("GL2", 3, 1, 48),
    ("SL2", 3, 2, 720),
])
def test_small_group_orders(name, p, k, order):
    assert enumerate_group(builtin_spec(name, p, k)).order == order


@pytest.mark.slow
@pytest.mark.parametrize("name,order", [("Sp4", 51840), ("GSp4", 103680)])
def test_sp4_orders_over_f3(name, order):
    assert enumerate_group(builtin_spec(name, 3)).order == order


def test_cap_exceeded_reports_partial_count():
    with pytest.raises(CapExceeded) as info:
        enumerate_group(builtin_spec("SL2", 5), cap=50)
    assert info.value.details["cap"] == 50
    assert info.value.details["partial_count"] > 50


def test_elements_are_sorted_by_code(sl2_f3):
    assert np.all(np.diff(sl2_f3.codes) > 0)
    F = sl2_f3.field
    assert np.array_equal(decode_codes(F, 2, sl2_f3.codes), sl2_f3.elements)
    assert np.array_equal(encode_matrices(F, sl2_f3.elements), sl2_f3.codes)


def test_element_orders(sl2_f3):
    orders = sl2_f3.element_orders(np.arange(sl2_f3.order))
    values, counts = np.unique(orders, return_counts=True)
    assert dict(zip(values.tolist(), counts.tolist())) == {1: 1, 2: 1, 3: 8, 4: 6, 6: 8}


def test_conjugacy_classes(sl2_f3, gl2_f3):
    assert sl2_f3.classes.count == 7
    assert int(sl2_f3.classes.sizes.sum()) == 24
    assert gl2_f3.classes.count == 8


def test_derived_subgroup_and_center(sl2_f3, gl2_f3):
    assert derived_subgroup(gl2_f3).order == 24
    assert derived_subgroup(sl2_f3).order == 8
    assert center(sl2_f3).order == 2


def test_homomorphism_dimensions(sl2_f3, gl2_f3):
    assert hom_dim(sl2_f3, 3) == 1
    assert hom_dim(sl2_f3, 2) == 0
    assert hom_to_Fp_dim(sl2_f3) == 1
    assert hom_dim(gl2_f3, 2) == 1


def test_index2_subgroups(gl2_f3, sl2_f3):
    subs = index2_subgroups(gl2_f3)
    assert [H.order for H in subs] == [24]
    assert np.array_equal(subs[0].codes, sl2_f3.codes)
    assert index2_subgroups(sl2_f3) == []


def test_fingerprint(sl2_f3):
    fp = fingerprint(sl2_f3)
    assert fp == {
        "order": 24,
        "classes": 7,
        "abelianization_order": 3,
        "abelianization_ranks": {"3": 1},
        "center_order": 2,
    }


def test_sp_part_of_similitude_torus():
    G = enumerate_group(diagonal_torus(3))
    assert G.order == 8
    assert similitude_image(G) == [1, 2]
    Gamma = sp_part(G)
    assert Gamma.order == 4
    assert Gamma.spec.ambient == "Sp"


def test_subgroup_conjugacy(sl2_f3):
    spec = sl2_f3.spec
    upper = enumerate_group(spec.with_generators([np.array([[1, 1], [0, 1]])], label="U"))
    lower = enumerate_group(spec.with_generators([np.array([[1, 0], [1, 1]])], label="L"))
    g = subgroup_conjugacy_test(upper, lower, sl2_f3)
    assert g is not None
    F = sl2_f3.field
    g_inv = inverse_array(F, g)
    image = F.matmul(F.matmul(g, np.array([[1, 1], [0, 1]])), g_inv)
    assert lower.member_mask(image[None]).all()
    center_spec = spec.with_generators([np.array([[2, 0], [0, 2]])], label="Z")
    assert subgroup_conjugacy_test(upper, enumerate_group(center_spec), sl2_f3) is None


def test_centralizer_of_irreducible_group_is_scalar(sl2_f3):
    gl_spec = GroupSpec.create(sl2_f3.field, 2, "GL", sl2_f3.spec.generators, label="SL2 in GL2")
    C = centralizer_in_ambient(enumerate_group(gl_spec))
    assert sorted(int(c[0, 0]) for c in C) == [1, 2]
    assert all(c[0, 1] == 0 and c[1, 0] == 0 and c[0, 0] == c[1, 1] for c in C)


def test_semisimplicity():
    F = field_create(3)
    assert is_semisimple(F, np.diag([1, 2]))
    assert not is_semisimple(F, np.array([[1, 1], [0, 1]]))


def test_regular_semisimplicity():
    F = field_create(7)
    lie = ClassicalLieData(F, "Sp", 4)
    assert is_regular_semisimple(F, np.diag([2, 3, 5, 4]), lie)
    assert not is_regular_semisimple(F, np.eye(4, dtype=np.int64), lie)


def test_normalizer_of_unipotent_subgroup(sl2_f3):
    U = enumerate_group(sl2_f3.spec.with_generators([np.array([[1, 1], [0, 1]])], label="U"))
    assert normalizer(sl2_f3, U).order == 6
    assert normalizer(sl2_f3, derived_subgroup(sl2_f3)).order == 24


def test_class_partition_is_recomputable(sl2_f3):
    classes = conjugacy_classes(sl2_f3)
    assert np.array_equal(classes.sizes, sl2_f3.classes.sizes)
    assert sorted(classes.sizes.tolist()) == [1, 1, 4, 4, 4, 4, 6]


def test_product_replacement_stays_in_group():
    spec = builtin_spec("SL2", 5)
    G = enumerate_group(spec)
    first = sample_ambient_elements(spec, np.random.default_rng(2), 20)
    second = sample_ambient_elements(spec, np.random.default_rng(2), 20)
    assert np.array_equal(first, second)
    assert G.member_mask(first).all()


def test_symplectic_adapted_basis():
    F = field_create(3)
    gram = np.array([[0, 0, 2, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 2, 0, 0]])
    P = symplectic_adapted_basis(F, gram)
    J = standard_form(F, "Sp", 4)
    assert np.array_equal(F.matmul(F.matmul(P.T, gram), P), J)


def test_generator_validation():
    F = field_create(3)
    with pytest.raises(InvalidGenerator) as info:
        GroupSpec.create(F, 4, "Sp", [np.diag([1, 1, 2, 2])])
    assert info.value.details["constraint"] == "g^T J g = J"
    with pytest.raises(InvalidGenerator):
        GroupSpec.create(F, 2, "GL", [np.array([[1, 2], [2, 1]])])
    with pytest.raises(InvalidGenerator):
        GroupSpec.create(F, 2, "SL", [np.diag([2, 1])])
    with pytest.raises(InvalidGenerator):
        GroupSpec.create(F, 4, "Sp", [np.eye(4)], form=np.eye(4))
    with pytest.raises(InputError):
        GroupSpec.create(F, 2, "PGL", [np.eye(2)])


def test_similitude_of_gsp_generator():
    spec = builtin_spec("GSp4", 3)
    nus = [spec.similitude(g) for g in spec.generators]
    assert nus == [1, 1, 1, 1, 2]


def test_search_is_deterministic(sl2_f3):
    first = random_subgroup_search(sl2_f3, seed=7, num_gens=1, samples=20)
    second = random_subgroup_search(sl2_f3, seed=7, num_gens=1, samples=20)
    assert [H.order for H in first] == [H.order for H in second]
    assert all(np.array_equal(a.codes, b.codes) for a, b in zip(first, second))
    assert all(re.fullmatch(r"SL2\(F_3\):s7:\d+", H.label) for H in first)
    # cyclic subgroups of SL2(F_3) up to conjugacy have distinct orders
    orders = [H.order for H in first]
    assert len(orders) == len(set(orders))
    assert set(orders) <= {1, 2, 3, 4, 6}


def test_search_notes_cap_exceeded_samples():
    notes = []
    found = random_subgroup_search(builtin_spec("Sp4", 5), seed=1, num_gens=2, samples=3, cap=500, notes=notes)
    assert len(found) + len(notes) <= 3
    assert all(re.fullmatch(r"sample \d: CAP_EXCEEDED", n) for n in notes)
    assert all(H.order <= 500 for H in found)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
