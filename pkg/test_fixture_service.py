#!/usr/bin/env python
"""
Test script for the fixture library and group definition files.
"""
import json
import logging
import sys
from pathlib import Path

import numpy as np
import pytest

from app.algebra.matgrp import enumerate_group, sp_part
from app.models.errors import InputError, InvalidGenerator
from app.services.fixture_service import (
    EXPERIMENTAL,
    FIXTURES,
    fixture_spec,
    group_file_from_spec,
    load_group_file,
    load_specs,
    spec_from_group_file,
    write_group_file,
)
from app.services.pipeline_service import resolve_inputs

# Set up logging
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
    handlers=[logging.StreamHandler(sys.stdout)]
)

FIXTURE_DIR = Path(__file__).parent / "fixtures"
SMALL_FIXTURE_FILES = [
    "block_sp2xsp2.json",
    "cyclic4_gl2_f3.json",
    "diag_torus.json",
    "isotropic_stabilizer.json",
    "sl2_f11.json",
    "sl2_f9_gl.json",
    "imprimitive_1152.json",
]


@pytest.mark.parametrize("path", sorted(FIXTURE_DIR.glob("*.json")), ids=lambda p: p.stem)
def test_every_fixture_file_validates(path):
    specs = load_specs(path)
    assert len(specs) == 1
    spec = specs[0]
    assert spec.label
    assert all(g.shape == (spec.n, spec.n) for g in spec.generators)


@pytest.mark.parametrize("name", SMALL_FIXTURE_FILES)
def test_fixture_file_orders(name):
    entry = load_group_file(FIXTURE_DIR / name)[0]
    G = enumerate_group(spec_from_group_file(entry))
    Gamma = sp_part(G) if G.spec.ambient == "GSp" else G
    assert Gamma.order == entry.expected["order_gamma"]
    if "order_gamma_prime" in entry.expected:
        assert G.order == entry.expected["order_gamma_prime"]


def test_fixture_files_match_builtin_constructions():
    for name in ("diag_torus", "block_sp2xsp2", "imprimitive_1152"):
        from_file = enumerate_group(load_specs(FIXTURE_DIR / f"{name}.json")[0])
        built = enumerate_group(fixture_spec(name))
        assert np.array_equal(from_file.codes, built.codes)


def test_semilinear_fixture_is_experimental():
    assert "sigmal2_f9" in EXPERIMENTAL
    assert enumerate_group(fixture_spec("sigmal2_f9")).order == 1440


def test_unknown_fixture():
    with pytest.raises(InputError) as info:
        fixture_spec("sp6_f3")
    assert info.value.details["allowed"] == sorted(FIXTURES)


def test_extension_field_entries_survive_writing(tmp_path):
    spec = load_specs(FIXTURE_DIR / "sl2_f9_gl.json")[0]
    entry = group_file_from_spec(spec, expected={"order_gamma": 720})
    assert isinstance(entry.generators[2][0][0], str)
    path = tmp_path / "sl2_f9.json"
    write_group_file(path, [entry])
    again = load_specs(path)[0]
    assert all(np.array_equal(a, b) for a, b in zip(again.generators, spec.generators))
    assert load_group_file(path)[0].expected == {"order_gamma": 720}


def test_malformed_json_reports_position(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{"label": "x",\n "field": }\n')
    with pytest.raises(InputError) as info:
        load_group_file(path)
    assert info.value.details["line"] == 2
    assert info.value.details["file"] == str(path)


def test_schema_violation_reports_location(tmp_path):
    path = tmp_path / "ragged.json"
    path.write_text(json.dumps({"field": {"p": 3}, "ambient": "GL", "n": 2, "generators": [[[1, 0]]]}))
    with pytest.raises(InputError) as info:
        load_group_file(path)
    assert "generators" in info.value.details["location"]


def test_missing_file():
    with pytest.raises(InputError):
        load_group_file("/nonexistent/group.json")


def test_invalid_generator_names_file_and_entry(tmp_path):
    path = tmp_path / "singular.json"
    path.write_text(json.dumps([
        {"label": "ok", "field": {"p": 3}, "ambient": "GL", "n": 2, "generators": [[[1, 1], [0, 1]]]},
        {"label": "bad", "field": {"p": 3}, "ambient": "GL", "n": 2, "generators": [[[1, 2], [2, 1]]]},
    ]))
    with pytest.raises(InvalidGenerator) as info:
        load_specs(path)
    assert info.value.details["file"] == str(path)
    assert info.value.details["entry"] == 1


def test_resolve_inputs_keeps_order():
    specs = resolve_inputs(["fixture:cyclic4_gl2_f3", str(FIXTURE_DIR / "sl2_f11.json")])
    assert [s.label for s in specs] == ["C4<GL2(F_3)", "SL2(F_11)<GL2"]


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
