#!/usr/bin/env python
"""
Test script for the command-line interface.
"""
import json
import logging
import sys

import pytest

from app.main import EXIT_CAP, EXIT_INPUT, EXIT_OK, main

# Set up logging
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
    handlers=[logging.StreamHandler(sys.stdout)]
)

CSV_HEADER = ("order_gamma_prime,order_gamma,condA,condB,h1_adjoint,h1_trivial,"
              "adequate,tidy,induced,split_induced,abs_irred,notes")


def _run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_settings_load_without_deprecation_warnings():
    import importlib
    import warnings

    import app.config.settings as settings_module

    with warnings.catch_warnings():
        warnings.simplefilter("error", DeprecationWarning)
        importlib.reload(settings_module)
    assert settings_module.Settings.model_config["env_file"] == ".env"
    assert settings_module.settings.MAX_ORDER > 0


def test_rootdata_builtin(capsys):
    code, out = _run(capsys, "rootdata", "--builtin", "C2")
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["bad_primes"] == [2]
    assert payload["weyl_order"] == 8
    assert payload["roots"] == 8


def test_rootdata_from_file(capsys, tmp_path):
    path = tmp_path / "gl2.txt"
    path.write_text("# GL2\n2\n1,-1 ; 1,-1\n-1,1 ; -1,1\n")
    code, out = _run(capsys, "rootdata", "--file", str(path))
    assert code == EXIT_OK
    assert json.loads(out)["bad_primes"] == []


def test_rootdata_unknown(capsys):
    code, _ = _run(capsys, "rootdata", "--builtin", "E8")
    assert code == EXIT_INPUT


def test_heights_csv(capsys):
    code, out = _run(capsys, "heights", "--primes", "2", "--X", "10,100")
    assert code == EXIT_OK
    lines = out.splitlines()
    assert lines[0].startswith("# Sigma=2 C=0.405284735")
    assert lines[1] == "X,count,constant_times_X2,ratio"
    assert [line.split(",")[0] for line in lines[2:]] == ["10", "100"]


def test_lift_demo_eigenvalue(capsys):
    code, out = _run(capsys, "lift-demo", "--matrix", "Zmod[3,2]:1,1;3,2", "--eigenvalue", "1")
    assert code == EXIT_OK
    assert json.loads(out) == {"kind": "eigenvalue 1", "rank": "1", "basis": "Zmod[3,2]:1,6"}


def test_lift_demo_topnil(capsys):
    code, out = _run(capsys, "lift-demo", "--matrix", "Zmod[3,2]:2,0;0,3")
    assert code == EXIT_OK
    assert json.loads(out)["basis"] == "Zmod[3,2]:0,1"


def test_lift_demo_ring_and_split_flags(capsys):
    code, out = _run(capsys, "lift-demo", "--ring", "Zmod[3,2]", "--matrix", "1,1;3,2", "--split", "eigen=1")
    assert code == EXIT_OK
    assert json.loads(out) == {"kind": "eigenvalue 1", "rank": "1", "basis": "Zmod[3,2]:1,6"}
    code, out = _run(capsys, "lift-demo", "--ring", "Zmod[3,2]", "--matrix", "2,0;0,3", "--split", "topnil")
    assert code == EXIT_OK
    assert json.loads(out)["basis"] == "Zmod[3,2]:0,1"


@pytest.mark.parametrize("argv", [
    ["--ring", "Zmod[3,2]", "--matrix", "1,1;3,2", "--split", "eigen=x"],
    ["--ring", "Zmod[3,2]", "--matrix", "1,1;3,2", "--split", "root=1"],
    ["--ring", "Zmod[5,2]", "--matrix", "Zmod[3,2]:1,1;3,2", "--split", "eigen=1"],
    ["--ring", "Zmod[3,2]", "--matrix", "1,1;3,2", "--split", "eigen=1", "--eigenvalue", "2"],
])
def test_lift_demo_rejects_inconsistent_flags(capsys, argv):
    code, _ = _run(capsys, "lift-demo", *argv)
    assert code == EXIT_INPUT


def test_lift_demo_bad_matrix(capsys):
    code, _ = _run(capsys, "lift-demo", "--matrix", "1,2;3,4")
    assert code == EXIT_INPUT


def test_lift_check(capsys):
    code, out = _run(capsys, "--seed", "9", "lift-check", "--trials", "1")
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["ok"] is True
    assert payload["seed"] == 9


def test_assess_fixture_csv(capsys):
    code, out = _run(capsys, "assess", "-f", "cyclic4_gl2_f3")
    assert code == EXIT_OK
    lines = out.splitlines()
    assert lines[0] == CSV_HEADER
    row = lines[1].split(",")
    assert row[:2] == ["4", "4"]
    assert row[6] == "FALSE"


def test_assess_writes_reports_and_uses_cache(capsys, tmp_path):
    csv_path, json_path, cache = tmp_path / "r.csv", tmp_path / "r.json", tmp_path / "cache"
    args = ["--cache", "file", "--cache-dir", str(cache), "assess", "-f", "cyclic4_gl2_f3",
            "--report", str(csv_path), "--json", str(json_path)]
    assert _run(capsys, *args)[0] == EXIT_OK
    first = csv_path.read_text()
    assert first.splitlines()[0] == CSV_HEADER
    assert len(list(cache.glob("*.json"))) == 1
    assert _run(capsys, *args)[0] == EXIT_OK
    assert csv_path.read_text() == first
    payload = json.loads(json_path.read_text())
    assert payload["reports"][0]["order_gamma"] == 4
    assert payload["failures"] == []


def test_export_cached_reports(capsys, tmp_path):
    from tools.export_reports import collect_reports, export_reports

    cache = tmp_path / "cache"
    assert _run(capsys, "--cache", "file", "--cache-dir", str(cache), "assess", "-f", "cyclic4_gl2_f3")[0] == EXIT_OK
    assert [r["order_gamma_prime"] for r in collect_reports("file", str(cache), adequate="FALSE")] == [4]
    assert collect_reports("file", str(cache), adequate="TRUE") == []
    assert collect_reports("file", str(cache), order=8) == []
    out = tmp_path / "export.csv"
    assert export_reports(str(out), "file", str(cache), fmt="csv") == 1
    assert out.read_text().splitlines()[0] == CSV_HEADER


def test_assess_cap_exceeded(capsys):
    code, out = _run(capsys, "--max-order", "100", "assess", "-f", "sl2_f11")
    assert code == EXIT_CAP
    assert out.splitlines()[-1].endswith("CAP_EXCEEDED:SL2(F_11)<GL2")


def test_assess_unknown_fixture(capsys):
    code, _ = _run(capsys, "assess", "-f", "nope")
    assert code == EXIT_INPUT


def test_invalid_thread_count(capsys):
    code, _ = _run(capsys, "--threads", "0", "assess", "-f", "cyclic4_gl2_f3")
    assert code == EXIT_INPUT


def test_cohomology_command(capsys):
    code, out = _run(capsys, "cohomology", "-f", "cyclic4_gl2_f3", "-m", "trivial", "-m", "natural")
    assert code == EXIT_OK
    reports = json.loads(out)
    assert [(r["module"], r["h0"], r["h1"]) for r in reports] == [("trivial", 1, 0), ("natural", 0, 0)]


def test_search_command(capsys, tmp_path):
    code, out = _run(capsys, "--seed", "3", "search", "-f", "cyclic4_gl2_f3", "--samples", "4",
                     "--num-gens", "1", "--output-dir", str(tmp_path))
    assert code == EXIT_OK
    summary = json.loads(out)
    assert summary["seed"] == 3
    assert all(e["order"] in (1, 2, 4) for e in summary["entries"] if e["order"] is not None)
    assert len(list(tmp_path.glob("sample_*.json"))) == sum(1 for e in summary["entries"] if e["file"])


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
