"""CLI behaviour: exit codes, determinism, golden-file regression.

Regenerate the golden files with:  BECIRCLE_REGEN=1 pytest tests/test_cli.py
(byte-identical on the same platform with default tolerances).
"""
import json
import os
import pathlib

import pytest

from becircle.experiments_cli import main

GOLDEN = pathlib.Path(__file__).parent / "golden"

CASES = {
    "solve.json": ["solve", "--L", "0.5", "--eps", "0.05"],
    "variation.json": ["variation", "--nodes", "0,0.4", "--eps", "0.05",
                       "--f", "0,1"],
    "cutoff.json": ["cutoff-nd", "--n", "3", "--k", "10", "--eps", "0.1",
                    "--delta", "0.001"],
    "profiles.csv": ["profiles", "--T", "20", "--stride", "2.0"],
}


def _run(args, out):
    code = main(args + ["--out", str(out)])
    assert code == 0
    return out.read_bytes()


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden(name, tmp_path):
    data = _run(CASES[name], tmp_path / name)
    golden_path = GOLDEN / name
    if os.environ.get("BECIRCLE_REGEN") == "1":
        GOLDEN.mkdir(exist_ok=True)
        golden_path.write_bytes(data)
    assert golden_path.exists(), "golden file missing; run with BECIRCLE_REGEN=1"
    assert data == golden_path.read_bytes()


def test_determinism(tmp_path):
    a = _run(CASES["solve.json"], tmp_path / "a.json")
    b = _run(CASES["solve.json"], tmp_path / "b.json")
    assert a == b


def test_records_have_sorted_keys_and_meta(tmp_path):
    data = _run(CASES["solve.json"], tmp_path / "r.json")
    rec = json.loads(data)
    assert list(rec) == sorted(rec)
    assert set(rec["meta"]) >= {"grid_per_eps", "tol", "T", "version"}


def test_index_subcommand(tmp_path):
    out = tmp_path / "index.json"
    code = main(["index", "--p", "1", "--eps", "0.05", "--out", str(out)])
    assert code == 0
    rec = json.loads(out.read_text())
    row = rec["results"]["rows"][0]
    assert (row["be_index"], row["be_nullity"]) == (1, 1)
    assert (row["ac_index"], row["ac_nullity"]) == (1, 1)


def test_index_skips_inadmissible(tmp_path):
    from becircle.experiments_cli import index_table
    table = index_table([3], [0.1])
    assert "skipped" in table["rows"][0]
    assert "1/(2 p pi)" in table["rows"][0]["skipped"]


def test_usage_error_exit_code():
    assert main(["bogus-subcommand"]) == 1
    assert main(["solve", "--L", "0.5", "--eps", "0.05", "--bogus-flag"]) == 1


def test_domain_error_exit_code(capsys):
    assert main(["solve", "--L", "0.5", "--eps", "0.2"]) == 1
    assert "error:" in capsys.readouterr().err


def test_gap_sweep_exit(tmp_path):
    out = tmp_path / "g.json"
    code = main(["gap-sweep", "--L", "0.5", "--eps", "0.05,0.03", "--out", str(out)])
    assert code == 0
    rec = json.loads(out.read_text())
    assert rec["results"]["all_positive"] is True
