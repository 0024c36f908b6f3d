import argparse
import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from clifford_ue.cli import (
    BOUNDS_HEADER,
    EXIT_OK,
    EXIT_USAGE,
    EXIT_VALIDATION,
    BoundReport,
    UsageError,
    main,
    parse_int_list,
    resolve_settings,
)


@given(st.integers(-5, 50), st.integers(0, 20))
def test_range_parsing(lo, n):
    assert parse_int_list(f"{lo}..{lo + n}") == list(range(lo, lo + n + 1))


def test_list_parsing():
    assert parse_int_list("2,4,7") == [2, 4, 7]
    assert parse_int_list("2..4,8") == [2, 3, 4, 8]
    with pytest.raises(UsageError):
        parse_int_list("a,b")


def test_settings_precedence(tmp_path):
    cfg = tmp_path / "c.txt"
    cfg.write_text("seed = 5\ninstances = 7  # comment\n")
    env = {"CLIFFORD_UE_SEED": "9", "CLIFFORD_UE_INSTANCES": "3", "CLIFFORD_UE_ITERS": "4"}
    args = argparse.Namespace(config=str(cfg), seed=11, instances=None, iters=None)
    s = resolve_settings(args, env)
    assert (s.seed, s.instances, s.iters, s.trials) == (11, 7, 4, 20)


def test_bounds_csv_output(tmp_path, capsys):
    out = tmp_path / "b.csv"
    assert main(["bounds", "--k", "2,4", "--methods", "conjecture,npa1", "--out", str(out)]) == EXIT_OK
    lines = out.read_text().splitlines()
    assert lines[0] == ",".join(BOUNDS_HEADER)
    assert lines[2].startswith("4,0.7500000000,0.7500000000,,,")


def test_bounds_byte_stable(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for p in (a, b):
        main(["bounds", "--k", "2..3", "--methods", "conjecture,npa1-sdp", "--format", "json", "--no-timings", "--out", str(p)])
    assert a.read_bytes() == b.read_bytes()
    rows = json.loads(a.read_text())
    assert rows[0]["solver_status"]["npa1"] == "optimal"


def test_bounds_rejects_K1():
    assert main(["bounds", "--k", "1", "--methods", "npa1"]) == EXIT_USAGE


def test_unknown_method():
    assert main(["bounds", "--k", "2", "--methods", "npa3"]) == EXIT_USAGE


def test_bad_subcommand():
    assert main(["frobnicate"]) == EXIT_USAGE


def test_verify_clifford(capsys):
    assert main(["verify", "clifford", "--lambda", "1..3"]) == EXIT_OK
    assert "FAIL" not in capsys.readouterr().out


def test_seesaw_envelope_refused():
    assert main(["seesaw", "--k", "18", "--dims", "4", "--instances", "1"]) == EXIT_USAGE


def test_seesaw_files_identical(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for p in (a, b):
        assert main(["--seed", "7", "seesaw", "--k", "3", "--dims", "2,3", "--instances", "2", "--iters", "2", "--out", str(p)]) == EXIT_OK
    assert a.read_bytes() == b.read_bytes()
    assert len(a.read_text().splitlines()) == 1 + 2 * 2 * 6


def test_structure_dump_and_export(tmp_path):
    assert main(["npa2-structure", "--k", "4", "--out", str(tmp_path / "s.txt")]) == EXIT_OK
    assert main(["export-sdp", "--level", "2", "--k", "4", "--out", str(tmp_path / "p.txt")]) == EXIT_OK
    assert "n_vars 18" in (tmp_path / "p.txt").read_text()


def test_ordering_violation_detected():
    r = BoundReport(8, conjecture=0.68, npa1=0.67, npa2=0.69)
    assert r.ordering_violations() == ["npa2 > npa1"]
    assert EXIT_VALIDATION == 1
