import csv
import io
import json

import pytest

from fernhex import counting
from fernhex.cli import EXIT_FAILED, EXIT_INVALID, EXIT_OK, main


def _run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_count_hexagon(capsys):
    code, out = _run(capsys, "count", "--hexagon", "2,2,2,2,2,2")
    assert code == EXIT_OK
    assert out.strip() == "20"


def test_count_fc_region(capsys):
    code, out = _run(capsys, "count", "--x", "1", "--y", "1", "--z", "1", "--lobes", "1,1", "--engine", "dp")
    assert code == EXIT_OK
    assert out.strip() == "4"


def test_region_file_round_trip(capsys, tmp_path):
    path = tmp_path / "fc.json"
    code, _ = _run(capsys, "region", "--x", "1", "--y", "1", "--z", "1", "--lobes", "1,1", "--out", str(path))
    assert code == EXIT_OK
    assert json.loads(path.read_text())["triangles"]
    code, out = _run(capsys, "count", "--region", str(path))
    assert code == EXIT_OK
    assert out.strip() == "4"


def test_fern_filling_the_triangle(capsys):
    code, out = _run(capsys, "region", "--x", "0", "--y", "0", "--z", "0", "--lobes", "5")
    assert code == EXIT_OK
    assert json.loads(out)["triangles"] == []
    code, out = _run(capsys, "count", "--x", "0", "--y", "0", "--z", "0", "--lobes", "5")
    assert out.strip() == "1"


def test_region_csv(capsys):
    code, out = _run(capsys, "region", "--hexagon", "1,1,1,1,1,1", "--format", "csv")
    assert code == EXIT_OK
    lines = out.splitlines()
    assert lines[0] == "u,v,orient"
    assert len(lines) == 7


def test_region_ascii(capsys):
    code, out = _run(capsys, "region", "--hexagon", "1,1,1,1,1,1", "--format", "ascii")
    assert code == EXIT_OK
    assert out == "^v^\nv^v\n"


def test_region_svg_is_deterministic(capsys):
    argv = ("region", "--x", "1", "--y", "1", "--z", "1", "--lobes", "1,1", "--format", "svg")
    _, first = _run(capsys, *argv)
    _, second = _run(capsys, *argv)
    assert first == second
    assert first.startswith("<svg")


@pytest.mark.parametrize(
    "argv, expected",
    [
        (("formula", "P", "2", "2", "2"), "20"),
        (("formula", "s", "2", "1", "1"), "3"),
        (("formula", "H", "4"), "12"),
        (("formula", "cored", "1", "1", "1", "1"), "2"),
        (("formula", "two-lobe-ratio", "2", "2", "0", "1", "1"), "4/3"),
        (("formula", "fc-count", "1", "1", "1", "1", "1"), "4"),
    ],
)
def test_formula(capsys, argv, expected):
    code, out = _run(capsys, *argv)
    assert code == EXIT_OK
    assert out.strip() == expected


@pytest.mark.parametrize(
    "argv",
    [
        ("formula", "nope", "1"),
        ("formula", "P", "1", "2"),
        ("formula", "H", "-1"),
        ("count", "--hexagon", "1,2,3,4,5,6"),
        ("count", "--x", "1", "--y", "1"),
        ("count", "--x", "1", "--y", "1", "--z", "1", "--m", "1", "--lobes", "1"),
        ("verify", "--max-xyz", "-1"),
        ("verify", "--jobs", "0"),
    ],
)
def test_invalid_input_exits_2(capsys, argv):
    code, _ = _run(capsys, *argv)
    assert code == EXIT_INVALID


def test_unbalanced_region_counts_zero(capsys, tmp_path):
    path = tmp_path / "one.json"
    path.write_text('{"triangles": [{"u": 0, "v": 0, "orient": "up"}]}')
    code, out = _run(capsys, "count", "--region", str(path))
    assert code == EXIT_OK
    assert out.strip() == "0"


def test_bad_region_schema(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"cells": []}')
    code, _ = _run(capsys, "count", "--region", str(path))
    assert code == EXIT_INVALID
    code, _ = _run(capsys, "count", "--region", str(tmp_path / "missing.json"))
    assert code == EXIT_INVALID


def test_engine_mismatch_exits_1(capsys, monkeypatch):
    monkeypatch.setattr(counting, "count_frontier_dp", lambda region, width_cap=None: 999)
    code, _ = _run(capsys, "count", "--hexagon", "1,1,1,1,1,1", "--engine", "kasteleyn", "--cross-check")
    assert code == EXIT_FAILED


def test_count_cache(capsys, tmp_path):
    config = tmp_path / "config.json"
    config.write_text(json.dumps({"storage_dir": str(tmp_path / "store")}))
    for _ in range(2):
        code, out = _run(capsys, "--config", str(config), "count", "--hexagon", "1,1,1,1,1,1", "--cache")
        assert code == EXIT_OK
        assert out.strip() == "2"
    assert (tmp_path / "store" / "counts.json").exists()


def test_verify_writes_report(capsys, tmp_path):
    report = tmp_path / "report.json"
    metrics = tmp_path / "metrics.prom"
    code, out = _run(
        capsys, "verify", "--suite", "macmahon", "--max-xyz", "1",
        "--report", str(report), "--metrics", str(metrics),
    )
    assert code == EXIT_OK
    assert "macmahon: 8 instances, 8 passed, 0 failed, 0 skipped" in out
    data = json.loads(report.read_text())
    assert data["summary"]["passed"] == 8
    assert "fernhex_verifications_total" in metrics.read_text()


def test_bench_skips_engines_over_their_cap(capsys, tmp_path):
    config = tmp_path / "config.json"
    config.write_text(json.dumps({"engines": {"ryser_max_pairs": 1}}))
    code, out = _run(
        capsys, "--config", str(config), "bench", "--family", "hexagon", "--max", "2",
        "--engine", "dp", "--engine", "ryser",
    )
    assert code == EXIT_OK
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["instance", "engine", "cells", "ms", "digits", "count", "status"]
    assert [row[6] for row in rows[1:]] == ["ok", "skipped", "ok", "skipped"]
    assert rows[3][5] == "20"


def test_bench_fc_family(capsys):
    code, out = _run(capsys, "bench", "--family", "fc", "--lobes", "1,1", "--max", "1")
    assert code == EXIT_OK
    rows = out.strip().splitlines()[1:]
    assert len(rows) == 2
    assert all(row.endswith(",4,ok") for row in rows)
