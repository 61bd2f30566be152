import csv
import json

import pytest

from dunkl_lab.cli import main

CSV_HEADER = ["epsilon", "quotient_oracle", "quotient_quadrature", "target",
              "rel_gap"]


def _run(args):
    return main(args)


def test_identities_suite_passes(tmp_path):
    out = tmp_path / "o"
    assert _run(["verify", "identities", "--family", "B", "--rank", "2",
                 "--out", str(out)]) == 0
    doc = json.loads((out / "summary.json").read_text())
    assert doc["suite"] == "identities"
    assert doc["pass"] is True
    assert doc["details"] and all(d["passed"] for d in doc["details"])


def test_hardy_suite_csv_schema(tmp_path):
    out = tmp_path / "o"
    assert _run(["verify", "hardy", "--family", "A", "--rank", "2",
                 "--k", "0.5", "--p", "auto", "--out", str(out)]) == 0
    with open(out / "hardy_hardy_p.csv") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == CSV_HEADER
    assert len(rows) == 7  # header + default six epsilons
    final_gap = float(rows[-1][4])
    assert final_gap < 0.01
    # epsilons decrease down the file
    eps = [float(r[0]) for r in rows[1:]]
    assert eps == sorted(eps, reverse=True)


def test_harmonics_suite(tmp_path):
    out = tmp_path / "o"
    assert _run(["verify", "harmonics", "--family", "Z2", "--rank", "3",
                 "--nmax", "4", "--out", str(out)]) == 0
    doc = json.loads((out / "summary.json").read_text())
    dims = {d["check"]: d for d in doc["details"] if "kernel_dimension"
            in d["check"]}
    assert len(dims) == 4
    assert all(d["value"] == d["expected"] for d in dims.values())


def test_all_suite_and_reports(tmp_path):
    out = tmp_path / "o"
    assert _run(["verify", "all", "--family", "Z2", "--rank", "5",
                 "--k", "1,0,0,0,0", "--out", str(out)]) == 0
    names = {p.name for p in out.iterdir()}
    assert "summary.json" in names
    assert "hardy_hardy_2.csv" in names
    assert "hardy-rellich_rellich.csv" in names


def test_reports_are_deterministic(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    args = ["verify", "hardy", "--family", "A", "--rank", "2", "--k", "1"]
    assert _run(args + ["--out", str(a)]) == 0
    assert _run(args + ["--out", str(b)]) == 0
    assert (a / "summary.json").read_bytes() == (b / "summary.json").read_bytes()
    assert (a / "hardy_hardy_p.csv").read_bytes() == (
        b / "hardy_hardy_p.csv"
    ).read_bytes()


def test_config_file_and_flag_precedence(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"family": "A", "rank": 2, "k": "1",
                               "out": str(tmp_path / "from_cfg")}))
    out = tmp_path / "flag_wins"
    assert _run(["verify", "hardy", "--config", str(cfg),
                 "--out", str(out)]) == 0
    assert (out / "summary.json").exists()
    assert not (tmp_path / "from_cfg").exists()


def test_usage_errors_exit_2(tmp_path):
    assert _run(["verify", "hardy", "--family", "A", "--rank", "2",
                 "--p", "3", "--out", str(tmp_path / "x")]) == 2
    assert _run(["verify", "hardy", "--eps", "0.1,0.3",
                 "--out", str(tmp_path / "y")]) == 2
    assert _run(["verify", "hardy", "--k", "bogus",
                 "--out", str(tmp_path / "z")]) == 2
    assert _run(["verify", "hardy", "--config", str(tmp_path / "nope.json"),
                 "--out", str(tmp_path / "w")]) == 2
    assert _run(["verify", "nonsense"]) == 2
    assert _run(["frobnicate"]) == 2


def test_unknown_config_key_rejected(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"frobnicate": 1}))
    assert _run(["verify", "identities", "--config", str(cfg),
                 "--out", str(tmp_path / "o")]) == 2


def test_fourth_order_needs_large_nbar(tmp_path):
    # N + 2 gamma = 2 for Z2^2 with k = 0: usage error, not a crash
    assert _run(["verify", "hardy-rellich", "--family", "Z2", "--rank", "2",
                 "--k", "0", "--out", str(tmp_path / "o")]) == 2
