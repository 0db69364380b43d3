import json

import pytest

from hpgeom.cli import main
from hpgeom.report import Check, RunReport


def run(capsys, *argv):
    rc = main(list(argv))
    out = capsys.readouterr().out
    return rc, out


def test_report_json_is_sorted_and_timeless():
    rep = RunReport("demo", {"q": 3}, results={"b": 1, "a": [1, 2]})
    rep.check("one", 1, 1)
    rep.check("two", 2, 3, asserted=False)
    d = json.loads(rep.dumps())
    assert d["ok"] and rep.exit_code == 0
    assert "seconds" not in rep.dumps() and "workers" not in rep.dumps()
    assert list(d) == sorted(d)
    assert "(reported only)" in rep.text()
    rep.check("three", 1, 2)
    assert not rep.ok and rep.exit_code == 1


def test_check_match():
    assert Check("x", [1, 2], [1, 2]).match
    assert not Check("x", 1, 2).match


def test_field_info(capsys):
    rc, out = run(capsys, "field", "info", "--q", "4", "--t", "3", "--json")
    d = json.loads(out)
    assert rc == 0 and d["results"]["omega_minpoly"][-1] == 1 and d["field"]["t"] == 3


def test_counts_q2(capsys):
    rc, out = run(capsys, "counts", "--q", "2", "--json")
    d = json.loads(out)
    assert rc == 0
    assert d["results"]["plane_counts"]["scattered"] == 504


def test_design_text(capsys):
    rc, out = run(capsys, "design", "--q", "3")
    assert rc == 0 and out.strip().endswith("PASS")


def test_construct_then_verify_roundtrip(tmp_path, capsys):
    planes = tmp_path / "planes.json"
    rc, _ = run(capsys, "hp", "construct", "--q", "4", "--variant", "even", "--a", "2", "--out", str(planes))
    assert rc == 0 and planes.exists()
    rc, out = run(capsys, "hp", "verify", "--input", str(planes), "--method", "both", "--expect", "pass", "--json")
    d = json.loads(out)
    assert rc == 0 and d["results"]["verifiers_agree"]


def test_bad_parameter_exit_code(capsys):
    rc, _ = run(capsys, "hp", "construct", "--q", "7", "--variant", "odd", "--a", "2")
    assert rc == 2


def test_out_dir_writes_report_and_figures(tmp_path, capsys):
    out = tmp_path / "rep"
    rc, _ = run(capsys, "hp", "exists", "--q", "8", "9", "--out-dir", str(out))
    assert rc == 0
    assert (out / "report.json").exists() and (out / "report.txt").exists()
    assert (out / "exists_ratio.png").stat().st_size > 0
    rc, _ = run(capsys, "design", "--q", "3", "--out-dir", str(out))
    assert (out / "design_blocks.png").exists()


def test_exists_reports_small_q_rows(capsys):
    rc, out = run(capsys, "hp", "exists", "--q", "3", "9", "--json")
    rows = {r["q"]: r for r in json.loads(out)["results"]["table"]}
    assert rows[9]["holds"]
    assert rows[3]["S_times_2"] > 0 and rows[3]["bound"] == 27 * 26 * 25 * 24 * 23 * 22


@pytest.mark.parametrize("argv", [
    ("counts", "--q", "2"),
    ("hp", "search", "--q", "2", "--m", "5", "--seed", "1", "--restarts", "500"),
])
def test_json_identical_across_workers(capsys, argv):
    outs = []
    for w in ("1", "2"):
        rc, out = run(capsys, *argv, "--json", "--workers", w)
        outs.append(out)
    assert outs[0] == outs[1]


def test_figures_are_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a", tmp_path / "b"
    run(capsys, "counts", "--q", "2", "--out-dir", str(a))
    run(capsys, "counts", "--q", "2", "--out-dir", str(b))
    for name in ("counts_kinds.png", "counts_per_head.png"):
        assert (a / name).read_bytes() == (b / name).read_bytes()
