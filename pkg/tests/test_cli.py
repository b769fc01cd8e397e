import json
import subprocess
import sys

import pytest

from motor_tp.cli import main
from motor_tp.mocap_io import read_csv, read_report
from motor_tp.synth import analytic_tp


@pytest.fixture
def synth_pair(tmp_path):
    x, y = tmp_path / "x.csv", tmp_path / "y.csv"
    code = main(["synth", "--rho", "0.9", "--frames", "12000", "--seed", "3",
                 "--out-x", str(x), "--out-y", str(y)])
    assert code == 0
    return x, y


def test_analyze_self_pair(tmp_path, synth_pair, capsys):
    x, _ = synth_pair
    out = tmp_path / "self.json"
    assert main(["analyze", str(x), str(x), "--alignment", "none", "--out", str(out)]) == 0
    line = capsys.readouterr().out.strip().splitlines()[-1]
    assert line.startswith("TP(x|y) = ") and line.endswith("(m=1, n_eff=11998)")
    report = read_report(out.read_bytes())
    assert report.components[0].rho_hat == 1 - 1e-6


def test_analyze_synthetic_pair_matches_analytic(tmp_path, synth_pair):
    x, y = synth_pair
    out = tmp_path / "r.json"
    assert main(["analyze", str(x), str(y), "--alignment", "none", "--out", str(out)]) == 0
    report = read_report(out.read_bytes())
    assert report.total_tp == pytest.approx(analytic_tp(0.9, 120, report.n_eff), rel=0.05)
    assert json.loads(out.read_text())["config"]["retention"] == 0.9


def test_analyze_missing_file(tmp_path, capsys):
    code = main(["analyze", str(tmp_path / "nope.csv"), str(tmp_path / "nope.csv")])
    assert code == 2
    assert "cannot open" in capsys.readouterr().err


def test_analyze_bad_file_reports_line(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("#frame_rate=120\na,b\n1,2\n3\n4,5\n")
    assert main(["analyze", str(bad), str(bad)]) == 2
    assert "ragged row at line 4" in capsys.readouterr().err


def test_analyze_is_byte_deterministic(tmp_path):
    x, y = tmp_path / "x.csv", tmp_path / "y.csv"
    main(["synth", "--rho", "0.8", "--frames", "600", "--components", "3", "--seed", "5",
          "--warp-knots", "3", "--out-x", str(x), "--out-y", str(y)])
    outs = []
    for k in range(2):
        out = tmp_path / f"r{k}.json"
        assert main(["analyze", str(x), str(y), "--out", str(out)]) == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


def _pairs(tmp_path, n):
    rows = []
    for k in range(n):
        x, y = tmp_path / f"a{k}.csv", tmp_path / f"b{k}.csv"
        main(["synth", "--rho", "0.7", "--frames", "400", "--seed", str(k),
              "--out-x", str(x), "--out-y", str(y)])
        rows.append(f"p{k},{x.name},{y.name}")
    return rows


def test_batch_prints_both_directions(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("MOTOR_TP_THREADS", "2")
    manifest = tmp_path / "pairs.csv"
    manifest.write_text("# id,x,y\n" + "\n".join(_pairs(tmp_path, 2)) + "\n")
    capsys.readouterr()
    assert main(["batch", str(manifest), "--alignment", "none", "--out", str(tmp_path / "out")]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "x\ty\tTP(x|y)"
    assert len(lines) == 5 and all(line.endswith(" bps") for line in lines[1:])
    assert sorted(p.name for p in (tmp_path / "out").glob("*.json")) == [
        "p0_xy.json", "p0_yx.json", "p1_xy.json", "p1_yx.json"]
    assert (tmp_path / "out" / "summary.tsv").exists()


def test_batch_empty_manifest(tmp_path):
    manifest = tmp_path / "empty.csv"
    manifest.write_text("# nothing here\n")
    assert main(["batch", str(manifest)]) == 2


def test_batch_partial_failure(tmp_path, capsys):
    rows = _pairs(tmp_path, 1) + ["broken,a0.csv,missing.csv"]
    manifest = tmp_path / "pairs.csv"
    manifest.write_text("\n".join(rows) + "\n")
    capsys.readouterr()
    assert main(["batch", str(manifest), "--alignment", "none", "--out", str(tmp_path / "o")]) == 1
    out = capsys.readouterr().out
    assert out.count(" bps") == 2
    assert "FAILED: cannot open" in out


def test_synth_is_deterministic(tmp_path):
    files = []
    for k in range(2):
        x, y = tmp_path / f"x{k}.csv", tmp_path / f"y{k}.csv"
        assert main(["synth", "--seed", "7", "--frames", "300", "--out-x", str(x), "--out-y", str(y)]) == 0
        files.append((x.read_bytes(), y.read_bytes()))
    assert files[0] == files[1]
    assert read_csv(tmp_path / "x0.csv").n_frames == 300


def test_synth_rejects_bad_rho(tmp_path, capsys):
    assert main(["synth", "--rho", "1.2", "--out-x", str(tmp_path / "a"), "--out-y", str(tmp_path / "b")]) == 2
    assert "rho" in capsys.readouterr().err


def test_fitts(capsys):
    assert main(["fitts", "--a", "0.1", "--b", "0.25", "--D", "5", "--W", "5"]) == 0
    assert capsys.readouterr().out.strip() == "MT=0.350 s, IP=4.0 bps"


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        main(["analyze"])
    assert exc.value.code == 2


def test_module_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "motor_tp", "fitts", "--a", "0", "--b", "0.5", "--D", "3", "--W", "1"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout.strip() == "MT=1.000 s, IP=2.0 bps"
