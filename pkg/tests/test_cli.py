import json
import math
import subprocess
import sys

import numpy as np
import pytest

from tractrix.cli import main, read_config
from tractrix.output import read_csv


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_classify_spiral(capsys):
    code, out, _ = run(capsys, "classify", "--w", "1", "--T", "1")
    assert code == 0
    assert out.strip() == f"T2 (polar/spiral), S1=inf, s0={math.log(2.0)!r}"


def test_classify_rejects_w_below_minus_one(capsys):
    code, _, err = run(capsys, "classify", "--w", "-2", "--T", "1")
    assert code == 2
    assert "w > -1" in err


def test_classify_line(capsys):
    code, out, _ = run(capsys, "classify", "--w", "0", "--T", "3")
    assert code == 0 and out.startswith("T4 (tractrix of a line)")


def test_trace_circle_csv_start_pose(capsys, tmp_path):
    p = tmp_path / "c.csv"
    assert main(["trace", "--K", "1", "--T", "1", "--s-max", "10", "--out", str(p)]) == 0
    meta, rows = read_csv(p)
    assert meta["class"] == "T2"
    l, s, x, y, tau, nu, k = rows[0]
    assert (x, y) == (1.0, 0.0)
    assert tau == pytest.approx(math.pi, abs=1e-15)
    assert rows.shape[1] == 7 and rows[-1, 1] == pytest.approx(10.0)


def test_trace_ode_path_matches_closed_form(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    main(["trace", "--w", "0.5", "--T", "1", "--s-max", "3", "--out", str(a)])
    main(["trace", "--w", "0.5", "--T", "1", "--method", "ode", "--out", str(b)])
    _, ra = read_csv(a)
    _, rb = read_csv(b)
    # the ODE output is sampled in l; compare positions at matching s
    x = np.interp(ra[:, 1], rb[:, 1], rb[:, 2])
    assert np.max(np.abs(x - ra[:, 2])) < 1e-3


def test_trace_square_marks_corners(capsys, tmp_path):
    sq = tmp_path / "square.txt"
    sq.write_text("0 0\n1 0\n1 1\n0 1\n")
    code, out, _ = run(capsys, "trace", "--curve", str(sq), "--param", "closed=1", "--T", "0.3",
                       "--mode", "pushpull", "--format", "svg")
    assert code == 0
    assert out.count('class="corner"') == 4


def test_trace_json(capsys):
    code, out, _ = run(capsys, "trace", "--w", "2", "--T", "1", "--format", "json", "--samples", "20")
    doc = json.loads(out)
    assert len(doc["columns"]["x"]) == 20
    assert doc["meta"]["S1"] == pytest.approx(math.log(3.0))


def test_trace_usage_errors(capsys):
    assert run(capsys, "trace", "--curve", "nosuchcurve")[0] == 2
    assert run(capsys, "trace", "--w", "1", "--samples", "1")[0] == 2
    assert run(capsys, "trace")[0] == 2


def test_config_file_and_override(capsys, tmp_path):
    cfg = tmp_path / "job.cfg"
    cfg.write_text("# job\ncurve = circle\nw = 2\nT = 1\nformat = json\nsamples = 5\n")
    assert read_config(cfg)["w"] == "2"
    code, out, _ = run(capsys, "trace", "--config", str(cfg), "--samples", "7")
    doc = json.loads(out)
    assert code == 0 and len(doc["columns"]["x"]) == 7
    assert doc["meta"]["class"] == "T1"


def test_bad_config_line(capsys, tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("curve circle\n")
    assert run(capsys, "trace", "--config", str(cfg))[0] == 2


def test_pencil_json(capsys):
    code, out, _ = run(capsys, "pencil", "--T", "1")
    doc = json.loads(out)
    assert code == 0
    assert doc["foci"] == [[-1.0, 0.0], [1.0, 0.0]]
    assert max(abs(m["residual"]) for m in doc["members"]) <= 1e-10


def test_periodic_summary(capsys):
    code, out, _ = run(capsys, "periodic", "--curve", "circle", "--K", "0.5", "--T", "1")
    doc = json.loads(out)
    assert code == 0 and doc["converged"]
    assert doc["nu_star"] == pytest.approx(math.pi / 6, abs=1e-10)


def test_periodic_violation_needs_flag(capsys):
    assert run(capsys, "periodic", "--curve", "ellipse", "--T", "1.5")[0] == 2


def test_verify_errata(capsys):
    code, out, _ = run(capsys, "verify", "errata")
    doc = json.loads(out)
    assert code == 0 and doc["passed"]
    assert all("residual" in c for s in doc["suites"] for c in s["checks"])


def test_verify_exit_codes(capsys, monkeypatch):
    monkeypatch.setenv("TRACTRIX_TOL", "1e-20")
    assert run(capsys, "verify", "errata")[0] == 1
    monkeypatch.delenv("TRACTRIX_TOL")
    assert run(capsys, "verify", "nonsense")[0] == 2


def test_figure_fig9(capsys, tmp_path):
    code, out, _ = run(capsys, "figure", "fig9", "--out", str(tmp_path))
    files = sorted(p.name for p in tmp_path.iterdir())
    assert code == 0
    assert files == [f"fig9_T{i}.svg" for i in range(1, 6)]


def test_unknown_figure(capsys):
    assert run(capsys, "figure", "fig99")[0] == 2


def test_console_entry_point():
    r = subprocess.run([sys.executable, "-m", "tractrix.cli", "classify", "--w", "2"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.startswith("T1")
