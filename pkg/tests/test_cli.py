import json
import subprocess
import sys

import numpy as np
import pytest

from curvesketch import io as cio
from curvesketch.cli import main


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def traj(tmp_path, capsys):
    p = tmp_path / "t.csv"
    assert run(capsys, "gen-synthetic", "--n-per-class", 4, "--seed", 1, "--normalize", "--out", p)[0] == 0
    return p


def test_sigma_select(capsys):
    code, out, _ = run(capsys, "sigma-select", "--delta", 4, "--epsilon", 0.7357588823)
    assert code == 0 and abs(float(out) - 0.5) <= 1e-9 and out.endswith("\n")


def test_usage_errors_exit_1(capsys, tmp_path):
    for argv in (["sigma-select", "--delta", "4", "--epsilon", "3"],
                 ["landmarks", "--nx", "0", "--out", tmp_path / "x.csv"],
                 ["landmarks", "--domain", "1,0,0,1", "--out", tmp_path / "x.csv"],
                 ["vectorize", "--curves", tmp_path / "missing.csv", "--out", tmp_path / "x.csv"],
                 ["dist", "--out", tmp_path / "x.csv"],
                 ["frobnicate"]):
        code, out, err = run(capsys, *argv)
        assert code == 1 and err.startswith("curvesketch: error: ") and err.count("\n") == 1, (argv, err)


def test_pipeline_files(capsys, tmp_path, traj):
    lm = tmp_path / "lm.csv"
    f = tmp_path / "f.csv"
    d = tmp_path / "d.csv"
    assert run(capsys, "landmarks", "--nx", 5, "--ny", 4, "--out", lm)[0] == 0
    assert run(capsys, "vectorize", "--curves", traj, "--landmarks", lm, "--out", f, "--threads", 2)[0] == 0
    ids, X = cio.read_features(f)
    assert len(ids) == 8 and X.shape == (8, 20)
    meta = json.loads(f.with_suffix(".json").read_text())
    assert meta["schema"] == "curvesketch/1" and meta["sigma"] == 0.3 and meta["landmarks"]["count"] == 20
    assert run(capsys, "dist", "--features", f, "--p", "inf", "--out", d, "--plot")[0] == 0
    assert d.with_suffix(".png").read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"
    for metric in ("hausdorff", "frechet", "dtw"):
        assert run(capsys, "dist", "--curves", traj, "--metric", metric, "--step", 0.05, "--out", d)[0] == 0
    assert run(capsys, "field", "--curves", traj, "--nx", 8, "--ny", 6, "--out", tmp_path / "fld.csv")[0] == 0
    assert (tmp_path / "fld.pgm").read_text().startswith("P2\n8 6\n255\n")


def test_vectorize_on_curve_landmarks_gives_zero_row(capsys, tmp_path):
    p = tmp_path / "c.csv"
    p.write_text("curve_id,seq,x,y\nsq,0,0,0\nsq,1,1,0\nsq,2,1,1\nsq,3,0,1\n")
    (tmp_path / "lm.csv").write_text("x,y\n0.5,0\n1,0.25\n0,0\n")
    code, _, _ = run(capsys, "vectorize", "--curves", p, "--landmarks", tmp_path / "lm.csv",
                     "--out", tmp_path / "f.csv")
    assert code == 0
    _, X = cio.read_features(tmp_path / "f.csv")
    np.testing.assert_array_equal(X, 0.0)


def test_slfs_json(capsys, tmp_path):
    p = tmp_path / "c.csv"
    rows = [(0, 0.5), (8, 0.5), (8, 3), (-2, 3), (-2, 0), (10, 0)]
    p.write_text("curve_id,seq,x,y\n" + "".join(f"coil,{i},{x},{y}\n" for i, (x, y) in enumerate(rows)))
    code, out, _ = run(capsys, "slfs", "--curves", p, "--step", 0.05)
    res = json.loads(out)["results"][0]
    assert code == 0 and res["curve_id"] == "coil" and 0.5 <= res["value"] <= 0.6
    assert res["sample_step"] == 0.05 and len(res["witness"]) == 2


def test_verify_exit_codes(capsys, tmp_path):
    code, out, _ = run(capsys, "verify", "--suite", "old_dq", "--trials", 1000, "--seed", 7)
    assert code == 0 and json.loads(out)["status"] == "PASS"
    code, out, _ = run(capsys, "verify", "--suite", "t3_open", "--trials", 2000, "--seed", 0,
                       "--out", tmp_path / "v.json", "--plot")
    assert code == 2 and json.loads((tmp_path / "v.json").read_text())["suites"][0]["status"] == "FAIL"
    assert (tmp_path / "v.png").exists()


def test_config_overrides_and_flags_win(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"schema": "curvesketch/1", "nx": 3, "ny": 2}))
    assert run(capsys, "landmarks", "--config", cfg, "--out", tmp_path / "a.csv")[0] == 0
    assert len(cio.read_landmarks(tmp_path / "a.csv")) == 6
    assert run(capsys, "landmarks", "--config", cfg, "--nx", 5, "--out", tmp_path / "b.csv")[0] == 0
    assert len(cio.read_landmarks(tmp_path / "b.csv")) == 10
    cfg.write_text(json.dumps({"bogus": 1}))
    code, _, err = run(capsys, "landmarks", "--config", cfg, "--out", tmp_path / "c.csv")
    assert code == 1 and "bogus" in err


def _run_all(capsys, d):
    d.mkdir()
    t = d / "t.csv"
    run(capsys, "gen-synthetic", "--n-per-class", 3, "--seed", 5, "--normalize", "--out", t, "--plot")
    run(capsys, "vectorize", "--curves", t, "--nx", 6, "--ny", 6, "--out", d / "f.csv")
    run(capsys, "dist", "--features", d / "f.csv", "--out", d / "d.csv", "--plot")
    run(capsys, "field", "--curves", t, "--nx", 10, "--ny", 10, "--out", d / "fld.csv", "--plot")
    run(capsys, "classify", "--n-per-class", 6, "--repeats", 3, "--nx", 5, "--ny", 5,
        "--out", d / "c.json", "--plot", "--threads", 2)
    run(capsys, "verify", "--suite", "c2", "--trials", 3, "--out", d / "v.json", "--plot")
    return {p.name: p.read_bytes() for p in sorted(d.iterdir())}


def test_reruns_are_byte_identical(capsys, tmp_path):
    a = _run_all(capsys, tmp_path / "a")
    b = _run_all(capsys, tmp_path / "b")
    assert sorted(a) == sorted(b) and len(a) >= 13
    for name in a:
        assert a[name] == b[name], name


def test_console_entry_point():
    out = subprocess.run([sys.executable, "-m", "curvesketch.cli", "sigma-select", "--delta", "8",
                          "--epsilon", "0.7357588823"], capture_output=True, text=True, check=True)
    assert abs(float(out.stdout) - 1.0) <= 1e-9
