import json
import os
import subprocess
import sys

import numpy as np
import pytest

from warpft import chirp
from warpft.cli import main
from warpft.signals import GridSpec, SampledSignal

CUBIC = '{"kind":"odd_poly","coeffs":[1,1]}'
MILD = '{"kind":"odd_poly","coeffs":[1,0.1]}'
SRC = '{"start":-12,"stop":12,"count":1024}'
TGT = '{"start":-6,"stop":6,"count":256}'


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def last_json(out):
    return json.loads(out.strip().splitlines()[-1])


def test_warp_eval_and_invert(capsys):
    code, out, _ = run(capsys, "warp", "eval", "--warp", CUBIC, "--x", "2")
    assert code == 0 and last_json(out) == {"W": 10.0}
    code, out, _ = run(capsys, "warp", "invert", "--warp", CUBIC, "--value", "10")
    assert code == 0 and last_json(out)["x"] == pytest.approx(2.0, abs=1e-14)


def test_warp_check_bracket(capsys):
    code, out, _ = run(capsys, "warp", "check-bracket", "--warp", CUBIC, "--x", "0.7", "--p", "3.1")
    res = last_json(out)
    assert code == 0
    assert res["bracket"] == pytest.approx(1.0, abs=1e-12)
    assert res["residual"] <= 1e-12


@pytest.mark.parametrize(
    "argv",
    [
        ["warp", "eval", "--warp", "{not json", "--x", "1"],
        ["warp", "eval", "--warp", CUBIC],
        ["warp", "eval", "--warp", CUBIC, "--x", "abc"],
        ["warp", "eval", "--warp", '{"kind":"odd_poly","coeffs":[-1]}', "--x", "1"],
        ["warp", "fly"],
        ["--threads", "0", "warp", "eval", "--warp", CUBIC, "--x", "1"],
        [],
    ],
    ids=["bad-json", "missing-x", "bad-number", "invalid-warp", "bad-action", "threads", "empty"],
)
def test_usage_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert err


def test_numeric_failure_exit_1(capsys):
    code, _, err = run(capsys, "warp", "eval", "--warp", '{"kind":"signed_monomial","scale":1,"exponent":0.5}',
                       "--x", "0", "--p", "1")
    assert code == 0
    code, _, err = run(capsys, "warp", "check-bracket", "--warp",
                       '{"kind":"signed_monomial","scale":1,"exponent":0.5}', "--x", "0", "--p", "1")
    assert code == 1 and "numeric failure" in err


def test_gft_gaussian_and_round_trip(capsys, tmp_path):
    out_csv = tmp_path / "g.csv"
    code, out, _ = run(capsys, "gft", "--source-grid", SRC, "--target-grid", TGT,
                       "--check-gaussian", "--output", str(out_csv))
    assert code == 0
    assert last_json(out)["max_error"] <= 1e-6
    # the round trip needs the transform to decay inside the target grid too
    wide = '{"start":-9,"stop":9,"count":361}'
    code, out, _ = run(capsys, "gft", "--source-grid", SRC, "--target-grid", wide,
                       "--round-trip", "--output", str(tmp_path / "wide.csv"))
    assert code == 0
    assert last_json(out)["round_trip_error"] <= 1e-6
    g = SampledSignal.from_csv(str(out_csv), "K")
    assert g.nodes.size == 256
    np.testing.assert_allclose(g.samples, np.exp(-0.5 * g.nodes**2), atol=1e-6)


def test_gft_csv_input(capsys, tmp_path):
    f = SampledSignal.from_function("W", GridSpec.from_range(-12, 12, 1024), lambda u: np.exp(-0.5 * u * u))
    src = tmp_path / "f.csv"
    f.to_csv(str(src))
    kernel = json.dumps({"source_warp": json.loads(CUBIC), "target_warp": json.loads(CUBIC)})
    code, out, _ = run(capsys, "--out", str(tmp_path), "gft", "--input", str(src), "--coord", "W",
                       "--kernel", kernel, "--target-grid", TGT, "--check-gaussian")
    assert code == 0
    assert last_json(out)["max_error"] <= 1e-6
    assert (tmp_path / "gft.csv").exists()


def test_gft_label_mismatch_exit_2(capsys, tmp_path):
    f = SampledSignal.from_function("t", GridSpec.from_range(-12, 12, 101), lambda u: np.exp(-u * u))
    src = tmp_path / "f.csv"
    f.to_csv(str(src))
    code, _, err = run(capsys, "--out", str(tmp_path), "gft", "--input", str(src), "--coord", "t",
                       "--target-grid", TGT)
    assert code == 2
    assert "error" in err


def test_gft_truncation_exit_1_unless_allowed(capsys, tmp_path):
    narrow = '{"start":-3,"stop":3,"count":61}'
    code, _, _ = run(capsys, "--out", str(tmp_path), "gft", "--source-grid", narrow, "--target-grid", TGT)
    assert code == 1
    code, _, _ = run(capsys, "--out", str(tmp_path), "gft", "--source-grid", narrow, "--target-grid", TGT,
                     "--allow-truncation")
    assert code == 0


def _synth(capsys, tmp_path, warp=MILD, grid='{"start":-8,"stop":8,"count":801}'):
    path = tmp_path / "chirp.csv"
    code, _, _ = run(capsys, "chirp", "synth", "--warp", warp, "--t-grid", grid, "--output", str(path))
    assert code == 0
    return path


def test_chirp_harmonize(capsys, tmp_path):
    src = _synth(capsys, tmp_path)
    out = tmp_path / "run"
    code, stdout, _ = run(capsys, "--out", str(out), "chirp", "harmonize", "--input", str(src),
                          "--warp", MILD, "--svg")
    assert code == 0
    report = json.loads((out / "report.json").read_text())
    assert report == last_json(stdout)
    assert abs(report["omega_peak"] - 1) <= chirp.DEFAULT_OMEGA_GRID.step
    assert abs(report["omega_big_peak"] + 1) <= chirp.DEFAULT_OMEGA_BIG_GRID.step
    assert report["harmonic_residual"] <= 1e-4
    for name in ("harmonized.csv", "spectrum.csv", "spectrum.svg"):
        assert (out / name).exists()
    assert (out / "harmonized.csv").read_text().startswith("coord,re,im\n")


def test_chirp_estimate(capsys, tmp_path):
    src = _synth(capsys, tmp_path, grid='{"start":-8,"stop":8,"count":481}')
    code, out, _ = run(capsys, "--out", str(tmp_path), "--seed", "7", "chirp", "estimate",
                       "--input", str(src), "--axes", "[[0.9,1.0,1.1],[0.0,0.05,0.1,0.15]]")
    assert code == 0
    assert last_json(out)["coeffs"] == [1.0, 0.1]
    assert json.loads((tmp_path / "estimate.json").read_text())["coeffs"] == [1.0, 0.1]


def test_chirp_missing_input_exit_2(capsys):
    code, _, _ = run(capsys, "chirp", "harmonize", "--warp", MILD)
    assert code == 2


def test_diffuse_run(capsys, tmp_path):
    code, out, _ = run(capsys, "--out", str(tmp_path), "diffuse", "run", "--warp", CUBIC,
                       "--D", "0.25", "--svg")
    res = last_json(out)
    assert code == 0
    assert 0.28 <= res["last_slope"] <= 0.38
    assert res["points"] == 49
    assert (tmp_path / "msd.csv").read_text().startswith("t,msd,slope\n")
    assert (tmp_path / "msd.svg").exists()
    assert (tmp_path / "profile_048.csv").read_text().startswith("coord,value\n")


def test_diffuse_config_file_and_msd(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"warp": {"kind": "odd_poly", "coeffs": [1]}, "D": 1.0,
                               "times": [0.1, 1.0, 10.0], "mode": "dW"}))
    code, out, _ = run(capsys, "--config", str(cfg), "--out", str(tmp_path), "diffuse", "run")
    assert code == 0
    assert last_json(out)["first_slope"] == pytest.approx(1.0, abs=0.02)
    code, out, _ = run(capsys, "diffuse", "msd", "--input", str(tmp_path / "profile_001.csv"))
    assert code == 0
    assert last_json(out)["msd"] == pytest.approx(2.0, rel=1e-6)


def test_bad_config_exit_2(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text("[1, 2]")
    code, _, _ = run(capsys, "--config", str(cfg), "warp", "eval", "--x", "1")
    assert code == 2


def _read_all(directory):
    return {p: open(os.path.join(directory, p), "rb").read() for p in sorted(os.listdir(directory))}


def test_outputs_are_deterministic_across_threads(capsys, tmp_path):
    src = _synth(capsys, tmp_path)
    runs = []
    for i, threads in enumerate(["1", "1", "3"]):
        out = tmp_path / f"r{i}"
        code, _, _ = run(capsys, "--out", str(out), "--threads", threads, "chirp", "harmonize",
                         "--input", str(src), "--warp", MILD)
        assert code == 0
        runs.append(_read_all(out))
    assert runs[0] == runs[1] == runs[2]


def test_console_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "warpft.cli", "warp", "eval", "--warp", CUBIC, "--x", "1"],
                          capture_output=True, text=True, cwd=tmp_path)
    assert proc.returncode == 0
    assert json.loads(proc.stdout) == {"W": 2.0}
    bad = subprocess.run([sys.executable, "-m", "warpft.cli", "gft"], capture_output=True, text=True,
                         cwd=tmp_path)
    assert bad.returncode == 2
