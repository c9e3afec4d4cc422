import json
from math import pi

import numpy as np
import pytest

from radonlh.cli import ConfigError, main, parse_floats, parse_vector


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def last_value(text):
    return float(text.strip().splitlines()[-1].split(",")[-1])


def test_dual_example(capsys):
    code, out, _ = run(capsys, "dual", "--n", "3", "--phi", "builtin:abs_t_theta2", "--line", "e1,e2")
    assert code == 0
    assert last_value(out) == pytest.approx(0.5, abs=1e-4)


def test_forward_example(capsys):
    code, out, _ = run(capsys, "forward", "--n", "4", "--f", "builtin:gaussian", "--theta", "e1", "--t", "1.0")
    assert code == 0
    assert last_value(out) == pytest.approx(pi * np.exp(-1), abs=1e-6)


def test_selftest_example(capsys, tmp_path):
    rep = tmp_path / "report.json"
    code, out, _ = run(capsys, "selftest", "--n", "3", "--report", str(rep))
    assert code == 0
    doc = json.loads(rep.read_text())
    assert doc["passed"] and all(r["passed"] for r in doc["results"])


def test_exit_codes(capsys):
    assert run(capsys, "dual", "--n", "9")[0] == 1
    assert run(capsys, "nonsense")[0] == 1
    assert run(capsys, "dual", "--line", "e1,e1")[0] == 1
    code, _, err = run(capsys, "dual", "--phi", "builtin:phi_p", "--line", "e1,e2")
    assert code == 2 and "ClassViolation" in err
    code, _, err = run(capsys, "invert-even", "--phi", "builtin:theta2_t", "--t", "0.5")
    assert code == 2 and "NotEven" in err


def test_selftest_failure_exit_code(capsys, monkeypatch):
    from radonlh import testlib

    bad = testlib._case("bad", 3, "dual", 1e-9, lambda: {"x": 1.0}, {"x": testlib.Expected(0.0, "TRIVIAL")})
    monkeypatch.setattr(testlib, "analytic_suite", lambda n=None: [bad])
    assert run(capsys, "selftest", "--n", "3")[0] == 3


def test_csv_is_deterministic_and_manifest_complete(tmp_path, capsys):
    paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
    for p in paths:
        assert main(["forward", "--n", "3", "--f", "builtin:omega3sq", "--theta", "e1,e3,0.6:0:0.8", "--t", "0:2:5", "--out", str(p)]) == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()
    man = json.loads((tmp_path / "a.csv.json").read_text())
    assert man["format_version"] == 1
    assert man["config"]["options"]["f"] == "builtin:omega3sq"
    assert {"numpy", "scipy", "radonlh"} <= set(man["versions"])
    assert "seed" in man["seeds"]
    header = paths[0].read_text().splitlines()[0]
    assert header == "theta_1,theta_2,theta_3,t,value"


def test_sampled_transform_round_trip(tmp_path, capsys):
    g = tmp_path / "g.csv"
    assert main(["forward", "--n", "3", "--f", "builtin:omega3sq", "--theta-grid", "6", "--t", "0:5:51", "--L", "4", "--out", str(g)]) == 0
    code, out, _ = run(capsys, "invert", "--n", "3", "--g", str(g), "--L", "4", "--theta", "e3", "--r", "0.5,1")
    assert code == 0
    vals = [float(l.split(",")[-1]) for l in out.strip().splitlines()[1:]]
    assert np.allclose(vals, np.exp(-np.array([0.25, 1.0])), atol=1e-4)


def test_other_commands(capsys):
    code, out, _ = run(capsys, "invert-pointwise", "--phi", "builtin:theta2_t", "--theta", "e2", "--t", "0.5", "--L", "4")
    assert code == 0 and last_value(out) == pytest.approx(0.5, abs=1e-10)
    code, out, _ = run(capsys, "funk", "--f", "builtin:omega3sq", "--inverse", "--theta", "e3", "--L", "4")
    assert code == 0 and last_value(out) == pytest.approx(-1.0, abs=1e-10)
    code, out, _ = run(capsys, "ek", "--alpha", "1.5", "--t", "0.7")
    assert code == 0 and last_value(out) == pytest.approx(np.exp(-0.49), abs=1e-10)
    code, out, _ = run(capsys, "ek", "--n", "4", "--derivative", "--t", "1")
    assert code == 0 and last_value(out) == pytest.approx(np.exp(-1), abs=1e-10)


def test_threads_env_and_figure(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("RADON_THREADS", "1")
    fig = tmp_path / "f.png"
    assert main(["forward", "--t", "0:2:9", "--figure", str(fig), "--out", str(tmp_path / "f.csv")]) == 0
    assert fig.stat().st_size > 0
    man = json.loads((tmp_path / "f.csv.json").read_text())
    assert man["config"]["threads"] == 1
    monkeypatch.setenv("RADON_THREADS", "many")
    assert main(["forward"]) == 1


def test_vector_parsing():
    assert np.array_equal(parse_vector("e2", 3), [0, 1, 0])
    assert np.array_equal(parse_vector("-e1", 3), [-1, 0, 0])
    assert np.array_equal(parse_vector("2*e3+-0.5*e1", 3), [-0.5, 0, 2])
    assert np.array_equal(parse_vector("1:2:3", 3), [1, 2, 3])
    for bad in ("e4", "x1", "1:2"):
        with pytest.raises(ConfigError):
            parse_vector(bad, 3)
    assert np.allclose(parse_floats("0:1:5"), [0, 0.25, 0.5, 0.75, 1])
    assert np.allclose(parse_floats("1,2.5"), [1, 2.5])
