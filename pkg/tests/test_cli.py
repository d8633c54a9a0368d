"""Command-line interface: dispatch, exit codes, output formats.

Core claims:
    - exit codes follow the documented taxonomy (1 usage, 2 input, 3
      feasibility/mismatch)
    - wdp prints frozen coefficient and rate lines; --bits is display-only
    - region and capacity emit JSON summaries whose CSV exports round trip
    - repeated invocations are byte-identical
    - fm verify reports the vertex match and combined-row classification
    - simulate, check, and aen print their documented report lines
"""

import json
import math

import numpy as np
import pytest

from bcsi.channels import channel_to_dict
from bcsi.cli import run
from bcsi.regions import random_scheme, scheme_to_dict

from helpers import flip_channel, flip_scheme, rand_ln, rand_mbc


@pytest.fixture
def flip_files(tmp_path):
    ch, sch = flip_channel(), flip_scheme()
    cpath = tmp_path / "flip_channel.json"
    spath = tmp_path / "flip_scheme.json"
    cpath.write_text(json.dumps(channel_to_dict(ch)))
    spath.write_text(json.dumps(scheme_to_dict(sch)))
    return str(cpath), str(spath)


@pytest.fixture
def random_files(tmp_path):
    ch = rand_mbc(0)
    sch = random_scheme(np.random.default_rng(100), ch)
    cpath = tmp_path / "rand_channel.json"
    spath = tmp_path / "rand_scheme.json"
    cpath.write_text(json.dumps(channel_to_dict(ch)))
    spath.write_text(json.dumps(scheme_to_dict(sch)))
    return str(cpath), str(spath)


def test_usage_errors_exit_1(capsys):
    assert run([]) == 1
    assert run(["region"]) == 1
    assert run(["no-such-command"]) == 1
    assert capsys.readouterr().err


def test_input_errors_exit_2(tmp_path, capsys):
    missing = str(tmp_path / "nope.json")
    assert run(["region", "--model", "mbc", "--channel", missing]) == 2
    err = capsys.readouterr().err
    assert err.startswith("bcsi: ")
    assert "no such file" in err
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(["region", "--model", "mbc", "--channel", str(bad)]) == 2
    assert "not valid JSON" in capsys.readouterr().err
    assert run(["region", "--model", "gaussian", "--channel", missing]) == 2
    assert "expected 'mbc' or 'lessnoisy'" in capsys.readouterr().err


def test_wdp_frozen_lines(capsys):
    assert run(["wdp", "--p", "1,1,1", "--n", "1,1,1", "--q", "1"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "β* = (0.5, 0.333333, 0.25)"
    assert out[1] == "rates (nats) = (0.346574, 0.202733, 0.143841)"


def test_wdp_bits_scaling(capsys):
    assert run(["wdp", "--p", "1,1,1", "--n", "1,1,1", "--bits"]) == 0
    line = capsys.readouterr().out.splitlines()[1]
    assert line.startswith("rates (bits) = (")
    vals = [float(v) for v in line.split("(")[2].rstrip(")").split(",")]
    nats = (0.34657359027997265, 0.20273255405408219, 0.14384103622589046)
    for got, want in zip(vals, nats):
        assert abs(got - want / math.log(2.0)) < 1e-6
    assert vals[0] == 0.5


def test_wdp_grid_finding_line(capsys):
    # q > 0 keeps every layer strictly concave in beta; a 101-point grid
    # cannot get within 1e-3 of 1/3, so the finding fires
    assert run(["wdp", "--p", "1,1,1", "--n", "1,1,1", "--q", "1",
                "--grid", "101"]) == 0
    out = capsys.readouterr().out
    assert "grid 101:" in out
    assert "finding: grid optimum departs from the closed-form coefficient" in out
    # a fine grid lands inside tolerance and stays quiet
    assert run(["wdp", "--p", "1,1,1", "--n", "1,1,1", "--q", "1",
                "--grid", "10001"]) == 0
    out = capsys.readouterr().out
    assert "grid 10001:" in out
    assert "finding" not in out
    # with q = 0 layer 3 is flat in beta, the grid argmax sits at 0, and the
    # departure is reported while the printed rates are unaffected
    assert run(["wdp", "--p", "1,1,1", "--n", "1,1,1", "--grid", "10001"]) == 0
    out = capsys.readouterr().out
    assert "finding: grid optimum departs from the closed-form coefficient" in out
    assert "rates (nats) = (0.346574, 0.202733, 0.143841)" in out


def test_wdp_validation_exit_2(capsys):
    assert run(["wdp", "--p", "1,1", "--n", "1,1,1"]) == 2
    assert "expected 3 comma-separated numbers" in capsys.readouterr().err
    assert run(["wdp", "--p", "1,1,1", "--n", "2,1,3"]) == 2
    assert "ordering" in capsys.readouterr().err


def test_region_json_and_csv_round_trip(flip_files, tmp_path, capsys):
    cpath, _ = flip_files
    out_csv = str(tmp_path / "region.csv")
    args = ["region", "--model", "mbc", "--channel", cpath,
            "--restarts", "4", "--seed", "2", "--out", out_csv]
    assert run(args) == 0
    first = capsys.readouterr().out
    summary = json.loads(first)
    assert summary["model"] == "mbc"
    assert summary["units"] == "nats"
    assert summary["variables"] == ["R0", "R1"]
    assert summary["halfspaces"]
    assert len(summary["schemes"]) == len(summary["vertices"])
    lines = open(out_csv).read().splitlines()
    assert lines[0] == "R0,R1"
    csv_pts = [tuple(map(float, ln.split(","))) for ln in lines[1:]]
    for got, want in zip(csv_pts, summary["vertices"]):
        assert max(abs(g - w) for g, w in zip(got, want)) <= 1e-12
    # byte-identical reruns
    assert run(args) == 0
    assert capsys.readouterr().out == first


def test_region_lessnoisy_csv(rand_ln_files, tmp_path, capsys):
    cpath = rand_ln_files
    out_csv = str(tmp_path / "ln.csv")
    assert run(["region", "--model", "lessnoisy", "--channel", cpath,
                "--restarts", "3", "--seed", "1", "--out", out_csv]) == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["variables"] == ["R1", "R2", "R3"]
    assert "halfspaces" not in summary
    assert open(out_csv).readline().rstrip() == "R1,R2,R3"


@pytest.fixture
def rand_ln_files(tmp_path):
    path = tmp_path / "ln_channel.json"
    path.write_text(json.dumps(channel_to_dict(rand_ln(5))))
    return str(path)


def test_region_model_mismatch(rand_ln_files, capsys):
    assert run(["region", "--model", "mbc", "--channel", rand_ln_files]) == 2
    assert "declares model 'lessnoisy'" in capsys.readouterr().err


def test_capacity_full_det(flip_files, capsys):
    cpath, _ = flip_files
    args = ["capacity", "--channel", cpath, "--variant", "full-det",
            "--restarts", "2", "--seed", "0"]
    assert run(args) == 0
    first = capsys.readouterr().out
    summary = json.loads(first)
    assert summary["variant"] == "full-det"
    assert summary["model"] == "mbc"
    assert summary["generators"]
    assert all(len(v) == 2 for v in summary["vertices"])
    assert run(args) == 0
    assert capsys.readouterr().out == first


def test_capacity_determinism_error_exit_3(random_files, capsys):
    cpath, _ = random_files
    assert run(["capacity", "--channel", cpath, "--variant", "full-det",
                "--restarts", "2"]) == 3
    assert capsys.readouterr().err.startswith("bcsi: ")
    assert run(["capacity", "--channel", cpath, "--variant", "bogus"]) == 2
    assert "--variant: unknown" in capsys.readouterr().err


def test_check_degraded_lines(tmp_path, capsys):
    from bcsi.channels import MbcChannel
    from bcsi.prob import Alphabet, CondKernel, FinitePmf

    # Y1 clean, Y2 a binary symmetric degradation of it
    x, s = Alphabet("X", 2), Alphabet("S", 2)
    y1, y2, y3 = Alphabet("Y1", 2), Alphabet("Y2", 2), Alphabet("Y3", 2)
    main = np.zeros((2, 2, 2, 2))
    for xi in range(2):
        for si in range(2):
            main[xi, si, xi ^ si, xi ^ si] = 1.0
    ch = MbcChannel(
        main=CondKernel((x, s), (y1, y3), main),
        degrading=CondKernel((y1,), (y2,), np.array([[0.7, 0.3], [0.3, 0.7]])),
        state=FinitePmf((s,), np.array([0.5, 0.5])),
    )
    path = tmp_path / "bsc.json"
    path.write_text(json.dumps(channel_to_dict(ch)))
    assert run(["check", "--channel", str(path), "--property", "degraded",
                "--pair", "Y1,Y2"]) == 0
    assert ("degraded: yes (Y2 is a stochastically degraded version of Y1)"
            in capsys.readouterr().out)
    assert run(["check", "--channel", str(path), "--property", "degraded",
                "--pair", "Y2,Y1"]) == 0
    assert "degraded: no" in capsys.readouterr().out
    assert run(["check", "--channel", str(path), "--property", "less-noisy",
                "--pair", "Y1,Y2", "--samples", "60", "--seed", "0"]) == 0
    assert "less-noisy: no counterexample for Y1 vs Y2" in capsys.readouterr().out
    assert run(["check", "--channel", str(path), "--property", "less-noisy",
                "--pair", "Y2,Y1", "--samples", "60", "--seed", "0"]) == 0
    assert "less-noisy: falsified (Y2 vs Y1" in capsys.readouterr().out
    assert run(["check", "--channel", str(path), "--property", "degraded",
                "--pair", "Y1,Y1"]) == 2
    assert "two distinct receivers" in capsys.readouterr().err


def test_fm_verify_pass(random_files, capsys):
    cpath, spath = random_files
    assert run(["fm", "verify", "--channel", cpath, "--scheme", spath,
                "--trials", "5", "--seed", "7"]) == 0
    out = capsys.readouterr().out
    assert "pre-elimination: 14 rows over (R0, R0', R11, R11', R12, R12')" in out
    assert "vertex gap" in out and "OK" in out
    assert "combined row redundant" in out
    assert "random trials: 5/5 vertex match, 5/5 combined row redundant" in out


def test_fm_verify_flip_counterexample_exit_3(flip_files, capsys):
    cpath, spath = flip_files
    assert run(["fm", "verify", "--channel", cpath, "--scheme", spath,
                "--trials", "0"]) == 3
    out = capsys.readouterr().out
    assert "combined row NOT redundant" in out


def test_simulate_csv(flip_files, capsys):
    cpath, spath = flip_files
    args = ["simulate", "--channel", cpath, "--scheme", spath,
            "--rates", "0.3,0.15", "--bins", "0,0,0.35", "--n", "8",
            "--trials", "30", "--eps", "0.22", "--seed", "1"]
    assert run(args) == 0
    first = capsys.readouterr().out
    lines = first.splitlines()
    assert lines[0] == "n,R0,R1,e1,e2,e3,enc_fail,trials,seed"
    fields = lines[1].split(",")
    assert fields[0] == "8" and fields[-2] == "30" and fields[-1] == "1"
    assert float(fields[1]) == 0.3 and float(fields[2]) == 0.15
    for v in map(float, fields[3:7]):
        assert 0.0 <= v <= 1.0
    assert run(args) == 0
    assert capsys.readouterr().out == first


def test_simulate_input_errors(flip_files, capsys):
    cpath, spath = flip_files
    assert run(["simulate", "--channel", cpath, "--scheme", spath,
                "--rates=-0.1,0.2"]) == 2
    assert "nonnegative" in capsys.readouterr().err
    assert run(["simulate", "--channel", cpath, "--scheme", spath,
                "--rates", "0.3,0.2", "--split", "0.05,0.05"]) == 2
    assert "does not match R1" in capsys.readouterr().err


def test_simulate_size_cap_exit_3(flip_files, capsys):
    cpath, spath = flip_files
    assert run(["simulate", "--channel", cpath, "--scheme", spath,
                "--rates", "2.0,0", "--n", "64", "--trials", "1"]) == 3
    assert capsys.readouterr().err.startswith("bcsi: ")


@pytest.mark.filterwarnings("ignore::RuntimeWarning")
def test_aen_lines(capsys):
    assert run(["aen", "--mx", "10", "--ms", "1", "--mz", "1,1,1",
                "--compare"]) == 0
    out = capsys.readouterr().out
    for k in (1, 2, 3):
        assert f"inner R{k} (nats) = " in out
    assert "[regime violated]" in out
    assert "outer R1 = R2 = R3 (nats) = 2.33047565 [PaperConstant]" in out
    assert "inner <= outer for every receiver" in out
    assert run(["aen", "--mx", "10", "--ms", "1", "--mz", "1,1,1",
                "--corrected"]) == 0
    assert "[CorrectedConstant]" in capsys.readouterr().out
    assert run(["aen", "--mx", "100", "--ms", "0.01", "--mz",
                "0.01,0.01,0.01"]) == 0
    out = capsys.readouterr().out
    assert "inner R1 (nats) = 1.098151875 [regime ok]" in out


def test_aen_outer_skip(capsys):
    assert run(["aen", "--mx", "10", "--ms", "1", "--mz", "1,2,1",
                "--compare"]) == 0
    out = capsys.readouterr().out
    assert "outer: skipped (requires m_s = m_z1 = m_z2 = m_z3; got --ms 1 --mz 1,2,1)" in out
    assert "compare: skipped (no outer values)" in out
    assert run(["aen", "--mx", "0", "--ms", "1", "--mz", "1,1,1"]) == 2
    assert "must be positive" in capsys.readouterr().err
