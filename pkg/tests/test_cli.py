"""Tests for the command-line interface: output formats, determinism,
grid-config precedence and the 0/1/2 exit-code contract."""

import json
import math

import pytest

from cm_atlas.cli import ENV_GRID, fmt, main, render_json


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out


class TestFormatting:
    def test_fixed_float_format(self):
        assert fmt(0.25) == "2.5000000000000000e-01"
        assert fmt(True) == "true"
        assert fmt(3) == "3"

    def test_render_json_is_valid_json(self):
        doc = {"a": 1, "b": [0.5, "x"], "c": {"nested": False}, "d": None}
        assert json.loads(render_json(doc)) == {
            "a": 1,
            "b": [0.5, "x"],
            "c": {"nested": False},
            "d": None,
        }


class TestEval:
    def test_zero_of_critical_family(self, capsys):
        code, out = run(
            capsys, "eval", "--family", "delta",
            "--s", "0", "--t", "1", "--lambda", "1", "--x", "2",
        )
        assert code == 0
        assert float(out) == 0.0

    def test_psi_point(self, capsys):
        code, out = run(capsys, "eval", "--family", "psi", "--x", "1")
        assert code == 0
        assert float(out) == pytest.approx(-0.5772156649, abs=1e-9)

    def test_kernel_large_argument(self, capsys):
        code, out = run(
            capsys, "eval", "--family", "kernel",
            "--s", "0", "--t", "0.5", "--u", "200",
        )
        assert code == 0
        assert float(out) == pytest.approx(2.0, abs=1e-10)

    def test_polygamma_point(self, capsys):
        code, out = run(capsys, "eval", "--family", "polygamma", "--k", "1", "--x", "1")
        assert code == 0
        assert float(out) == pytest.approx(math.pi**2 / 6.0, rel=1e-12)

    def test_grid_table(self, capsys):
        code, out = run(
            capsys, "eval", "--family", "theta",
            "--s", "0", "--t", "0.5", "--lambda", "1",
            "--grid", "1e-2,10,25,log",
        )
        assert code == 0
        lines = out.strip().split("\n")
        assert len(lines) == 25
        x0, v0 = lines[0].split("\t")
        assert float(x0) == pytest.approx(1e-2)
        assert math.isfinite(float(v0))

    def test_env_var_grid(self, capsys, monkeypatch):
        monkeypatch.setenv(ENV_GRID, "1e-2,10,7,lin")
        code, out = run(
            capsys, "eval", "--family", "phi",
        )
        assert code == 0
        assert len(out.strip().split("\n")) == 7

    def test_flag_beats_env_var(self, capsys, monkeypatch):
        monkeypatch.setenv(ENV_GRID, "1e-2,10,7,lin")
        code, out = run(
            capsys, "eval", "--family", "phi", "--grid", "1e-2,10,3,lin",
        )
        assert code == 0
        assert len(out.strip().split("\n")) == 3


class TestCmCheck:
    def test_agreeing_verdict_json(self, capsys):
        code, out = run(
            capsys, "cm-check", "--family", "delta",
            "--s", "0", "--t", "0.5", "--lambda", "1",
            "--grid", "1e-3,1e4,80,log", "--max-order", "4",
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["schema"] == 1
        assert doc["verdict"] == "CM-consistent"
        assert doc["agree"] is True
        assert len(doc["per_order"]) == 5
        # The negated sign pattern is necessarily violated, so exactly one
        # witness (from the negcm scan) is reported.
        assert len(doc["witnesses"]) == 1

    def test_neither_verdict_still_agrees(self, capsys):
        code, out = run(
            capsys, "cm-check", "--family", "delta",
            "--s", "0", "--t", "0.5", "--lambda", "1.5",
            "--grid", "1e-3,1e4,80,log", "--max-order", "4",
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["verdict"] == "neither"
        assert len(doc["witnesses"]) == 2

    def test_super_unit_negcm(self, capsys):
        code, out = run(
            capsys, "cm-check", "--family", "delta",
            "--s", "0", "--t", "2", "--lambda", "1.2",
            "--grid", "1e-3,1e4,80,log", "--max-order", "4",
        )
        assert code == 0
        assert json.loads(out)["verdict"] == "negCM-consistent"


class TestSharp:
    def test_recovers_threshold(self, capsys):
        code, out = run(
            capsys, "sharp", "--family", "delta",
            "--s", "0", "--t", "0.4", "--direction", "cm-upper",
            "--grid", "1e-3,1e4,80,log", "--format", "json",
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["theory"] == 1.0
        assert abs(doc["estimate"] - 1.0) <= 1e-2


class TestInequalities:
    def test_pointwise_csv(self, capsys):
        code, out = run(
            capsys, "inequalities", "--name", "thm3",
            "--a", "1", "--b", "1.5", "--k", "1", "--beta", "1", "--gamma", "2",
        )
        assert code == 0
        lines = out.split("\r\n")
        assert lines[0] == "name,holds,worst_margin,witness_x,lhs,rhs"
        assert lines[1].startswith("thm3,true,")

    def test_violation_exits_one(self, capsys):
        code, out = run(
            capsys, "inequalities", "--name", "thm3",
            "--a", "1", "--b", "1.5", "--k", "1", "--beta", "1.2", "--gamma", "2",
        )
        assert code == 1
        assert ",false," in out

    def test_reversed_regime(self, capsys):
        code, out = run(
            capsys, "inequalities", "--name", "gamma-ratio", "--a", "1", "--b", "3",
        )
        assert code == 0

    def test_json_format(self, capsys):
        code, out = run(
            capsys, "inequalities", "--name", "qi-psi",
            "--k", "2", "--x", "1.5", "--format", "json",
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["schema"] == 1
        assert doc["verdicts"][0]["holds"] is True


class TestExitCodeContract:
    @pytest.mark.parametrize(
        "argv",
        [
            ["eval", "--family", "delta", "--s", "0", "--t", "1", "--x", "2"],
            ["eval", "--family", "warp", "--x", "1"],
            ["eval", "--family", "psi", "--x", "-3"],
            ["eval", "--family", "psi", "--grid", "bad-spec"],
            ["cm-check", "--family", "delta", "--s", "0", "--t", "1"],
            ["sharp", "--s", "0", "--t", "0", "--direction", "negcm-lower"],
            ["inequalities", "--name", "fermat"],
            ["inequalities"],
            ["no-such-command"],
        ],
    )
    def test_usage_errors_exit_two(self, capsys, argv):
        assert main(argv) == 2
        capsys.readouterr()
