"""CLI contract: subcommands, JSON schema, exact parsing, determinism, exit codes."""

import json

import pytest

from convexcheck.cli import main, parse_point, parse_scalar


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, err = run_cli(capsys, *argv)
    assert out, f"no stdout (stderr: {err})"
    return code, json.loads(out)


class TestParsing:
    def test_scalars(self):
        from fractions import Fraction as F

        assert parse_scalar("3") == 3
        assert parse_scalar("-1/2") == F(-1, 2)
        assert parse_point("1/2,1/2").coords == (F(1, 2), F(1, 2))

    @pytest.mark.parametrize("bad", ["0.5", "1e-3", "1/0", "", "one"])
    def test_decimals_and_garbage_rejected(self, bad):
        with pytest.raises(ValueError):
            parse_scalar(bad)


class TestFixtureCommand:
    def test_remark1_profile(self, capsys):
        code, report = run_json(capsys, "fixture", "remark1", "--pairs", "40")
        assert code == 0
        assert report["schema"] == "convexcheck/1"
        assert report["summary"]["convex"] == "no"
        assert report["summary"]["family_quasiconvex"] == "yes-over-grid"
        assert report["profile"]["matched"] is True
        assert report["verdicts"]["falsifier"]["found"] is False
        stability = report["verdicts"]["stability"]
        assert stability and all(e["verdict"]["estimate"] is True for e in stability)
        assert any(e["verdict"]["kind"] == "violation" for e in stability)

    def test_remark3_profile(self, capsys):
        code, report = run_json(capsys, "fixture", "remark3", "--pairs", "40")
        assert code == 0
        assert report["summary"]["convex"] == "no"
        assert report["summary"]["family_quasiconvex"] == "no"
        falsifier = report["verdicts"]["falsifier"]
        assert falsifier["found"] is True
        from fractions import Fraction as F

        assert F(falsifier["lambda"]) > 0

    def test_quadratic_profile(self, capsys):
        code, report = run_json(capsys, "fixture", "quadratic", "--pairs", "40")
        assert code == 0
        assert report["summary"]["convex"] == "yes"
        assert report["verdicts"]["falsifier"]["found"] is False
        assert report["verdicts"]["theorem"]["overall"] != "refuted"
        assert report["verdicts"]["theorem"]["conclusion_mismatches"] == 0

    def test_unknown_fixture_exit_2(self, capsys):
        code, out, err = run_cli(capsys, "fixture", "nope")
        assert code == 2
        assert "unknown fixture" in err

    def test_no_floats_in_report(self, capsys):
        _, report = run_json(capsys, "fixture", "remark1", "--pairs", "20")

        def walk(node):
            if isinstance(node, dict):
                for v in node.values():
                    walk(v)
            elif isinstance(node, list):
                for v in node:
                    walk(v)
            else:
                assert not isinstance(node, float), node

        walk(report)


class TestChecksAndFalsify:
    def test_check_family_grid(self, capsys):
        # leading minus needs the = form so argparse does not read it as a flag
        code, report = run_json(
            capsys, "check-family", "remark3", "--lambda-grid=-2,-1,0", "--pairs", "30"
        )
        assert code == 0
        entries = report["verdicts"]["family"]
        assert [e["lambda"] for e in entries] == ["-2", "-1", "0"]
        assert all(e["verdict"]["kind"] == "pass" for e in entries)

    def test_check_family_positive_violation(self, capsys):
        code, report = run_json(capsys, "check-family", "remark3", "--lambda-grid", "1", "--pairs", "30")
        assert code == 0
        assert report["verdicts"]["family"][0]["verdict"]["kind"] == "violation"

    def test_check_convex_and_quasiconvex(self, capsys):
        code, report = run_json(capsys, "check-convex", "remark1", "--pairs", "20")
        assert code == 0
        assert report["verdicts"]["convex"]["kind"] == "violation"
        code, report = run_json(capsys, "check-quasiconvex", "quadratic", "--pairs", "20")
        assert code == 0
        assert report["verdicts"]["quasiconvex"]["kind"] == "pass"

    def test_check_stability(self, capsys):
        code, report = run_json(capsys, "check-stability", "remark1", "1/2,1/2", "0,0")
        assert code == 0
        verdict = report["verdicts"]["stability"]
        assert verdict["kind"] == "violation"
        assert verdict["estimate"] is True
        assert verdict["lhs"] == "1" and verdict["rhs"] == "0"

    def test_falsify(self, capsys):
        code, report = run_json(capsys, "falsify", "remark3", "--pairs", "30")
        assert code == 0
        assert report["verdicts"]["falsifier"]["found"] is True


class TestReduceAndClassify:
    def test_reduce_case_a(self, capsys):
        code, report = run_json(capsys, "reduce", "quadratic", "1,0", "0,0", "1/2")
        assert code == 0
        cert = report["certificate"]
        assert cert["case"]["kind"] == "A"
        assert cert["status"] == "verified"
        assert cert["conclusion"] == {"lhs": "1/4", "rhs": "1/2", "holds": True}
        assert report["valid"] is True

    def test_reduce_case_b_refuted_still_valid(self, capsys):
        code, report = run_json(capsys, "reduce", "remark1", "1,0", "0,1", "1/2")
        assert code == 0
        cert = report["certificate"]
        assert cert["case"]["kind"] == "B"
        assert cert["status"] == "refuted"
        assert cert["case"]["limit"]["mechanism"]["kind"] == "stability-limsup"
        assert cert["case"]["limit"]["mechanism"]["estimate"]["kind"] == "violation"
        assert report["valid"] is True

    def test_reduce_case_b_pairing_zero(self, capsys):
        code, report = run_json(capsys, "reduce", "quadratic", "1,0", "0,1", "1/2")
        assert code == 0
        cert = report["certificate"]
        assert cert["case"]["kind"] == "B"
        assert cert["conclusion"] == {"lhs": "1/2", "rhs": "1", "holds": True}

    def test_reduce_outside_point_exit_2(self, capsys):
        code, out, err = run_cli(capsys, "reduce", "quadratic", "2,2", "0,0", "1/2")
        assert code == 2

    def test_reduce_bad_t_exit_2(self, capsys):
        code, out, err = run_cli(capsys, "reduce", "quadratic", "1,0", "0,0", "3/2")
        assert code == 2

    def test_classify_examples(self, capsys):
        cases = [
            ("0,0", "extreme"),
            ("1/2,1/2", "flat"),
            ("1/4,1/4", "intrinsic-core"),
        ]
        for text, expected in cases:
            code, report = run_json(capsys, "classify", "remark1", text)
            assert code == 0
            assert report["verdicts"]["class"] == expected
            assert report["verdicts"]["barycentric"] is not None

    def test_classify_outside(self, capsys):
        code, report = run_json(capsys, "classify", "remark1", "2,2")
        assert code == 0
        assert report["verdicts"]["class"] == "outside"


class TestDeterminism:
    def test_equal_configs_byte_identical_modulo_timestamp(self, capsys):
        argv = ("fixture", "remark3", "--pairs", "30", "--seed", "4")
        _, first = run_json(capsys, *argv)
        _, second = run_json(capsys, *argv)
        first.pop("timestamp")
        second.pop("timestamp")
        a = json.dumps(first, sort_keys=True)
        b = json.dumps(second, sort_keys=True)
        assert a == b

    def test_json_file_output(self, capsys, tmp_path):
        target = tmp_path / "report.json"
        code, out, err = run_cli(capsys, "classify", "remark1", "1/4,1/4", "--json", str(target))
        assert code == 0
        assert out == ""
        report = json.loads(target.read_text())
        assert report["verdicts"]["class"] == "intrinsic-core"

    def test_env_seed_overrides_flag(self, capsys, monkeypatch):
        monkeypatch.setenv("CONVEXCHECK_SEED", "777")
        _, report = run_json(capsys, "check-convex", "quadratic", "--pairs", "10", "--seed", "3")
        assert report["config"]["plan"]["seed"] == 777

    def test_env_seed_must_be_integer(self, capsys, monkeypatch):
        monkeypatch.setenv("CONVEXCHECK_SEED", "abc")
        code, out, err = run_cli(capsys, "check-convex", "quadratic")
        assert code == 2
