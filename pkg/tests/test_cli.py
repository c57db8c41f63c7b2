import json
from fractions import Fraction

import pytest
import sympy
from pydantic import ValidationError

from group_variety_cohomology.cli import main, run
from group_variety_cohomology.src.commands import dynamics as dynamics_commands
from group_variety_cohomology.src.report import Report, num, parse_num, render_text


class TestCohomologyCommands:
    def test_gl3(self):
        report, code = run(["cohomology", "GL(3)"])
        assert code == 0
        assert report.values["poincare_coefficients"] == "1 1 0 1 1 1 1 0 1 1"
        assert report.values["dim"] == "9"
        assert report.values["h1"] == "1"
        assert [row[1] for row in report.tables[0].rows] == ["1", "3", "5"]

    def test_poincare_table(self):
        report, code = run(["poincare", "torus(2)"])
        assert code == 0
        assert report.tables[0].rows == [["0", "1"], ["1", "2"], ["2", "1"]]

    def test_structure(self):
        report, code = run(["structure", "ext(GL(2), abelian(1))"])
        assert code == 0
        assert report.values["linear"] == "false"
        assert report.values["dim"] == "5"
        layer_names = [row[0] for row in report.tables[0].rows]
        assert "linear_part" in layer_names and "abelian_part" in layer_names


class TestDynamicsCommands:
    def test_trace_of_curve_frobenius(self):
        report, code = run(["trace", "abelian(1; t^2+3t+5)", "--endo", "frobenius(5)"])
        assert code == 0
        assert report.values["trace"] == "9"

    def test_dn(self):
        report, _ = run(["dn", "GL(2)", "--endo", "frobenius(2)", "--n", "2"])
        assert report.tables[0].rows == [["1", "3"], ["2", "45"]]

    def test_zeta(self):
        report, code = run(["zeta", "torus(1)", "--endo", "scalar 2", "--n", "4"])
        assert code == 0
        assert [row[1] for row in report.tables[0].rows] == ["1", "-1", "-1", "-1", "-1"]

    def test_count_with_oracle(self):
        report, code = run(["count", "GL(2)", "--q", "3", "--check-oracle"])
        assert code == 0
        assert report.values["lefschetz"] == report.values["oracle"] == "48"

    def test_count_with_abelian_part(self):
        report, code = run(["count", "ext(torus(1), abelian(1; t^2+3t+5))", "--q", "5", "--check-oracle"])
        assert code == 0
        assert report.values["lefschetz"] == "36"
        assert report.values["oracle"].startswith("unavailable")

    def test_oracle_disagreement_fails(self, monkeypatch):
        monkeypatch.setattr(dynamics_commands, "oracle_point_count", lambda expr, q: 47)
        report, code = run(["count", "GL(2)", "--q", "3", "--check-oracle"])
        assert code == 1
        assert report.status == "failed"
        assert report.witness["oracle"] == "47"


class TestErrors:
    def test_rank_out_of_range(self):
        report, code = run(["cohomology", "simple(C2)"])
        assert code == 2
        assert report.error.code == "core_model.RankOutOfRange"
        assert "B2" in report.error.hint

    def test_syntax_error_location(self):
        report, code = run(["cohomology", "ext(torus(2) abelian(1))"])
        assert code == 2
        assert report.error.code == "dsl_cli.SyntaxError"
        assert (report.error.line, report.error.column) == ("1", "14")

    def test_missing_charpoly(self):
        report, code = run(["count", "abelian(1)", "--q", "5"])
        assert code == 2
        assert report.error.code == "dynamics.MissingCharPoly"

    def test_usage_error(self):
        assert main(["count", "GL(2)"]) == 2
        assert main(["nonsense"]) == 2


class TestVerifyCommand:
    @pytest.mark.parametrize("argv", [
        ["verify", "point-counts"],
        ["verify", "hopf", "--samples", "5", "--seed", "7"],
        ["verify", "decomposition", "--samples", "10", "--seed", "7"],
        ["verify", "weyl-degrees", "--max-order", "2000"],
    ])
    def test_suites_pass(self, argv):
        report, code = run(argv)
        assert code == 0, report.witness
        assert report.witness is None

    def test_seed_reported(self):
        report, _ = run(["verify", "decomposition", "--samples", "3", "--seed", "11"])
        assert report.values["seed"] == "11"


class TestReport:
    def test_json_output(self, capsys):
        assert main(["cohomology", "GL(2)", "--json"]) == 0
        out = capsys.readouterr().out
        data = json.loads(out)
        assert data["status"] == "ok"
        assert all(isinstance(v, str) for v in data["values"].values())
        assert Report.model_validate_json(out) == run(["cohomology", "GL(2)"])[0]

    def test_abbreviated_json_flag(self, capsys):
        assert main(["cohomology", "GL(2)", "--js"]) == 0
        assert json.loads(capsys.readouterr().out)["status"] == "ok"

    def test_text_output(self, capsys):
        assert main(["count", "GL(2)", "--q", "3"]) == 0
        out = capsys.readouterr().out
        assert out.startswith("count: ext(simple(A1), torus(1)) [ok]")
        assert "lefschetz" in out

    def test_error_text(self):
        report, _ = run(["cohomology", "ext(torus(2) abelian(1))"])
        text = render_text(report)
        assert "dsl_cli.SyntaxError at 1:14" in text
        assert "expected one of: ','" in text

    def test_strict_values(self):
        with pytest.raises(ValidationError):
            Report(command="x", values={"n": 3})
        with pytest.raises(ValidationError):
            Report(command="x", status="maybe")

    def test_num(self):
        assert num(3) == "3"
        assert num(Fraction(-9, 4)) == "-9/4"
        assert num(Fraction(4, 2)) == "2"
        assert num(True) == "true"
        assert num(sympy.Rational(1, 3)) == "1/3"
        assert parse_num("-9/4") == Fraction(-9, 4)
        with pytest.raises(TypeError):
            num(0.5)
