import json
import math
import subprocess
import sys

import pytest

from mobius_quad import cli
from mobius_quad.reference import FIXTURE_ENV, Method, ReferenceResult, write_fixtures


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestIntegrate:
    def test_json_record(self, capsys):
        code, out, _ = run(capsys, "integrate", "--weight", "omega:2", "--n", "100", "--f", "1")
        rec = json.loads(out)
        assert code == 0
        assert rec["schema"] == 1
        assert (rec["n"], rec["gamma"], rec["weight"]) == (100, 1.0, "omega:2.0")
        assert abs(rec["value"] - math.pi) <= 5 * 4.5e-16

    def test_preset(self, capsys):
        code, out, _ = run(capsys, "integrate", "--weight", "omega:6", "--n", "4096", "--preset", "f2")
        assert code == 0 and json.loads(out)["value"] == pytest.approx(1.2823463399232427, abs=1e-12)

    def test_mutually_exclusive(self, capsys):
        code, _, err = run(capsys, "integrate", "--n", "4", "--f", "x", "--preset", "f1")
        assert code == 2 and "not allowed" in err

    @pytest.mark.parametrize("argv", [
        ["integrate", "--n", "4", "--f", "x +"],
        ["integrate", "--n", "4", "--f", "tan(x)"],
        ["integrate", "--n", "4", "--f", "x", "--weight", "omega"],
        ["integrate", "--n", "4", "--f", "x", "--weight", "poly:0,0,1;upsilon=2"],
        ["integrate", "--n", "0", "--f", "x"],
        ["integrate", "--n", "4,8", "--f", "x"],
        ["integrate", "--n", "4", "--f", "x", "--gamma", "-1"],
        ["integrate", "--n", "4"],
        ["bogus"],
    ])
    def test_input_errors(self, capsys, argv):
        assert run(capsys, *argv)[0] == 2

    def test_numerical_failure(self, capsys):
        code, _, err = run(capsys, "integrate", "--n", "3", "--f", "log(x)")
        assert code == 3 and "log" in err


class TestNodes:
    def test_csv(self, capsys):
        code, out, _ = run(capsys, "nodes", "--n", "2", "--weight", "omega:2")
        lines = out.splitlines()
        assert code == 0 and lines[0] == "j,theta,x,w"
        j, theta, x, w = lines[1].split(",")
        assert j == "1" and float(x) == pytest.approx(-1.0, rel=2 * 2.2e-16)
        assert float(w) == pytest.approx(math.pi / 2, rel=1e-15)
        assert theta == f"{math.pi / 2:.17g}"

    def test_reproducible_file(self, tmp_path, capsys):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        for p in (a, b):
            assert run(capsys, "nodes", "--n", "257", "--weight", "poly:2,0,1,0,1;upsilon=3",
                       "--gamma", "0.5", "-o", str(p))[0] == 0
        assert a.read_bytes() == b.read_bytes()
        rows = a.read_text(encoding="utf-8").splitlines()[1:]
        assert len(rows) == 257
        assert all(float(r.split(",")[3]) > 0 for r in rows)


class TestExactness:
    def test_default_passes(self, capsys):
        code, out, _ = run(capsys, "exactness")
        assert code == 0 and "FAIL" not in out and "failed 0" in out

    def test_examples(self, capsys):
        code, out, _ = run(capsys, "exactness", "--upsilon", "2,4", "--n", "1,2")
        assert code == 0
        assert "SKIP (upsilon <= 2n violated)" in out
        rows = cli.exactness_table([2, 4], [1, 2])
        skipped = [(r["upsilon"], r["n"]) for r in rows if r["status"] == "SKIP"]
        assert skipped == [(4, 1)]
        checked = {(r["upsilon"], r["n"], r["m"]): r for r in rows if r["status"] != "SKIP"}
        assert checked[(2, 1, 0)]["deviation"] <= 1e-15 * math.pi
        for m, v in ((0, math.pi / 2), (1, 0.0), (2, math.pi / 2)):
            assert checked[(4, 2, m)]["status"] == "PASS"
            assert checked[(4, 2, m)]["exact"] == pytest.approx(v, abs=1e-15)

    def test_failure_exit_code(self, capsys, monkeypatch):
        monkeypatch.setattr(cli, "exact_moment", lambda m, u: 1e3)
        code, out, _ = run(capsys, "exactness", "--upsilon", "4")
        assert code == 4 and "FAIL" in out

    @pytest.mark.parametrize("argv", [["--upsilon", "3"], ["--gamma", "2"], ["--upsilon", "a"]])
    def test_bad_input(self, capsys, argv):
        assert run(capsys, "exactness", *argv)[0] == 2


class TestReference:
    def test_json(self, capsys):
        code, out, _ = run(capsys, "reference", "--weight", "omega:4", "--f", "x^2", "--tol", "1e-10")
        rec = json.loads(out)
        assert code == 0 and rec["method"] == "tanh_sinh"
        assert rec["value"] == pytest.approx(math.pi / 2, abs=1e-10)
        assert rec["est_error"] >= 0

    def test_no_convergence_exit_code(self, capsys):
        assert run(capsys, "reference", "--weight", "omega:4", "--preset", "f1")[0] == 3


class TestConverge:
    def test_preset_sweep(self, tmp_path, capsys):
        csv = tmp_path / "f1.csv"
        code, out, _ = run(capsys, "converge", "--preset", "f1", "--upsilon", "6", "--n-min", "16",
                           "--n-max", "16384", "--csv", str(csv), "--emit-gnuplot")
        summary = json.loads(out)
        assert code == 0 and summary["schema"] == 1
        assert summary["predicted_rate"] == 2.0
        assert 1.7 <= summary["fitted_rate"] <= 2.3
        assert summary["regime"] == "algebraic"
        lines = csv.read_text(encoding="utf-8").splitlines()
        assert lines[0] == "n,approx,abs_error" and len(lines) == 12
        gp = tmp_path / "f1.csv.gp"
        assert "f1.csv" in gp.read_text(encoding="utf-8")

    def test_expression_sweep(self, capsys):
        code, out, _ = run(capsys, "converge", "--f", "pow(x^4+x^2+x+1,0.25)", "--upsilon", "5",
                           "--n-min", "1", "--n-max", "32", "--n-step", "1")
        summary = json.loads(out)
        assert code == 0 and summary["regime"] == "exponential"
        assert summary["n"] == list(range(1, 33))

    def test_needs_upsilon(self, capsys):
        assert run(capsys, "converge", "--preset", "f1")[0] == 2

    def test_fixture_override(self, tmp_path, capsys, monkeypatch):
        path = tmp_path / "fx.csv"
        write_fixtures([("f2", 6.0, 1.0, ReferenceResult(1.0, 0.0, Method.HIGH_PRECISION))], path)
        monkeypatch.setenv(FIXTURE_ENV, str(path))
        _, out, _ = run(capsys, "converge", "--preset", "f2", "--upsilon", "6")
        assert json.loads(out)["reference"] == 1.0

    def test_figures(self, tmp_path, capsys):
        code, out, _ = run(capsys, "converge", "--figures", str(tmp_path))
        assert code == 0
        report = json.loads(out)["figures"]
        assert [f["figure"] for f in report] == [1, 2, 3]
        for number in (1, 2, 3):
            assert (tmp_path / f"figure{number}.gp").exists()
            assert json.loads((tmp_path / f"figure{number}.json").read_text(encoding="utf-8"))["schema"] == 1
        assert (tmp_path / "figure2_f2_u4p5.csv").exists()
        by_u = {s["upsilon"]: s for s in report[2]["studies"]}
        assert by_u[5.0]["regime"] == "exponential"

    def test_byte_identical_runs(self, tmp_path, capsys):
        outs = []
        for d in ("a", "b"):
            run(capsys, "converge", "--preset", "f2", "--upsilon", "4.5", "--csv", str(tmp_path / f"{d}.csv"))
            outs.append((tmp_path / f"{d}.csv").read_bytes())
        assert outs[0] == outs[1]


class TestConfig:
    def test_file_supplies_flags(self, tmp_path, capsys):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("# integrate settings\ncommand = integrate\nweight = omega:4\nn = 2\nf = x^2\n",
                       encoding="utf-8")
        code, out, _ = run(capsys, "--config", str(cfg))
        assert code == 0 and json.loads(out)["value"] == pytest.approx(math.pi / 2, rel=1e-15)

    def test_flags_win(self, tmp_path, capsys):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("weight = omega:4\nn = 2\npreset = f1\n", encoding="utf-8")
        code, out, _ = run(capsys, "--config", str(cfg), "integrate", "--n", "64", "--f", "1")
        rec = json.loads(out)
        assert code == 0 and rec["n"] == 64 and rec["f"] == "1" and rec["weight"] == "omega:4.0"

    def test_bad_line(self, tmp_path, capsys):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("weight omega:4\n", encoding="utf-8")
        assert run(capsys, "--config", str(cfg), "integrate")[0] == 2

    def test_missing_file(self, tmp_path, capsys):
        assert run(capsys, "--config", str(tmp_path / "none.cfg"), "integrate")[0] == 2

    @pytest.mark.parametrize("argv", [
        ["integrate", "--weight", "omega:3", "--gamma", "2.5", "--n", "17", "--f", "abs(x)"],
        ["converge", "--preset", "f2", "--upsilon", "4.5", "--n-min", "8", "--n-max", "64",
         "--csv", "out.csv", "--emit-gnuplot"],
        ["reference", "--weight", "poly:2,0,1,0,1;upsilon=3", "--f", "x", "--tol", "1e-11",
         "--no-cross-check"],
        ["exactness", "--upsilon", "2,4", "--n", "1,2,64"],
    ])
    def test_round_trip(self, tmp_path, argv):
        first = cli.RunConfig.from_namespace(cli.parse_args(argv))
        path = tmp_path / "rt.cfg"
        path.write_text(first.to_config_text(), encoding="utf-8")
        second = cli.RunConfig.from_namespace(cli.parse_args(["--config", str(path)]))
        assert second == first


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "mobius_quad.cli", "integrate", "--n", "1", "--f", "1"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["value"] == pytest.approx(math.pi, rel=1e-15)
