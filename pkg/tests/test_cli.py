"""CLI surface: flags, formats, exit codes, determinism."""

import json
import subprocess
import sys

import numpy as np
import pytest

from bhatbayes import EstimatorKind, LossKind, estimator_table, pointwise_risk
from bhatbayes.cli import main

L2 = LossKind.ONE_MINUS_B_SQUARED


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def parse_csv(text):
    lines = [line for line in text.strip().splitlines() if line]
    header = lines[0].split(",")
    rows = [line.split(",") for line in lines[1:]]
    return header, rows


class TestEstimate:
    def test_symmetric_case(self, capsys):
        code, out, _ = run_cli(
            capsys, "estimate", "--n", "5", "--N", "10", "--beta", "1", "--loss", "b2",
            "--estimator", "bayes",
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["estimate"] == [0.5, 0.5]
        assert payload["estimator"] == "bayes_b2"
        assert payload["posterior"] == {"alpha": [6.0, 6.0], "type": "dirichlet"}
        for key in ("command", "parameters", "seed", "version"):
            assert key in payload

    def test_posterior_mean_case(self, capsys):
        code, out, _ = run_cli(
            capsys, "estimate", "--n", "3", "--N", "10", "--beta", "0.5",
            "--loss", "b2", "--estimator", "mean",
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["estimate"] == pytest.approx([3.5 / 11.0, 7.5 / 11.0])

    def test_point_mass_posterior_file(self, capsys, tmp_path):
        path = tmp_path / "pm.json"
        path.write_text(json.dumps({"points": [[0.2, 0.8]], "weights": [1.0]}))
        code, out, _ = run_cli(
            capsys, "estimate", "--posterior-file", str(path), "--loss", "b",
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["estimate"] == pytest.approx([0.2, 0.8], abs=1e-12)
        assert payload["estimator"] == "bayes_b1"
        assert payload["posterior_risk"] == pytest.approx(0.0, abs=1e-12)

    def test_mean_from_posterior_file(self, capsys, tmp_path):
        path = tmp_path / "particles.json"
        path.write_text(
            json.dumps({"points": [[0.2, 0.8], [0.4, 0.6]], "weights": [0.5, 0.5]})
        )
        code, out, _ = run_cli(
            capsys, "estimate", "--posterior-file", str(path), "--estimator", "mean",
        )
        assert code == 0
        assert json.loads(out)["estimate"] == pytest.approx([0.3, 0.7])

    def test_affinity_loss_selects_bayes_b1(self, capsys):
        from bhatbayes import bayes_b1, posterior_update

        code, out, _ = run_cli(
            capsys, "estimate", "--n", "7", "--N", "10", "--beta", "0.5", "--loss", "b",
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["estimator"] == "bayes_b1"
        expected = bayes_b1(posterior_update(0.5, 10, 7)).entries
        assert payload["estimate"] == pytest.approx(list(expected), abs=1e-15)

    def test_mle_needs_no_beta(self, capsys):
        code, out, _ = run_cli(
            capsys, "estimate", "--n", "7", "--N", "10", "--estimator", "mle",
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["estimate"] == pytest.approx([0.7, 0.3])
        assert payload["posterior"] is None
        assert payload["posterior_risk"] is None

    def test_invalid_counts_exit_usage(self, capsys):
        with pytest.raises(SystemExit) as err:
            main(["estimate", "--n", "11", "--N", "10", "--beta", "1"])
        assert err.value.code == 2

    def test_bad_posterior_file_exit_numeric(self, capsys, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"points": [[0.2, 0.8]], "weights": [0.5]}))
        code, _, err = run_cli(capsys, "estimate", "--posterior-file", str(path))
        assert code == 3
        assert "error" in err


class TestRiskCurve:
    def test_three_point_grid(self, capsys):
        code, out, _ = run_cli(
            capsys, "risk-curve", "--N", "10", "--beta", "0.5", "--grid", "3",
        )
        assert code == 0
        header, rows = parse_csv(out)
        assert header == ["p0", "mle", "mean", "bayes"]
        assert [row[0] for row in rows] == ["0", "0.5", "1"]

    def test_bayes_max_below_mle_max(self, capsys):
        code, out, _ = run_cli(
            capsys, "risk-curve", "--N", "10", "--beta", "0.5",
            "--estimators", "mle,mean,bayes", "--grid", "501",
        )
        assert code == 0
        header, rows = parse_csv(out)
        assert len(rows) == 501
        data = np.array([[float(c) for c in row] for row in rows])
        mle_col = data[:, header.index("mle")]
        bayes_col = data[:, header.index("bayes")]
        assert bayes_col.max() < mle_col.max()

    def test_round_trip_reproduces_values(self, capsys):
        code, out, _ = run_cli(
            capsys, "risk-curve", "--N", "6", "--beta", "1", "--grid", "11",
        )
        assert code == 0
        header, rows = parse_csv(out)
        table = estimator_table(EstimatorKind.POSTERIOR_MEAN, 6, 1.0)
        row = rows[4]
        assert float(row[header.index("mean")]) == pytest.approx(
            pointwise_risk(float(row[0]), table, L2), abs=1e-12
        )

    def test_discrete_prior_column_from_lfp_output(self, capsys, tmp_path):
        # converged least favorable prior for one flip: {0: 1/4, 1/2: 1/2, 1: 1/4}
        prior_path = tmp_path / "lfp.json"
        prior_path.write_text(
            json.dumps({"support": [0.0, 0.5, 1.0], "weights": [0.25, 0.5, 0.25]})
        )
        code, out, _ = run_cli(
            capsys, "risk-curve", "--N", "1", "--beta", "0.5",
            "--grid", "101", "--prior-file", str(prior_path),
        )
        assert code == 0
        header, rows = parse_csv(out)
        assert header == ["p0", "mle", "mean", "bayes", "discrete"]
        discrete = np.array([float(r[header.index("discrete")]) for r in rows])
        mle_col = np.array([float(r[header.index("mle")]) for r in rows])
        # the minimax estimator's worst case beats the MLE's worst case
        assert discrete.max() < mle_col.max()

    def test_mean_and_bayes_curves_nearly_coincide(self, capsys):
        # gap peaks at the corners: 0.0156 at p0 in {0, 1} for N=10, beta=1
        code, out, _ = run_cli(
            capsys, "risk-curve", "--N", "10", "--beta", "1",
            "--estimators", "mean,bayes", "--grid", "501",
        )
        assert code == 0
        header, rows = parse_csv(out)
        gaps = [abs(float(r[1]) - float(r[2])) for r in rows]
        assert max(gaps) < 0.016
        interior = [g for r, g in zip(rows, gaps) if 0.05 < float(r[0]) < 0.95]
        assert max(interior) < 0.01

    def test_requires_beta_for_bayes_families(self, capsys):
        with pytest.raises(SystemExit) as err:
            main(["risk-curve", "--N", "10", "--estimators", "mean"])
        assert err.value.code == 2


class TestReldiff:
    def test_csv_shape_and_values(self, capsys):
        from bhatbayes import posterior_update, relative_suboptimality

        code, out, _ = run_cli(capsys, "reldiff", "--N", "10", "--beta", "0.5")
        assert code == 0
        header, rows = parse_csv(out)
        assert header == ["n", "relative_suboptimality"]
        assert len(rows) == 11
        n4 = float(rows[4][1])
        assert n4 == pytest.approx(
            relative_suboptimality(posterior_update(0.5, 10, 4)), abs=1e-15
        )


class TestBetaScan:
    def test_json_and_curve_file(self, capsys, tmp_path):
        curve_path = tmp_path / "curve.csv"
        code, out, _ = run_cli(
            capsys, "beta-scan", "--N", "5", "--beta-min", "0.3", "--beta-max", "0.6",
            "--resolution", "7", "--curve-output", str(curve_path),
        )
        assert code == 0
        payload = json.loads(out)
        assert 0.3 <= payload["beta_star"] <= 0.6
        assert payload["max_risk"] > 0.0
        header, rows = parse_csv(curve_path.read_text())
        assert header == ["beta", "max_risk"]
        assert len(rows) == 7


class TestLfp:
    def test_single_flip_converges(self, capsys):
        code, out, _ = run_cli(capsys, "lfp", "--N", "1", "--seed", "0")
        assert code == 0
        payload = json.loads(out)
        assert payload["converged"] is True
        assert payload["diff"] <= 1e-3
        assert payload["avg_risk"] <= payload["max_risk"] + 1e-9
        assert len(payload["support"]) == len(payload["weights"])
        assert payload["seed"] == 0

    def test_loose_tolerance_with_init_file(self, capsys, tmp_path):
        init = tmp_path / "init.json"
        init.write_text(json.dumps({"support": [0.0, 0.5, 1.0], "weights": [0.25, 0.5, 0.25]}))
        code, out, _ = run_cli(
            capsys, "lfp", "--N", "1", "--tol", "0.5", "--init-file", str(init),
        )
        assert code == 0
        assert json.loads(out)["iters"] == 1

    def test_invalid_alpha_exits_usage(self, capsys):
        with pytest.raises(SystemExit) as err:
            main(["lfp", "--N", "1", "--alpha", "2.0"])
        assert err.value.code == 2

    def test_iteration_cap_exits_nonconverged_with_result(self, capsys, tmp_path):
        init = tmp_path / "far.json"
        init.write_text(json.dumps({"support": [0.3, 0.6], "weights": [0.5, 0.5]}))
        code, out, _ = run_cli(
            capsys, "lfp", "--N", "2", "--max-outer", "1", "--init-file", str(init),
        )
        assert code == 4
        payload = json.loads(out)
        assert payload["converged"] is False
        assert payload["iters"] == 1
        assert payload["avg_risk"] <= payload["max_risk"] + 1e-9

    def test_byte_stable_reruns(self, capsys):
        _, first, _ = run_cli(capsys, "lfp", "--N", "1", "--seed", "3")
        _, second, _ = run_cli(capsys, "lfp", "--N", "1", "--seed", "3")
        assert first == second


class TestCompare:
    def test_hedging_order_and_symmetry(self, capsys):
        code, out, _ = run_cli(capsys, "compare", "--N", "10", "--beta", "1")
        assert code == 0
        header, rows = parse_csv(out)
        assert header == ["n", "mle", "mean", "bayes_b2", "bayes_b1"]
        assert len(rows) == 11
        data = {name: np.array([float(r[header.index(name)]) for r in rows]) for name in header}
        assert data["mle"][5] == data["mean"][5] == data["bayes_b2"][5] == 0.5
        # row n=0: mle 0 < bayes_b2 < mean = 1/12
        assert data["mle"][0] == 0.0
        assert 0.0 < data["bayes_b2"][0] < data["mean"][0]
        assert data["mean"][0] == pytest.approx(1.0 / 12.0)
        for n in range(11):
            if n == 5:
                continue
            lo, hi = sorted((data["mle"][n], data["mean"][n]))
            assert lo < data["bayes_b2"][n] < hi

    def test_byte_stable_reruns(self, capsys):
        _, first, _ = run_cli(capsys, "compare", "--N", "10", "--beta", "0.5")
        _, second, _ = run_cli(capsys, "compare", "--N", "10", "--beta", "0.5")
        assert first == second


class TestOutputRouting:
    def test_output_file_with_metadata_json(self, capsys, tmp_path):
        out_path = tmp_path / "compare.csv"
        code, out, _ = run_cli(
            capsys, "compare", "--N", "4", "--beta", "1", "--output", str(out_path),
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["command"] == "compare"
        assert payload["output"] == str(out_path)
        header, rows = parse_csv(out_path.read_text())
        assert header[0] == "n" and len(rows) == 5

    def test_env_output_dir_for_relative_paths(self, capsys, tmp_path, monkeypatch):
        monkeypatch.setenv("BHATBAYES_OUTDIR", str(tmp_path))
        code, _, _ = run_cli(
            capsys, "compare", "--N", "4", "--beta", "1", "--output", "sub/compare.csv",
        )
        assert code == 0
        assert (tmp_path / "sub" / "compare.csv").exists()

    def test_absolute_flag_wins_over_env(self, capsys, tmp_path, monkeypatch):
        monkeypatch.setenv("BHATBAYES_OUTDIR", str(tmp_path / "ignored"))
        target = tmp_path / "direct.csv"
        code, _, _ = run_cli(
            capsys, "compare", "--N", "4", "--beta", "1", "--output", str(target),
        )
        assert code == 0
        assert target.exists()
        assert not (tmp_path / "ignored").exists()


def test_console_entry_point_runs():
    result = subprocess.run(
        [sys.executable, "-m", "bhatbayes.cli", "--version"],
        capture_output=True,
        text=True,
    )
    assert result.returncode == 0
    assert "bhatbayes" in result.stdout
