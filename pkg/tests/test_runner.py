"""
Tests for the experiment runner.
"""

import pandas as pd
import pytest

from src.config.experiment_config import ConfigLoader
from src.experiments.runner import ExperimentRunner, RunOutcome, run_experiment, save_outcome


def build(command, **overrides):
    """Configuration of one command with flag-style overrides."""
    return ConfigLoader().build(command, overrides)


class TestRunOutcome:
    """Test cases for RunOutcome and its artifacts."""

    @pytest.mark.parametrize("passed,verdict", [(True, "PASS"), (False, "FAIL"), (None, "DONE")])
    def test_verdict(self, passed, verdict):
        """Test the verdict label."""
        assert RunOutcome(pd.DataFrame(), passed, "").verdict == verdict

    def test_save_outcome(self, tmp_path):
        """Test that extra tables are written next to the main one."""
        outcome = RunOutcome(
            pd.DataFrame({"a": [1, 2]}), True, "ok",
            extra={"fit": pd.DataFrame({"kappa": [0.5]})},
        )
        written = save_outcome(outcome, tmp_path / "sub" / "run.csv")

        assert written == [tmp_path / "sub" / "run.csv", tmp_path / "sub" / "run_fit.csv"]
        assert pd.read_csv(written[0])["a"].tolist() == [1, 2]
        assert (tmp_path / "sub" / "run.csv").read_text(encoding="utf-8") == "a\n1\n2\n"


class TestExperimentRunner:
    """Test cases for individual experiments."""

    def test_thresholds(self):
        """Test the deterministic threshold table."""
        outcome = run_experiment(build("thresholds"))

        assert outcome.passed is None
        assert outcome.table["d"].tolist() == [1, 2, 3]
        assert outcome.table.loc[2, "reported_a_bar"] == 0.65
        assert outcome.table.loc[0, "Wprime_bar"] == pytest.approx(0.2907, abs=1e-4)

    def test_tau_check(self):
        """Test the edge exponent over the default grid."""
        outcome = run_experiment(build("tau-check"))

        assert outcome.verdict == "PASS"
        assert len(outcome.table) == 6
        assert (outcome.table["cdf_gap"] < 1e-8).all()

    def test_green_check(self):
        """Test identity residuals on a few sampled potentials."""
        outcome = run_experiment(build("green-check", seed=3, estimator={"n_samples": 4}))

        assert outcome.verdict == "PASS"
        assert outcome.table["replica"].tolist() == [0, 1, 2, 3]

    def test_green_check_summary_names_the_verdict_rule(self):
        """Test that the summary separates the bound-based verdict from the truncation count."""
        config = build("green-check", seed=3, estimator={"n_samples": 4}, tolerances={"truncation": 1e-300})
        outcome = run_experiment(config)

        assert outcome.verdict == "PASS"
        assert outcome.summary.startswith("4/4 samples pass the identity tolerance and the expansion error bound")
        assert "0/4 within 1e-300" in outcome.summary
        assert not outcome.table["within_truncation"].any()

    def test_ward_check(self):
        """Test the Laplace and Ward identities on the 3-path."""
        outcome = run_experiment(build("ward-check", seed=5, estimator={"n_samples": 4000}))

        assert outcome.table["check"].tolist() == ["laplace", "ward_k0", "ward"]
        assert outcome.verdict == "PASS"

    def test_sample_potential_artifacts(self):
        """Test the per-vertex summary and the raw samples table."""
        outcome = run_experiment(build("sample-potential", seed=2, estimator={"n_samples": 500}))

        assert outcome.table["vertex"].tolist() == [0, 1, 2]
        samples = outcome.extra["samples"]
        assert len(samples) == 1500
        assert samples["replica"].nunique() == 500

    @pytest.mark.parametrize("process", ["vrjp", "errw", "quenched"])
    def test_simulate(self, process):
        """Test one block of rows per replica."""
        config = build("simulate", seed=9, estimator={"n_samples": 3, "jumps": 4, "process": process})
        outcome = ExperimentRunner(config).run()

        assert outcome.passed is None
        assert sorted(outcome.table["replica"].unique()) == [0, 1, 2]
        if process == "vrjp":
            assert "z_epoch" in outcome.table.columns

    def test_simulate_is_reproducible(self):
        """Test that the seed fixes the trajectories."""
        config = build("simulate", seed=4, estimator={"n_samples": 2})

        pd.testing.assert_frame_equal(run_experiment(config).table, run_experiment(config).table)

    def test_failing_tolerance(self):
        """Test that a tolerance nobody meets gives FAIL."""
        config = build("tau-check", tolerances={"tau_slope": 1e-9})

        assert run_experiment(config).verdict == "FAIL"

    @pytest.mark.parametrize("edges", [
        [[0, 1, 1.0], [1, 2, 1.0], [0, 2, 1.0]],
        [[0, 1, 1.0], [1, 2, 1.0]],
    ])
    def test_mixture_test(self, edges):
        """Test that VRJP and annealed quenched skeletons agree."""
        config = build("mixture-test", seed=13, estimator={"n_samples": 3000},
                       graph={"vertex_count": 3, "edges": edges})
        outcome = run_experiment(config)

        assert outcome.verdict == "PASS"
        assert outcome.table["sample"].tolist() == ["a", "b"]
        assert outcome.table.drop(columns="sample").to_numpy().sum() == 6000

    @pytest.mark.parametrize("edges", [
        [[0, 1, 1.0], [1, 2, 1.0], [0, 2, 1.0]],
        [[0, 1, 2.0], [1, 2, 0.5]],
    ])
    def test_errw_equivalence(self, edges):
        """Test that ERRW and the Gamma-weight VRJP agree."""
        config = build("errw-equivalence", seed=17, estimator={"n_samples": 3000},
                       graph={"vertex_count": 3, "edges": edges})
        outcome = run_experiment(config)

        assert outcome.verdict == "PASS"
        assert "p = " in outcome.summary

    def test_variance_check_defaults(self):
        """Test the default variance cases against the marginal variance."""
        outcome = run_experiment(build("variance-check", seed=1))

        assert outcome.verdict == "PASS"
        assert outcome.table.loc[2, "reference"] == pytest.approx(0.15625)
        assert outcome.table.loc[2, "stated_reference"] == pytest.approx(0.25)
