"""
Tests for fractional moments, thresholds and path-law comparisons.
"""

import numpy as np
import pytest
from scipy import stats

from src.errors import DegenerateComparisonError
from src.estimators.moments import (
    axis_targets,
    coupling_variance,
    fit_decay,
    fractional_moment,
    moment_constant,
    stated_variance_formula,
    variance_check,
    variance_formula,
)
from src.estimators.path_tests import path_prefix_test, prefix_labels, prefix_table
from src.estimators.thresholds import (
    displayed_bound,
    errw_moment,
    reported_errw_threshold,
    stated_moment_constant,
    threshold_errw,
    threshold_W,
)
from src.graph_core.lattice import build_box
from src.models.weight_law import WeightLaw
from src.models.weighted_graph import BoxSpec
from src.potential.density import marginal_params


class TestMomentConstant:
    """Test cases for the diagonal fractional moment."""

    def test_quarter_moment(self):
        """Test E[G(0,0)^(1/4)] at theta = 1."""
        assert moment_constant(1.0, 0.25) == pytest.approx(1.7202, abs=1e-4)

    def test_theta_scaling(self):
        """Test the theta^(2s) dependence."""
        assert moment_constant(2.0, 0.25) == pytest.approx(moment_constant(1.0, 0.25) * np.sqrt(2.0))

    def test_matches_gamma_integral(self):
        """Test against E[(2 gamma)^(-s)] for gamma ~ Gamma(1/2, 1) by Monte Carlo."""
        gamma = np.random.default_rng(0).gamma(0.5, 1.0, size=200000)
        values = (2 * gamma) ** -0.2

        assert abs(values.mean() - moment_constant(1.0, 0.2)) < 4 * values.std() / np.sqrt(len(values))

    @pytest.mark.parametrize("s", [0.0, 0.5, 0.7, -0.1])
    def test_exponent_range(self, s):
        """Test that s must lie in (0, 1/2)."""
        with pytest.raises(ValueError, match="Exponent"):
            moment_constant(1.0, s)


class TestFractionalMoment:
    """Test cases for the Monte-Carlo fractional moments."""

    @pytest.fixture(scope="class")
    def rows(self):
        """Moments along the axis of a small weakly coupled wired box."""
        spec = BoxSpec(1, 4, wired=True)
        return fractional_moment(spec, 0.1, 1.0, 0.25, axis_targets(1, 4), n_samples=3000, seed=5)

    def test_row_per_target(self, rows):
        """Test one row per target with l1 distances."""
        assert [row.distance for row in rows] == [0, 1, 2, 3, 4]
        assert rows[2].target == (2,)
        assert all(row.report.n == 3000 for row in rows)

    def test_origin_matches_constant(self, rows):
        """Test the diagonal moment against the closed form."""
        assert rows[0].report.agrees_with(moment_constant(1.0, 0.25), 4.0)

    def test_decay(self, rows):
        """Test exponential decay with a good fit."""
        estimates = [row.report.estimate for row in rows]
        fit = fit_decay(rows)

        assert all(a > b for a, b in zip(estimates, estimates[1:]))
        assert fit.kappa > 0
        assert fit.r_squared > 0.9

    def test_random_weights(self):
        """Test Gamma-distributed weights on a 2-d box."""
        rows = fractional_moment(
            BoxSpec(2, 1, wired=True), WeightLaw("gamma", 0.5), 1.0, 0.25,
            [(0, 0), (1, 0), (1, 1)], n_samples=300, seed=8, block_size=100,
        )

        assert [row.distance for row in rows] == [0, 1, 2]
        assert all(np.isfinite(row.report.estimate) and row.report.estimate > 0 for row in rows)

    def test_reproducible(self):
        """Test that the seed fixes the estimate."""
        spec = BoxSpec(1, 2, wired=True)
        a = fractional_moment(spec, 0.5, 1.0, targets=[(1,)], n_samples=200, seed=3)
        b = fractional_moment(spec, 0.5, 1.0, targets=[(1,)], n_samples=200, seed=3)

        assert a[0].report.estimate == b[0].report.estimate

    def test_needs_wired_box(self):
        """Test rejection of an unwired box."""
        with pytest.raises(ValueError, match="wired"):
            fractional_moment(BoxSpec(1, 2), 0.5, 1.0, targets=[(1,)], n_samples=10, seed=1)

    def test_target_outside_box(self):
        """Test rejection of a target beyond the box."""
        with pytest.raises(ValueError, match="outside"):
            fractional_moment(BoxSpec(1, 2, wired=True), 0.5, 1.0, targets=[(3,)], n_samples=10, seed=1)

    def test_diagonal_needs_small_exponent(self):
        """Test that s >= 1/2 is refused when the origin is a target."""
        with pytest.raises(ValueError, match="infinite"):
            fractional_moment(BoxSpec(1, 2, wired=True), 0.5, 1.0, s=0.5, targets=[(0,)], n_samples=10, seed=1)

    def test_needs_targets(self):
        """Test that an empty target list is refused."""
        with pytest.raises(ValueError, match="target"):
            fractional_moment(BoxSpec(1, 2, wired=True), 0.5, 1.0, targets=[], n_samples=10, seed=1)

    def test_axis_targets(self):
        """Test offsets along the first axis."""
        assert axis_targets(2, 2) == [(0, 0), (1, 0), (2, 0)]

    def test_reflection_symmetry(self):
        """Test E[G(0, x)^s] = E[G(0, -x)^s] on the symmetric wired box."""
        rows = fractional_moment(BoxSpec(1, 3, wired=True), 0.5, 1.0, 0.25, [(2,), (-2,)], n_samples=4000, seed=19)
        right, left = rows[0].report, rows[1].report

        assert abs(right.estimate - left.estimate) < 4 * np.hypot(right.stderr, left.stderr)


class TestFitDecay:
    """Test cases for the decay fit."""

    def test_exact_exponential(self):
        """Test recovery of a known rate."""
        fit = fit_decay([(k, 3.0 * np.exp(-0.7 * k)) for k in range(6)])

        assert fit.kappa == pytest.approx(0.7)
        assert fit.r_squared == pytest.approx(1.0)
        assert fit.to_dict()["points"] == 6

    def test_flat_estimates(self):
        """Test that constant estimates give kappa 0 and R^2 1."""
        fit = fit_decay([(0, 1.0), (1, 1.0), (2, 1.0)])

        assert fit.kappa == 0.0
        assert fit.r_squared == 1.0

    def test_too_few_points(self):
        """Test the minimum number of distances."""
        with pytest.raises(ValueError, match="at least 3"):
            fit_decay([(0, 1.0), (1, 0.5)])

    def test_non_positive_estimate(self):
        """Test that the logarithm needs positive estimates."""
        with pytest.raises(ValueError, match="positive"):
            fit_decay([(0, 1.0), (1, 0.0), (2, 0.1)])


class TestVariance:
    """Test cases for the variance of the potential at the box center."""

    def test_formula(self):
        """Test 1 / (2 theta^4) + d W / (2 theta^2)."""
        assert variance_formula(2, 0.5, 2.0) == pytest.approx(1 / 32 + 1 / 8)
        assert variance_formula(1, 1.0, 1.0) == pytest.approx(1.0)

    @pytest.mark.parametrize("d,W,theta", [(1, 1.0, 1.0), (2, 0.5, 1.0), (2, 0.5, 2.0), (3, 0.2, 0.7)])
    def test_formula_is_marginal_variance(self, d, W, theta):
        """Test the formula against the GIG variance of the center marginal."""
        graph = build_box(BoxSpec(d, 2, wired=True), W, theta)
        params = marginal_params(graph, graph.index_of((0,) * d))

        assert params.var() == pytest.approx(variance_formula(d, W, theta))

    def test_stated_formula_only_at_unit_theta(self):
        """Test that the printed expression matches only when theta = 1."""
        assert stated_variance_formula(2, 0.5, 1.0) == pytest.approx(variance_formula(2, 0.5, 1.0))
        assert stated_variance_formula(2, 0.5, 2.0) == pytest.approx(0.25)
        assert stated_variance_formula(2, 0.5, 2.0) != pytest.approx(variance_formula(2, 0.5, 2.0), rel=0.1)

    def test_coupling_variance(self):
        """Test that Var(2 beta / W) is 4 / W^2 times Var(beta)."""
        d, W, theta = 3, 0.4, 1.3

        assert coupling_variance(d, W, theta) == pytest.approx(4 / W ** 2 * variance_formula(d, W, theta))
        assert coupling_variance(d, W, theta) == pytest.approx(2 / (theta ** 4 * W ** 2) + 2 * d / (theta ** 2 * W))

    def test_monte_carlo(self):
        """Test the sampled variance at the center of a wired segment."""
        report = variance_check(BoxSpec(1, 2), 1.0, 1.0, n_samples=20000, seed=3)

        assert report.agrees_with(variance_formula(1, 1.0, 1.0), 4.0)

    def test_monte_carlo_large_theta(self):
        """Test the sampled variance at theta = 2 on a 2-d box."""
        report = variance_check(BoxSpec(2, 2), 0.5, 2.0, n_samples=20000, seed=3)

        assert report.agrees_with(variance_formula(2, 0.5, 2.0), 4.0)
        assert not report.agrees_with(stated_variance_formula(2, 0.5, 2.0), 4.0)

    def test_needs_interior(self):
        """Test that side 1 is refused."""
        with pytest.raises(ValueError, match="side >= 2"):
            variance_check(BoxSpec(1, 1), 1.0, 1.0, n_samples=100, seed=1)


class TestThresholds:
    """Test cases for the recurrence thresholds."""

    def test_threshold_d1(self):
        """Test Wprime_bar = 1 / (2 C) at d = 1."""
        report = threshold_W(1)

        assert report.wprime_bar == pytest.approx(0.2907, abs=1e-4)
        assert report.w_bar_4 == pytest.approx(report.wprime_bar ** 4)
        assert report.moment_constant == pytest.approx(1.7202, abs=1e-4)

    def test_scales_with_dimension(self):
        """Test the 1/d scaling."""
        assert threshold_W(3).wprime_bar == pytest.approx(threshold_W(1).wprime_bar / 3)

    def test_comparators(self):
        """Test the literature values carried next to the computed ones."""
        report = threshold_W(3)

        assert report.reported_bound == pytest.approx(0.08)
        assert report.displayed_bound == pytest.approx(displayed_bound(3))
        assert displayed_bound(1) == pytest.approx(0.154, abs=1e-3)
        assert stated_moment_constant(1.0) == pytest.approx(1.6235, abs=1e-3)
        assert stated_moment_constant(1.0) != pytest.approx(report.moment_constant, rel=1e-2)

    def test_to_dict_keys(self):
        """Test the CSV column names."""
        assert list(threshold_W(2).to_dict()) == [
            "d", "theta", "Wprime_bar", "W_bar_4", "moment_constant",
            "stated_constant", "displayed_bound", "reported_bound",
        ]

    def test_invalid_dimension(self):
        """Test rejection of d = 0."""
        with pytest.raises(ValueError, match="Dimension"):
            threshold_W(0)

    def test_errw_moment(self):
        """Test E[W^(1/4)] = Gamma(5/4) at a = 1."""
        assert errw_moment(1.0) == pytest.approx(0.9064, abs=1e-4)

    def test_errw_threshold_solves_equation(self):
        """Test that the root matches the weight threshold."""
        for d in (1, 2, 3):
            root = threshold_errw(d)
            assert errw_moment(root) == pytest.approx(threshold_W(d).wprime_bar, rel=1e-9)

    def test_errw_threshold_decreases(self):
        """Test that higher dimensions need smaller initial weights."""
        roots = [threshold_errw(d) for d in (1, 2, 3, 4)]

        assert all(a > b for a, b in zip(roots, roots[1:]))
        assert 0.02 < roots[2] < 0.04

    def test_reported_errw_threshold(self):
        """Test the literature comparator lookup."""
        assert reported_errw_threshold(3) == 0.65
        assert reported_errw_threshold(2) is None


class TestPathTests:
    """Test cases for the two-sample path-prefix test."""

    def test_prefix_labels(self):
        """Test label strings."""
        labels = prefix_labels([(0, 1, 2, 1), (0, 2, 0, 1)], 3)

        assert labels.tolist() == ["0-1-2", "0-2-0"]

    def test_short_path_rejected(self):
        """Test that paths shorter than the prefix are refused."""
        with pytest.raises(ValueError, match="shorter"):
            prefix_labels([(0, 1)], 3)

    def test_identical_samples(self):
        """Test p = 1 for identical samples."""
        paths = [(0, 1, 2)] * 60 + [(0, 2, 1)] * 40 + [(0, 1, 0)] * 30

        assert path_prefix_test(paths, paths, 3) == pytest.approx(1.0)

    def test_different_laws(self):
        """Test a small p-value for clearly different laws."""
        a = [(0, 1, 2)] * 300 + [(0, 2, 1)] * 100
        b = [(0, 1, 2)] * 200 + [(0, 2, 1)] * 200

        assert path_prefix_test(a, b, 3) < 1e-6

    def test_table_layout(self):
        """Test rows a, b and bins ranked by pooled count."""
        a = [(0, 1)] * 30 + [(0, 2)] * 10
        b = [(0, 1)] * 20 + [(0, 2)] * 25
        table = prefix_table(a, b, 2)

        assert list(table.index) == ["a", "b"]
        assert list(table.columns) == ["0-1", "0-2"]
        assert table.loc["b", "0-2"] == 25

    def test_sparse_bins_merged(self):
        """Test that rare prefixes are pooled into an 'other' bin."""
        a = [(0, 1)] * 60 + [(0, 2)] * 50 + [(1, 0)] * 3 + [(1, 2)] * 4
        b = [(0, 1)] * 60 + [(0, 2)] * 50 + [(1, 0)] * 4 + [(1, 2)] * 3
        table = prefix_table(a, b, 2)

        assert list(table.columns) == ["0-1", "0-2", "other"]
        assert table.loc["a", "other"] == 7
        assert int(table.to_numpy().sum()) == 234

    def test_single_bin_is_degenerate(self):
        """Test that one shared prefix leaves nothing to compare."""
        paths = [(0, 1, 2)] * 50

        with pytest.raises(DegenerateComparisonError):
            path_prefix_test(paths, paths, 2)

    def test_empty_sample(self):
        """Test that both samples must be non-empty."""
        with pytest.raises(ValueError, match="non-empty"):
            prefix_table([], [(0, 1)], 2)

    @pytest.mark.slow
    def test_null_p_values_uniform(self):
        """Test that p-values under a common law are close to uniform."""
        rng = np.random.default_rng(2024)
        paths = np.array([(0, 1, 2), (0, 2, 1), (0, 1, 0), (0, 2, 0)])
        probs = [0.4, 0.3, 0.2, 0.1]
        p_values = [
            path_prefix_test(paths[rng.choice(4, 2000, p=probs)], paths[rng.choice(4, 2000, p=probs)], 3)
            for _ in range(300)
        ]

        assert stats.kstest(p_values, "uniform").pvalue > 0.001

    def test_detects_small_shift(self):
        """Test power against a 0.6 / 0.5 split at 2000 paths each."""
        rng = np.random.default_rng(7)
        paths = np.array([(0, 1, 2), (0, 2, 1)])
        a = paths[(rng.random(2000) < 0.4).astype(int)]
        b = paths[(rng.random(2000) < 0.5).astype(int)]

        assert path_prefix_test(a, b, 3) < 1e-4
