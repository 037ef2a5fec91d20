"""
Tests for spectral diagnostics and the single-site law.
"""

import numpy as np
import pytest

from src.graph_core.lattice import build_box
from src.green.operator import SchrodingerMatrix, assemble_H, green
from src.localization.single_site import (
    edge_cdf,
    edge_grid,
    quadrature_cdf,
    single_site_density,
    tau_regularity,
    total_mass,
)
from src.localization.spectrum import center_eta_check, d0, hop_distances, spectrum
from src.models.spectral_report import SingleSiteDensity
from src.models.weighted_graph import BoxSpec, WeightedGraph
from src.potential.sampler import sample_nu_batch


@pytest.fixture
def ten_cycle():
    """Cycle on ten vertices with unit weights."""
    return WeightedGraph.from_edges(10, [(i, (i + 1) % 10, 1.0) for i in range(10)])


class TestSpectrum:
    """Test cases for the eigen-decomposition diagnostics."""

    def test_single_site(self):
        """Test the 1 x 1 operator."""
        report = spectrum(SchrodingerMatrix(np.array([[2.0]])))

        assert report.eigenvalues.tolist() == [2.0]
        assert report.iprs[0] == pytest.approx(1.0)
        assert report.localization_lengths[0] == 0.0

    def test_extended_modes_on_cycle(self, ten_cycle):
        """Test that constant potential gives delocalized modes."""
        report = spectrum(assemble_H(ten_cycle, np.full(10, 1.5)))

        assert report.size == 10
        assert np.max(report.iprs) < 0.35
        np.testing.assert_allclose(report.eigenvalues, np.sort(3.0 - 2 * np.cos(2 * np.pi * np.arange(10) / 10)))

    def test_eigen_residual(self, four_cycle):
        """Test H v = lambda v for every mode."""
        H = assemble_H(four_cycle, [1.2, 0.9, 1.5, 1.1])
        report = spectrum(H)
        residual = H.matrix @ report.eigenvectors - report.eigenvectors * report.eigenvalues

        assert np.max(np.abs(residual)) < 1e-12
        assert np.all(np.diff(report.eigenvalues) >= 0)

    def test_localized_mode(self):
        """Test a mode pinned by a deep well on a long path."""
        n = 21
        graph = WeightedGraph.from_edges(n, [(i, i + 1, 0.05) for i in range(n - 1)])
        beta = np.full(n, 1.0)
        beta[10] = 0.2
        report = spectrum(assemble_H(graph, beta))

        assert report.iprs[0] > 0.9
        assert 0 < report.localization_lengths[0] < 1.0

    def test_hop_distances(self, three_path):
        """Test graph distances from the pattern of H."""
        distances = hop_distances(assemble_H(three_path, [1.0, 1.0, 1.0]))

        np.testing.assert_array_equal(distances, [[0, 1, 2], [1, 0, 1], [2, 1, 0]])

    def test_non_symmetric_rejected(self):
        """Test that a non-symmetric matrix is refused."""
        with pytest.raises(ValueError, match="symmetric"):
            spectrum(SchrodingerMatrix(np.array([[1.0, 0.5], [0.0, 1.0]])))

    def test_to_frame(self, four_cycle):
        """Test the per-mode table."""
        frame = spectrum(assemble_H(four_cycle, [1.2, 0.9, 1.5, 1.1])).to_frame()

        assert len(frame) == 4
        assert "ipr" in frame.columns

    def test_reconstruction(self, four_cycle):
        """Test V diag(lambda) V^T = H."""
        H = assemble_H(four_cycle, [1.2, 0.9, 1.5, 1.1])
        report = spectrum(H)

        np.testing.assert_allclose(
            report.eigenvectors @ np.diag(report.eigenvalues) @ report.eigenvectors.T, H.matrix, atol=1e-12
        )
        np.testing.assert_allclose(report.eigenvectors.T @ report.eigenvectors, np.eye(4), atol=1e-12)


class TestD0:
    """Test cases for the single-site shift."""

    def test_two_vertices(self, two_vertex):
        """Test D0 = G(0,1) / G(0,0) = 1/2 at beta = 1."""
        G = green(assemble_H(two_vertex, [1.0, 1.0]))

        assert d0(G, 0) == pytest.approx(0.5)

    def test_path_middle(self, three_path):
        """Test the sum over both neighbors."""
        G = green(assemble_H(three_path, [1.0, 1.0, 1.0]))

        assert d0(G, 1) == pytest.approx(1.0)

    def test_isolated(self, single_vertex):
        """Test that an isolated vertex has no shift."""
        assert d0(green(assemble_H(single_vertex, [0.7])), 0) == 0.0


class TestSingleSite:
    """Test cases for the single-site density and its edge."""

    def test_density_support(self):
        """Test that the density vanishes at and below D0."""
        params = SingleSiteDensity(1.0, 2.0)

        assert single_site_density(params, 2.0) == 0.0
        assert single_site_density(params, 1.0) == 0.0
        assert single_site_density(params, 2.5) > 0

    def test_density_vectorized(self):
        """Test array input."""
        values = single_site_density(SingleSiteDensity(1.0), [0.5, 1.0, -1.0])

        assert values.shape == (3,)
        assert values[2] == 0.0

    @pytest.mark.parametrize("theta,shift", [(1.0, 0.0), (0.1, 3.0), (10.0, 0.0)])
    def test_total_mass(self, theta, shift):
        """Test that the density integrates to one."""
        assert total_mass(SingleSiteDensity(theta, shift)) == pytest.approx(1.0, abs=1e-8)

    @pytest.mark.parametrize("x", [1e-6, 1e-3, 0.3, 2.0])
    def test_quadrature_matches_erf(self, x):
        """Test the quadrature CDF against erf(theta sqrt(x / 2))."""
        params = SingleSiteDensity(1.3, 0.5)

        assert quadrature_cdf(params, x) == pytest.approx(edge_cdf(params, x), rel=1e-8)

    def test_cdf_at_edge(self):
        """Test F(0) = 0."""
        params = SingleSiteDensity(1.0)

        assert quadrature_cdf(params, 0.0) == 0.0
        assert edge_cdf(params, 0.0) == 0.0

    def test_grid_shrinks_with_theta(self):
        """Test the 1/theta^2 scaling of the edge grid."""
        grid = edge_grid(10.0, points=5)

        assert grid[0] == pytest.approx(1e-8)
        assert grid[-1] == pytest.approx(1e-3)
        assert edge_grid(0.1, points=5)[-1] == pytest.approx(0.1)

    @pytest.mark.parametrize("theta", [0.1, 1.0, 10.0])
    @pytest.mark.parametrize("shift", [0.0, 3.0])
    def test_tau_is_one_half(self, theta, shift):
        """Test the square-root edge of the CDF."""
        assert tau_regularity(SingleSiteDensity(theta, shift)) == pytest.approx(0.5, abs=0.02)

    def test_tau_grid_validation(self):
        """Test rejection of a grid with non-positive points."""
        with pytest.raises(ValueError, match="positive"):
            tau_regularity(SingleSiteDensity(1.0), grid=[0.0, 0.1])

    def test_invalid_params(self):
        """Test that theta must be positive."""
        with pytest.raises(ValueError, match="theta"):
            SingleSiteDensity(0.0)


class TestCenterEta:
    """Test cases for the effective field at the box center."""

    def test_reports_per_side(self):
        """Test one positive estimate per box side."""
        results = center_eta_check(1, [1, 3], 1.0, 1.0, n_samples=300, seed=4)

        assert [side for side, _ in results] == [1, 3]
        assert all(report.estimate > 0 and report.n == 300 for _, report in results)

    def test_field_dies_out(self):
        """Test that the field seen by the center shrinks with the box in d = 1."""
        results = center_eta_check(1, [1, 6], 0.2, 1.0, n_samples=1000, seed=6)
        small, large = results[0][1], results[1][1]

        assert large.estimate < small.estimate

    def test_needs_sides(self):
        """Test that at least one side is required."""
        with pytest.raises(ValueError, match="side"):
            center_eta_check(1, [], 1.0, 1.0, n_samples=10, seed=1)


class TestDisorderContrast:
    """Test cases for spectra of sampled potentials on a chain."""

    @staticmethod
    def medians(theta):
        """Median IPR and localization length over sampled potentials."""
        graph = build_box(BoxSpec(1, 25, wired=False), 1.0, theta)
        betas = sample_nu_batch(graph, 20, np.random.default_rng(81)).betas
        reports = [spectrum(assemble_H(graph, beta)) for beta in betas]
        return (
            float(np.median([r.median_ipr() for r in reports])),
            float(np.median([r.median_localization_length() for r in reports])),
        )

    def test_ipr_contrast(self):
        """Test that small theta localizes modes and large theta spreads them."""
        localized, _ = self.medians(0.1)
        spread, _ = self.medians(10.0)

        assert localized > 0.8
        assert spread < 0.3
        assert localized > 3 * spread

    def test_length_contrast(self):
        """Test that localization lengths grow with theta."""
        _, short = self.medians(0.1)
        _, long = self.medians(10.0)

        assert short < long
        assert short < 1.0
