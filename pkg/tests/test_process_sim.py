"""
Tests for VRJP, ERRW and quenched-walk simulation and trajectory densities.
"""

import numpy as np
import pytest
from scipy import stats
from scipy.special import exp1

from src.green.operator import assemble_H, green
from src.models.trajectory import from_sojourns, single_state, vrjp_local_times
from src.potential.sampler import sample_nu_batch
from src.process_sim.densities import (
    density_fX_annealed,
    density_fX_quenched,
    density_fZ,
    edge_energy,
    log_density_fZ,
    sojourn_exponents,
)
from src.process_sim.errw import sample_gamma_weights, simulate_errw
from src.process_sim.quenched import jump_rates, simulate_quenched_jump, sojourn_rates
from src.process_sim.vrjp import (
    StopRule,
    choose_target,
    inverse_time_change,
    simulate_vrjp,
    skeleton,
    time_change,
)


@pytest.fixture
def cycle_path():
    """A trajectory on the four-cycle that revisits vertices."""
    return from_sojourns([0, 1, 2, 1, 0, 3], [0.3, 0.5, 0.2, 0.4, 0.7, 0.25])


class TestStopRule:
    """Test cases for StopRule."""

    def test_needs_exactly_one_criterion(self):
        """Test that horizon and jumps are exclusive."""
        with pytest.raises(ValueError, match="exactly one"):
            StopRule()
        with pytest.raises(ValueError, match="exactly one"):
            StopRule(horizon=1.0, jumps=3)

    @pytest.mark.parametrize("kwargs", [{"horizon": -1.0}, {"jumps": 0}])
    def test_invalid_values(self, kwargs):
        """Test rejection of a negative horizon or zero jumps."""
        with pytest.raises(ValueError):
            StopRule(**kwargs)


class TestVrjp:
    """Test cases for the VRJP simulation."""

    def test_jump_count(self, four_cycle, rng):
        """Test that a jump-count stop gives that many jumps along edges."""
        traj = simulate_vrjp(four_cycle, 0, StopRule(jumps=12), rng)

        assert traj.jump_count == 12
        assert traj.start == 0
        assert traj.horizon == traj.epochs[-1]
        traj.check_adjacent(four_cycle.weight_matrix)

    def test_horizon(self, triangle, rng):
        """Test that a time stop ends exactly at the horizon."""
        traj = simulate_vrjp(triangle, 1, StopRule(horizon=2.0), rng)

        assert traj.horizon == 2.0
        assert traj.epochs[-1] < 2.0
        assert vrjp_local_times(traj, triangle.theta).total == pytest.approx(3.0 + 2.0)

    def test_zero_horizon(self, triangle, rng):
        """Test that a zero horizon never leaves the start."""
        traj = simulate_vrjp(triangle, 2, StopRule(horizon=0.0), rng)

        assert traj.states == (2,)

    def test_isolated_vertex(self, single_vertex, rng):
        """Test the one-vertex graph."""
        traj = simulate_vrjp(single_vertex, 0, StopRule(horizon=1.5), rng)

        assert traj.states == (0,)
        assert traj.horizon == 1.5
        with pytest.raises(ValueError, match="isolated"):
            simulate_vrjp(single_vertex, 0, StopRule(jumps=1), rng)

    def test_reproducible_from_seed(self, four_cycle):
        """Test that an integer seed reproduces the path."""
        a = simulate_vrjp(four_cycle, 0, StopRule(jumps=20), 42)
        b = simulate_vrjp(four_cycle, 0, StopRule(jumps=20), 42)

        assert a.states == b.states
        assert a.epochs == b.epochs

    def test_start_outside_graph(self, triangle, rng):
        """Test rejection of an invalid start."""
        with pytest.raises(ValueError, match="outside"):
            simulate_vrjp(triangle, 3, StopRule(jumps=1), rng)

    def test_second_jump_on_triangle(self, triangle):
        """Test P(second jump avoids the start) = 2 e^4 E1(4) on the unit triangle."""
        rng = np.random.default_rng(2024)
        n = 6000
        hits = np.mean([simulate_vrjp(triangle, 0, StopRule(jumps=2), rng).states[2] != 0 for _ in range(n)])
        expected = 2 * np.exp(4) * exp1(4)

        assert expected == pytest.approx(0.4127, abs=1e-4)
        assert abs(hits - expected) < 4 * np.sqrt(expected * (1 - expected) / n)

    def test_skeleton(self, four_cycle, rng):
        """Test that the skeleton is the state sequence."""
        traj = simulate_vrjp(four_cycle, 0, StopRule(jumps=5), rng)

        assert skeleton(traj) == traj.states
        assert len(skeleton(traj)) == 6

    def test_choose_target_respects_rates(self):
        """Test that a zero-rate neighbor is never chosen."""
        rng = np.random.default_rng(0)
        picks = {choose_target(np.array([4, 7, 9]), np.array([1.0, 0.0, 3.0]), rng) for _ in range(500)}

        assert picks == {4, 9}

    def test_first_jump_uniform_on_star(self, star):
        """Test that the first jump from the center picks each arm equally often."""
        rng = np.random.default_rng(77)
        targets = [simulate_vrjp(star, 0, StopRule(jumps=1), rng).states[1] for _ in range(3000)]
        counts = np.bincount(targets, minlength=4)[1:]

        assert counts.sum() == 3000
        assert stats.chisquare(counts).pvalue > 0.001


class TestTimeChange:
    """Test cases for the VRJP time change."""

    def test_single_sojourn(self):
        """Test that a sojourn of length u from L = theta lasts u (2 theta + u)."""
        changed = time_change(single_state(0, 1.5), [2.0])

        assert changed.horizon == pytest.approx(1.5 * (4.0 + 1.5))

    def test_round_trip(self, four_cycle, rng):
        """Test that the inverse change recovers the original clock."""
        traj = simulate_vrjp(four_cycle, 0, StopRule(horizon=3.0), rng)
        back = inverse_time_change(time_change(traj, four_cycle.theta), four_cycle.theta)

        assert back.states == traj.states
        np.testing.assert_allclose(back.epochs, traj.epochs, rtol=1e-12, atol=1e-12)
        assert back.horizon == pytest.approx(traj.horizon)

    def test_total_time(self, four_cycle, rng):
        """Test that the new clock reads sum (L_i^2 - theta_i^2)."""
        traj = simulate_vrjp(four_cycle, 0, StopRule(horizon=2.5), rng)
        local = vrjp_local_times(traj, four_cycle.theta).values

        assert time_change(traj, four_cycle.theta).horizon == pytest.approx(
            float(np.sum(local ** 2 - four_cycle.theta ** 2))
        )


class TestErrw:
    """Test cases for the edge-reinforced random walk."""

    def test_path_length(self, four_cycle, rng):
        """Test steps + 1 visited vertices along edges."""
        path = simulate_errw(four_cycle, 0, 15, rng)

        assert len(path) == 16
        for a, b in zip(path, path[1:]):
            assert four_cycle.are_adjacent(a, b)

    def test_two_vertices_alternate(self, two_vertex, rng):
        """Test the forced walk on a single edge."""
        assert simulate_errw(two_vertex, 0, 4, rng) == (0, 1, 0, 1, 0)

    def test_reinforcement_on_star(self, star):
        """Test P(third step repeats the first arm) = 3/5 with unit weights."""
        rng = np.random.default_rng(99)
        n = 5000
        repeats = np.mean([path[3] == path[1] for path in (simulate_errw(star, 0, 3, rng) for _ in range(n))])

        assert abs(repeats - 0.6) < 4 * np.sqrt(0.24 / n)

    def test_custom_initial_weights(self, star, rng):
        """Test that a dominant initial weight attracts the walk."""
        path = simulate_errw(star, 0, 1, rng, a=[1e-9, 1e-9, 1e9])

        assert path == (0, 3)

    def test_invalid_initial_weights(self, star, rng):
        """Test shape and positivity checks on a."""
        with pytest.raises(ValueError, match="initial weights"):
            simulate_errw(star, 0, 2, rng, a=[1.0, 1.0])
        with pytest.raises(ValueError, match="positive"):
            simulate_errw(star, 0, 2, rng, a=[1.0, 0.0, 1.0])

    def test_gamma_weights(self, rng):
        """Test Gamma(a, 1) weights per edge."""
        draws = np.array([sample_gamma_weights([0.5, 2.0], rng) for _ in range(20000)])

        np.testing.assert_allclose(draws.mean(axis=0), [0.5, 2.0], rtol=0.05)
        with pytest.raises(ValueError, match="positive"):
            sample_gamma_weights([1.0, -1.0], rng)


class TestQuenched:
    """Test cases for the quenched jump process."""

    @pytest.fixture
    def environment(self, four_cycle):
        """Potential and Green matrix on the four-cycle."""
        beta = np.array([1.2, 0.9, 1.5, 1.1])
        return beta, green(assemble_H(four_cycle, beta))

    def test_sojourn_rates(self, four_cycle, environment):
        """Test total rates beta_i off i0 and beta_i0 - 1 / (2 G(i0, i0)) at i0."""
        beta, G = environment
        rates = sojourn_rates(four_cycle, G, 2)
        expected = beta.copy()
        expected[2] -= 1 / (2 * G[2, 2])

        np.testing.assert_allclose(rates, expected, rtol=1e-12)

    def test_rates_follow_edges(self, four_cycle, environment):
        """Test that rates vanish off the edges."""
        _, G = environment
        rates = jump_rates(four_cycle, G, 0)

        assert rates[0, 2] == 0.0
        assert np.all(np.diag(rates) == 0.0)
        assert rates[0, 1] == pytest.approx(0.5 * G[0, 1] / G[0, 0])

    def test_simulation(self, four_cycle, environment, rng):
        """Test a quenched trajectory."""
        _, G = environment
        traj = simulate_quenched_jump(four_cycle, G, 1, 9, rng)

        assert traj.jump_count == 9
        assert traj.start == 1
        traj.check_adjacent(four_cycle.weight_matrix)

    def test_non_positive_row(self, three_path):
        """Test that the environment row must be positive."""
        G = np.array([[1.0, 0.0, 0.5], [0.0, 1.0, 0.2], [0.5, 0.2, 1.0]])

        with pytest.raises(ValueError, match="positive"):
            jump_rates(three_path, G, 0)

    def test_holding_time_is_exponential(self, four_cycle, environment):
        """Test the first holding time against Exp(total rate at the start)."""
        _, G = environment
        rng = np.random.default_rng(78)
        rate = sojourn_rates(four_cycle, G, 1)[1]
        times = [simulate_quenched_jump(four_cycle, G, 1, 1, rng).epochs[1] for _ in range(2000)]

        assert stats.kstest(times, stats.expon(scale=1 / rate).cdf).pvalue > 0.001


class TestDensities:
    """Test cases for the trajectory densities."""

    def test_single_vertex_density_is_one(self, single_vertex):
        """Test that staying put on an isolated vertex has density one."""
        traj = single_state(0, 2.0)

        assert density_fZ(single_vertex, traj) == pytest.approx(1.0)
        assert density_fX_annealed(single_vertex, traj) == pytest.approx(1.0)

    def test_two_vertex_closed_form(self, two_vertex):
        """Test one jump 0 -> 1 against the explicit formula."""
        s, u = 0.8, 1.7
        traj = from_sojourns([0, 1], [s, u])
        expected = 0.5 / np.sqrt(1 + s) * np.exp(1 - np.sqrt((1 + s) * (1 + u)))

        assert density_fZ(two_vertex, traj) == pytest.approx(expected, rel=1e-12)

    def test_vrjp_is_a_mixture(self, four_cycle, cycle_path):
        """Test that the time-changed VRJP density equals the annealed one."""
        assert density_fZ(four_cycle, cycle_path) == pytest.approx(
            density_fX_annealed(four_cycle, cycle_path), rel=1e-10
        )

    def test_mixture_on_box(self, wired_square):
        """Test the same identity on a wired box with a longer path."""
        traj = from_sojourns([4, 1, 0, 9, 2, 5, 4], [0.2, 0.1, 0.4, 0.3, 0.05, 0.6, 0.9])

        assert density_fZ(wired_square, traj) == pytest.approx(
            density_fX_annealed(wired_square, traj), rel=1e-10
        )

    def test_log_density(self, four_cycle, cycle_path):
        """Test log_density_fZ against density_fZ."""
        assert np.exp(log_density_fZ(four_cycle, cycle_path)) == pytest.approx(density_fZ(four_cycle, cycle_path))

    def test_sojourn_exponents_non_negative(self, four_cycle, cycle_path):
        """Test one non-negative exponent per sojourn."""
        exponents = sojourn_exponents(four_cycle, cycle_path)

        assert exponents.shape == (6,)
        assert np.all(exponents >= 0)

    def test_edge_energy(self, four_cycle):
        """Test that the energy vanishes at S = 0 and grows with S."""
        assert edge_energy(four_cycle, np.zeros(4)) == pytest.approx(0.0)
        assert edge_energy(four_cycle, [1.0, 0.0, 0.0, 0.0]) > 0

    def test_annealed_is_average_of_quenched(self, four_cycle, cycle_path):
        """Test E_beta[quenched density] against the annealed density."""
        betas = sample_nu_batch(four_cycle, 4000, np.random.default_rng(31)).betas
        values = np.array([density_fX_quenched(four_cycle, beta, cycle_path) for beta in betas])
        stderr = values.std(ddof=1) / np.sqrt(len(values))

        assert abs(values.mean() - density_fX_annealed(four_cycle, cycle_path)) < 4 * stderr

    def test_non_adjacent_jump_rejected(self, three_path):
        """Test that a jump along a non-edge is refused."""
        with pytest.raises(ValueError, match="not adjacent"):
            density_fZ(three_path, from_sojourns([0, 2], [1.0, 1.0]))

    def test_exponents_are_energy_increments(self, four_cycle, cycle_path):
        """Test that every sojourn exponent is the energy gained over that sojourn."""
        exponents = sojourn_exponents(four_cycle, cycle_path)
        S = np.zeros(four_cycle.vertex_count)
        for k, (state, length) in enumerate(zip(cycle_path.states, cycle_path.durations())):
            before = edge_energy(four_cycle, S)
            S[state] += length
            assert exponents[k] == pytest.approx(edge_energy(four_cycle, S) - before, rel=1e-10)

        assert np.sum(exponents) == pytest.approx(edge_energy(four_cycle, cycle_path.occupation(4)), rel=1e-12)

    def test_energy_gradient(self, four_cycle):
        """Test that the total rate at i is the derivative of the energy in S_i."""
        S = np.array([0.4, 1.1, 0.2, 0.7])
        h = 1e-6
        for i in range(4):
            step = np.zeros(4)
            step[i] = h
            traj = from_sojourns([i], [h])
            shifted = edge_energy(four_cycle, S + step) - edge_energy(four_cycle, S)
            roots = np.sqrt(S + four_cycle.theta ** 2)
            rate = four_cycle.weight_matrix[i] @ roots / (2 * roots[i])
            assert shifted / h == pytest.approx(rate, rel=1e-5)
            assert sojourn_exponents(four_cycle, traj)[0] == pytest.approx(
                edge_energy(four_cycle, step), rel=1e-7
            )

    def test_mixture_on_random_paths(self, four_cycle):
        """Test f^Z = annealed f^X on random trajectories of the four-cycle."""
        rng = np.random.default_rng(79)
        for _ in range(100):
            states = [int(rng.integers(4))]
            for _ in range(int(rng.integers(0, 8))):
                states.append(int(rng.choice(four_cycle.neighbors(states[-1]))))
            traj = from_sojourns(states, rng.exponential(0.5, len(states)) + 1e-3)

            assert density_fZ(four_cycle, traj) == pytest.approx(density_fX_annealed(four_cycle, traj), rel=1e-9)
