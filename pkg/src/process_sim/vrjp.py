"""
Vertex-Reinforced Jump Process

Event-driven simulation of the VRJP and its time change.

While the walk sits at i, the rate W_ij L_j towards a neighbor j does not
move (L_j only grows while the walk is at j), so each sojourn is an
exponential holding time followed by a jump chosen proportionally to the
rates. The simulation is exact, with no time grid.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from src.models.trajectory import Trajectory
from src.models.weighted_graph import WeightedGraph
from src.utils.replicas import as_generator

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class StopRule:
    """
    When a simulation ends: at time ``horizon`` or after ``jumps`` jumps.

    Attributes:
        horizon: Final time T >= 0
        jumps: Number of jumps m >= 1
    """

    horizon: Optional[float] = None
    jumps: Optional[int] = None

    def __post_init__(self):
        """Exactly one criterion must be given."""
        if (self.horizon is None) == (self.jumps is None):
            raise ValueError("Give exactly one of horizon or jumps")
        if self.horizon is not None and not self.horizon >= 0:
            raise ValueError(f"Horizon {self.horizon} must be non-negative")
        if self.jumps is not None and self.jumps < 1:
            raise ValueError(f"Jump count {self.jumps} must be at least 1")


def exponential_holding(total_rate: float, rng: np.random.Generator) -> float:
    """Exp(total_rate) draw by inversion."""
    return -np.log1p(-rng.random()) / total_rate


def choose_target(neighbors: np.ndarray, rates: np.ndarray, rng: np.random.Generator) -> int:
    """Neighbor chosen with probability proportional to its rate."""
    cumulative = np.cumsum(rates)
    index = int(np.searchsorted(cumulative, rng.random() * cumulative[-1], side="right"))
    return int(neighbors[min(index, len(neighbors) - 1)])


def simulate_vrjp(
    graph: WeightedGraph,
    i0: int,
    stop: StopRule,
    rng: Union[int, np.random.Generator],
) -> Trajectory:
    """
    Simulate the VRJP started at i0 with L(0) = theta.

    Args:
        graph: Weighted graph
        i0: Starting vertex
        stop: Stop rule
        rng: Generator or seed

    Returns:
        Trajectory on the original clock
    """
    if not 0 <= i0 < graph.vertex_count:
        raise ValueError(f"Start vertex {i0} outside the graph")
    rng = as_generator(rng)
    W = graph.weight_matrix
    local = np.array(graph.theta, dtype=float)

    t = 0.0
    current = i0
    states = [i0]
    epochs = [0.0]
    while True:
        neighbors = graph.neighbors(current)
        if len(neighbors) == 0:
            if stop.horizon is None:
                raise ValueError("An isolated vertex cannot make jumps")
            break
        rates = W[current, neighbors] * local[neighbors]
        hold = exponential_holding(float(rates.sum()), rng)
        if stop.horizon is not None and t + hold >= stop.horizon:
            break
        t += hold
        local[current] += hold
        current = choose_target(neighbors, rates, rng)
        states.append(current)
        epochs.append(t)
        if stop.jumps is not None and len(states) - 1 == stop.jumps:
            break

    horizon = stop.horizon if stop.horizon is not None else t
    return Trajectory(tuple(states), tuple(epochs), horizon)


def time_change(traj: Trajectory, theta: Sequence[float]) -> Trajectory:
    """
    Map a VRJP path Y to Z_t = Y_{D^{-1}(t)} with D(s) = sum_i (L_i(s)^2 - theta_i^2).

    A sojourn at i of length u entered with L_i = l lasts (l + u)^2 - l^2
    on the new clock.

    Args:
        traj: Path on the original clock
        theta: Per-vertex theta

    Returns:
        Path with the same states on the time-changed clock
    """
    local = np.array(theta, dtype=float)
    durations = traj.durations()
    changed = np.empty_like(durations)
    for k, (state, u) in enumerate(zip(traj.states, durations)):
        start = local[state]
        changed[k] = u * (2 * start + u)
        local[state] = start + u
    return _rebuild(traj.states, changed)


def inverse_time_change(traj: Trajectory, theta: Sequence[float]) -> Trajectory:
    """
    Undo time_change.

    A sojourn at i of length v entered with S_i = sigma lasts
    sqrt(l^2 + v) - l on the original clock, where l = sqrt(theta_i^2 + sigma).

    Args:
        traj: Path on the time-changed clock
        theta: Per-vertex theta

    Returns:
        Path on the original clock
    """
    theta = np.asarray(theta, dtype=float)
    occupied = np.zeros(len(theta))
    durations = traj.durations()
    original = np.empty_like(durations)
    for k, (state, v) in enumerate(zip(traj.states, durations)):
        start = np.sqrt(theta[state] ** 2 + occupied[state])
        original[k] = v / (np.sqrt(start * start + v) + start)
        occupied[state] += v
    return _rebuild(traj.states, original)


def _rebuild(states: Tuple[int, ...], durations: np.ndarray) -> Trajectory:
    bounds = np.concatenate([[0.0], np.cumsum(durations)])
    return Trajectory(tuple(states), tuple(bounds[:-1]), float(bounds[-1]))


def skeleton(traj: Trajectory) -> Tuple[int, ...]:
    """Visited vertices in jump order."""
    return tuple(traj.states)
