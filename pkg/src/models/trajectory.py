"""
Trajectory Model

Finite continuous-time paths on a graph and their local times.
"""

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np
import pandas as pd

CLOCKS = ("S", "L")


@dataclass(frozen=True)
class Trajectory:
    """
    Piecewise-constant path X_[t_k, t_{k+1}) = states[k].

    Attributes:
        states: Visited vertices in jump order
        epochs: Start time of each sojourn; epochs[0] = 0
        horizon: Final time t
    """

    states: Tuple[int, ...]
    epochs: Tuple[float, ...]
    horizon: float

    def __post_init__(self):
        """Validate the path."""
        states = tuple(int(s) for s in self.states)
        epochs = tuple(float(e) for e in self.epochs)
        if not states:
            raise ValueError("A trajectory needs at least its starting state")
        if len(states) != len(epochs):
            raise ValueError(f"{len(states)} states but {len(epochs)} epochs")
        if epochs[0] != 0.0:
            raise ValueError(f"First epoch must be 0, got {epochs[0]}")
        if any(b <= a for a, b in zip(epochs, epochs[1:])):
            raise ValueError("Epochs must be strictly increasing")
        if self.horizon < epochs[-1]:
            raise ValueError(f"Horizon {self.horizon} precedes the last epoch {epochs[-1]}")
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "epochs", epochs)
        object.__setattr__(self, "horizon", float(self.horizon))

    @property
    def start(self) -> int:
        """Starting vertex i_0."""
        return self.states[0]

    @property
    def end(self) -> int:
        """Final vertex i_n."""
        return self.states[-1]

    @property
    def jump_count(self) -> int:
        """Number of jumps n."""
        return len(self.states) - 1

    def durations(self) -> np.ndarray:
        """Length of every sojourn, the last one ending at the horizon."""
        bounds = np.append(np.asarray(self.epochs), self.horizon)
        return np.diff(bounds)

    def occupation(self, vertex_count: int) -> np.ndarray:
        """
        Time spent at each vertex up to the horizon.

        Args:
            vertex_count: Number of vertices of the graph

        Returns:
            (N,) array of occupation times
        """
        out = np.zeros(vertex_count)
        np.add.at(out, np.asarray(self.states), self.durations())
        return out

    def check_adjacent(self, weight_matrix: np.ndarray) -> None:
        """
        Reject paths that jump along non-edges.

        Args:
            weight_matrix: Dense weight matrix of the graph

        Raises:
            ValueError: If two consecutive states are not adjacent
        """
        n = len(weight_matrix)
        for a, b in zip(self.states, self.states[1:]):
            if not (0 <= a < n and 0 <= b < n) or weight_matrix[a, b] <= 0:
                raise ValueError(f"States {a} and {b} are not adjacent")
        if not 0 <= self.states[0] < n:
            raise ValueError(f"State {self.states[0]} outside the graph")

    def to_frame(self) -> pd.DataFrame:
        """Table with columns epoch, state."""
        return pd.DataFrame({"epoch": list(self.epochs), "state": list(self.states)})


@dataclass(frozen=True, eq=False)
class LocalTimes:
    """
    Local times of a trajectory.

    Attributes:
        values: Per-vertex local times
        clock: 'S' for occupation on the time-changed clock,
            'L' for theta + occupation on the original clock
    """

    values: np.ndarray
    clock: str = "S"

    def __post_init__(self):
        """Validate the clock."""
        if self.clock not in CLOCKS:
            raise ValueError(f"Unknown clock '{self.clock}'")
        values = np.asarray(self.values, dtype=float)
        if np.any(values < 0):
            raise ValueError("Local times are non-negative")
        object.__setattr__(self, "values", values)

    @property
    def total(self) -> float:
        """Sum over vertices."""
        return float(np.sum(self.values))


def occupation_times(traj: Trajectory, vertex_count: int) -> LocalTimes:
    """S_i(t): time spent at each vertex."""
    return LocalTimes(traj.occupation(vertex_count), clock="S")


def vrjp_local_times(traj: Trajectory, theta: Sequence[float]) -> LocalTimes:
    """L_i(t) = theta_i + time spent at i."""
    theta_arr = np.asarray(theta, dtype=float)
    return LocalTimes(theta_arr + traj.occupation(len(theta_arr)), clock="L")


def single_state(vertex: int, horizon: float = 0.0) -> Trajectory:
    """Trajectory that never leaves ``vertex``."""
    return Trajectory((vertex,), (0.0,), horizon)


def from_sojourns(states: Sequence[int], durations: Sequence[float], horizon: Optional[float] = None) -> Trajectory:
    """
    Build a trajectory from sojourn lengths.

    Args:
        states: Visited vertices
        durations: One positive length per state; the last one runs to the horizon
        horizon: Optional explicit horizon (defaults to the total length)

    Returns:
        Trajectory
    """
    durations = np.asarray(durations, dtype=float)
    if len(durations) != len(states):
        raise ValueError("Need one duration per state")
    epochs = np.concatenate([[0.0], np.cumsum(durations[:-1])])
    end = float(np.sum(durations)) if horizon is None else horizon
    return Trajectory(tuple(states), tuple(epochs), end)
