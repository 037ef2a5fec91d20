"""
Fractional Moments

Monte-Carlo estimates of E[G(0, x)^s] on wired boxes, the exponential
decay fit of those estimates, the analytic diagonal moment, and the
variance of the potential at the box center.
"""

import logging
from functools import partial
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.special import gammaln

from src.graph_core.lattice import build_box, wired_edge_multiplicity
from src.green.operator import assemble_H_batch, certify_batch
from src.models.estimate_report import DecayFit, EstimateReport, FractionalMomentRow
from src.models.weight_law import WeightLaw
from src.models.weighted_graph import BoxSpec, WeightedGraph
from src.potential.sampler import sample_nu_batch
from src.utils.replicas import DEFAULT_BLOCK_SIZE, ReplicaPlan, run_values

logger = logging.getLogger(__name__)

DEFAULT_EXPONENT = 0.25
MIN_DECAY_POINTS = 3


def moment_constant(theta: float, s: float) -> float:
    """
    E[G(i0, i0)^s] = 2^{-s} Gamma(1/2 - s) / Gamma(1/2) theta^{2s}.

    G(i0, i0) = 1 / (2 gamma) with gamma ~ Gamma(1/2, rate theta^2).

    Args:
        theta: Vertex weight at i0
        s: Exponent in (0, 1/2)

    Returns:
        Positive constant
    """
    if not theta > 0:
        raise ValueError(f"theta={theta} must be positive")
    if not 0 < s < 0.5:
        raise ValueError(f"Exponent s={s} must lie in (0, 1/2); the diagonal moment diverges at 1/2")
    return float(np.exp(-s * np.log(2) + gammaln(0.5 - s) - gammaln(0.5) + 2 * s * np.log(theta)))


def _wired_graph(spec: BoxSpec, law: WeightLaw, theta: float) -> WeightedGraph:
    if not spec.wired:
        raise ValueError("Fractional moments are taken on the wired box")
    return build_box(spec, law.value, theta)


def _weight_stack(graph: WeightedGraph, edge_weights: np.ndarray) -> np.ndarray:
    size = len(edge_weights)
    n = graph.vertex_count
    i, j = graph.edges[:, 0], graph.edges[:, 1]
    W = np.zeros((size, n, n))
    W[:, i, j] = edge_weights
    W[:, j, i] = edge_weights
    return W


def _moment_block(
    graph: WeightedGraph,
    law: WeightLaw,
    multiplicity: np.ndarray,
    origin: int,
    columns: np.ndarray,
    s: float,
    rng: np.random.Generator,
    size: int,
) -> np.ndarray:
    W = _weight_stack(graph, law.draw(multiplicity, rng, size)) if law.is_random else None
    batch = sample_nu_batch(graph, size, rng, with_green=True, weights=W)
    certify_batch(assemble_H_batch(graph.weight_matrix if W is None else W, batch.betas))
    return batch.greens[:, origin, columns] ** s


def _target_points(spec: BoxSpec, targets: Sequence[Sequence[int]]) -> List[Tuple[int, ...]]:
    points = []
    for x in targets:
        offset = tuple(int(c) for c in x)
        point = tuple(c + o for c, o in zip(spec.center, offset))
        if len(offset) != spec.dimension or not spec.contains(point):
            raise ValueError(f"Target {offset} lies outside the box")
        points.append(offset)
    return points


def fractional_moment(
    spec: BoxSpec,
    w_law: Union[WeightLaw, float],
    theta: float,
    s: float = DEFAULT_EXPONENT,
    targets: Sequence[Sequence[int]] = (),
    n_samples: int = 2000,
    seed: int = 0,
    workers: int = 1,
    block_size: int = DEFAULT_BLOCK_SIZE,
) -> List[FractionalMomentRow]:
    """
    Estimate E[G(0, x)^s] for every target offset x.

    Each replica draws edge weights when the law is random, then beta
    from the exact sampler, and reads G off the Schur updates. H is
    Cholesky-factored as a positive-definiteness certificate.

    Args:
        spec: Wired box description; 0 is its center
        w_law: WeightLaw, or a number for deterministic weights
        theta: Vertex weight
        s: Exponent, default 1/4
        targets: Offsets x from the center
        n_samples: Number of replicas
        seed: Master seed
        workers: Worker processes
        block_size: Replicas per seeded block

    Returns:
        One FractionalMomentRow per target, in input order
    """
    law = w_law if isinstance(w_law, WeightLaw) else WeightLaw("deterministic", float(w_law))
    offsets = _target_points(spec, targets)
    if not offsets:
        raise ValueError("At least one target is required")
    if not s > 0:
        raise ValueError(f"Exponent s={s} must be positive")
    if s >= 0.5 and any(not any(x) for x in offsets):
        raise ValueError(f"Exponent s={s} >= 1/2 makes the diagonal moment infinite")

    graph = _wired_graph(spec, law, theta)
    origin = graph.index_of(spec.center)
    columns = np.array([graph.index_of(tuple(c + o for c, o in zip(spec.center, x))) for x in offsets])
    kernel = partial(_moment_block, graph, law, wired_edge_multiplicity(graph), origin, columns, s)
    values = run_values(kernel, ReplicaPlan(n_samples, seed, block_size), workers)

    rows = []
    for k, x in enumerate(offsets):
        report = EstimateReport.from_samples(values[:, k], seed)
        rows.append(FractionalMomentRow(target=x, distance=int(np.sum(np.abs(x))), report=report))
        logger.debug("E[G(0,%s)^%g] = %r", x, s, report)
    logger.info("Estimated %d fractional moments on %r", len(rows), graph)
    return rows


def axis_targets(dimension: int, side: int) -> List[Tuple[int, ...]]:
    """Offsets 0, e_1, 2 e_1, ..., side e_1 along the first axis."""
    return [(k,) + (0,) * (dimension - 1) for k in range(side + 1)]


def fit_decay(rows: Sequence[Union[FractionalMomentRow, Tuple[float, float]]]) -> DecayFit:
    """
    Least-squares fit of log E[G(0, x)^s] against |x|.

    Args:
        rows: FractionalMomentRow objects or (distance, estimate) pairs

    Returns:
        DecayFit with kappa = -slope
    """
    pairs = [
        (float(row.distance), float(row.report.estimate)) if isinstance(row, FractionalMomentRow)
        else (float(row[0]), float(row[1]))
        for row in rows
    ]
    distances = np.array([p[0] for p in pairs])
    estimates = np.array([p[1] for p in pairs])
    if np.any(estimates <= 0) or not np.all(np.isfinite(estimates)):
        raise ValueError("Decay fit needs positive finite estimates")
    if len(np.unique(distances)) < MIN_DECAY_POINTS:
        raise ValueError(f"Decay fit needs at least {MIN_DECAY_POINTS} distinct distances")

    logs = np.log(estimates)
    slope, intercept = np.polyfit(distances, logs, 1)
    residual = float(np.sum((logs - (slope * distances + intercept)) ** 2))
    total = float(np.sum((logs - logs.mean()) ** 2))
    if total == 0:
        r_squared = 1.0 if residual <= 1e-24 else 0.0
    else:
        r_squared = float(np.clip(1 - residual / total, 0.0, 1.0))
    kappa = 0.0 if total == 0 else float(-slope)
    return DecayFit(kappa=kappa, r_squared=r_squared, points=tuple(zip(distances.tolist(), logs.tolist())))


def variance_formula(d: int, W: float, theta: float) -> float:
    """
    Var(beta_i) = 1 / (2 theta^4) + d W / (2 theta^2) at a vertex of degree 2d.

    The variance of the one-site marginal GIG(1/2, 2 theta^2, 2 (d W theta)^2).
    """
    return 1 / (2 * theta ** 4) + d * W / (2 * theta * theta)


def stated_variance_formula(d: int, W: float, theta: float) -> float:
    """(1 + d W) / (2 theta^2), the printed form; it agrees with variance_formula only at theta = 1."""
    return (1 + d * W) / (2 * theta * theta)


def coupling_variance(d: int, W: float, theta: float) -> float:
    """Var(2 beta_i / W) = 2 / (theta^4 W^2) + 2 d / (theta^2 W)."""
    return 2 / (theta ** 4 * W * W) + 2 * d / (theta * theta * W)


def _center_block(graph: WeightedGraph, center: int, rng: np.random.Generator, size: int) -> np.ndarray:
    return sample_nu_batch(graph, size, rng).betas[:, center]


def variance_check(
    spec: BoxSpec,
    W: float,
    theta: float,
    n_samples: int,
    seed: int,
    workers: int = 1,
    block_size: int = DEFAULT_BLOCK_SIZE,
    vertex: Optional[Sequence[int]] = None,
) -> EstimateReport:
    """
    Monte-Carlo variance of beta at the center of the wired box.

    The report's estimate is the unbiased sample variance; its stderr is
    the standard error of the mean of the rescaled squared deviations.

    Args:
        spec: Box description (wired in any case)
        W: Edge weight
        theta: Vertex weight
        n_samples: Number of replicas
        seed: Master seed
        workers: Worker processes
        block_size: Replicas per seeded block
        vertex: Lattice point to sample, the center by default

    Returns:
        EstimateReport to compare with variance_formula
    """
    if spec.side < 2:
        raise ValueError("variance_check needs a box with an interior vertex (side >= 2)")
    if n_samples < 2:
        raise ValueError("A variance needs at least two replicas")
    wired = BoxSpec(spec.dimension, spec.side, spec.center, wired=True)
    graph = build_box(wired, W, theta)
    site = graph.index_of(spec.center if vertex is None else vertex)
    values = run_values(partial(_center_block, graph, site), ReplicaPlan(n_samples, seed, block_size), workers)
    n = len(values)
    squared = (values - np.sum(values) / n) ** 2 * n / (n - 1)
    report = EstimateReport.from_samples(squared, seed)
    logger.info("Var(beta) at %s: %r, formula %.6g", spec.center, report, variance_formula(spec.dimension, W, theta))
    return report
