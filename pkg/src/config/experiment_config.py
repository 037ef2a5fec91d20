"""
Experiment Configuration

Loads and validates experiment settings from YAML. Every subcommand has a
desk-scale default configuration; a file only overrides the fields it
names, and command-line flags override the file.
"""

import copy
import logging
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import yaml

from src.errors import ConfigError
from src.graph_core.lattice import build_box
from src.models.weight_law import WeightLaw
from src.models.weighted_graph import BoxSpec, WeightedGraph

logger = logging.getLogger(__name__)

COMMANDS = (
    "sample-potential",
    "ward-check",
    "green-check",
    "simulate",
    "mixture-test",
    "errw-equivalence",
    "fractional-decay",
    "thresholds",
    "localization",
    "tau-check",
    "variance-check",
    "eta-decay",
)

# Commands without randomness run without a seed.
DETERMINISTIC_COMMANDS = ("thresholds", "tau-check")

PROCESSES = ("vrjp", "errw", "quenched")

THREE_PATH = [[0, 1, 1.0], [1, 2, 1.0]]
TRIANGLE = [[0, 1, 1.0], [1, 2, 1.0], [0, 2, 1.0]]

BASE: Dict[str, Any] = {
    "seed": None,
    "workers": 1,
    "out": None,
    "graph": {
        "dimension": 1,
        "side": 1,
        "wired": True,
        "weight_law": {"kind": "deterministic", "value": 1.0},
        "theta": 1.0,
        "vertex_count": None,
        "edges": None,
    },
    "estimator": {
        "n_samples": 2000,
        "exponent": 0.25,
        "targets": None,
        "prefix_len": 3,
        "block_size": 1024,
        "k": None,
        "i0": 0,
        "l": None,
        "max_len": 200,
        "jumps": 10,
        "horizon": None,
        "process": "vrjp",
        "thetas": [0.1, 1.0, 10.0],
        "d0s": [0.0, 3.0],
        "sides": [1, 2, 4, 8],
        "d_values": [1, 2, 3],
        "variance_cases": [[1, 1.0, 1.0], [2, 0.5, 1.0], [2, 0.5, 2.0]],
    },
    "tolerances": {
        "se_multiplier": 4.0,
        "p_threshold": 0.01,
        "identity": 1e-10,
        "truncation": 1e-8,
        "tau_slope": 0.02,
        "r_squared": 0.9,
    },
}

COMMAND_DEFAULTS: Dict[str, Dict[str, Any]] = {
    "sample-potential": {
        "graph": {"vertex_count": 3, "edges": THREE_PATH},
        "estimator": {"n_samples": 20000},
    },
    "ward-check": {
        "graph": {"vertex_count": 3, "edges": THREE_PATH},
        "estimator": {"n_samples": 20000, "k": [0.5, 1.0, 0.3], "i0": 0, "l": 2},
    },
    "green-check": {
        "graph": {"dimension": 2, "side": 1, "wired": True},
        "estimator": {"n_samples": 20, "max_len": 200},
    },
    "simulate": {
        "graph": {"vertex_count": 3, "edges": TRIANGLE},
        "estimator": {"n_samples": 5, "jumps": 10, "process": "vrjp"},
    },
    "mixture-test": {
        "graph": {"vertex_count": 3, "edges": TRIANGLE},
        "estimator": {"n_samples": 20000, "prefix_len": 3},
    },
    "errw-equivalence": {
        "graph": {"vertex_count": 3, "edges": TRIANGLE},
        "estimator": {"n_samples": 20000, "prefix_len": 3},
    },
    "fractional-decay": {
        "graph": {
            "dimension": 1,
            "side": 20,
            "wired": True,
            "weight_law": {"kind": "deterministic", "value": 0.01},
        },
        "estimator": {"n_samples": 2000},
    },
    "localization": {
        "graph": {"dimension": 1, "side": 50, "wired": False},
        "estimator": {"n_samples": 200, "thetas": [0.1, 10.0]},
    },
    "variance-check": {
        "graph": {"side": 2},
        "estimator": {"n_samples": 20000},
    },
    "eta-decay": {
        "estimator": {"n_samples": 2000, "sides": [1, 2, 4, 8]},
    },
}


def merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    """Recursive dictionary merge; ``override`` wins and is not mutated."""
    out = copy.deepcopy(base)
    for key, value in (override or {}).items():
        if isinstance(value, dict) and isinstance(out.get(key), dict):
            out[key] = merge(out[key], value)
        else:
            out[key] = copy.deepcopy(value)
    return out


def command_defaults(command: str) -> Dict[str, Any]:
    """Full default configuration of one subcommand."""
    if command not in COMMANDS:
        raise ConfigError(f"Unknown command '{command}'")
    return merge(BASE, COMMAND_DEFAULTS.get(command, {}))


@dataclass
class GraphSection:
    """Graph of the experiment: a lattice box or an explicit edge list."""

    dimension: int = 1
    side: int = 1
    wired: bool = True
    weight_law: WeightLaw = field(default_factory=lambda: WeightLaw("deterministic", 1.0))
    theta: float = 1.0
    vertex_count: Optional[int] = None
    edges: Optional[List[List[float]]] = None

    @property
    def box(self) -> BoxSpec:
        """Box description of the lattice variant."""
        return BoxSpec(self.dimension, self.side, wired=self.wired)

    @property
    def is_explicit(self) -> bool:
        """Whether the graph comes from an edge list."""
        return self.edges is not None

    def build(self, theta: Optional[float] = None) -> WeightedGraph:
        """
        Build the graph with deterministic weights.

        Explicit edge lists use their own weights; boxes use the law's value.

        Args:
            theta: Override of the configured theta

        Returns:
            WeightedGraph
        """
        theta = self.theta if theta is None else theta
        if self.is_explicit:
            triples = [(int(i), int(j), float(w)) for i, j, w in self.edges]
            return WeightedGraph.from_edges(int(self.vertex_count), triples, theta=theta)
        if self.weight_law.is_random:
            logger.warning(
                "Weight law %s is random; this command uses its shape a=%g as a fixed weight on every edge",
                self.weight_law.kind, self.weight_law.value,
            )
        return build_box(self.box, self.weight_law.value, theta)

    def to_dict(self) -> Dict[str, Any]:
        """Convert to a plain dictionary."""
        data = asdict(self)
        data["weight_law"] = self.weight_law.to_dict()
        return data


@dataclass
class EstimatorSection:
    """Monte-Carlo and per-subcommand parameters."""

    n_samples: int = 2000
    exponent: float = 0.25
    targets: Optional[List[List[int]]] = None
    prefix_len: int = 3
    block_size: int = 1024
    k: Optional[List[float]] = None
    i0: int = 0
    l: Optional[int] = None
    max_len: int = 200
    jumps: int = 10
    horizon: Optional[float] = None
    process: str = "vrjp"
    thetas: List[float] = field(default_factory=list)
    d0s: List[float] = field(default_factory=list)
    sides: List[int] = field(default_factory=list)
    d_values: List[int] = field(default_factory=list)
    variance_cases: List[List[float]] = field(default_factory=list)


@dataclass
class Tolerances:
    """PASS/FAIL thresholds."""

    se_multiplier: float = 4.0
    p_threshold: float = 0.01
    identity: float = 1e-10
    truncation: float = 1e-8
    tau_slope: float = 0.02
    r_squared: float = 0.9


@dataclass
class ExperimentConfig:
    """
    Complete description of one run.

    Attributes:
        command: Subcommand name
        seed: Master seed (None only for deterministic commands)
        workers: Worker processes
        out: Path of the main CSV artifact
        graph: Graph section
        estimator: Estimator section
        tolerances: PASS/FAIL thresholds
    """

    command: str
    seed: Optional[int]
    workers: int
    out: Optional[str]
    graph: GraphSection
    estimator: EstimatorSection
    tolerances: Tolerances

    def output_path(self) -> Path:
        """Main CSV path, results/<command>.csv by default."""
        return Path(self.out) if self.out else Path("results") / f"{self.command}.csv"

    def to_dict(self) -> Dict[str, Any]:
        """Stable structured form with the same field names as the YAML file."""
        return {
            "command": self.command,
            "seed": self.seed,
            "workers": self.workers,
            "out": self.out,
            "graph": self.graph.to_dict(),
            "estimator": asdict(self.estimator),
            "tolerances": asdict(self.tolerances),
        }

    def to_yaml(self) -> str:
        """YAML rendering of to_dict."""
        return yaml.safe_dump(self.to_dict(), sort_keys=False)


class ConfigLoader:
    """
    Loads an experiment configuration file and merges it over the
    defaults of a subcommand.
    """

    def __init__(self, config_path: Optional[Path] = None):
        """
        Initialize the loader.

        Args:
            config_path: YAML file, or None to run on defaults
        """
        self.config_path = Path(config_path) if config_path is not None else None
        self.data: Dict[str, Any] = {}
        self.errors: List[str] = []

    def load(self) -> bool:
        """
        Read the YAML file.

        Returns:
            True if the file was read (or no file was given), False otherwise
        """
        self.errors = []
        if self.config_path is None:
            self.data = {}
            return True
        if not self.config_path.exists():
            self.errors.append(f"Configuration file not found: {self.config_path}")
            return False
        try:
            with open(self.config_path, "r", encoding="utf-8") as f:
                data = yaml.safe_load(f)
        except yaml.YAMLError as exc:
            self.errors.append(f"Cannot parse {self.config_path}: {exc}")
            return False
        if not data:
            self.errors.append(f"Configuration file {self.config_path} is empty")
            return False
        if not isinstance(data, dict):
            self.errors.append(f"Configuration file {self.config_path} must hold a mapping")
            return False
        self.data = data
        logger.debug("Loaded configuration from %s", self.config_path)
        return True

    def _parse_graph(self, data: Dict[str, Any]) -> GraphSection:
        """Build the graph section, collecting problems."""
        law_data = data.get("weight_law") or {}
        try:
            law = WeightLaw.from_dict(law_data)
        except (KeyError, TypeError, ValueError) as exc:
            self.errors.append(f"graph.weight_law: {exc}")
            law = WeightLaw("deterministic", 1.0)
        return GraphSection(
            dimension=int(data.get("dimension", 1)),
            side=int(data.get("side", 1)),
            wired=bool(data.get("wired", True)),
            weight_law=law,
            theta=float(data.get("theta", 1.0)),
            vertex_count=data.get("vertex_count"),
            edges=data.get("edges"),
        )

    def _parse_estimator(self, data: Dict[str, Any]) -> EstimatorSection:
        """Build the estimator section; unknown keys are reported."""
        known = set(EstimatorSection.__dataclass_fields__)
        for key in sorted(set(data) - known):
            self.errors.append(f"estimator.{key}: unknown field")
        return EstimatorSection(**{k: v for k, v in data.items() if k in known})

    def _parse_tolerances(self, data: Dict[str, Any]) -> Tolerances:
        """Build the tolerance section; unknown keys are reported."""
        known = set(Tolerances.__dataclass_fields__)
        for key in sorted(set(data) - known):
            self.errors.append(f"tolerances.{key}: unknown field")
        return Tolerances(**{k: float(v) for k, v in data.items() if k in known})

    def build(self, command: str, overrides: Optional[Dict[str, Any]] = None) -> ExperimentConfig:
        """
        Merge defaults, file and overrides into an ExperimentConfig.

        Args:
            command: Subcommand name
            overrides: Values from command-line flags (None entries ignored)

        Returns:
            ExperimentConfig

        Raises:
            ConfigError: If the file cannot be read or the result does not validate
        """
        if not self.load():
            raise ConfigError("; ".join(self.errors))
        merged = merge(command_defaults(command), self.data)
        merged = merge(merged, {k: v for k, v in (overrides or {}).items() if v is not None})

        try:
            config = ExperimentConfig(
                command=command,
                seed=None if merged.get("seed") is None else int(merged["seed"]),
                workers=int(merged.get("workers", 1)),
                out=merged.get("out"),
                graph=self._parse_graph(merged.get("graph") or {}),
                estimator=self._parse_estimator(merged.get("estimator") or {}),
                tolerances=self._parse_tolerances(merged.get("tolerances") or {}),
            )
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"Invalid configuration: {exc}") from exc

        is_valid, problems = self.validate(config)
        if not is_valid:
            raise ConfigError("; ".join(problems))
        return config

    def validate(self, config: ExperimentConfig) -> Tuple[bool, List[str]]:
        """
        Check a configuration.

        Returns:
            Tuple of (is_valid, list_of_errors)
        """
        errors = list(self.errors)
        if config.command not in DETERMINISTIC_COMMANDS:
            if config.seed is None:
                errors.append("seed: a master seed is required")
        if config.seed is not None and config.seed < 0:
            errors.append(f"seed must be non-negative, got {config.seed}")
        if config.workers < 1:
            errors.append(f"workers must be at least 1, got {config.workers}")

        graph = config.graph
        if graph.is_explicit:
            if not graph.vertex_count or int(graph.vertex_count) < 1:
                errors.append("graph.vertex_count must be positive with explicit edges")
            elif any(len(edge) != 3 for edge in graph.edges):
                errors.append("graph.edges entries must be [i, j, weight]")
        else:
            if graph.dimension < 1:
                errors.append(f"graph.dimension must be at least 1, got {graph.dimension}")
            if graph.side < 1:
                errors.append(f"graph.side must be at least 1, got {graph.side}")
        if not graph.theta > 0:
            errors.append(f"graph.theta must be positive, got {graph.theta}")

        est = config.estimator
        for name in ("n_samples", "prefix_len", "block_size", "jumps"):
            if getattr(est, name) < 1:
                errors.append(f"estimator.{name} must be positive, got {getattr(est, name)}")
        if est.max_len < 0:
            errors.append(f"estimator.max_len must be non-negative, got {est.max_len}")
        if est.process not in PROCESSES:
            errors.append(f"estimator.process must be one of {PROCESSES}, got '{est.process}'")
        if not est.exponent > 0:
            errors.append(f"estimator.exponent must be positive, got {est.exponent}")

        tol = config.tolerances
        if not 0 < tol.p_threshold < 1:
            errors.append(f"tolerances.p_threshold must lie in (0, 1), got {tol.p_threshold}")
        if not tol.se_multiplier > 0:
            errors.append(f"tolerances.se_multiplier must be positive, got {tol.se_multiplier}")

        return len(errors) == 0, errors

    def __repr__(self) -> str:
        """Return string representation."""
        return f"ConfigLoader(config_path={self.config_path})"
