"""
Weighted Graph Model

Finite undirected graphs with edge weights W, vertex weights theta and a
non-negative boundary field eta. Lattice boxes remember their geometry so
that targets can be addressed by lattice point.
"""

from dataclasses import dataclass
from functools import cached_property
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components


@dataclass(frozen=True)
class BoxSpec:
    """
    A box [-n, n]^d of Z^d translated to ``center``.

    Attributes:
        dimension: Lattice dimension d
        side: Half-width n, so the box has 2n+1 sites per axis
        center: Lattice point at the middle of the box (origin by default)
        wired: Whether the box carries the extra boundary vertex
    """

    dimension: int
    side: int
    center: Tuple[int, ...] = ()
    wired: bool = False

    def __post_init__(self):
        """Validate the box description."""
        if self.dimension < 1:
            raise ValueError(f"Dimension {self.dimension} must be at least 1")
        if self.side < 1:
            raise ValueError(f"Side {self.side} must be at least 1")

        center = tuple(int(c) for c in self.center) or (0,) * self.dimension
        if len(center) != self.dimension:
            raise ValueError(
                f"Center {center} does not have {self.dimension} coordinates"
            )
        object.__setattr__(self, "center", center)

    @property
    def width(self) -> int:
        """Number of sites along each axis."""
        return 2 * self.side + 1

    @property
    def site_count(self) -> int:
        """Number of lattice sites, (2n+1)^d."""
        return self.width ** self.dimension

    def contains(self, point: Sequence[int]) -> bool:
        """
        Check whether a lattice point lies inside the box.

        Args:
            point: Lattice coordinates

        Returns:
            True if every coordinate is within side of the center
        """
        if len(point) != self.dimension:
            return False
        return all(abs(p - c) <= self.side for p, c in zip(point, self.center))

    def to_dict(self) -> Dict[str, Any]:
        """Convert to a plain dictionary."""
        return {
            "dimension": self.dimension,
            "side": self.side,
            "center": list(self.center),
            "wired": self.wired,
        }


EdgeList = Sequence[Tuple[int, int, float]]


@dataclass(frozen=True, eq=False)
class WeightedGraph:
    """
    Immutable weighted graph.

    Vertices are 0..vertex_count-1. On lattice boxes the first
    ``len(coordinates)`` vertices are lattice points in row-major order and
    the boundary vertex, when present, comes last.

    Attributes:
        vertex_count: Number of vertices N
        edges: (E, 2) array of vertex pairs with i < j
        weights: (E,) array of positive edge weights
        theta: (N,) array of positive vertex weights
        eta: (N,) array of non-negative boundary field values
        boundary: Index of the wired boundary vertex, if any
        coordinates: Lattice coordinates of the lattice vertices, if any
        box: Box description the graph was built from, if any
        lattice_weight: Uniform lattice edge weight used by the builder
    """

    vertex_count: int
    edges: np.ndarray
    weights: np.ndarray
    theta: np.ndarray
    eta: np.ndarray
    boundary: Optional[int] = None
    coordinates: Optional[np.ndarray] = None
    box: Optional[BoxSpec] = None
    lattice_weight: Optional[float] = None

    def __post_init__(self):
        """Coerce arrays, validate and freeze them."""
        if self.vertex_count < 1:
            raise ValueError(f"Vertex count {self.vertex_count} must be positive")

        n = self.vertex_count
        edges = np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)
        weights = np.asarray(self.weights, dtype=float).reshape(-1)
        theta = np.asarray(self.theta, dtype=float).reshape(-1)
        eta = np.asarray(self.eta, dtype=float).reshape(-1)

        if len(weights) != len(edges):
            raise ValueError(
                f"Got {len(weights)} weights for {len(edges)} edges"
            )
        if theta.shape != (n,) or eta.shape != (n,):
            raise ValueError(f"theta and eta need one entry per vertex ({n})")
        if len(edges) and (edges.min() < 0 or edges.max() >= n):
            raise ValueError("Edge endpoint outside the vertex range")
        if np.any(edges[:, 0] == edges[:, 1]):
            raise ValueError("Self-loops are not represented")
        if not np.all(np.isfinite(weights)) or np.any(weights <= 0):
            raise ValueError("Edge weights must be positive and finite")
        if not np.all(np.isfinite(theta)) or np.any(theta <= 0):
            raise ValueError("theta must be positive on every vertex")
        if not np.all(np.isfinite(eta)) or np.any(eta < 0):
            raise ValueError("eta must be non-negative on every vertex")

        edges = np.sort(edges, axis=1)
        keys = edges[:, 0] * n + edges[:, 1]
        if len(np.unique(keys)) != len(keys):
            raise ValueError("Duplicate edges are not allowed")

        if self.boundary is not None and not 0 <= self.boundary < n:
            raise ValueError(f"Boundary vertex {self.boundary} outside the graph")

        coordinates = None
        if self.coordinates is not None:
            coordinates = np.asarray(self.coordinates, dtype=np.int64)
            if coordinates.ndim != 2 or len(coordinates) > n:
                raise ValueError("coordinates must be an (M, d) array with M <= N")
            coordinates.setflags(write=False)

        for array in (edges, weights, theta, eta):
            array.setflags(write=False)

        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "eta", eta)
        object.__setattr__(self, "coordinates", coordinates)

        if n > 1:
            adjacency = coo_matrix(
                (np.ones(len(edges)), (edges[:, 0], edges[:, 1])), shape=(n, n)
            )
            components, _ = connected_components(adjacency, directed=False)
            if components != 1:
                raise ValueError(f"Graph must be connected, found {components} components")

    @classmethod
    def from_edges(
        cls,
        vertex_count: int,
        edge_list: EdgeList,
        theta: Union[float, Sequence[float]] = 1.0,
        eta: Union[float, Sequence[float], None] = None,
        boundary: Optional[int] = None,
    ) -> "WeightedGraph":
        """
        Build a graph from an explicit (i, j, W_ij) edge list.

        Args:
            vertex_count: Number of vertices
            edge_list: Triples (i, j, weight)
            theta: Scalar or per-vertex theta
            eta: Scalar or per-vertex eta (zero when omitted)
            boundary: Optional boundary vertex index

        Returns:
            WeightedGraph instance
        """
        edges = np.array([(i, j) for i, j, _ in edge_list], dtype=np.int64).reshape(-1, 2)
        weights = np.array([w for _, _, w in edge_list], dtype=float)
        theta_arr = np.broadcast_to(np.asarray(theta, dtype=float), (vertex_count,)).copy()
        eta_arr = np.zeros(vertex_count) if eta is None else np.broadcast_to(
            np.asarray(eta, dtype=float), (vertex_count,)
        ).copy()
        return cls(vertex_count, edges, weights, theta_arr, eta_arr, boundary=boundary)

    @property
    def edge_count(self) -> int:
        """Number of edges."""
        return len(self.edges)

    @property
    def is_wired(self) -> bool:
        """Whether the graph carries a boundary vertex."""
        return self.boundary is not None

    @cached_property
    def weight_matrix(self) -> np.ndarray:
        """Dense symmetric matrix of edge weights with zero diagonal."""
        matrix = np.zeros((self.vertex_count, self.vertex_count))
        i, j = self.edges[:, 0], self.edges[:, 1]
        matrix[i, j] = self.weights
        matrix[j, i] = self.weights
        matrix.setflags(write=False)
        return matrix

    @cached_property
    def _neighbor_lists(self) -> List[np.ndarray]:
        matrix = self.weight_matrix
        return [np.flatnonzero(matrix[i]) for i in range(self.vertex_count)]

    def neighbors(self, vertex: int) -> np.ndarray:
        """
        Neighbors of a vertex in increasing index order.

        Args:
            vertex: Vertex index

        Returns:
            Array of neighbor indices
        """
        return self._neighbor_lists[vertex]

    def are_adjacent(self, i: int, j: int) -> bool:
        """Check whether {i, j} is an edge."""
        return bool(self.weight_matrix[i, j] > 0)

    @cached_property
    def _point_index(self) -> Dict[Tuple[int, ...], int]:
        if self.coordinates is None:
            return {}
        return {tuple(int(c) for c in point): k for k, point in enumerate(self.coordinates)}

    def index_of(self, point: Sequence[int]) -> int:
        """
        Vertex index of a lattice point.

        Args:
            point: Lattice coordinates

        Returns:
            Vertex index

        Raises:
            ValueError: If the graph has no lattice geometry or the point is outside
        """
        key = tuple(int(c) for c in point)
        if key not in self._point_index:
            raise ValueError(f"Lattice point {key} is not a vertex of this graph")
        return self._point_index[key]

    def symmetry_audit(self) -> bool:
        """Check W_ij = W_ji for every stored pair."""
        matrix = self.weight_matrix
        return bool(np.array_equal(matrix, matrix.T)) and not np.any(np.diag(matrix))

    def with_field(self, eta: Union[float, Sequence[float]]) -> "WeightedGraph":
        """Return a copy with a different boundary field."""
        eta_arr = np.broadcast_to(np.asarray(eta, dtype=float), (self.vertex_count,)).copy()
        return self._replace(eta=eta_arr)

    def with_weights(self, weights: Sequence[float]) -> "WeightedGraph":
        """Return a copy with new edge weights on the same edges."""
        return self._replace(weights=np.asarray(weights, dtype=float), lattice_weight=None)

    def _replace(self, **changes: Any) -> "WeightedGraph":
        fields = {
            "vertex_count": self.vertex_count,
            "edges": self.edges,
            "weights": self.weights,
            "theta": self.theta,
            "eta": self.eta,
            "boundary": self.boundary,
            "coordinates": self.coordinates,
            "box": self.box,
            "lattice_weight": self.lattice_weight,
        }
        fields.update(changes)
        return WeightedGraph(**fields)

    def __eq__(self, other: object) -> bool:
        """Exact equality of structure and every stored number."""
        if not isinstance(other, WeightedGraph):
            return NotImplemented
        same_coordinates = (
            (self.coordinates is None and other.coordinates is None)
            or (
                self.coordinates is not None
                and other.coordinates is not None
                and np.array_equal(self.coordinates, other.coordinates)
            )
        )
        return (
            self.vertex_count == other.vertex_count
            and np.array_equal(self.edges, other.edges)
            and np.array_equal(self.weights, other.weights)
            and np.array_equal(self.theta, other.theta)
            and np.array_equal(self.eta, other.eta)
            and self.boundary == other.boundary
            and self.box == other.box
            and self.lattice_weight == other.lattice_weight
            and same_coordinates
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        """Return a short description."""
        kind = "wired " if self.is_wired else ""
        return (
            f"WeightedGraph({kind}N={self.vertex_count}, E={self.edge_count})"
        )
