"""
Replica Streams

Deterministic random streams for Monte-Carlo replicas.

Replicas are cut into fixed blocks. Block b of stream s draws from
SeedSequence(seed, spawn_key=(s, b)), so the numbers a replica sees never
depend on how many workers run the blocks.
"""

import concurrent.futures as cf
import logging
from dataclasses import dataclass
from typing import Any, Callable, List, Tuple, Union

import numpy as np

logger = logging.getLogger(__name__)

DEFAULT_BLOCK_SIZE = 1024

BlockKernel = Callable[[np.random.Generator, int], Any]


@dataclass(frozen=True)
class ReplicaPlan:
    """
    Split of n_samples replicas into seeded blocks.

    Attributes:
        n_samples: Total number of replicas
        seed: Master seed
        block_size: Replicas per block (the last block may be shorter)
        stream: Independent stream index under the same seed
    """

    n_samples: int
    seed: int
    block_size: int = DEFAULT_BLOCK_SIZE
    stream: int = 0

    def __post_init__(self):
        """Validate the plan."""
        if self.n_samples < 1:
            raise ValueError(f"n_samples={self.n_samples} must be positive")
        if self.seed is None or self.seed < 0:
            raise ValueError(f"A non-negative master seed is required, got {self.seed}")
        if self.block_size < 1:
            raise ValueError(f"block_size={self.block_size} must be positive")

    def blocks(self) -> List[Tuple[int, int]]:
        """(block index, block length) pairs in order."""
        full, rest = divmod(self.n_samples, self.block_size)
        sizes = [self.block_size] * full + ([rest] if rest else [])
        return list(enumerate(sizes))

    def generator(self, block: int) -> np.random.Generator:
        """Random generator of one block."""
        return np.random.default_rng(np.random.SeedSequence(self.seed, spawn_key=(self.stream, block)))


def as_generator(rng: Union[int, np.random.Generator, None]) -> np.random.Generator:
    """
    Accept a generator or a seed.

    Args:
        rng: Generator, or a non-negative integer seed

    Returns:
        numpy Generator
    """
    if isinstance(rng, np.random.Generator):
        return rng
    if rng is None:
        raise ValueError("A seed or generator is required")
    return np.random.default_rng(int(rng))


def _run_block(kernel: BlockKernel, plan: ReplicaPlan, block: int, size: int) -> Any:
    return kernel(plan.generator(block), size)


def run_blocks(kernel: BlockKernel, plan: ReplicaPlan, workers: int = 1) -> List[Any]:
    """
    Evaluate ``kernel(rng, size)`` on every block.

    Args:
        kernel: Picklable callable (module-level function or partial) when workers > 1
        plan: Replica plan
        workers: Number of processes; 1 runs in the calling process

    Returns:
        Kernel results in block order
    """
    blocks = plan.blocks()
    logger.debug("Running %d replicas in %d blocks on %d worker(s)", plan.n_samples, len(blocks), workers)
    if workers <= 1 or len(blocks) == 1:
        return [_run_block(kernel, plan, b, size) for b, size in blocks]

    with cf.ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(_run_block, kernel, plan, b, size) for b, size in blocks]
        return [future.result() for future in futures]


def run_values(kernel: BlockKernel, plan: ReplicaPlan, workers: int = 1) -> np.ndarray:
    """
    Concatenate per-block value arrays along the first axis.

    Args:
        kernel: Block kernel returning an array with one row per replica
        plan: Replica plan
        workers: Number of processes

    Returns:
        Array of n_samples rows
    """
    return np.concatenate([np.asarray(part) for part in run_blocks(kernel, plan, workers)])
