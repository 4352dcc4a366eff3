"""
Brute-force reference computations.

Chain enumeration walks the strict order graph of E_k^n depth first and is
only meant for tiny spaces.  Function-space scans run a batched numpy version
of the decrease recurrence over every function (or system) of a small space,
or over a seeded random sample of it.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Dict, Iterator, List, Optional, Tuple

import networkx as nx
import numpy as np

from .chains import linear_extension
from .config import config, check_limit
from .kfunc import FunctionSystem, KFunction, points_array
from .utils.logging_utils import DomainError
from .utils.performance import ProgressTracker

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ScanReport:
    k: int
    n: int
    m: Optional[int]
    max_decrease: int
    histogram: Dict[int, int]
    extremal_example: FunctionSystem
    scanned: int
    exhaustive: bool

    def to_dict(self) -> Dict[str, Any]:
        return {
            "k": self.k,
            "n": self.n,
            "m": self.m,
            "max_decrease": self.max_decrease,
            "histogram": {str(d): self.histogram[d] for d in sorted(self.histogram)},
            "extremal_example": self.extremal_example.to_dict(),
            "scanned": self.scanned,
            "exhaustive": self.exhaustive,
        }


@lru_cache(maxsize=16)
def order_graph(k: int, n: int) -> nx.DiGraph:
    """Strict componentwise order on table indices, one edge per comparable pair."""
    points = points_array(k, n)
    graph = nx.DiGraph()
    graph.add_nodes_from(range(len(points)))
    for b in range(len(points)):
        below = np.flatnonzero(np.all(points <= points[b], axis=1))
        graph.add_edges_from((int(a), b) for a in below if a != b)
    return graph


def iter_chains(k: int, n: int) -> Iterator[Tuple[int, ...]]:
    """Every chain of E_k^n as a tuple of table indices, shortest prefixes first."""
    check_limit('max_bruteforce_points', k ** n, "brute-force size k^n")
    graph = order_graph(k, n)

    def extend(chain: List[int]) -> Iterator[Tuple[int, ...]]:
        yield tuple(chain)
        for nxt in sorted(graph.successors(chain[-1])):
            chain.append(nxt)
            yield from extend(chain)
            chain.pop()

    for start in sorted(graph.nodes):
        yield from extend([start])


def decrease_bruteforce(system: FunctionSystem) -> int:
    """Maximum number of jumps over all chains, by enumeration."""
    matrix = system.matrix
    drops = np.any(matrix[:, :, None] > matrix[:, None, :], axis=0).tolist()
    best = 0
    for chain in iter_chains(system.k, system.n):
        best = max(best, sum(1 for a, b in zip(chain, chain[1:]) if drops[a][b]))
    return best


def _longest_strict_decrease(values: List[int]) -> int:
    longest = [1] * len(values)
    for j in range(len(values)):
        for i in range(j):
            if values[i] > values[j]:
                longest[j] = max(longest[j], longest[i] + 1)
    return max(longest)


def inversion_power_bruteforce(f: KFunction) -> int:
    """Maximum over all chains of the longest strictly decreasing subsequence of f."""
    table = f.values
    return max(_longest_strict_decrease([table[i] for i in chain]) for chain in iter_chains(f.k, f.n))


@lru_cache(maxsize=16)
def _predecessors(k: int, n: int) -> Tuple[np.ndarray, ...]:
    points = points_array(k, n)
    result = []
    for b in range(len(points)):
        below = np.all(points <= points[b], axis=1)
        below[b] = False
        result.append(np.flatnonzero(below))
    return tuple(result)


def batch_decrease(tables: np.ndarray, k: int, n: int) -> np.ndarray:
    """
    Decrease of many systems at once.

    Args:
        tables: Array of shape (batch, m, k^n)
        k: Value count
        n: Number of variables

    Returns:
        Array of shape (batch,) with d(F) per system
    """
    preds = _predecessors(k, n)
    best = np.zeros((tables.shape[0], k ** n), dtype=np.int64)
    for b in linear_extension(k, n):
        p = preds[b]
        if not p.size:
            continue
        jumps = np.any(tables[:, :, p] > tables[:, :, b:b + 1], axis=1)
        best[:, b] = np.max(best[:, p] + jumps, axis=1)
    return best.max(axis=1)


def _digits(indices: np.ndarray, base: int, width: int) -> np.ndarray:
    """Base-``base`` digits of each index, most significant first."""
    digits = np.empty((len(indices), width), dtype=np.int64)
    rest = indices.copy()
    for position in range(width - 1, -1, -1):
        digits[:, position] = rest % base
        rest //= base
    return digits


def _scan(k: int, n: int, m: int, sample: Optional[int], seed: Optional[int],
          description: str) -> ScanReport:
    if n < 1:
        raise DomainError("scans need at least one variable", {"n": n})
    if m < 1:
        raise DomainError("scans need at least one function", {"m": m})
    size = k ** n
    functions = k ** size
    space = functions ** m
    batch_size = int(config.get('oracle', 'batch_size', 65536))

    # Only exhaustive scans are size-guarded
    if sample is None:
        check_limit('max_scan_space', space, "scan space")
        total = space
    else:
        if sample < 1:
            raise DomainError("sample size must be positive", {"sample": sample})
        total = sample
        rng = np.random.default_rng(config.get('oracle', 'seed', 0) if seed is None else seed)

    progress = ProgressTracker(total, description, enabled=bool(config.get('oracle', 'progress', False)))
    counts: Dict[int, int] = {}
    best_value, best_tables = -1, None
    for start in range(0, total, batch_size):
        stop = min(start + batch_size, total)
        if sample is None:
            # Space index -> member function indices -> value tables
            members = _digits(np.arange(start, stop, dtype=np.int64), functions, m)
            tables = _digits(members.reshape(-1), k, size).reshape(stop - start, m, size)
        else:
            tables = rng.integers(0, k, size=(stop - start, m, size), dtype=np.int64)

        values = batch_decrease(tables, k, n)
        # Fold the batch into the histogram and keep the first extremal system
        found, found_counts = np.unique(values, return_counts=True)
        for value, count in zip(found.tolist(), found_counts.tolist()):
            counts[value] = counts.get(value, 0) + count
        top = int(values.max())
        if top > best_value:
            best_value = top
            best_tables = tables[int(np.argmax(values))]
        progress.update(stop - start)

    example = FunctionSystem.from_tables(k, n, best_tables.tolist())
    logger.info(f"{description}: {total} scanned, max decrease {best_value}")
    return ScanReport(k, n, None if m == 1 else m, best_value, counts, example, total, sample is None)


def scan_single_functions(k: int, n: int, sample: Optional[int] = None,
                          seed: Optional[int] = None) -> ScanReport:
    """Max decrease and its histogram over all n-ary functions of E_k."""
    return _scan(k, n, 1, sample, seed, f"Scanning functions k={k} n={n}")


def scan_systems(k: int, n: int, m: int, sample: Optional[int] = None,
                 seed: Optional[int] = None) -> ScanReport:
    """Max decrease and its histogram over all m-member systems of n-ary functions."""
    return _scan(k, n, m, sample, seed, f"Scanning systems k={k} n={n} m={m}")
