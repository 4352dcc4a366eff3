"""
Decrease and inversion power over chains of E_k^n.

Both metrics are longest-path problems on the strict componentwise order, which
is acyclic.  Points are processed in a linear extension (coordinate sum, then
table index) and every comparable pair is an edge, so the dynamic programme is
exact for any system.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Iterable, List, NamedTuple, Sequence, Tuple, Union

import numpy as np

from .config import check_limit
from .kfunc import (Basis, FunctionSystem, KFunction, Point, index_point, leq_point,
                    point_index, points_array)
from .utils.logging_utils import DomainError
from .utils.performance import cached

logger = logging.getLogger(__name__)

Domain = Union[None, np.ndarray, Iterable[Sequence[int]], Iterable[int]]


class WitnessKind(Enum):
    DECREASE = "decrease"
    INVERSION_POWER = "inversion-power"


@dataclass(frozen=True)
class Chain:
    """Pairwise distinct points, each componentwise <= the next."""

    points: Tuple[Point, ...]

    def __post_init__(self):
        points = tuple(tuple(int(c) for c in p) for p in self.points)
        if not points:
            raise DomainError("a chain needs at least one point")
        if len(set(points)) != len(points):
            raise DomainError("chain points must be pairwise distinct", {"points": points})
        for a, b in zip(points, points[1:]):
            if not leq_point(a, b):
                raise DomainError("chain is not increasing", {"from": a, "to": b})
        object.__setattr__(self, 'points', points)

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    @property
    def initial(self) -> Point:
        return self.points[0]

    @property
    def terminal(self) -> Point:
        return self.points[-1]

    def check_compatible(self, k: int, n: int) -> None:
        for p in self.points:
            if len(p) != n or any(not 0 <= c < k for c in p):
                raise DomainError("chain point does not belong to E_k^n",
                                  {"point": p, "k": k, "n": n})

    def to_list(self) -> List[List[int]]:
        return [list(p) for p in self.points]


@dataclass(frozen=True)
class ChainWitness:
    """A chain certifying a decrease or inversion-power value."""

    chain: Chain
    value: int
    kind: WitnessKind

    def verify(self, target: Union[FunctionSystem, KFunction]) -> bool:
        """Re-evaluate the metric along the chain."""
        if self.kind is WitnessKind.DECREASE:
            system = target if isinstance(target, FunctionSystem) else FunctionSystem.of(target)
            return decrease_over_chain(self.chain, system) == self.value
        if isinstance(target, FunctionSystem):
            if len(target) != 1:
                raise DomainError("inversion power is defined for a single function")
            target = target[0]
        return inversion_power_over_chain(self.chain, target) == self.value

    def to_dict(self) -> dict:
        return {"kind": self.kind.value, "value": self.value, "chain": self.chain.to_list()}


@dataclass(frozen=True)
class BasisProfile:
    d_B: int
    u_B: int

    @property
    def exact(self) -> bool:
        """Lower and upper bounds coincide for every system."""
        return self.d_B + 1 == self.u_B


class Profile(NamedTuple):
    """Per-point DP values and parent pointers (-1 = none or outside the domain)."""

    values: np.ndarray
    parents: np.ndarray


def decrease_over_chain(chain: Chain, system: FunctionSystem) -> int:
    """Number of consecutive pairs of the chain that are jumps for the system."""
    chain.check_compatible(system.k, system.n)
    indices = [point_index(p, system.k) for p in chain.points]
    matrix = system.matrix
    return sum(1 for a, b in zip(indices, indices[1:]) if bool(np.any(matrix[:, a] > matrix[:, b])))


def inversion_power_over_chain(chain: Chain, f: KFunction) -> int:
    """Longest subsequence of the chain on which f strictly decreases."""
    chain.check_compatible(f.k, f.n)
    values = [f.at(p) for p in chain.points]
    longest = [1] * len(values)
    for j in range(len(values)):
        for i in range(j):
            if values[i] > values[j] and longest[i] + 1 > longest[j]:
                longest[j] = longest[i] + 1
    return max(longest)


@lru_cache(maxsize=64)
def linear_extension(k: int, n: int) -> np.ndarray:
    """Table indices ordered by coordinate sum, then lexicographically."""
    points = points_array(k, n)
    order = np.lexsort((np.arange(len(points)), points.sum(axis=1)))
    order.setflags(write=False)
    return order


def _check_analysis_size(k: int, n: int) -> None:
    if n < 1:
        raise DomainError("analysis needs at least one variable", {"n": n})
    check_limit('max_analysis_points', k ** n, "analysis size k^n")


def domain_array(k: int, n: int, domain: Domain) -> np.ndarray:
    """
    Normalise a domain description to a boolean mask over table indices.

    Args:
        k: Value count
        n: Number of variables
        domain: None (all of E_k^n), a boolean mask, table indices or points

    Returns:
        Boolean array of length k^n
    """
    size = k ** n
    if domain is None:
        return np.ones(size, dtype=bool)
    if isinstance(domain, np.ndarray) and domain.dtype == bool:
        if domain.shape != (size,):
            raise DomainError("domain mask has the wrong length", {"expected": size})
        return domain.copy()
    mask = np.zeros(size, dtype=bool)
    for item in domain:
        if isinstance(item, (int, np.integer)):
            if not 0 <= item < size:
                raise DomainError("domain index out of range", {"index": int(item)})
            mask[int(item)] = True
        else:
            if len(item) != n:
                raise DomainError("domain point has the wrong dimension", {"point": tuple(item)})
            mask[point_index(item, k)] = True
    return mask


def _walk_back(parents: np.ndarray, terminal: int, k: int, n: int) -> Chain:
    indices = [terminal]
    while parents[indices[-1]] >= 0:
        indices.append(int(parents[indices[-1]]))
    return Chain(tuple(index_point(i, k, n) for i in reversed(indices)))


def decrease_profile(system: FunctionSystem, domain: Domain = None) -> Profile:
    """
    Maximum decrease over chains inside ``domain`` ending at each point.

    Points outside the domain get -1.  Parent pointers prefer the smallest
    table index among maximal predecessors.
    """
    k, n = system.k, system.n
    _check_analysis_size(k, n)
    points = points_array(k, n)
    inside = domain_array(k, n, domain)
    matrix = system.matrix

    # -1 marks points outside the domain
    values = np.full(k ** n, -1, dtype=np.int64)
    parents = np.full(k ** n, -1, dtype=np.int64)
    for b in linear_extension(k, n):
        if not inside[b]:
            continue
        # Predecessors of b inside the domain, already final in this order
        below = np.all(points <= points[b], axis=1) & inside
        below[b] = False
        candidates = np.flatnonzero(below)
        best = 0
        if candidates.size:
            # A step counts when any member drops
            jumps = np.any(matrix[:, candidates] > matrix[:, b:b + 1], axis=0)
            scores = values[candidates] + jumps
            top = int(scores.max())
            if top > 0:
                best = top
                # argmax keeps the smallest index among ties
                parents[b] = candidates[int(np.argmax(scores))]
        values[b] = best
    return Profile(values, parents)


def decrease(system: FunctionSystem, domain_mask: Domain = None) -> Tuple[int, ChainWitness]:
    """
    Decrease d(F): maximum number of jumps over chains (inside the mask, if given).

    Returns:
        The value and a witness chain reproducing it
    """
    profile = decrease_profile(system, domain_mask)
    if not np.any(profile.values >= 0):
        raise DomainError("domain is empty")
    terminal = int(np.argmax(profile.values))
    value = int(profile.values[terminal])
    chain = _walk_back(profile.parents, terminal, system.k, system.n)
    logger.debug(f"decrease={value} over {int(np.sum(profile.values >= 0))} points")
    return value, ChainWitness(chain, value, WitnessKind.DECREASE)


def inversion_power(f: KFunction) -> Tuple[int, ChainWitness]:
    """
    Inversion power u(f): longest increasing sequence of distinct points on which
    f strictly decreases.

    Returns:
        The value and the witness sequence (itself a chain)
    """
    k, n = f.k, f.n
    _check_analysis_size(k, n)
    points = points_array(k, n)
    table = f.array

    lengths = np.ones(k ** n, dtype=np.int64)
    parents = np.full(k ** n, -1, dtype=np.int64)
    for b in linear_extension(k, n):
        below = np.all(points <= points[b], axis=1) & (table > table[b])
        candidates = np.flatnonzero(below)
        if candidates.size:
            j = int(np.argmax(lengths[candidates]))
            lengths[b] = lengths[candidates[j]] + 1
            parents[b] = candidates[j]
    terminal = int(np.argmax(lengths))
    value = int(lengths[terminal])
    chain = _walk_back(parents, terminal, k, n)
    return value, ChainWitness(chain, value, WitnessKind.INVERSION_POWER)


@cached()
def basis_profile(basis: Basis) -> BasisProfile:
    """d(B) and u(B) as maxima over the basis functions."""
    d_B = max(decrease(FunctionSystem.of(omega))[0] for omega in basis.omegas)
    u_B = max(inversion_power(omega)[0] for omega in basis.omegas)
    logger.debug(f"basis {', '.join(basis.names)}: d(B)={d_B} u(B)={u_B}")
    return BasisProfile(d_B, u_B)
