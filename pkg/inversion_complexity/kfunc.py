"""
Functions of k-valued logic.

A function f(x_1, ..., x_n) over E_k = {0, ..., k-1} is stored as its value
table.  Table position of a point is sum(x_i * k^(n-i)), so x_1 is the most
significant digit and ``itertools.product(range(k), repeat=n)`` enumerates
points in table order.
"""

import itertools
import logging
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Any, Callable, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .config import check_limit
from .utils.logging_utils import DomainError, ParseError

logger = logging.getLogger(__name__)

Point = Tuple[int, ...]


def as_int(value: Any, what: str) -> int:
    """Accept Python or numpy integers only; bools and floats are rejected, not truncated."""
    if isinstance(value, (bool, np.bool_)) or not isinstance(value, (int, np.integer)):
        raise DomainError(f"{what} must be an integer", {what: value})
    return int(value)


def _check_k(k: int) -> None:
    if as_int(k, "k") < 2:
        raise DomainError("k must be an integer >= 2", {"k": k})
    check_limit('max_k', k, "value count k")


def point_index(point: Sequence[int], k: int) -> int:
    """Table index of ``point``; x_1 is the most significant digit."""
    index = 0
    for value in point:
        if not 0 <= value < k:
            raise DomainError("coordinate outside E_k", {"value": value, "k": k})
        index = index * k + int(value)
    return index


def index_point(index: int, k: int, n: int) -> Point:
    """Inverse of :func:`point_index`."""
    if not 0 <= index < k ** n:
        raise DomainError("index outside E_k^n", {"index": index, "k": k, "n": n})
    digits = []
    for _ in range(n):
        index, digit = divmod(index, k)
        digits.append(digit)
    return tuple(reversed(digits))


@lru_cache(maxsize=64)
def points_array(k: int, n: int) -> np.ndarray:
    """All points of E_k^n as a read-only (k^n, n) array in table order."""
    if n == 0:
        grid = np.zeros((1, 0), dtype=np.int64)
    else:
        grid = np.array(list(itertools.product(range(k), repeat=n)), dtype=np.int64)
    grid.setflags(write=False)
    return grid


def iter_points(k: int, n: int) -> Iterator[Point]:
    """Iterate over E_k^n in table order."""
    return itertools.product(range(k), repeat=n)


def arity_from_size(k: int, size: int) -> int:
    """Recover n from a table of length k^n."""
    n, total = 0, 1
    while total < size:
        total *= k
        n += 1
    if total != size:
        raise DomainError("table length is not a power of k", {"k": k, "length": size})
    return n


def leq_point(a: Sequence[int], b: Sequence[int], k: Optional[int] = None) -> bool:
    """
    Componentwise order on E_k^n.

    Args:
        a: First point
        b: Second point
        k: Optional value count used to range-check coordinates

    Returns:
        True iff a_j <= b_j for every coordinate j
    """
    if len(a) != len(b):
        raise DomainError("points have different dimensions", {"a": tuple(a), "b": tuple(b)})
    if k is not None:
        for value in itertools.chain(a, b):
            if not 0 <= value < k:
                raise DomainError("coordinate outside E_k", {"value": value, "k": k})
    return all(x <= y for x, y in zip(a, b))


@dataclass(frozen=True)
class KFunction:
    """A total function E_k^n -> E_k given by its value table."""

    k: int
    n: int
    values: Tuple[int, ...]

    def __post_init__(self):
        _check_k(self.k)
        object.__setattr__(self, 'k', int(self.k))
        object.__setattr__(self, 'n', as_int(self.n, "n"))
        if self.n < 0:
            raise DomainError("n must be non-negative", {"n": self.n})
        check_limit('max_table_entries', self.k ** self.n, "table size k^n")
        values = tuple(as_int(v, "table entry") for v in self.values)
        if len(values) != self.k ** self.n:
            raise DomainError("table length must equal k^n",
                              {"k": self.k, "n": self.n, "length": len(values)})
        for v in values:
            if not 0 <= v < self.k:
                raise DomainError("table entry outside E_k", {"value": v, "k": self.k})
        object.__setattr__(self, 'values', values)

    @classmethod
    def from_callable(cls, k: int, n: int, fn: Callable[..., int]) -> "KFunction":
        """Tabulate ``fn(x_1, ..., x_n)`` over E_k^n."""
        return cls(k, n, tuple(fn(*point) for point in iter_points(k, n)))

    @property
    def size(self) -> int:
        return self.k ** self.n

    @cached_property
    def array(self) -> np.ndarray:
        """Read-only numpy view of the table."""
        table = np.array(self.values, dtype=np.int64)
        table.setflags(write=False)
        return table

    def __call__(self, *point: int) -> int:
        if len(point) != self.n:
            raise DomainError("wrong number of arguments", {"expected": self.n, "got": len(point)})
        return self.values[point_index(point, self.k)]

    def at(self, point: Sequence[int]) -> int:
        return self(*point)

    def to_dict(self) -> Dict[str, Any]:
        return {"k": self.k, "n": self.n, "values": list(self.values)}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "KFunction":
        try:
            return cls(as_int(data["k"], "k"), as_int(data["n"], "n"), tuple(data["values"]))
        except (KeyError, TypeError, ValueError) as e:
            raise ParseError(f"Invalid function description: {e}")
        except DomainError as e:
            raise ParseError(f"Invalid function description: {e.message}", e.details)


@dataclass(frozen=True)
class FunctionSystem:
    """An ordered, non-empty system F = {f_1, ..., f_m} sharing k and n."""

    k: int
    n: int
    members: Tuple[KFunction, ...]

    def __post_init__(self):
        members = tuple(self.members)
        if not members:
            raise DomainError("a function system needs at least one member")
        for f in members:
            if (f.k, f.n) != (self.k, self.n):
                raise DomainError("system members must share k and n",
                                  {"k": self.k, "n": self.n, "member_k": f.k, "member_n": f.n})
        object.__setattr__(self, 'members', members)

    @classmethod
    def of(cls, *members: KFunction) -> "FunctionSystem":
        if not members:
            raise DomainError("a function system needs at least one member")
        return cls(members[0].k, members[0].n, members)

    @classmethod
    def from_tables(cls, k: int, n: int, tables: Iterable[Sequence[int]]) -> "FunctionSystem":
        return cls(k, n, tuple(KFunction(k, n, tuple(t)) for t in tables))

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[KFunction]:
        return iter(self.members)

    def __getitem__(self, item: int) -> KFunction:
        return self.members[item]

    @property
    def size(self) -> int:
        return self.k ** self.n

    @cached_property
    def matrix(self) -> np.ndarray:
        """Read-only (m, k^n) matrix of member tables."""
        matrix = np.array([f.values for f in self.members], dtype=np.int64)
        matrix.setflags(write=False)
        return matrix

    def at(self, point: Sequence[int]) -> Tuple[int, ...]:
        index = point_index(point, self.k)
        return tuple(f.values[index] for f in self.members)

    def with_member(self, f: KFunction) -> "FunctionSystem":
        return FunctionSystem(self.k, self.n, self.members + (f,))

    def to_dict(self) -> Dict[str, Any]:
        return {"k": self.k, "n": self.n, "functions": [list(f.values) for f in self.members]}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "FunctionSystem":
        """Read a system file; a single-function file is accepted as a one-member system."""
        try:
            k, n = as_int(data["k"], "k"), as_int(data["n"], "n")
            if n < 1:
                raise DomainError("system files need n >= 1", {"n": n})
            tables = data["functions"] if "functions" in data else [data["values"]]
            return cls.from_tables(k, n, tables)
        except (KeyError, TypeError, ValueError) as e:
            raise ParseError(f"Invalid system description: {e}")
        except DomainError as e:
            raise ParseError(f"Invalid system description: {e.message}", e.details)


def is_jump(a: Sequence[int], b: Sequence[int], system: FunctionSystem) -> bool:
    """
    True iff a <= b and at least one member of the system drops from a to b.
    """
    if len(a) != system.n or len(b) != system.n:
        raise DomainError("point dimension does not match the system",
                          {"n": system.n, "a": tuple(a), "b": tuple(b)})
    if not leq_point(a, b, system.k):
        return False
    ia, ib = point_index(a, system.k), point_index(b, system.k)
    return any(f.values[ia] > f.values[ib] for f in system.members)


def is_monotone(f: KFunction) -> bool:
    """Check monotonicity on covering pairs (points differing by +1 in one coordinate)."""
    if f.n == 0:
        return True
    grid = f.array.reshape((f.k,) * f.n)
    return all(bool(np.all(np.diff(grid, axis=axis) >= 0)) for axis in range(f.n))


def post_negation(k: int) -> KFunction:
    """x + 1 (mod k)."""
    _check_k(k)
    return KFunction(k, 1, tuple((x + 1) % k for x in range(k)))


def lukasiewicz_negation(k: int) -> KFunction:
    """k - 1 - x."""
    _check_k(k)
    return KFunction(k, 1, tuple(k - 1 - x for x in range(k)))


def threshold(k: int, j: int) -> KFunction:
    """Unary 0/1 threshold: 1 iff x >= j.  j = 0 gives the constant 1."""
    if not 0 <= j <= k - 1:
        raise DomainError("threshold outside E_k", {"j": j, "k": k})
    return KFunction(k, 1, tuple(1 if x >= j else 0 for x in range(k)))


def constant(k: int, n: int, c: int) -> KFunction:
    if not 0 <= c < k:
        raise DomainError("constant outside E_k", {"c": c, "k": k})
    return KFunction(k, n, (c,) * (k ** n))


def projection(k: int, n: int, i: int) -> KFunction:
    """x_i, with 1-based i."""
    if not 1 <= i <= n:
        raise DomainError("projection index out of range", {"i": i, "n": n})
    return KFunction.from_callable(k, n, lambda *x: x[i - 1])


def indicator(k: int, n: int, points: Iterable[int], value: int = 1) -> KFunction:
    """Function equal to ``value`` on the given table indices and 0 elsewhere."""
    table = [0] * (k ** n)
    for index in points:
        table[index] = value
    return KFunction(k, n, tuple(table))


MONOTONE_KINDS = ("min", "max", "phi", "lambda", "const", "projection")


def named_monotone(kind: str, params: Optional[Dict[str, int]], k: int, n: int = 1) -> KFunction:
    """
    Build one of the named monotone helper functions.

    Args:
        kind: One of min, max, phi, lambda, const, projection
        params: ``{"j": ...}`` for lambda, ``{"c": ...}`` for const, ``{"i": ...}`` for projection
        k: Value count
        n: Arity for min, max, const and projection (phi and lambda are unary)

    Returns:
        The monotone function
    """
    params = params or {}
    _check_k(k)
    if kind in ("min", "max"):
        if n < 1:
            raise DomainError(f"{kind} needs at least one argument", {"n": n})
        fn = min if kind == "min" else max
        result = KFunction.from_callable(k, n, lambda *x: fn(x))
    elif kind == "phi":
        result = KFunction(k, 1, tuple(k - 1 if z != 0 else 0 for z in range(k)))
    elif kind == "lambda":
        j = params.get("j")
        if j is None or not 1 <= j <= k - 1:
            raise DomainError("lambda_j needs 1 <= j <= k-1", {"j": j, "k": k})
        result = threshold(k, j)
    elif kind == "const":
        result = constant(k, n, params.get("c", 0))
    elif kind == "projection":
        result = projection(k, n, params.get("i", 1))
    else:
        raise DomainError("unknown monotone function kind",
                          {"kind": kind, "known": ", ".join(MONOTONE_KINDS)})
    return result


@dataclass(frozen=True)
class Basis:
    """B = M + {omega_1, ..., omega_p}; the monotone class M is implicit."""

    k: int
    omegas: Tuple[KFunction, ...]
    names: Tuple[str, ...] = field(default=())

    def __post_init__(self):
        omegas = tuple(self.omegas)
        if not omegas:
            raise DomainError("a basis needs at least one non-monotone function")
        names = tuple(self.names) or tuple(f"omega{i + 1}" for i in range(len(omegas)))
        if len(names) != len(omegas) or len(set(names)) != len(names):
            raise DomainError("basis names must be unique, one per function", {"names": names})
        for name, omega in zip(names, omegas):
            if omega.k != self.k:
                raise DomainError("basis function has a different k", {"name": name, "k": omega.k})
            if is_monotone(omega):
                raise DomainError("omega must be non-monotone", {"name": name})
        object.__setattr__(self, 'omegas', omegas)
        object.__setattr__(self, 'names', names)

    def items(self) -> List[Tuple[str, KFunction]]:
        return list(zip(self.names, self.omegas))

    def get(self, name: str) -> KFunction:
        for own, omega in zip(self.names, self.omegas):
            if own == name:
                return omega
        raise DomainError("unknown basis function", {"name": name})

    def name_of(self, omega: KFunction) -> Optional[str]:
        for name, own in zip(self.names, self.omegas):
            if own == omega:
                return name
        return None

    def to_dict(self) -> Dict[str, Any]:
        return {"k": self.k, "basis": [{"name": name, "values": list(f.values)}
                                       for name, f in self.items()]}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Basis":
        try:
            k = as_int(data["k"], "k")
            names, omegas = [], []
            for entry in data["basis"]:
                values = tuple(entry["values"])
                names.append(str(entry["name"]))
                omegas.append(KFunction(k, arity_from_size(k, len(values)), values))
            return cls(k, tuple(omegas), tuple(names))
        except (KeyError, TypeError, ValueError) as e:
            raise ParseError(f"Invalid basis description: {e}")
        except DomainError as e:
            raise ParseError(f"Invalid basis description: {e.message}", e.details)


def standard_basis(kind: str, k: int) -> Basis:
    """B_P = M + {x+1 mod k} ('bp') or B_L = M + {k-1-x} ('bl')."""
    kind = kind.lower()
    if kind == "bp":
        return Basis(k, (post_negation(k),), ("post",))
    if kind == "bl":
        return Basis(k, (lukasiewicz_negation(k),), ("lukasiewicz",))
    raise DomainError("unknown standard basis", {"kind": kind})
