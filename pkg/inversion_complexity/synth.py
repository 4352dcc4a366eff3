"""
Bounds on inversion complexity and constructive synthesis.

``synthesize`` builds, for a system F and a non-monotone omega with inversion
power s = u(omega), a circuit over M + {omega} with at most
ceil(log_s(d(F) + 1)) omega gates.  Each recursion level splits E_k^n into
level classes T_1..T_s, clamps F to each class, realizes the clamped systems
recursively, merges them with an s-connector and drives the connector's
selector inputs from one shared omega gate.
"""

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Dict, FrozenSet, List, Optional, Sequence, Tuple

import numpy as np

from .chains import basis_profile, decrease, decrease_profile, inversion_power
from .circuit import (Circuit, CircuitBuilder, excise_first_omega, inversion_weight,
                      realized_system, substitute_inputs)
from .kfunc import (Basis, FunctionSystem, KFunction, Point, constant, index_point, indicator,
                    is_monotone, named_monotone, points_array, standard_basis, threshold)
from .utils.logging_utils import DomainError, InvariantViolation

logger = logging.getLogger(__name__)


def ceil_log(base: int, x: int) -> int:
    """Smallest r >= 0 with base^r >= x, computed on integers."""
    if base < 2:
        raise DomainError("logarithm base must be >= 2", {"base": base})
    if x < 1:
        raise DomainError("logarithm argument must be >= 1", {"x": x})
    r, power = 0, 1
    while power < x:
        power *= base
        r += 1
    return r


@dataclass(frozen=True)
class BoundsReport:
    d_F: int
    lower: int
    upper: int
    exact: Optional[int]
    d_B: int
    u_B: int

    def to_dict(self) -> Dict[str, Any]:
        return {"d_F": self.d_F, "lower": self.lower, "upper": self.upper,
                "exact": self.exact, "d_B": self.d_B, "u_B": self.u_B}


def bounds(system: FunctionSystem, basis: Basis) -> BoundsReport:
    """Lower bound ceil(log_{d(B)+1}(d(F)+1)) and upper bound ceil(log_{u(B)}(d(F)+1))."""
    if basis.k != system.k:
        raise DomainError("basis and system use different k", {"basis_k": basis.k, "system_k": system.k})
    d_F, _ = decrease(system)
    profile = basis_profile(basis)
    lower = ceil_log(profile.d_B + 1, d_F + 1)
    upper = ceil_log(profile.u_B, d_F + 1)
    if lower > upper:
        raise InvariantViolation("lower bound exceeds upper bound", {"lower": lower, "upper": upper})
    exact = lower if profile.exact else None
    return BoundsReport(d_F, lower, upper, exact, profile.d_B, profile.u_B)


@dataclass(frozen=True)
class LevelPartition:
    """
    Level classes T_1..T_s of E_k^n (table indices), the decrease threshold, and
    the omega chain beta_1 < ... < beta_s with levels b_i = omega(beta_i).
    """

    k: int
    n: int
    classes: Tuple[FrozenSet[int], ...]
    threshold: int
    witness_chain: Tuple[Point, ...] = ()
    levels: Tuple[int, ...] = ()

    @property
    def s(self) -> int:
        return len(self.classes)

    @cached_property
    def class_of(self) -> np.ndarray:
        """0-based class number of every table index (-1 if uncovered)."""
        labels = np.full(self.k ** self.n, -1, dtype=np.int64)
        for i, members in enumerate(self.classes):
            for index in members:
                labels[index] = i
        return labels

    def mask(self, i: int) -> np.ndarray:
        """Boolean mask of T_i, 1-based."""
        return self.class_of == i - 1

    def points(self, i: int) -> List[Point]:
        return [index_point(index, self.k, self.n) for index in sorted(self.classes[i - 1])]

    def check(self, system: FunctionSystem, omega: Optional[KFunction] = None) -> List[str]:
        """Violations of the partition invariants; empty means all hold."""
        violations = []
        size = self.k ** self.n
        total = sum(len(c) for c in self.classes)
        covered = set().union(*self.classes) if self.classes else set()
        if total != size or len(covered) != size:
            violations.append("classes do not partition E_k^n")
            return violations

        labels = self.class_of
        points = points_array(self.k, self.n)
        for b in range(size):
            below = np.all(points <= points[b], axis=1)
            if int(labels[below].max()) > int(labels[b]):
                violations.append(f"prefix of classes is not down-closed at {tuple(points[b])}")
                break

        for i in range(1, self.s + 1):
            mask = self.mask(i)
            if mask.any():
                d, _ = decrease(system, mask)
                if d >= self.threshold:
                    violations.append(f"class T_{i} holds a chain with decrease {d} >= {self.threshold}")

        if omega is not None:
            if len(self.witness_chain) != self.s:
                violations.append("omega chain length differs from the number of classes")
            for a, b in zip(self.witness_chain, self.witness_chain[1:]):
                if not all(x <= y for x, y in zip(a, b)) or a == b:
                    violations.append("omega chain is not increasing")
            values = [omega.at(p) for p in self.witness_chain]
            if list(self.levels) != values:
                violations.append("levels differ from omega along the chain")
            if any(x <= y for x, y in zip(values, values[1:])):
                violations.append("omega does not strictly decrease along the chain")
        return violations


def compute_partition(system: FunctionSystem, s: int, r: int,
                      omega: Optional[KFunction] = None) -> LevelPartition:
    """
    Split E_k^n into T_1..T_s with threshold s^(r-1).

    T_i holds the points of the residual E_k^n - (T_1 + ... + T_{i-1}) at which
    every chain inside the residual ends with decrease below the threshold;
    T_s is what remains.  When omega is given, the first s points of its
    inversion-power witness supply the selector chain.
    """
    if s < 2:
        raise DomainError("partition needs s >= 2", {"s": s})
    if r < 1:
        raise DomainError("partition needs R >= 1", {"R": r})
    k, n = system.k, system.n
    theta = s ** (r - 1)

    residual = np.ones(k ** n, dtype=bool)
    classes: List[FrozenSet[int]] = []
    for _ in range(s - 1):
        members = np.zeros_like(residual)
        if residual.any():
            # Peel off the points whose chains in the residual stay below theta
            profile = decrease_profile(system, residual)
            members = residual & (profile.values < theta)
        classes.append(frozenset(int(i) for i in np.flatnonzero(members)))
        residual &= ~members
    # The last class takes whatever is left
    classes.append(frozenset(int(i) for i in np.flatnonzero(residual)))

    # Selector chain: the first s points of the inversion-power witness
    chain: Tuple[Point, ...] = ()
    levels: Tuple[int, ...] = ()
    if omega is not None:
        u, witness = inversion_power(omega)
        if u < s:
            raise DomainError("omega has too small an inversion power", {"u": u, "s": s})
        chain = witness.chain.points[:s]
        levels = tuple(omega.at(p) for p in chain)

    partition = LevelPartition(k, n, tuple(classes), theta, chain, levels)
    violations = partition.check(system, omega)
    if violations:
        raise InvariantViolation("level partition is broken", {"violations": "; ".join(violations)})
    logger.debug(f"partition s={s} threshold={theta} sizes={[len(c) for c in classes]}")
    return partition


def clamp_system(system: FunctionSystem, partition: LevelPartition, i: int) -> FunctionSystem:
    """
    F_i: 0 below T_i, F on T_i, k-1 above T_i.  Its decrease stays below the threshold.
    """
    if not 1 <= i <= partition.s:
        raise DomainError("class number out of range", {"i": i, "s": partition.s})
    labels = partition.class_of
    top = system.k - 1
    tables = []
    for f in system:
        table = np.where(labels < i - 1, 0, np.where(labels > i - 1, top, f.array))
        tables.append(table.tolist())
    clamped = FunctionSystem.from_tables(system.k, system.n, tables)
    d, _ = decrease(clamped)
    if d > partition.threshold - 1:
        raise InvariantViolation("clamped system exceeds the decrease threshold",
                                 {"i": i, "decrease": d, "threshold": partition.threshold})
    return clamped


def input_names(n: int) -> List[str]:
    return [f"x{i + 1}" for i in range(n)]


def _fold(builder: CircuitBuilder, kind: str, refs: Sequence[str]) -> str:
    """Binary min/max tree over the given references."""
    gate = named_monotone(kind, None, builder.k, 2)
    result = refs[0]
    for ref in refs[1:]:
        result = builder.gate(gate, [result, ref])
    return result


def selector_fragment(partition: LevelPartition, omega: KFunction,
                      omega_name: str = "omega") -> Circuit:
    """
    Circuit over x_1..x_n whose i-th output Z_i is 1 on T_i and 0 elsewhere,
    using exactly one omega gate shared by all selectors.
    """
    k, n = partition.k, partition.n
    inputs = input_names(n)
    builder = CircuitBuilder(k, inputs)
    if partition.s == 1:
        return builder.build([builder.gate(constant(k, 0, 1))])
    if len(partition.witness_chain) != partition.s:
        raise InvariantViolation("partition carries no omega chain of matching length",
                                 {"s": partition.s, "chain": len(partition.witness_chain)})

    labels = partition.class_of
    xis = []
    for j in range(omega.n):
        table = tuple(partition.witness_chain[int(labels[p])][j] for p in range(k ** n))
        xis.append(builder.gate(KFunction(k, n, table), inputs))
    shared = builder.omega(omega_name, omega, xis)

    selectors = []
    for i in range(partition.s):
        level = builder.gate(threshold(k, partition.levels[i]), [shared])
        upper = builder.gate(indicator(k, n, np.flatnonzero(labels >= i)), inputs)
        selectors.append(builder.gate(named_monotone("min", None, k, 2), [level, upper]))
    return builder.build(selectors)


def _pad(circuit: Circuit, omega: KFunction, omega_name: str) -> Circuit:
    """Append an omega gate on constant-0 inputs whose output nobody reads."""
    builder = CircuitBuilder(circuit.k, circuit.inputs)
    produced = builder.embed(circuit, {name: name for name in circuit.inputs})
    zero = constant(circuit.k, 0, 0)
    builder.omega(omega_name, omega, [builder.gate(zero) for _ in range(omega.n)])
    return builder.build([produced[o] for o in circuit.outputs])


def _selector_names(s: int, taken: Sequence[str]) -> List[str]:
    names = [f"z{i + 1}" for i in range(s)]
    clash = set(names) & set(taken)
    if clash:
        raise DomainError("selector names clash with circuit inputs", {"names": ", ".join(sorted(clash))})
    return names


def build_connector(circuits: Sequence[Circuit], omega: KFunction,
                    omega_name: str = "omega") -> Circuit:
    """
    s-connector for the systems realized by ``circuits``.

    The result has inputs z_1..z_s followed by the common inputs of the circuits
    and satisfies g(e_i, x) = S_i(x) for every unit pattern e_i.  Its omega
    weight is at most the largest weight among the circuits.
    """
    if not circuits:
        raise DomainError("a connector needs at least one circuit")
    first = circuits[0]
    for other in circuits[1:]:
        if other.k != first.k or other.inputs != first.inputs or len(other.outputs) != len(first.outputs):
            raise DomainError("connector circuits must share k, inputs and output count")
    s, k = len(circuits), first.k
    names = _selector_names(s, first.inputs)
    common = {name: name for name in first.inputs}

    if s == 1:
        builder = CircuitBuilder(k, names + list(first.inputs))
        produced = builder.embed(first, common)
        return builder.build([produced[o] for o in first.outputs])

    depth = max(inversion_weight(c) for c in circuits)
    if depth == 0:
        # Monotone circuits: max over i of min(phi(z_i), S_i)
        builder = CircuitBuilder(k, names + list(first.inputs))
        phi = named_monotone("phi", None, k)
        gates = [builder.gate(phi, [z]) for z in names]
        produced = [builder.embed(c, common) for c in circuits]
        outputs = []
        for j in range(len(first.outputs)):
            terms = [builder.gate(named_monotone("min", None, k, 2), [gates[i], produced[i][c.outputs[j]]])
                     for i, c in enumerate(circuits)]
            outputs.append(_fold(builder, "max", terms))
        return builder.build(outputs)

    # Excise one omega gate from every circuit; weight-0 circuits get a dummy one first
    excisions = []
    for c in circuits:
        if inversion_weight(c) == 0:
            c = _pad(c, omega, omega_name)
        excision = excise_first_omega(c)
        if excision.omega != omega:
            raise DomainError("connector circuits must use only the given omega")
        excisions.append(excision)
    variable = excisions[0].variable
    if any(e.variable != variable for e in excisions):
        raise InvariantViolation("excised variables differ between connector circuits")
    logger.debug(f"connector level {depth}: excised omega gates as {variable}")

    # Connect the residual circuits one level down
    inner = build_connector([e.circuit for e in excisions], omega, omega_name)

    # One shared omega gate whose arguments follow the selected circuit
    builder = CircuitBuilder(k, names + list(first.inputs))
    phi = named_monotone("phi", None, k)
    gates = [builder.gate(phi, [z]) for z in names]
    arguments = []
    for e in excisions:
        produced = builder.embed(e.circuit.cone(e.arguments), common)
        arguments.append([produced[a] for a in e.arguments])
    merged = []
    for position in range(omega.n):
        terms = [builder.gate(named_monotone("min", None, k, 2), [gates[i], arguments[i][position]])
                 for i in range(s)]
        merged.append(_fold(builder, "max", terms))
    shared = builder.omega(omega_name, omega, merged)
    # Feed it back in place of the excised variable
    return substitute_inputs(inner, builder.build([shared]), {variable: 0})


def check_connector(connector: Circuit, systems: Sequence[FunctionSystem]) -> bool:
    """Check g(e_i, x) = F_i(x) on every unit selector pattern e_i."""
    s = len(systems)
    k = connector.k
    rest = len(connector.inputs) - s
    realized = realized_system(connector)
    block = k ** rest
    for i, expected in enumerate(systems):
        if expected.n != rest or len(expected) != len(realized):
            return False
        offset = (k ** (s - 1 - i)) * block
        for f, g in zip(expected, realized):
            if g.values[offset:offset + block] != f.values:
                return False
    return True


def synthesize(system: FunctionSystem, omega: KFunction, omega_name: str = "omega") -> Circuit:
    """
    Circuit over M + {omega} realizing the system with at most
    ceil(log_{u(omega)}(d(F) + 1)) omega gates.
    """
    if omega.k != system.k:
        raise DomainError("omega and system use different k", {"omega_k": omega.k, "system_k": system.k})
    if is_monotone(omega):
        raise DomainError("omega must be non-monotone")
    s, _ = inversion_power(omega)
    circuit = _synthesize(system, omega, omega_name, s, 0)
    return circuit.pruned()


def _synthesize(system: FunctionSystem, omega: KFunction, omega_name: str, s: int, level: int) -> Circuit:
    d, _ = decrease(system)
    r = ceil_log(s, d + 1)
    inputs = input_names(system.n)
    logger.debug(f"synthesis level {level}: d={d} R={r}")
    if r == 0:
        builder = CircuitBuilder(system.k, inputs)
        return builder.build([builder.gate(f, inputs) for f in system])

    partition = compute_partition(system, s, r, omega)
    parts = [_synthesize(clamp_system(system, partition, i), omega, omega_name, s, level + 1)
             for i in range(1, s + 1)]
    connector = build_connector(parts, omega, omega_name)
    selectors = selector_fragment(partition, omega, omega_name)
    return substitute_inputs(connector, selectors, {connector.inputs[i]: i for i in range(s)})


def shannon_threshold(k: int, n: int) -> int:
    """T(k, n) = (k-1)n - floor((k-1)n / k) + 1."""
    return (k - 1) * n - ((k - 1) * n) // k + 1


def shannon_value(k: int, n: int, m: Optional[int] = None, base_kind: str = "bp") -> int:
    """
    Worst-case inversion complexity over n-ary functions (m absent) or m-member systems.

    The logarithm base is u(B) of the chosen standard basis.
    """
    if n < 1:
        raise DomainError("n must be >= 1", {"n": n})
    if m is not None and m < 2:
        raise DomainError("m must be >= 2 for systems", {"m": m})
    base = basis_profile(standard_basis(base_kind, k)).u_B
    target = shannon_threshold(k, n) if m is None else (k - 1) * n + 1
    return ceil_log(base, target)


def markov_boolean_value(n: int) -> int:
    """Markov's Boolean value ceil(log2(ceil(n/2) + 1))."""
    return ceil_log(2, (n + 1) // 2 + 1)


def remark_system() -> FunctionSystem:
    """{not x, not y} over k = 2: decrease 2, so one omega gate never suffices."""
    return FunctionSystem.from_tables(2, 2, [(1, 1, 0, 0), (1, 0, 1, 0)])
