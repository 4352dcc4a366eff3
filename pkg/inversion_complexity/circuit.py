"""
Circuits over bases M + {omega_1, ..., omega_p}.

A circuit is a list of gates in topological order.  Monotone gates carry an
explicit value table and weigh 0; omega gates reference a declared basis
function and weigh 1.  Arguments and outputs are references: an input name or
the id of an earlier gate.  Circuits are immutable; surgery returns new ones.
"""

import json
import logging
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Any, Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from .chains import basis_profile, decrease
from .config import check_limit
from .kfunc import (Basis, FunctionSystem, KFunction, Point, arity_from_size, as_int, is_monotone,
                    points_array)
from .utils.logging_utils import DomainError, ParseError

logger = logging.getLogger(__name__)


class NodeKind(Enum):
    INPUT = "input"
    MONOTONE = "monotone"
    OMEGA = "omega"


@dataclass(frozen=True)
class Node:
    """A gate; ``ref`` names the basis function of an omega gate."""

    id: str
    kind: NodeKind
    function: Optional[KFunction] = None
    args: Tuple[str, ...] = ()
    ref: Optional[str] = None

    @property
    def weight(self) -> int:
        return 1 if self.kind is NodeKind.OMEGA else 0


@dataclass(frozen=True)
class Circuit:
    k: int
    inputs: Tuple[str, ...]
    nodes: Tuple[Node, ...]
    outputs: Tuple[str, ...]
    basis: Tuple[Tuple[str, KFunction], ...] = field(default=())

    @cached_property
    def node_map(self) -> Dict[str, Node]:
        return {node.id: node for node in self.nodes}

    def kind_of(self, ref: str) -> NodeKind:
        if ref in self.inputs:
            return NodeKind.INPUT
        if ref in self.node_map:
            return self.node_map[ref].kind
        raise DomainError("unknown reference", {"ref": ref})

    def declared(self, name: str) -> Optional[KFunction]:
        for own, omega in self.basis:
            if own == name:
                return omega
        return None

    def graph(self) -> nx.DiGraph:
        """Dependency graph with an edge from every argument to its gate."""
        graph = nx.DiGraph()
        graph.add_nodes_from(self.inputs)
        for node in self.nodes:
            graph.add_node(node.id)
            for arg in node.args:
                graph.add_edge(arg, node.id)
        return graph

    def cone(self, refs: Sequence[str]) -> "Circuit":
        """Sub-circuit of everything the given references depend on, with them as outputs."""
        graph = self.graph()
        keep = set()
        for ref in refs:
            if ref not in graph:
                raise DomainError("unknown reference", {"ref": ref})
            keep.add(ref)
            keep |= nx.ancestors(graph, ref)
        nodes = tuple(node for node in self.nodes if node.id in keep)
        return Circuit(self.k, self.inputs, nodes, tuple(refs), self.basis)

    def pruned(self) -> "Circuit":
        """Drop gates that no output depends on and renumber the rest."""
        cone = self.cone(self.outputs)
        builder = CircuitBuilder(self.k, self.inputs)
        produced = builder.embed(cone, {name: name for name in self.inputs})
        return builder.build([produced[o] for o in self.outputs])

    def to_dict(self) -> Dict[str, Any]:
        nodes = []
        for node in self.nodes:
            if node.kind is NodeKind.OMEGA:
                nodes.append({"id": node.id, "kind": "omega", "ref": node.ref, "args": list(node.args)})
            else:
                nodes.append({"id": node.id, "kind": "monotone",
                              "table": list(node.function.values), "args": list(node.args)})
        return {
            "k": self.k,
            "inputs": list(self.inputs),
            "basis": [{"name": name, "values": list(f.values)} for name, f in self.basis],
            "nodes": nodes,
            "outputs": list(self.outputs),
        }

    def dumps(self) -> str:
        """Canonical text form: one basis entry or gate per line, keys in fixed order."""
        data = self.to_dict()

        def block(key: str) -> List[str]:
            items = [f"    {json.dumps(item)}" for item in data[key]]
            if not items:
                return [f'  "{key}": [],']
            return [f'  "{key}": ['] + [line + "," for line in items[:-1]] + [items[-1], "  ],"]

        lines = ["{", f'  "k": {data["k"]},', f'  "inputs": {json.dumps(data["inputs"])},']
        lines += block("basis")
        lines += block("nodes")
        lines += [f'  "outputs": {json.dumps(data["outputs"])}', "}"]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Circuit":
        try:
            k = as_int(data["k"], "k")
            inputs = tuple(str(name) for name in data["inputs"])
            basis = []
            for entry in data.get("basis", []):
                values = tuple(entry["values"])
                basis.append((str(entry["name"]), KFunction(k, arity_from_size(k, len(values)), values)))
            declared = dict(basis)
            nodes = []
            for entry in data["nodes"]:
                args = tuple(str(a) for a in entry.get("args", []))
                kind = NodeKind(entry["kind"])
                if kind is NodeKind.OMEGA:
                    ref = entry.get("ref")
                    if ref is not None:
                        if ref not in declared:
                            raise ParseError("omega gate references an undeclared basis function",
                                             {"node": entry["id"], "ref": ref})
                        function = declared[ref]
                    else:
                        function = KFunction(k, len(args), tuple(entry["table"]))
                    nodes.append(Node(str(entry["id"]), kind, function, args, ref))
                elif kind is NodeKind.MONOTONE:
                    function = KFunction(k, len(args), tuple(entry["table"]))
                    nodes.append(Node(str(entry["id"]), kind, function, args))
                else:
                    raise ParseError("input nodes are declared in 'inputs'", {"node": entry["id"]})
            outputs = tuple(str(o) for o in data["outputs"])
            return cls(k, inputs, tuple(nodes), outputs, tuple(basis))
        except ParseError:
            raise
        except (KeyError, TypeError, ValueError) as e:
            raise ParseError(f"Invalid circuit description: {e}")
        except DomainError as e:
            raise ParseError(f"Invalid circuit description: {e.message}", e.details)

    @classmethod
    def loads(cls, text: str) -> "Circuit":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise ParseError(f"Circuit file is not valid JSON: {e}")
        return cls.from_dict(data)


class CircuitBuilder:
    """Incremental construction of a circuit with generated gate ids."""

    def __init__(self, k: int, inputs: Iterable[str] = ()):
        self.k = k
        self.inputs: List[str] = []
        self.nodes: List[Node] = []
        self.basis: List[Tuple[str, KFunction]] = []
        self._names = set()
        for name in inputs:
            self.add_input(name)

    def add_input(self, name: str) -> str:
        if name in self._names:
            raise DomainError("duplicate name in circuit", {"name": name})
        self.inputs.append(name)
        self._names.add(name)
        return name

    def _fresh_id(self) -> str:
        candidate = f"g{len(self.nodes)}"
        suffix = len(self.nodes)
        while candidate in self._names:
            suffix += 1
            candidate = f"g{suffix}"
        return candidate

    def declare(self, name: str, omega: KFunction) -> None:
        for own, existing in self.basis:
            if own == name:
                if existing != omega:
                    raise DomainError("basis name declared with two different functions", {"name": name})
                return
        self.basis.append((name, omega))

    def gate(self, function: KFunction, args: Sequence[str] = ()) -> str:
        """Add a monotone gate and return its reference."""
        node = Node(self._fresh_id(), NodeKind.MONOTONE, function, tuple(args))
        self.nodes.append(node)
        self._names.add(node.id)
        return node.id

    def omega(self, name: str, function: KFunction, args: Sequence[str]) -> str:
        """Add an omega gate for basis function ``name`` and return its reference."""
        self.declare(name, function)
        node = Node(self._fresh_id(), NodeKind.OMEGA, function, tuple(args), name)
        self.nodes.append(node)
        self._names.add(node.id)
        return node.id

    def embed(self, circuit: Circuit, bindings: Dict[str, str]) -> Dict[str, str]:
        """
        Copy every gate of ``circuit``, binding its inputs to references of this builder.

        Args:
            circuit: Circuit to copy
            bindings: Input name of ``circuit`` -> reference in this builder

        Returns:
            Map from the circuit's references to references in this builder
        """
        if circuit.k != self.k:
            raise DomainError("cannot combine circuits with different k", {"k": self.k, "other": circuit.k})
        mapping = dict(bindings)
        for name, omega in circuit.basis:
            self.declare(name, omega)
        for node in circuit.nodes:
            missing = [a for a in node.args if a not in mapping]
            if missing:
                raise DomainError("unbound circuit input", {"input": missing[0]})
            args = [mapping[a] for a in node.args]
            if node.kind is NodeKind.OMEGA:
                if node.ref is None:
                    raise DomainError("omega gate without a basis name", {"node": node.id})
                mapping[node.id] = self.omega(node.ref, node.function, args)
            else:
                mapping[node.id] = self.gate(node.function, args)
        return mapping

    def build(self, outputs: Sequence[str]) -> Circuit:
        return Circuit(self.k, tuple(self.inputs), tuple(self.nodes), tuple(outputs), tuple(self.basis))


def validate(circuit: Circuit, basis: Optional[Basis] = None) -> List[str]:
    """
    Check DAG shape, arity and k consistency and the basis discipline.

    Args:
        circuit: Circuit to check
        basis: Optional basis the omega gates must belong to

    Returns:
        List of violations; empty means valid
    """
    violations: List[str] = []
    seen = set()
    for name in circuit.inputs:
        if name in seen:
            violations.append(f"duplicate input name '{name}'")
        seen.add(name)
    if basis is not None and basis.k != circuit.k:
        violations.append(f"basis is over k={basis.k} but circuit is over k={circuit.k}")

    for node in circuit.nodes:
        if node.id in seen:
            violations.append(f"duplicate reference '{node.id}'")
        if node.kind is NodeKind.INPUT:
            violations.append(f"input node '{node.id}' listed among gates")
            seen.add(node.id)
            continue
        f = node.function
        if f is None:
            violations.append(f"gate '{node.id}' has no function")
            seen.add(node.id)
            continue
        if f.k != circuit.k:
            violations.append(f"gate '{node.id}' is over k={f.k}, circuit over k={circuit.k}")
        if f.n != len(node.args):
            violations.append(f"gate '{node.id}' has {len(node.args)} arguments for a {f.n}-ary function")
        for arg in node.args:
            if arg not in seen:
                violations.append(f"gate '{node.id}' argument '{arg}' is not an input or earlier gate")
        if node.kind is NodeKind.MONOTONE:
            if not is_monotone(f):
                violations.append(f"non-monotone table in weight-0 gate '{node.id}'")
        else:
            if is_monotone(f):
                violations.append(f"ω must be non-monotone (gate '{node.id}')")
            declared = circuit.declared(node.ref) if node.ref is not None else None
            if declared is None or declared != f:
                violations.append(f"omega gate '{node.id}' does not match a declared basis function")
            if basis is not None and f not in basis.omegas:
                violations.append(f"omega gate '{node.id}' is not in the basis")
        seen.add(node.id)

    if not circuit.outputs:
        violations.append("circuit has no outputs")
    for ref in circuit.outputs:
        if ref not in seen:
            violations.append(f"output '{ref}' is not an input or gate")
    return violations


def _require_valid(circuit: Circuit) -> None:
    violations = validate(circuit)
    if violations:
        raise DomainError("invalid circuit", {"violations": "; ".join(violations)})


def _evaluate_columns(circuit: Circuit, columns: Sequence[np.ndarray]) -> List[np.ndarray]:
    """Evaluate every output on a batch of assignments given column-wise."""
    k = circuit.k
    size = len(columns[0]) if columns else 1
    env: Dict[str, np.ndarray] = dict(zip(circuit.inputs, columns))
    for node in circuit.nodes:
        f = node.function
        if f.n == 0:
            env[node.id] = np.full(size, f.values[0], dtype=np.int64)
            continue
        index = np.zeros(size, dtype=np.int64)
        for arg in node.args:
            index = index * k + env[arg]
        env[node.id] = f.array[index]
    return [np.broadcast_to(env[ref], (size,)) for ref in circuit.outputs]


def evaluate(circuit: Circuit, assignment: Point) -> List[int]:
    """Values of all outputs under one assignment of the inputs."""
    _require_valid(circuit)
    if len(assignment) != len(circuit.inputs):
        raise DomainError("assignment length does not match the inputs",
                          {"inputs": len(circuit.inputs), "got": len(assignment)})
    for value in assignment:
        if not 0 <= value < circuit.k:
            raise DomainError("assignment value outside E_k", {"value": value, "k": circuit.k})
    columns = [np.array([v], dtype=np.int64) for v in assignment]
    return [int(column[0]) for column in _evaluate_columns(circuit, columns)]


def realized_system(circuit: Circuit) -> FunctionSystem:
    """Truth tables of all outputs over E_k^n, n = number of inputs."""
    _require_valid(circuit)
    k, n = circuit.k, len(circuit.inputs)
    check_limit('max_table_entries', k ** n, "circuit truth table size k^n")
    points = points_array(k, n)
    columns = [points[:, i] for i in range(n)]
    if n == 0:
        columns = []
    tables = _evaluate_columns(circuit, columns)
    return FunctionSystem.from_tables(k, n, [t.tolist() for t in tables])


def inversion_weight(circuit: Circuit) -> int:
    """I_B(S): the number of omega gates."""
    return sum(node.weight for node in circuit.nodes)


class Excision(NamedTuple):
    """Result of replacing the first omega gate by a fresh input."""

    circuit: Circuit
    variable: str
    arguments: Tuple[str, ...]
    omega: KFunction
    omega_name: str


def fresh_name(taken: Iterable[str], stem: str = "y") -> str:
    """``stem``, then ``stem2``, ``stem3``, ... whichever is free first."""
    taken = set(taken)
    if stem not in taken:
        return stem
    suffix = 2
    while f"{stem}{suffix}" in taken:
        suffix += 1
    return f"{stem}{suffix}"


def excise_first_omega(circuit: Circuit) -> Excision:
    """
    Replace the first omega gate (smallest list index) by a new last input.

    Consumers of the gate are rewired to the new input; the gate's arguments are
    returned so that the gate can be rebuilt on top of the residual circuit.
    """
    position = next((i for i, node in enumerate(circuit.nodes) if node.kind is NodeKind.OMEGA), None)
    if position is None:
        raise DomainError("circuit has no omega gate to excise")
    removed = circuit.nodes[position]
    variable = fresh_name(list(circuit.inputs) + [node.id for node in circuit.nodes])

    def rewire(ref: str) -> str:
        return variable if ref == removed.id else ref

    nodes = tuple(
        Node(node.id, node.kind, node.function, tuple(rewire(a) for a in node.args), node.ref)
        for i, node in enumerate(circuit.nodes) if i != position
    )
    residual = Circuit(circuit.k, circuit.inputs + (variable,), nodes,
                       tuple(rewire(o) for o in circuit.outputs), circuit.basis)
    logger.debug(f"excised omega gate {removed.id} as input {variable}")
    return Excision(residual, variable, removed.args, removed.function, removed.ref)


def substitute_inputs(outer: Circuit, fragment: Circuit, mapping: Dict[str, int]) -> Circuit:
    """
    Replace inputs of ``outer`` by outputs of ``fragment``.

    Args:
        outer: Circuit whose inputs are replaced
        fragment: Circuit over (a subset of) the remaining inputs of ``outer``
        mapping: Input name of ``outer`` -> output position of ``fragment``

    Returns:
        Circuit over the remaining inputs of ``outer``, fragment gates first
    """
    for name in mapping:
        if name not in outer.inputs:
            raise DomainError("substituted name is not an input", {"input": name})
    remaining = [name for name in outer.inputs if name not in mapping]
    missing = [name for name in fragment.inputs if name not in remaining]
    if missing:
        raise DomainError("fragment depends on inputs the result would not have",
                          {"inputs": ", ".join(missing)})

    builder = CircuitBuilder(outer.k, remaining)
    produced = builder.embed(fragment, {name: name for name in fragment.inputs})
    bindings = {name: name for name in remaining}
    for name, position in mapping.items():
        bindings[name] = produced[fragment.outputs[position]]
    translated = builder.embed(outer, bindings)
    return builder.build([translated[o] for o in outer.outputs])


def reinsert(excision: Excision) -> Circuit:
    """Substitute omega(h_1, ..., h_t) back for the excised variable."""
    residual = excision.circuit
    others = [name for name in residual.inputs if name != excision.variable]
    builder = CircuitBuilder(residual.k, others)
    cone = residual.cone(excision.arguments)
    # the arguments precede the excised gate, so they never read the new variable
    produced = builder.embed(cone, {name: name for name in others})
    arguments = [produced[a] for a in cone.outputs]
    ref = builder.omega(excision.omega_name, excision.omega, arguments)
    return substitute_inputs(residual, builder.build([ref]), {excision.variable: 0})


def check_lemma1(circuit: Circuit, basis: Basis) -> bool:
    """d(realized system) <= (d(B) + 1)^weight - 1."""
    violations = validate(circuit, basis)
    if violations:
        raise DomainError("circuit is not valid over the basis", {"violations": "; ".join(violations)})
    d_F, _ = decrease(realized_system(circuit))
    profile = basis_profile(basis)
    bound = (profile.d_B + 1) ** inversion_weight(circuit) - 1
    return d_F <= bound
