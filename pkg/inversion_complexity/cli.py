"""
Command front end for inversion-complexity.

``InversionCLI`` loads input files, runs the library operations and returns
plain dictionaries; ``render`` turns them into line-oriented ``key: value``
text or canonical JSON.  The click commands in ``__main__`` only parse options
and map exceptions to exit codes.
"""

import json
import logging
from dataclasses import dataclass
from typing import Any, Dict, Optional, Tuple

from .chains import ChainWitness, basis_profile, decrease, inversion_power
from .circuit import Circuit, check_lemma1, inversion_weight, realized_system, validate
from .config import config
from .kfunc import Basis, FunctionSystem, KFunction, index_point, standard_basis
from .oracle import ScanReport, scan_single_functions, scan_systems
from .synth import bounds, ceil_log, shannon_threshold, shannon_value, synthesize
from .utils.command_utils import CommandFormatter, ValueParser
from .utils.file_utils import FileHandler
from .utils.logging_utils import (DomainError, InvalidCircuitError, ParseError,
                                  SelfVerificationError, VerificationMismatch,
                                  WeightBoundViolation)

logger = logging.getLogger(__name__)

STANDARD_BASES = ("bp", "bl")


@dataclass(frozen=True)
class AnalysisReport:
    k: int
    n: int
    basis: Tuple[str, ...]
    d_F: int
    u: Tuple[int, ...]
    d_B: int
    u_B: int
    lower: int
    upper: int
    exact: Optional[int]
    decrease_witness: ChainWitness
    inversion_witnesses: Tuple[ChainWitness, ...]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "k": self.k,
            "n": self.n,
            "m": len(self.u),
            "basis": list(self.basis),
            "d_F": self.d_F,
            "u": list(self.u),
            "d_B": self.d_B,
            "u_B": self.u_B,
            "lower": self.lower,
            "upper": self.upper,
            "exact": self.exact,
            "decrease_witness": self.decrease_witness.chain.to_list(),
            "inversion_witnesses": [w.chain.to_list() for w in self.inversion_witnesses],
        }


class InversionCLI:
    """Runs the analysis, synthesis, verification and Shannon workflows."""

    def __init__(self, json_output: Optional[bool] = None):
        """
        Initialize the front end.

        Args:
            json_output: Emit JSON instead of text; defaults to ``output.format``
        """
        if json_output is None:
            json_output = config.get('output', 'format', 'text') == 'json'
        self.json_output = json_output

    def load_system(self, path: str) -> FunctionSystem:
        data = FileHandler.load_json(path)
        if not isinstance(data, dict):
            raise ParseError("System file must hold a JSON object", {"file": path})
        return FunctionSystem.from_dict(data)

    def resolve_basis(self, spec: str, k: int) -> Basis:
        """
        Turn a basis choice into a basis over E_k.

        Args:
            spec: ``bp``, ``bl`` or ``file:PATH``
            k: Value count the basis must use

        Returns:
            The basis
        """
        if spec.lower() in STANDARD_BASES:
            return standard_basis(spec, k)
        if spec.startswith("file:"):
            path = spec[len("file:"):]
            data = FileHandler.load_json(path)
            if not isinstance(data, dict):
                raise ParseError("Basis file must hold a JSON object", {"file": path})
            basis = Basis.from_dict(data)
            if basis.k != k:
                raise ParseError("basis file uses a different k", {"basis_k": basis.k, "k": k})
            return basis
        raise ParseError("basis must be bp, bl or file:PATH", {"basis": spec})

    def analyze(self, system_path: str, basis_spec: str) -> AnalysisReport:
        system = self.load_system(system_path)
        basis = self.resolve_basis(basis_spec, system.k)
        report = bounds(system, basis)
        _, witness = decrease(system)
        powers = [inversion_power(f) for f in system]
        logger.info(f"analyzed {system_path}: d={report.d_F} bounds [{report.lower}, {report.upper}]")
        return AnalysisReport(
            k=system.k,
            n=system.n,
            basis=basis.names,
            d_F=report.d_F,
            u=tuple(u for u, _ in powers),
            d_B=report.d_B,
            u_B=report.u_B,
            lower=report.lower,
            upper=report.upper,
            exact=report.exact,
            decrease_witness=witness,
            inversion_witnesses=tuple(w for _, w in powers),
        )

    def synthesize(self, system_path: str, basis_spec: str,
                   out: Optional[str] = None) -> Tuple[Dict[str, Any], Circuit]:
        """
        Build an optimal-weight circuit and check it before reporting.

        Returns:
            The report and the circuit
        """
        system = self.load_system(system_path)
        basis = self.resolve_basis(basis_spec, system.k)
        name, omega = self._strongest(basis)
        circuit = synthesize(system, omega, name)

        report = bounds(system, basis)
        weight = inversion_weight(circuit)
        violations = validate(circuit, basis)
        if violations:
            raise SelfVerificationError("synthesized circuit is not valid over the basis",
                                        {"violations": "; ".join(violations)})
        if realized_system(circuit) != system:
            raise SelfVerificationError("synthesized circuit does not realize the system")
        if weight > report.upper:
            raise SelfVerificationError("synthesized circuit is heavier than the upper bound",
                                        {"weight": weight, "upper": report.upper})

        result: Dict[str, Any] = {
            "omega": name,
            "omega_gates": weight,
            "gates": len(circuit.nodes),
            "d_F": report.d_F,
            "lower": report.lower,
            "upper": report.upper,
            "exact": report.exact,
            "meets": "exact" if weight == report.exact else "upper" if weight <= report.upper else "none",
            "verified": True,
        }
        if out:
            result["out"] = FileHandler.write_text(out, circuit.dumps())
        return result, circuit

    @staticmethod
    def _strongest(basis: Basis) -> Tuple[str, KFunction]:
        """Basis function with the largest inversion power, first on ties."""
        best = None
        for name, omega in basis.items():
            u, _ = inversion_power(omega)
            if best is None or u > best[2]:
                best = (name, omega, u)
        return best[0], best[1]

    def verify(self, circuit_path: str, system_path: str, basis_spec: str) -> Dict[str, Any]:
        circuit = Circuit.loads(FileHandler.read_text(circuit_path))
        system = self.load_system(system_path)
        basis = self.resolve_basis(basis_spec, system.k)

        violations = validate(circuit, basis)
        if violations:
            raise InvalidCircuitError("invalid circuit", {"violations": "; ".join(violations)})
        if len(circuit.inputs) != system.n or len(circuit.outputs) != len(system):
            raise VerificationMismatch("realization mismatch",
                                       {"inputs": len(circuit.inputs), "n": system.n,
                                        "outputs": len(circuit.outputs), "m": len(system)})
        realized = realized_system(circuit)
        for j, (got, expected) in enumerate(zip(realized, system)):
            if got != expected:
                index = next(i for i, (a, b) in enumerate(zip(got.values, expected.values)) if a != b)
                raise VerificationMismatch("realization mismatch",
                                           {"output": j + 1, "point": index_point(index, system.k, system.n)})
        if not check_lemma1(circuit, basis):
            raise WeightBoundViolation("weight bound violated: the circuit has too few omega gates "
                                       "for the decrease it realizes")

        report = bounds(system, basis)
        weight = inversion_weight(circuit)
        if report.exact is not None and weight == report.exact:
            comparison = "equals exact bound"
        elif weight <= report.upper:
            comparison = "within bounds"
        else:
            comparison = "above upper bound"
        return {
            "valid": True,
            "realizes": True,
            "weight": weight,
            "d_F": report.d_F,
            "lower": report.lower,
            "upper": report.upper,
            "exact": report.exact,
            "comparison": comparison,
        }

    def shannon(self, k: int, n: int, m: Optional[int] = None, basis_spec: str = "bp",
                scan: bool = False, sample: Optional[int] = None,
                seed: Optional[int] = None) -> Dict[str, Any]:
        """
        Worst-case inversion complexity for n-ary functions or m-member systems.

        With ``scan`` the maximum decrease of the whole space (or a sample) is
        compared against T(k, n) - 1, or (k-1)n for systems.
        """
        if n < 1:
            raise DomainError("n must be >= 1", {"n": n})
        basis = self.resolve_basis(basis_spec, k)
        profile = basis_profile(basis)
        target = shannon_threshold(k, n) if m is None else (k - 1) * n + 1
        lower = ceil_log(profile.d_B + 1, target)
        upper = ceil_log(profile.u_B, target)
        if basis_spec.lower() in STANDARD_BASES:
            value = shannon_value(k, n, m, basis_spec.lower())
        else:
            value = lower if profile.exact else None

        result: Dict[str, Any] = {
            "k": k,
            "n": n,
            "m": m,
            "basis": list(basis.names),
            "max_decrease_formula": target - 1,
            "lower": lower,
            "upper": upper,
            "value": value,
        }
        if scan:
            report = scan_single_functions(k, n, sample, seed) if m is None else scan_systems(k, n, m, sample, seed)
            result["scan"] = self._scan_summary(report, target - 1)
        return result

    @staticmethod
    def _scan_summary(report: ScanReport, expected: int) -> Dict[str, Any]:
        witness_value, _ = decrease(report.extremal_example)
        if witness_value != report.max_decrease:
            raise VerificationMismatch("scan extremal example does not reproduce the maximum",
                                       {"max": report.max_decrease, "example": witness_value})
        if report.max_decrease > expected or (report.exhaustive and report.max_decrease != expected):
            raise VerificationMismatch("scan disagrees with the formula",
                                       {"scanned": report.max_decrease, "formula": expected})
        summary = report.to_dict()
        summary["confirmed"] = report.max_decrease == expected
        return summary

    def config_get(self, section: Optional[str] = None, key: Optional[str] = None,
                   show_all: bool = False) -> Dict[str, Any]:
        if show_all or section is None:
            return config.get_all()
        if key is None:
            values = config.get_section(section)
            if not values:
                raise DomainError(f"Section '{section}' not found in configuration")
            return {section: values}
        value = config.get(section, key)
        if value is None and key not in config.get_section(section):
            raise DomainError(f"Key '{key}' not found in section '{section}'")
        return {f"{section}.{key}": value}

    def config_set(self, section: str, key: str, raw: str, save: bool = False) -> Dict[str, Any]:
        value = ValueParser.parse(raw)
        config.set(section, key, value)
        result: Dict[str, Any] = {f"{section}.{key}": value}
        if save:
            config.save_config()
            result["saved"] = config.config_file
        return result

    def render(self, report: Any) -> str:
        """Text or JSON form of a report (dict or object with ``to_dict``)."""
        data = report.to_dict() if hasattr(report, "to_dict") else report
        if self.json_output:
            return json.dumps(data, indent=2)
        return CommandFormatter.format_key_value(data)

    def render_shannon(self, result: Dict[str, Any]) -> str:
        """Shannon report; in text mode the scan histogram becomes a table."""
        if self.json_output or "scan" not in result:
            return self.render(result)
        scan = dict(result["scan"])
        histogram = scan.pop("histogram")
        body = self.render({**result, "scan": scan})
        table = CommandFormatter.format_table(["decrease", "count"],
                                              [[d, count] for d, count in histogram.items()])
        return body + "\n" + table
