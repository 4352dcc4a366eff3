"""
Pytest configuration for inversion-complexity tests.

This module contains fixtures and configuration for inversion-complexity tests.
"""

import json
import os
import random
import sys
from typing import Any, Callable, Dict, Optional

import pytest

# Add the parent directory to the path so we can import inversion_complexity
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from inversion_complexity.circuit import Circuit, CircuitBuilder
from inversion_complexity.config import config as app_config
from inversion_complexity.kfunc import Basis, FunctionSystem, named_monotone, post_negation
from inversion_complexity.synth import remark_system


@pytest.fixture(autouse=True)
def isolated_config(tmp_path, monkeypatch):
    """Point the configuration singleton at an empty file for every test."""
    config_file = tmp_path / "config.json"
    monkeypatch.setenv('INVERSION_COMPLEXITY_CONFIG', str(config_file))
    app_config.reload(str(config_file))
    yield app_config
    app_config.reload(str(config_file))


@pytest.fixture
def mock_config(tmp_path):
    """Configuration loaded from a file with tightened limits."""
    config_file = tmp_path / "limits.json"
    config_file.write_text(json.dumps({
        "general": {"log_level": "debug"},
        "limits": {"max_analysis_points": 16, "max_scan_space": 1000},
        "oracle": {"seed": 7, "batch_size": 10}
    }))
    app_config.reload(str(config_file))
    yield app_config


@pytest.fixture
def write_json(tmp_path) -> Callable[[str, Any], str]:
    """Write a JSON document into the test directory and return its path."""
    def write(name: str, data: Any) -> str:
        path = tmp_path / name
        path.write_text(json.dumps(data))
        return str(path)
    return write


@pytest.fixture
def remark():
    """{not x, not y} over k = 2."""
    return remark_system()


@pytest.fixture
def xor():
    return FunctionSystem.from_tables(2, 2, [(0, 1, 1, 0)])


@pytest.fixture
def reverse3():
    """f(x) = 2 - x over k = 3."""
    return FunctionSystem.from_tables(3, 1, [(2, 1, 0)])


@pytest.fixture
def two_not_circuit() -> Circuit:
    """Hand-built circuit with one Boolean negation per output."""
    builder = CircuitBuilder(2, ["x1", "x2"])
    negation = post_negation(2)
    first = builder.omega("post", negation, ["x1"])
    second = builder.omega("post", negation, ["x2"])
    return builder.build([first, second])


@pytest.fixture
def random_circuit() -> Callable[..., Circuit]:
    """Factory for random valid circuits over a basis."""
    def make(rng: random.Random, k: int, n: int, basis: Basis, max_gates: int = 8,
             omega_share: float = 0.35) -> Circuit:
        builder = CircuitBuilder(k, [f"x{i + 1}" for i in range(n)])
        refs = list(builder.inputs)
        for _ in range(rng.randint(1, max_gates)):
            if rng.random() < omega_share:
                name, omega = rng.choice(basis.items())
                refs.append(builder.omega(name, omega, [rng.choice(refs) for _ in range(omega.n)]))
                continue
            kind = rng.choice(["min", "max", "phi", "lambda", "const"])
            params: Optional[Dict[str, int]] = None
            if kind in ("min", "max"):
                function = named_monotone(kind, None, k, 2)
                args = [rng.choice(refs), rng.choice(refs)]
            elif kind == "const":
                function = named_monotone("const", {"c": rng.randrange(k)}, k, 0)
                args = []
            else:
                if kind == "lambda":
                    params = {"j": rng.randint(1, k - 1)}
                function = named_monotone(kind, params, k)
                args = [rng.choice(refs)]
            refs.append(builder.gate(function, args))
        outputs = [refs[-1]]
        if rng.random() < 0.5:
            outputs.append(rng.choice(refs))
        return builder.build(outputs)
    return make


@pytest.fixture
def random_system() -> Callable[..., FunctionSystem]:
    """Factory for uniformly random m-member systems over E_k^n."""
    def make(rng: random.Random, k: int, n: int, m: int) -> FunctionSystem:
        return FunctionSystem.from_tables(k, n, [[rng.randrange(k) for _ in range(k ** n)] for _ in range(m)])
    return make
