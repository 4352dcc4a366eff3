"""
Tests for the command line interface.
"""

import json

import pytest
from click.testing import CliRunner

from inversion_complexity import __version__
from inversion_complexity.__main__ import main


REVERSE3 = {"k": 3, "n": 1, "functions": [[2, 1, 0]]}
REMARK = {"k": 2, "n": 2, "functions": [[1, 1, 0, 0], [1, 0, 1, 0]]}
XOR = {"k": 2, "n": 2, "functions": [[0, 1, 1, 0]]}
MAX3 = {"k": 3, "n": 2, "functions": [[0, 1, 2, 1, 1, 2, 2, 2, 2]]}


@pytest.fixture
def runner():
    return CliRunner()


def invoke(runner, *args):
    return runner.invoke(main, [str(a) for a in args])


class TestAnalyze:
    """Tests for the analyze command."""

    def test_remark_system(self, runner, write_json):
        result = invoke(runner, "analyze", write_json("remark.json", REMARK))
        assert result.exit_code == 0, result.output
        assert "d_F: 2" in result.output
        assert "exact: 2" in result.output
        assert "decrease_witness: [[0, 0], [0, 1], [1, 1]]" in result.output

    def test_monotone_function(self, runner, write_json):
        result = invoke(runner, "analyze", write_json("max.json", MAX3))
        assert result.exit_code == 0, result.output
        assert "d_F: 0" in result.output
        assert "exact: 0" in result.output

    def test_lukasiewicz_basis(self, runner, write_json):
        result = invoke(runner, "analyze", write_json("rev.json", REVERSE3), "--basis", "bl")
        assert result.exit_code == 0, result.output
        assert "exact: 1" in result.output
        assert "d_B: 2" in result.output

    def test_json_output(self, runner, write_json):
        result = invoke(runner, "--json", "analyze", write_json("remark.json", REMARK))
        assert result.exit_code == 0
        data = json.loads(result.stdout)
        assert data["m"] == 2
        assert data["u"] == [2, 2]
        assert data["lower"] == data["upper"] == data["exact"] == 2
        assert data["basis"] == ["post"]

    def test_basis_file(self, runner, write_json):
        basis = write_json("basis.json", {"k": 3, "basis": [{"name": "luk", "values": [2, 1, 0]}]})
        result = invoke(runner, "--json", "analyze", write_json("rev.json", REVERSE3), "--basis", f"file:{basis}")
        assert result.exit_code == 0, result.output
        data = json.loads(result.stdout)
        assert data["basis"] == ["luk"]
        assert data["exact"] == 1

    def test_malformed_json(self, runner, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{\"k\": 2,")
        result = invoke(runner, "analyze", path)
        assert result.exit_code == 2
        assert "Invalid JSON" in result.output

    def test_missing_file(self, runner, tmp_path):
        result = invoke(runner, "analyze", tmp_path / "absent.json")
        assert result.exit_code == 2

    def test_bad_table_value(self, runner, write_json):
        result = invoke(runner, "analyze", write_json("bad.json", {"k": 2, "n": 1, "functions": [[0, 2]]}))
        assert result.exit_code == 2

    @pytest.mark.parametrize("data", [
        {"k": 2, "n": 1, "values": [1.9, 0.2]},
        {"k": 2.7, "n": 1, "values": [1, 0]},
        {"k": 2, "n": 1, "values": [True, False]},
    ])
    def test_non_integer_input(self, runner, write_json, data):
        result = invoke(runner, "analyze", write_json("float.json", data))
        assert result.exit_code == 2

    def test_nullary_system_file(self, runner, write_json):
        result = invoke(runner, "analyze", write_json("const.json", {"k": 3, "n": 0, "values": [1]}))
        assert result.exit_code == 2

    def test_unknown_basis(self, runner, write_json):
        result = invoke(runner, "analyze", write_json("remark.json", REMARK), "--basis", "xyz")
        assert result.exit_code == 2

    def test_basis_file_with_other_k(self, runner, write_json):
        basis = write_json("basis.json", {"k": 3, "basis": [{"name": "luk", "values": [2, 1, 0]}]})
        result = invoke(runner, "analyze", write_json("remark.json", REMARK), "--basis", f"file:{basis}")
        assert result.exit_code == 2

    def test_size_guard(self, runner, write_json):
        result = invoke(runner, "--max-points", 4, "analyze", write_json("max.json", MAX3))
        assert result.exit_code == 3
        assert "exceeds the configured limit" in result.output


class TestSynthesize:
    """Tests for the synthesize command."""

    def test_reverse_with_post_negation(self, runner, write_json, tmp_path):
        out = tmp_path / "circuits" / "rev.circuit.json"
        result = invoke(runner, "synthesize", write_json("rev.json", REVERSE3), "--out", out)
        assert result.exit_code == 0, result.output
        assert "omega_gates: 2" in result.output
        assert "meets: exact" in result.output
        assert "verified: yes" in result.output
        assert out.exists()
        assert json.loads(out.read_text())["k"] == 3

    def test_xor(self, runner, write_json):
        result = invoke(runner, "--json", "synthesize", write_json("xor.json", XOR))
        assert result.exit_code == 0, result.output
        data = json.loads(result.stdout)
        assert data["omega_gates"] == 1
        assert data["omega"] == "post"
        assert "out" not in data

    def test_monotone_needs_no_omega(self, runner, write_json):
        result = invoke(runner, "--json", "synthesize", write_json("max.json", MAX3))
        assert result.exit_code == 0, result.output
        assert json.loads(result.stdout)["omega_gates"] == 0

    def test_text_mode_prints_circuit(self, runner, write_json):
        result = invoke(runner, "synthesize", write_json("xor.json", XOR))
        assert result.exit_code == 0, result.output
        assert '"kind": "omega"' in result.output
        assert '"outputs":' in result.output

    def test_synthesized_circuit_verifies(self, runner, write_json, tmp_path):
        system = write_json("remark.json", REMARK)
        out = tmp_path / "remark.circuit.json"
        assert invoke(runner, "synthesize", system, "-o", out).exit_code == 0
        result = invoke(runner, "verify", out, system)
        assert result.exit_code == 0, result.output
        assert "weight: 2" in result.output
        assert "comparison: equals exact bound" in result.output


class TestVerify:
    """Tests for the verify command."""

    def test_two_not_circuit(self, runner, write_json, tmp_path, two_not_circuit):
        circuit = tmp_path / "two_not.json"
        circuit.write_text(two_not_circuit.dumps())
        result = invoke(runner, "verify", circuit, write_json("remark.json", REMARK))
        assert result.exit_code == 0, result.output
        assert "valid: yes" in result.output
        assert "weight: 2" in result.output

    def test_wrong_table(self, runner, write_json, tmp_path):
        circuit = tmp_path / "rev.circuit.json"
        assert invoke(runner, "synthesize", write_json("rev.json", REVERSE3), "-o", circuit).exit_code == 0
        wrong = write_json("wrong.json", {"k": 3, "n": 1, "functions": [[2, 2, 0]]})
        result = invoke(runner, "verify", circuit, wrong)
        assert result.exit_code == 5
        assert "realization mismatch" in result.output

    def test_shape_mismatch(self, runner, write_json, tmp_path, two_not_circuit):
        circuit = tmp_path / "two_not.json"
        circuit.write_text(two_not_circuit.dumps())
        result = invoke(runner, "verify", circuit, write_json("xor.json", XOR))
        assert result.exit_code == 5

    def test_invalid_circuit(self, runner, write_json):
        circuit = write_json("bad.circuit.json", {
            "k": 2, "inputs": ["x1"], "basis": [],
            "nodes": [{"id": "g0", "kind": "monotone", "table": [1, 0], "args": ["x1"]}],
            "outputs": ["g0"],
        })
        result = invoke(runner, "verify", circuit, write_json("not.json", {"k": 2, "n": 1, "functions": [[1, 0]]}))
        assert result.exit_code == 6
        assert "invalid circuit" in result.output

    def test_weight_bound_violation(self, runner, write_json, tmp_path, two_not_circuit, monkeypatch):
        monkeypatch.setattr("inversion_complexity.cli.check_lemma1", lambda circuit, basis: False)
        circuit = tmp_path / "two_not.json"
        circuit.write_text(two_not_circuit.dumps())
        result = invoke(runner, "verify", circuit, write_json("remark.json", REMARK))
        assert result.exit_code == 7

    def test_circuit_parse_error(self, runner, write_json, tmp_path):
        circuit = tmp_path / "broken.json"
        circuit.write_text("[1, 2")
        result = invoke(runner, "verify", circuit, write_json("remark.json", REMARK))
        assert result.exit_code == 2


class TestShannon:
    """Tests for the shannon command."""

    def test_ternary_binary_with_scan(self, runner):
        result = invoke(runner, "shannon", "-k", 3, "-n", 2, "--scan")
        assert result.exit_code == 0, result.output
        assert "value: 2" in result.output
        assert "max_decrease: 3" in result.output
        assert "confirmed: yes" in result.output
        assert "decrease  count" in result.output

    def test_boolean_ternary(self, runner):
        result = invoke(runner, "--json", "shannon", "-k", 2, "-n", 3)
        assert result.exit_code == 0, result.output
        data = json.loads(result.stdout)
        assert data["value"] == 2
        assert data["max_decrease_formula"] == 2
        assert "scan" not in data

    def test_systems_with_scan(self, runner):
        result = invoke(runner, "--json", "shannon", "-k", 3, "-n", 1, "-m", 2, "--scan")
        assert result.exit_code == 0, result.output
        data = json.loads(result.stdout)
        assert data["value"] == 2
        assert data["scan"]["max_decrease"] == 2
        assert data["scan"]["scanned"] == 729
        assert data["scan"]["confirmed"] is True

    def test_lukasiewicz_value(self, runner):
        result = invoke(runner, "--json", "shannon", "-k", 3, "-n", 2, "--basis", "bl")
        assert json.loads(result.stdout)["value"] == 2

    def test_file_basis(self, runner, write_json):
        basis = write_json("basis.json", {"k": 3, "basis": [{"name": "luk", "values": [2, 1, 0]}]})
        result = invoke(runner, "--json", "shannon", "-k", 3, "-n", 2, "--basis", f"file:{basis}")
        assert result.exit_code == 0, result.output
        assert json.loads(result.stdout)["value"] == 2

    def test_sampled_scan(self, runner):
        result = invoke(runner, "--json", "shannon", "-k", 3, "-n", 2, "-m", 2, "--sample", 200, "--seed", 1)
        assert result.exit_code == 0, result.output
        scan = json.loads(result.stdout)["scan"]
        assert scan["exhaustive"] is False
        assert scan["scanned"] == 200
        assert scan["max_decrease"] <= 4

    def test_scan_too_large(self, runner):
        result = invoke(runner, "shannon", "-k", 3, "-n", 2, "-m", 2, "--scan")
        assert result.exit_code == 3

    def test_invalid_arity(self, runner):
        result = invoke(runner, "shannon", "-k", 3, "-n", 0)
        assert result.exit_code == 1


class TestConfigCommands:
    """Tests for the config group."""

    def test_get_value(self, runner):
        result = invoke(runner, "config", "get", "limits", "max_k")
        assert result.exit_code == 0
        assert "limits.max_k: 16" in result.output

    def test_get_section(self, runner):
        result = invoke(runner, "--json", "config", "get", "oracle")
        assert json.loads(result.stdout) == {"oracle": {"seed": 0, "batch_size": 65536, "progress": False}}

    def test_get_all(self, runner):
        result = invoke(runner, "--json", "config", "get", "--all")
        assert set(json.loads(result.stdout)) == {"general", "limits", "oracle", "output"}

    def test_get_unknown_key(self, runner):
        assert invoke(runner, "config", "get", "limits", "nope").exit_code == 1
        assert invoke(runner, "config", "get", "nope").exit_code == 1

    def test_set_and_save(self, runner, isolated_config):
        result = invoke(runner, "config", "set", "oracle", "seed", "5", "--save")
        assert result.exit_code == 0, result.output
        assert "oracle.seed: 5" in result.output
        with open(isolated_config.config_file) as f:
            assert json.load(f)["oracle"]["seed"] == 5

    def test_saved_output_format_applies(self, runner, write_json, isolated_config):
        assert invoke(runner, "config", "set", "output", "format", "json", "--save").exit_code == 0
        result = invoke(runner, "analyze", write_json("xor.json", XOR))
        assert json.loads(result.stdout)["d_F"] == 1

    def test_config_file_option(self, runner, write_json):
        config_file = write_json("custom.json", {"limits": {"max_analysis_points": 2}})
        result = invoke(runner, "--config-file", config_file, "analyze", write_json("xor.json", XOR))
        assert result.exit_code == 3


def test_version(runner):
    result = invoke(runner, "--version")
    assert result.exit_code == 0
    assert f"inversion-complexity v{__version__}" in result.output


def test_help_without_command(runner):
    result = invoke(runner)
    assert result.exit_code == 0
    assert "analyze" in result.output
    assert "shannon" in result.output
