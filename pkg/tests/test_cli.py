"""
Tests for the command-line surface

Tests cover:
- One CommandResult JSON object per run on stdout
- Exit codes: 0 pass, 1 check failure, 2 input error
- The algebra, group and deformation commands on fixture documents
"""
import json

import pytest

from src.cli import run


def _run(capsys, *argv):
    code = run(list(argv))
    return code, json.loads(capsys.readouterr().out)


# ============================================================
# Test: Algebra Commands
# ============================================================

class TestAlgebraCommands:

    @pytest.mark.smoke
    @pytest.mark.unit
    def test_check(self, capsys, fixture_path):
        code, result = _run(capsys, "check", str(fixture_path("t_f2_t3.json")))
        assert code == 0
        assert result["ok"]
        assert result["result"]["stasheff"]
        assert result["result"]["dimension"] == 2

    @pytest.mark.unit
    def test_mc_over_finite_field(self, capsys, fixture_path):
        code, result = _run(capsys, "mc", str(fixture_path("t_f2_t3.json")))
        assert code == 0
        assert result["result"]["count"] == 1
        assert result["result"]["elements"] == [{}]

    @pytest.mark.unit
    def test_nerve_level(self, capsys, fixture_path):
        code, result = _run(capsys, "nerve", str(fixture_path("t_f2_t3.json")), "--dim", "1")
        assert code == 0
        assert result["result"]["count"] == 4

    @pytest.mark.unit
    @pytest.mark.parametrize("oracle", [False, True])
    def test_fundamental_group(self, capsys, fixture_path, oracle):
        argv = ["pi", str(fixture_path("t_f2_t3.json")), "--n", "1"] + (["--oracle"] if oracle else [])
        code, result = _run(capsys, *argv)
        assert code == 0
        group = result["result"]["group"]
        assert group["order"] == 4
        assert group["cyclic"]

    @pytest.mark.unit
    def test_gauge(self, capsys, fixture_path):
        code, result = _run(capsys, "gauge", str(fixture_path("t_f2_t3.json")))
        assert code == 0
        assert result["result"]["matches_pi0"]

    @pytest.mark.unit
    def test_transfer(self, capsys, fixture_path):
        code, result = _run(capsys, "transfer", str(fixture_path("t_f2_t3.json")))
        assert code == 0
        assert result["result"]["weak_equivalence"]

    @pytest.mark.unit
    def test_commutator_needs_characteristic_zero(self, capsys, fixture_path):
        code, result = _run(capsys, "commutator", str(fixture_path("t_f2_t3.json")))
        assert code == 1
        assert not result["ok"]
        assert result["error"]["error"]


# ============================================================
# Test: Deformations
# ============================================================

class TestDefrep:

    @pytest.mark.integration
    def test_z2_over_dual_numbers(self, capsys, fixture_path):
        code, result = _run(
            capsys, "defrep",
            str(fixture_path("z2_group.json")), str(fixture_path("z2_trivial.json")),
            "--ring", "t^2", "--top-degree", "2",
        )
        assert code == 0
        assert result["result"]["counts"] == {"gauge": 2, "nerve": 2, "transferred": 2}

    @pytest.mark.unit
    def test_bad_ring(self, capsys, fixture_path):
        code, _ = _run(
            capsys, "defrep",
            str(fixture_path("z2_group.json")), str(fixture_path("z2_trivial.json")),
            "--ring", "s^2",
        )
        assert code == 2


# ============================================================
# Test: Errors and Exit Codes
# ============================================================

class TestExitCodes:

    @pytest.mark.unit
    def test_malformed_document(self, capsys, fixture_path):
        code, result = _run(capsys, "check", str(fixture_path("malformed.json")))
        assert code == 2
        assert result["error"]["error"] == "DOCUMENT_PARSE_ERROR"

    @pytest.mark.unit
    def test_invariant_violation(self, capsys, fixture_path):
        code, result = _run(capsys, "check", str(fixture_path("weight_violating.json")))
        assert code == 1
        assert result["error"]["error"] == "INVARIANT_VIOLATION"

    @pytest.mark.unit
    def test_wrong_document_kind(self, capsys, fixture_path):
        code, result = _run(capsys, "mc", str(fixture_path("z2_group.json")))
        assert code == 2
        assert result["error"]["error"] == "UNSUPPORTED_DOCUMENT"

    @pytest.mark.unit
    def test_unknown_command(self, capsys):
        code, result = _run(capsys, "frobnicate")
        assert code == 2
        assert result["command"] == "unknown"

    @pytest.mark.unit
    def test_missing_required_option(self, capsys, fixture_path):
        code, _ = _run(capsys, "nerve", str(fixture_path("t_f2_t3.json")))
        assert code == 2

    @pytest.mark.unit
    def test_metrics_file(self, capsys, fixture_path, tmp_path):
        target = tmp_path / "metrics.prom"
        code, _ = _run(capsys, "--metrics-file", str(target), "check", str(fixture_path("t_f2_t3.json")))
        assert code == 0
        assert target.read_bytes()
