"""
E2E Tests - bellman CLI
Drives the click group in-process with CliRunner and checks exit codes and
the reports written with --out:

  0  every check passed
  1  usage, configuration or SystemFile error
  2  a mathematical check failed
"""
import json

import pytest
from click.testing import CliRunner

from cli.main import cli
from tests.conftest import FIXTURES


# ===========================================================================
# Helpers / Factories
# ===========================================================================

@pytest.fixture
def runner() -> CliRunner:
    return CliRunner()


def run(runner, *args):
    return runner.invoke(cli, ["--threads", "1", *args])


def report_at(path) -> dict:
    return json.loads(path.read_text())


# ===========================================================================
# verify
# ===========================================================================

class TestVerify:
    def test_consistent_system_passes(self, runner, box_picking_file, tmp_path):
        out = tmp_path / "report.json"
        result = run(runner, "verify", str(box_picking_file), "--out", str(out))
        assert result.exit_code == 0, result.output
        report = report_at(out)
        assert report["kind"] == "bellman"
        assert report["passed"] is True
        assert report["solution"]["value"] == "7/6"
        assert report["provenance"]["input_digest"].startswith("sha256:")

    def test_classical_system_fails_with_exit_two(self, runner, box_picking_classical_file, tmp_path):
        out = tmp_path / "report.json"
        result = run(runner, "verify", str(box_picking_classical_file), "--out", str(out))
        assert result.exit_code == 2
        b1 = next(v for v in report_at(out)["verdicts"] if v["name"] == "B1")
        assert b1["passed"] is False

    def test_identical_runs_write_identical_reports(self, runner, box_picking_file, tmp_path):
        first, second = tmp_path / "a.json", tmp_path / "b.json"
        run(runner, "verify", str(box_picking_file), "--out", str(first))
        run(runner, "verify", str(box_picking_file), "--out", str(second))
        assert first.read_bytes() == second.read_bytes()

    def test_gamble_fixture(self, runner, tmp_path):
        out = tmp_path / "report.json"
        result = run(runner, "verify", str(FIXTURES / "gamble.sys.json"), "--out", str(out))
        assert result.exit_code == 0, result.output
        assert report_at(out)["solution"]["optimal_ids"] == ["risky"]

    def test_empty_control_set(self, runner, tmp_path):
        out = tmp_path / "report.json"
        result = run(runner, "verify", str(FIXTURES / "empty_controls.sys.json"), "--out", str(out))
        assert result.exit_code == 0, result.output
        assert report_at(out)["solution"]["value"] == "-inf"

    def test_malformed_file(self, runner, tmp_path):
        out = tmp_path / "report.json"
        result = run(runner, "verify", str(FIXTURES / "malformed.sys.json"), "--out", str(out))
        assert result.exit_code == 1
        assert not out.exists()

    def test_missing_file(self, runner, tmp_path):
        assert run(runner, "verify", str(tmp_path / "absent.sys.json")).exit_code == 1

    def test_unknown_check_family(self, runner, box_picking_file):
        assert run(runner, "verify", str(box_picking_file), "--checks", "axioms,vibes").exit_code == 1

    def test_bad_fraction_option(self, runner, box_picking_file):
        assert run(runner, "verify", str(box_picking_file), "--eps", "half").exit_code == 1

    def test_system_beyond_enumeration_limit(self, runner, tmp_path):
        n = 17
        source, out = tmp_path / "wide.sys.json", tmp_path / "report.json"
        source.write_text(json.dumps({
            "format": "bellman-system",
            "schema_version": 1,
            "outcomes": [f"w{k}" for k in range(n)],
            "controls": [{
                "id": "c",
                "measure": [f"1/{n}"] * n,
                "filtration": [[list(range(n))], [[k] for k in range(n)]],
                "payoff": [str(k) for k in range(n)],
                "path": [[0, k] for k in range(n)],
            }],
            "control_times": [{"id": "1", "uniform": [1] * n}],
            "derive": "prefix",
        }))
        result = run(runner, "verify", str(source), "--out", str(out))
        assert result.exit_code == 0, result.output
        report = report_at(out)
        assert report["solution"]["value"] == "8"
        assert {entry["time_id"] for entry in report["lattice"]} >= {"0", "1", "inf"}
        assert all(entry["c1"]["passed"] and entry["c2"]["passed"] for entry in report["lattice"])

    def test_tsv_table(self, runner, box_picking_file, tmp_path):
        out = tmp_path / "report.tsv"
        result = run(runner, "verify", str(box_picking_file), "--checks", "axioms,bellman",
                     "--format", "tsv", "--out", str(out))
        assert result.exit_code == 0, result.output
        assert out.read_text().splitlines()[0] == "check\tsection\tpassed\tchecked\twitness"


# ===========================================================================
# campaigns
# ===========================================================================

class TestCampaigns:
    def test_galmarino_campaign(self, runner, tmp_path):
        out = tmp_path / "galmarino.json"
        result = run(runner, "galmarino", "--campaign", "20", "--max-outcomes", "5", "--max-horizon", "3",
                     "--seed", "4", "--out", str(out))
        assert result.exit_code == 0, result.output
        assert report_at(out)["result"]["instances"] == 20

    def test_empty_campaign(self, runner, tmp_path):
        out = tmp_path / "galmarino.json"
        assert run(runner, "galmarino", "--campaign", "0", "--out", str(out)).exit_code == 0
        assert report_at(out)["passed"] is True

    def test_nonstopping_times_fail(self, runner, tmp_path):
        out = tmp_path / "galmarino.json"
        result = run(runner, "galmarino", "--campaign", "300", "--max-outcomes", "6", "--max-horizon", "3",
                     "--seed", "2", "--allow-nonstopping", "--out", str(out))
        assert result.exit_code == 2
        assert report_at(out)["result"]["violations"]

    def test_lattice_campaign(self, runner, tmp_path):
        out = tmp_path / "lattice.json"
        result = run(runner, "lattice", "--campaign", "5", "--mutations", "3", "--max-outcomes", "4",
                     "--max-horizon", "2", "--out", str(out))
        assert result.exit_code == 0, result.output

    def test_campaign_size_must_be_nonnegative(self, runner):
        assert run(runner, "galmarino", "--campaign", "-1").exit_code == 1


# ===========================================================================
# examples
# ===========================================================================

class TestExamples:
    def test_box_picking(self, runner, tmp_path):
        out, system = tmp_path / "report.json", tmp_path / "box.sys.json"
        result = run(runner, "example", "box-picking", "--emit-system", str(system), "--out", str(out))
        assert result.exit_code == 0, result.output
        assert report_at(out)["solution"]["value"] == "7/6"
        assert run(runner, "verify", str(system), "--out", str(tmp_path / "again.json")).exit_code == 0

    def test_box_picking_classical(self, runner, tmp_path):
        out = tmp_path / "report.json"
        assert run(runner, "example", "box-picking", "--classical", "--out", str(out)).exit_code == 2

    def test_snell_coin(self, runner, tmp_path):
        out = tmp_path / "report.json"
        result = run(runner, "example", "snell", "--out", str(out))
        assert result.exit_code == 0, result.output
        report = report_at(out)
        assert report["solution"]["value"] == "1/2"
        assert any(v["name"] == "snell-envelope" and v["passed"] for v in report["verdicts"])

    def test_snell_campaign(self, runner, tmp_path):
        out = tmp_path / "snell.json"
        result = run(runner, "example", "snell", "--campaign", "5", "--seed", "3", "--out", str(out))
        assert result.exit_code == 0, result.output


# ===========================================================================
# mc
# ===========================================================================

class TestMonteCarlo:
    def test_verify_lemma_case_b(self, runner, tmp_path):
        out = tmp_path / "lemma.json"
        result = run(runner, "mc", "verify-lemma", "--case", "b", "--out", str(out))
        assert result.exit_code == 0, result.output
        report = report_at(out)
        assert report["kind"] == "mc-verify-lemma"
        assert report["provenance"]["generated_at"]

    def test_verify_lemma_case_a(self, runner, tmp_path):
        assert run(runner, "mc", "verify-lemma", "--case", "a", "--out", str(tmp_path / "a.json")).exit_code == 0

    def test_perturbed_candidate_fails(self, runner, tmp_path):
        out = tmp_path / "lemma.json"
        result = run(runner, "mc", "verify-lemma", "--case", "a", "--perturbation", "0.01", "--out", str(out))
        assert result.exit_code == 2
        assert report_at(out)["passed"] is False

    def test_switching_case_a(self, runner, tmp_path):
        out = tmp_path / "switching.json"
        result = run(runner, "mc", "switching", "--case", "a", "--paths", "2000", "--t-max", "15",
                     "--dt", "0.02", "--tolerance", "0.1", "--out", str(out))
        assert result.exit_code == 0, result.output
        assert report_at(out)["kind"] == "mc-switching"

    def test_coarse_grid_is_a_configuration_error(self, runner):
        result = run(runner, "mc", "switching", "--case", "a", "--dt", "0.5", "--paths", "10")
        assert result.exit_code == 1

    def test_poisson(self, runner, tmp_path):
        out = tmp_path / "poisson.json"
        result = run(runner, "mc", "poisson", "--paths", "20000", "--tolerance", "0.02", "--out", str(out))
        assert result.exit_code == 0, result.output
        assert report_at(out)["result"]["bound_below_value"] is True

    def test_empty_eps_grid(self, runner):
        assert run(runner, "mc", "convergence", "--eps-grid", ",").exit_code == 1


class TestGlobalOptions:
    def test_version(self, runner):
        result = runner.invoke(cli, ["--version"])
        assert result.exit_code == 0
        assert "bellman" in result.output

    def test_unknown_command(self, runner):
        assert run(runner, "frobnicate").exit_code == 1
