"""CLI integration tests for kingbound.

Tests the CLI using Click's CliRunner. The CLI is defined in kingbound.cli
with the main group command.
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path

import pytest
import yaml
from click.testing import CliRunner

from kingbound.cli import main
from kingbound.harness.report import CSV_HEADER


@pytest.fixture
def runner():
    """Create a CliRunner instance."""
    return CliRunner()


@pytest.fixture
def reset_bootstrap(v):
    """Initialize kingbound outside the CliRunner context.

    The command's own init_kingbound() call then reuses the singleton.
    """
    yield


@pytest.fixture
def user_config(tmp_path: Path) -> str:
    """An empty user config so tests never read ~/.config/kingbound."""
    path = tmp_path / "user" / "config.yaml"
    path.parent.mkdir()
    path.write_text("{}\n")
    return str(path)


@pytest.fixture
def campaign_file(tmp_path: Path, smoke_campaign_data) -> Path:
    path = tmp_path / "unit.yaml"
    path.write_text(yaml.dump(smoke_campaign_data))
    return path


class TestVersionAndHelp:
    def test_version(self, runner):
        result = runner.invoke(main, ["--version"])
        assert result.exit_code == 0
        assert "kingbound, version " in result.output

    def test_help(self, runner):
        result = runner.invoke(main, ["--help"])
        assert result.exit_code == 0
        for command in ("bound", "sweep", "sim", "sup", "moments", "verify", "campaigns", "checks"):
            assert command in result.output


class TestBoundCommand:
    def test_main_tail_text(self, runner):
        result = runner.invoke(main, ["bound", "main-tail", "--r", "3", "--x", "10"])
        assert result.exit_code == 0, result.output
        assert result.output.splitlines() == ["main-tail", "  tail: 10^{404.3036}  (probability 1)"]

    def test_dash_p_params(self, runner):
        result = runner.invoke(main, ["bound", "kingman", "-p", "cA2=1", "-p", "cS2=1", "-p", "rho=0.5",
                                      "--format", "json"])
        assert result.exit_code == 0, result.output
        payload = json.loads(result.output)
        assert payload["formula"] == "kingman"
        assert payload["values"]["queue"]["exp10"] == pytest.approx(0.09691, abs=1e-5)

    def test_csv(self, runner):
        result = runner.invoke(main, ["bound", "sspd", "--r", "3", "--n", "10", "--rho", "0.9", "--format", "csv"])
        assert result.exit_code == 0, result.output
        lines = result.output.splitlines()
        assert lines[0] == "formula,output,exp10,display,probability"
        assert lines[1].startswith("sspd,sspd,")

    def test_list(self, runner):
        result = runner.invoke(main, ["bound", "--list"])
        assert result.exit_code == 0
        assert "Name" in result.output and "Parameters" in result.output
        assert "main-tail" in result.output

    def test_no_name_lists(self, runner):
        result = runner.invoke(main, ["bound", "--format", "json"])
        assert result.exit_code == 0
        assert "x" in json.loads(result.output)["main-tail"]

    def test_unknown_formula(self, runner):
        result = runner.invoke(main, ["bound", "nope"])
        assert result.exit_code == 2
        assert "unknown formula" in result.output

    def test_missing_param(self, runner):
        result = runner.invoke(main, ["bound", "main-tail", "--r", "3"])
        assert result.exit_code == 2
        assert "missing parameter x" in result.output

    def test_bad_option(self, runner):
        result = runner.invoke(main, ["bound", "main-tail", "-p", "r3"])
        assert result.exit_code == 2
        assert "expected key=value" in result.output


class TestSweepCommand:
    def test_sweep_table(self, runner):
        result = runner.invoke(main, ["sweep", "main-tail", "--param", "x", "--values", "1,10,100", "--r", "3"])
        assert result.exit_code == 0, result.output
        lines = result.output.splitlines()
        assert lines[0].split()[:5] == ["x", "output", "exp10", "display", "probability"]
        assert sum(1 for line in lines if " tail " in line) == 3

    def test_sweep_json(self, runner):
        result = runner.invoke(main, ["sweep", "kingman", "--param", "rho", "--values", "0.5,0.9",
                                      "-p", "cA2=1", "-p", "cS2=1", "--format", "json"])
        assert result.exit_code == 0, result.output
        payload = json.loads(result.output)
        assert [p["value"] for p in payload["points"]] == [0.5, 0.9]

    @pytest.mark.parametrize("values", ["", "1,a"])
    def test_bad_values(self, runner, values):
        result = runner.invoke(main, ["sweep", "main-tail", "--param", "x", "--values", values, "--r", "3"])
        assert result.exit_code == 2


class TestSimCommand:
    def test_sim_literals_csv(self, runner):
        result = runner.invoke(main, ["sim", "--arrival", "exponential", "--service", "exponential:mean=0.5",
                                      "--n", "1", "--arrivals", "3000", "--seed", "3", "--format", "csv"])
        assert result.exit_code == 0, result.output
        rows = list(csv.reader(io.StringIO(result.output)))
        assert rows[0] == ["spec", "metric", "point", "ci", "seed"]
        assert [row[1] for row in rows[1:5]] == ["wait_mean", "delay_prob", "queue_mean", "sspd"]
        assert all(row[4] == "3" for row in rows[1:])

    def test_sim_config_file(self, runner, tmp_path: Path):
        config = tmp_path / "q.yaml"
        config.write_text(yaml.dump({
            "queue": {"arrival": {"family": "exponential", "mean": 1.0},
                      "service": {"family": "erlang", "k": 2, "mean": 1.0}, "n": 2, "rho": 0.6},
            "sim": {"total_arrivals": 3000, "tail_grid": [0, 1]},
        }))
        result = runner.invoke(main, ["sim", "--config", str(config), "--seed", "4", "--format", "json"])
        assert result.exit_code == 0, result.output
        payload = json.loads(result.output)
        assert set(payload) == {"spec", "rho", "seed", "kw", "event"}
        assert payload["rho"] == pytest.approx(0.6)
        assert payload["seed"] == 4
        assert payload["event"]["queue_tail"]["grid"] == [0.0, 1.0]

    def test_sim_config_text(self, runner, tmp_path: Path):
        config = tmp_path / "q.yaml"
        config.write_text(yaml.dump({
            "queue": {"arrival": {"family": "exponential", "mean": 1.0},
                      "service": {"family": "exponential", "mean": 1.0}, "n": 1, "rho": 0.5},
            "sim": {"total_arrivals": 3000, "tail_grid": [0, 1]},
        }))
        result = runner.invoke(main, ["sim", "--config", str(config)])
        assert result.exit_code == 0, result.output
        assert "queue_tail@1" in result.output

    def test_sim_missing_inputs(self, runner):
        result = runner.invoke(main, ["sim", "--arrival", "exponential"])
        assert result.exit_code == 2
        assert "give --config or all of --arrival, --service and --n" in result.output

    def test_sim_unstable(self, runner):
        result = runner.invoke(main, ["sim", "--arrival", "exponential", "--service", "exponential", "--n", "1"])
        assert result.exit_code == 2

    def test_sim_bad_literal(self, runner):
        result = runner.invoke(main, ["sim", "--arrival", "nope", "--service", "exponential", "--n", "2"])
        assert result.exit_code == 2
        assert "--arrival" in result.output


class TestSupCommand:
    def test_sup_text(self, runner, user_config):
        result = runner.invoke(main, ["sup", "--arrival", "exponential", "--service", "exponential",
                                      "--n-prime", "2", "--reps", "1000", "--max-level", "3",
                                      "--horizon-multiplier", "5", "--seed", "1", "--config", user_config])
        assert result.exit_code == 0, result.output
        assert "sup_tail@3" in result.output
        assert "truncation diagnostic:" in result.output

    def test_sup_csv(self, runner, user_config):
        result = runner.invoke(main, ["sup", "--arrival", "exponential", "--service", "exponential",
                                      "--n-prime", "2", "--reps", "1000", "--max-level", "2",
                                      "--horizon-multiplier", "5", "--config", user_config, "--format", "csv"])
        assert result.exit_code == 0, result.output
        lines = result.output.splitlines()
        assert "spec,metric,point,ci,seed" in lines
        assert sum(1 for line in lines if "sup_tail@" in line) == 3

    def test_sup_nonnegative_drift(self, runner, user_config):
        result = runner.invoke(main, ["sup", "--arrival", "exponential", "--service", "exponential",
                                      "--n-prime", "1", "--reps", "1000", "--config", user_config])
        assert result.exit_code == 2
        assert "nonnegative drift" in result.output


class TestMomentsCommand:
    def test_partial_sum_text(self, runner):
        result = runner.invoke(main, ["moments", "partial-sum", "--dist", "deterministic", "--k", "5",
                                      "--reps", "100", "--seed", "1"])
        assert result.exit_code == 0, result.output
        lines = result.output.splitlines()
        assert lines[0].startswith("partial-sum moment of deterministic(value=1)")
        assert lines[1] == "  estimate: 0 +/- 0"
        assert lines[2].startswith("  bound (arrival-central): ")

    def test_count_json(self, runner):
        result = runner.invoke(main, ["moments", "count", "--dist", "exponential", "--t", "2", "--r", "2",
                                      "--reps", "500", "--seed", "1", "--format", "json"])
        assert result.exit_code == 0, result.output
        payload = json.loads(result.output)
        assert payload["lemma"] == "renewal-central"
        assert payload["bound_exp10"] is not None

    def test_pooled_small_t_csv(self, runner):
        result = runner.invoke(main, ["moments", "pooled", "--dist", "erlang:k=2", "--k", "4", "--t", "0.5",
                                      "--r", "2", "--reps", "200", "--seed", "2", "--equilibrium",
                                      "--format", "csv"])
        assert result.exit_code == 0, result.output
        assert result.output.splitlines()[1].startswith("pooled,pooled-small-t,")

    def test_pooled_requires_equilibrium(self, runner):
        result = runner.invoke(main, ["moments", "pooled", "--k", "10", "--t", "1", "--reps", "100"])
        assert result.exit_code == 2
        assert "--equilibrium" in result.output

    def test_label_is_unit_mean_law(self, runner):
        result = runner.invoke(main, ["moments", "count", "--dist", "exponential:mean=2", "--t", "1",
                                      "--reps", "100", "--seed", "1"])
        assert result.exit_code == 0, result.output
        assert result.output.splitlines()[0].startswith("count moment of exponential(rate=1) ")

    def test_json_dist_is_unit_mean_law(self, runner):
        result = runner.invoke(main, ["moments", "partial-sum", "--dist", "deterministic:value=3", "--k", "2",
                                      "--reps", "50", "--seed", "1", "--format", "json"])
        assert result.exit_code == 0, result.output
        payload = json.loads(result.output)
        assert payload["dist"]["family"] == "deterministic"
        assert payload["dist"]["value"] == pytest.approx(1.0)


class TestVerifyCommand:
    def test_verify_writes_reports(self, runner, reset_bootstrap, campaign_file, user_config, tmp_path: Path):
        out = tmp_path / "out"
        result = runner.invoke(main, ["verify", "--campaign", str(campaign_file), "--out", str(out),
                                      "--config", user_config])
        assert result.exit_code == 0, result.output
        assert "Campaign unit:" in result.output
        assert (out / "report.json").is_file()
        assert (out / "report.csv").read_text().splitlines()[0] == CSV_HEADER

    def test_verify_json_output(self, runner, reset_bootstrap, campaign_file, user_config, tmp_path: Path):
        out = tmp_path / "o"
        result = runner.invoke(main, ["verify", "--campaign", str(campaign_file), "--out", str(out),
                                      "--config", user_config, "--seed", "9", "--format", "json"])
        assert result.exit_code == 0, result.output
        assert '"exit_code": 0' in result.output
        payload = json.loads((out / "report.json").read_text())
        assert payload["records"]
        assert payload["campaign"] == "unit"
        assert payload["settings"]["seed"] == 9

    def test_dry_run(self, runner, reset_bootstrap, campaign_file, user_config):
        result = runner.invoke(main, ["verify", "--campaign", str(campaign_file), "--dry-run",
                                      "--config", user_config])
        assert result.exit_code == 0, result.output
        assert "Campaign unit is valid: 3 step(s)." in result.output

    def test_failing_campaign(self, runner, reset_bootstrap, smoke_campaign_data, user_config, tmp_path: Path):
        smoke_campaign_data["steps"] = [{"kind": "constants", "expected": {3: 400.0}}]
        path = tmp_path / "bad.yaml"
        path.write_text(yaml.dump(smoke_campaign_data))
        result = runner.invoke(main, ["verify", "--campaign", str(path), "--out", str(tmp_path / "o"),
                                      "--config", user_config])
        assert result.exit_code == 1
        assert "constants.c1" in result.output

    def test_invalid_campaign(self, runner, reset_bootstrap, smoke_campaign_data, user_config, tmp_path: Path):
        smoke_campaign_data["steps"] = [{"kind": "no-such-check"}]
        path = tmp_path / "invalid.yaml"
        path.write_text(yaml.dump(smoke_campaign_data))
        result = runner.invoke(main, ["verify", "--campaign", str(path), "--dry-run", "--config", user_config])
        assert result.exit_code == 2
        assert "Unknown check" in result.output

    def test_missing_campaign(self, runner, reset_bootstrap, user_config):
        result = runner.invoke(main, ["verify", "--campaign", "does-not-exist", "--config", user_config])
        assert result.exit_code == 2
        assert "not found" in result.output

    def test_bad_override(self, runner, reset_bootstrap, campaign_file, user_config):
        result = runner.invoke(main, ["verify", "--campaign", str(campaign_file), "-o", "seed",
                                      "--config", user_config])
        assert result.exit_code == 2

    @pytest.mark.slow
    def test_smoke_campaign(self, runner, reset_bootstrap, user_config, tmp_path: Path):
        result = runner.invoke(main, ["verify", "--campaign", "smoke", "--out", str(tmp_path / "smoke"),
                                      "--config", user_config])
        assert result.exit_code == 0, result.output


class TestListingCommands:
    def test_campaigns(self, runner, user_config, tmp_path: Path, monkeypatch):
        monkeypatch.chdir(tmp_path)
        (tmp_path / "campaigns").mkdir()
        (tmp_path / "campaigns" / "local.yaml").write_text("name: local\n")
        result = runner.invoke(main, ["campaigns", "--config", user_config])
        assert result.exit_code == 0, result.output
        assert "builtin:smoke" in result.output
        assert "builtin:default" in result.output
        assert "local.yaml" in result.output

    def test_checks(self, runner, reset_bootstrap):
        result = runner.invoke(main, ["checks"])
        assert result.exit_code == 0, result.output
        assert "Kind" in result.output
        for kind in ("oracle", "main-bounds", "halfin-whitt", "lemma-scaling"):
            assert kind in result.output
