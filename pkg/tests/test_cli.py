"""
Tests for the command-line interface and run configuration

Tests cover:
1. Schema validation (missing sections, unknown keys, fixed mitigation)
2. Setting precedence: CLI flag > YAML > environment > default
3. validate and --dry-run
4. End-to-end runs on tiny configs, output files and reproducibility
"""

import textwrap

import pandas as pd
import pytest
import yaml
from click.testing import CliRunner

from src import __version__
from src.cli import cli
from src.config import ConfigError, load_config, parse_config, resolve_setting


def _write(path, text: str):
    path.write_text(textwrap.dedent(text))
    return path


SWEEP_YAML = """
    command: sweep
    seed: 7
    topology:
      kind: all-to-all
    sweep:
      engine: replica
      probe: I_ab
      sizes: [4]
      sigma_ratios: [0.0, 0.5]
      realizations: 3
"""


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def sweep_config(tmp_path):
    return _write(tmp_path / "sweep.yaml", SWEEP_YAML)


# =============================================================================
# Configuration
# =============================================================================

class TestConfigSchema:
    """pydantic schema with unknown keys rejected."""

    def test_sweep_config_loads(self, sweep_config):
        config = load_config(sweep_config)
        assert config.command == "sweep"
        assert config.require("sweep").sizes == [4]

    def test_missing_section_names_key(self):
        config = parse_config({"command": "sweep"})
        with pytest.raises(ConfigError, match="sweep"):
            config.require("sweep")

    def test_unknown_key_rejected(self):
        with pytest.raises(ConfigError, match="bogus"):
            parse_config({"bogus": 1})

    def test_nested_error_has_dotted_path(self):
        with pytest.raises(ConfigError, match="sweep.realizations"):
            parse_config(
                {"sweep": {"probe": "I_ab", "sizes": [4], "sigma_ratios": [0.1], "realizations": 0}}
            )

    def test_fixed_mitigation_requires_rate(self):
        with pytest.raises(ConfigError, match="q_a"):
            parse_config({"mitigation": {"mode": "fixed"}})

    def test_instability_requires_rates(self):
        config = parse_config({"instability": {"sizes": [6], "d_max": 4}})
        with pytest.raises(ConfigError, match="disorder.q1"):
            config.require("instability")

    def test_topology_n_stands_in_for_sizes(self):
        config = parse_config(
            {
                "topology": {"n": 6},
                "sweep": {"probe": "I_ab", "sigma_ratios": [0.1], "realizations": 1},
            }
        )
        assert config.require("sweep").sizes == [6]
        assert config.require("sweep").sizes == [6]

    def test_topology_n_conflicts_with_sizes(self):
        config = parse_config(
            {
                "topology": {"n": 6},
                "sweep": {"probe": "I_ab", "sizes": [4, 8], "sigma_ratios": [0.1], "realizations": 1},
            }
        )
        with pytest.raises(ConfigError, match="topology.n"):
            config.require("sweep")

    def test_sizes_required_without_topology_n(self):
        config = parse_config({"sweep": {"probe": "I_ab", "sigma_ratios": [0.1], "realizations": 1}})
        with pytest.raises(ConfigError, match="sweep.sizes"):
            config.require("sweep")

    def test_topology_n_rejected_for_meanfield(self):
        config = parse_config({"topology": {"n": 6}, "meanfield": {"delta1_values": [1.0]}})
        with pytest.raises(ConfigError, match="topology.n"):
            config.require("meanfield")

    def test_disorder_seed_only_for_instability(self):
        config = parse_config(
            {
                "disorder": {"seed": 5},
                "sweep": {"probe": "I_ab", "sizes": [4], "sigma_ratios": [0.1], "realizations": 1},
            }
        )
        with pytest.raises(ConfigError, match="disorder.seed"):
            config.require("sweep")

    def test_command_mismatch(self):
        config = parse_config({"command": "meanfield", "meanfield": {"delta1_values": [1.0]}})
        with pytest.raises(ConfigError, match="meanfield"):
            config.require("sweep")

    def test_non_mapping_file(self, tmp_path):
        path = _write(tmp_path / "list.yaml", "- 1\n- 2\n")
        with pytest.raises(ConfigError, match="mapping"):
            load_config(path)


class TestSettingPrecedence:
    """CLI flag > YAML > environment > default."""

    def test_cli_wins(self, monkeypatch):
        monkeypatch.setenv("MITIGATION_SEED", "3")
        assert resolve_setting(1, 2, "MITIGATION_SEED", 4) == 1

    def test_yaml_beats_environment(self, monkeypatch):
        monkeypatch.setenv("MITIGATION_SEED", "3")
        assert resolve_setting(None, 2, "MITIGATION_SEED", 4) == 2

    def test_environment_beats_default(self, monkeypatch):
        monkeypatch.setenv("MITIGATION_SEED", "3")
        assert resolve_setting(None, None, "MITIGATION_SEED", 4) == 3

    def test_default(self, monkeypatch):
        monkeypatch.delenv("MITIGATION_SEED", raising=False)
        assert resolve_setting(None, None, "MITIGATION_SEED", 4) == 4


# =============================================================================
# validate and dry runs
# =============================================================================

class TestValidateCommand:
    """Exit 0 on a valid file, usage error (exit 2) otherwise."""

    def test_valid(self, runner, sweep_config):
        result = runner.invoke(cli, ["validate", str(sweep_config)])
        assert result.exit_code == 0
        assert "is valid" in result.output

    def test_missing_section(self, runner, tmp_path):
        path = _write(tmp_path / "bad.yaml", "command: sweep\nseed: 1\n")
        result = runner.invoke(cli, ["validate", str(path)])
        assert result.exit_code == 2
        assert "sweep" in result.output

    def test_unknown_key(self, runner, tmp_path):
        path = _write(tmp_path / "bad.yaml", "seeds: 1\n")
        result = runner.invoke(cli, ["validate", str(path)])
        assert result.exit_code == 2
        assert "seeds" in result.output

    def test_version(self, runner):
        result = runner.invoke(cli, ["--version"])
        assert result.exit_code == 0
        assert __version__ in result.output

    def test_run_command_options(self, runner):
        result = runner.invoke(cli, ["sweep", "--help"])
        for option in ("--config", "--out", "--workers", "--seed", "--dry-run"):
            assert option in result.output

    def test_dry_run_writes_nothing(self, runner, sweep_config, tmp_path):
        out = tmp_path / "out"
        result = runner.invoke(cli, ["sweep", "-c", str(sweep_config), "-o", str(out), "--dry-run"])
        assert result.exit_code == 0
        assert "Dry run" in result.output
        assert not out.exists()


# =============================================================================
# End-to-end runs
# =============================================================================

class TestRuns:
    """Tiny configurations through every run command."""

    def test_sweep_writes_outputs(self, runner, sweep_config, tmp_path):
        out = tmp_path / "out"
        result = runner.invoke(cli, ["sweep", "-c", str(sweep_config), "-o", str(out)])
        assert result.exit_code == 0, result.output

        table = pd.read_csv(out / "sweep.csv")
        assert len(table) == 2
        assert {"n", "sigma_ratio", "depth", "mean", "stderr", "count"} <= set(table.columns)
        assert (out / "peaks.csv").exists()
        assert (out / "run.log").exists()

        manifest = yaml.safe_load((out / "manifest.yaml").read_text())
        assert manifest["command"] == "sweep"
        assert manifest["seed"] == 7
        assert manifest["summary"]["points"] == 2

    def test_sweep_rerun_is_identical(self, runner, sweep_config, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        runner.invoke(cli, ["sweep", "-c", str(sweep_config), "-o", str(a)])
        runner.invoke(cli, ["sweep", "-c", str(sweep_config), "-o", str(b), "-w", "2"])
        assert (a / "sweep.csv").read_bytes() == (b / "sweep.csv").read_bytes()

    def test_seed_flag_overrides_config(self, runner, sweep_config, tmp_path):
        out = tmp_path / "out"
        runner.invoke(cli, ["sweep", "-c", str(sweep_config), "-o", str(out), "-s", "99"])
        assert yaml.safe_load((out / "manifest.yaml").read_text())["seed"] == 99

    def test_meanfield(self, runner, tmp_path):
        config = _write(
            tmp_path / "mf.yaml",
            """
            command: meanfield
            seed: 1
            meanfield:
              delta1_values: [1.0, 4.0]
              t_end: 1.0
              threshold_J: [1.0]
            """,
        )
        out = tmp_path / "out"
        result = runner.invoke(cli, ["meanfield", "-c", str(config), "-o", str(out)])
        assert result.exit_code == 0, result.output

        threshold = pd.read_csv(out / "threshold.csv")
        assert threshold["threshold_over_J"].iloc[0] == pytest.approx(3.0, rel=1e-6)
        points = pd.read_csv(out / "fixed_points.csv")
        assert len(points) == 6
        assert (out / "trajectories.csv").exists()

    def test_instability(self, runner, tmp_path):
        config = _write(
            tmp_path / "inst.yaml",
            """
            command: instability
            seed: 2
            disorder:
              q1: 0.0
              q2: 0.6
            instability:
              sizes: [6]
              d_max: 6
              repeats: 2
            """,
        )
        out = tmp_path / "out"
        result = runner.invoke(cli, ["instability", "-c", str(config), "-o", str(out)])
        assert result.exit_code == 0, result.output
        growth = pd.read_csv(out / "growth.csv")
        assert list(growth["repeat"]) == [0, 1]
        assert "degenerate" in growth.columns

    def test_instability_fields_follow_disorder_seed(self, runner, tmp_path):
        config = _write(
            tmp_path / "inst.yaml",
            """
            command: instability
            disorder:
              q1: 0.0
              q2: 0.6
              seed: 13
            topology:
              kind: chain-1d-periodic
              n: 8
            instability:
              d_max: 6
              repeats: 2
            """,
        )
        tables = []
        for master_seed in ("1", "2"):
            out = tmp_path / f"out{master_seed}"
            result = runner.invoke(cli, ["instability", "-c", str(config), "-o", str(out), "-s", master_seed])
            assert result.exit_code == 0, result.output
            tables.append(pd.read_csv(out / "growth.csv"))
        assert list(tables[0]["n"]) == [8, 8]
        assert tables[0]["rare_region"].all()
        columns = ["run_start", "run_length", "draws", "slope"]
        pd.testing.assert_frame_equal(tables[0][columns], tables[1][columns])

    def test_xeb(self, runner, tmp_path):
        config = _write(
            tmp_path / "xeb.yaml",
            """
            command: xeb
            seed: 3
            xeb:
              sizes: [2]
              depths: [1, 2]
              realizations: 2
              settings:
                - label: uniform
                  sigma_ratio: 0.0
            """,
        )
        out = tmp_path / "out"
        result = runner.invoke(cli, ["xeb", "-c", str(config), "-o", str(out)])
        assert result.exit_code == 0, result.output
        table = pd.read_csv(out / "fidelity.csv")
        assert list(table["depth"]) == [1, 2]
        assert (out / "fidelity_fits.csv").exists()

    def test_collapse(self, runner, tmp_path):
        rows = [
            {"n": n, "sigma_ratio": x, "mean": (x - 0.5) * n}
            for n in (4, 8)
            for x in (0.0, 0.25, 0.5, 0.75, 1.0)
        ]
        sweep_csv = tmp_path / "sweep.csv"
        pd.DataFrame(rows).to_csv(sweep_csv, index=False)
        config = _write(
            tmp_path / "collapse.yaml",
            f"""
            command: collapse
            collapse:
              input: {sweep_csv}
              scan:
                sigma_min: 0.4
                sigma_max: 0.6
                sigma_step: 0.1
                mu_min: 0.5
                mu_max: 1.0
                mu_step: 0.5
            """,
        )
        out = tmp_path / "out"
        result = runner.invoke(
            cli, ["collapse", "-c", str(config), "-o", str(out), "--sigma-c", "0.5", "--mu", "1.0"]
        )
        assert result.exit_code == 0, result.output
        assert len(pd.read_csv(out / "collapsed.csv")) == 10
        assert len(pd.read_csv(out / "collapse_scan.csv")) == 6

        manifest = yaml.safe_load((out / "manifest.yaml").read_text())
        assert manifest["summary"]["sigma_c"] == 0.5
        assert manifest["summary"]["crossing"]["estimate"] == pytest.approx(0.5)

    def test_collapse_missing_input(self, runner, tmp_path):
        config = _write(
            tmp_path / "collapse.yaml",
            f"""
            command: collapse
            collapse:
              input: {tmp_path / "absent.csv"}
            """,
        )
        result = runner.invoke(cli, ["collapse", "-c", str(config), "-o", str(tmp_path / "out")])
        assert result.exit_code == 2
        assert "collapse.input" in result.output


# =============================================================================
# RUN TESTS
# =============================================================================

if __name__ == "__main__":
    pytest.main([__file__, "-v"])
