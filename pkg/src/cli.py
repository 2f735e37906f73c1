"""
Command-line interface for the mitigation threshold lab.

Usage:
    mitigation-lab sweep --config config/sweep_all_to_all.yaml --workers 8
    mitigation-lab meanfield --config config/meanfield.yaml
    mitigation-lab instability --config config/instability_1d.yaml
    mitigation-lab xeb --config config/fidelity.yaml
    mitigation-lab collapse --config config/collapse.yaml --sigma-c 0.65 --mu 1.0
    mitigation-lab validate config/sweep_all_to_all.yaml
"""

import logging
import math
import os
import time
from datetime import datetime
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

import click
import numpy as np
import pandas as pd
from dotenv import load_dotenv
from rich.console import Console
from rich.panel import Panel
from rich.progress import Progress, SpinnerColumn, TextColumn
from rich.table import Table

from src import __version__
from src.circuits.disorder import DisorderMode, DisorderSpec, MitigationMode
from src.circuits.topology import TopologyKind
from src.config import (
    DEFAULT_SEED,
    DEFAULT_WORKERS,
    ConfigError,
    RunConfig,
    load_config,
    resolve_setting,
)
from src.errors import DegenerateFieldError
from src.experiments.ensemble import EnsembleRunner, RealizationStreams
from src.experiments.fidelity import (
    FidelitySetting,
    fidelity_scaling,
    fit_fluctuation_exponent,
)
from src.experiments.instability import instability_experiment
from src.experiments.probes import Engine, Probe
from src.experiments.scaling import (
    CollapseSpec,
    curves_from_table,
    find_crossing,
    scaling_collapse,
    scan_collapse,
)
from src.experiments.sweep import SweepSpec, peak_positions, results_table, sweep
from src.meanfield.equations import MeanFieldParams
from src.meanfield.stability import fixed_points, probe_stability, stability_threshold
from src.replica.state import InitialForm
from src.utils.io import read_csv, write_csv, write_manifest
from src.utils.run_log import capture_run_log

# Load environment variables
load_dotenv()

# Setup console
console = Console()

# Configure logging
logging.basicConfig(
    level=os.getenv("LOG_LEVEL", "INFO"),
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
)
logger = logging.getLogger("MitigationLab")

MAX_TRAJECTORY_ROWS = 500


# =============================================================================
# Run functions (one per subcommand)
# =============================================================================


def run_sweep(config: RunConfig, out_dir: Path, seed: int, workers: int) -> Dict[str, Any]:
    """
    Writes sweep.csv (one row per N, sigma/q_bar, depth) and peaks.csv.

    sweep.csv columns: n, sigma_ratio, depth, probe, q1, q2, q_a, mean, std,
    stderr, count, non_finite_count.
    """
    section = config.require("sweep")
    spec = SweepSpec(
        engine=Engine(section.engine),
        topology_kind=TopologyKind(config.topology.kind),
        sizes=section.sizes,
        sigma_ratios=section.sigma_ratios,
        realizations=section.realizations,
        master_seed=seed,
        probe=Probe(section.probe),
        q_bar=section.q_bar,
        p=config.disorder.p,
        disorder_mode=DisorderMode(config.disorder.mode) if config.disorder.mode else None,
        depth_rule=section.depth_rule,
        depth=config.depth,
        mitigation_mode=MitigationMode(config.mitigation.mode),
        q_a=config.mitigation.q_a,
    )
    table = results_table(sweep(spec, EnsembleRunner(seed, workers)))
    write_csv(table, out_dir / "sweep.csv")
    write_csv(peak_positions(table), out_dir / "peaks.csv")

    summary: Dict[str, Any] = {"points": len(table)}
    if len(section.sizes) >= 2:
        crossing = find_crossing(curves_from_table(table))
        summary["crossing"] = {
            "found": crossing.found,
            "estimate": crossing.estimate,
            "uncertainty": crossing.uncertainty,
        }
    return summary


def run_meanfield(config: RunConfig, out_dir: Path, seed: int, workers: int) -> Dict[str, Any]:
    """
    Writes fixed_points.csv, threshold.csv and trajectories.csv.

    fixed_points.csv columns: delta1_abs, label, g_plus, g_minus,
    eig_max_real, eig_min_real, stable.
    trajectories.csv columns: delta1_abs, t, g_plus, g_minus, diverged.
    """
    section = config.require("meanfield")
    p = config.disorder.p

    point_rows: List[Dict[str, Any]] = []
    trajectory_rows: List[Dict[str, Any]] = []
    diverged_count = 0
    for delta1_abs in section.delta1_values:
        params = MeanFieldParams.from_disorder(section.J, delta1_abs, p, section.gamma_bar)
        for point in fixed_points(params):
            point_rows.append({"delta1_abs": delta1_abs, **point.to_dict()})

        trajectory = probe_stability(params, section.t_end, seed, section.dt)
        diverged_count += int(trajectory.diverged)
        stride = max(1, len(trajectory.times) // MAX_TRAJECTORY_ROWS)
        keep = list(range(0, len(trajectory.times), stride))
        if keep[-1] != len(trajectory.times) - 1:
            keep.append(len(trajectory.times) - 1)
        for k in keep:
            trajectory_rows.append(
                {
                    "delta1_abs": delta1_abs,
                    "t": float(trajectory.times[k]),
                    "g_plus": float(trajectory.states[k, 0]),
                    "g_minus": float(trajectory.states[k, 1]),
                    "diverged": trajectory.diverged,
                }
            )

    threshold_rows = []
    for J in section.threshold_J:
        threshold = stability_threshold(J, p)
        threshold_rows.append({"J": J, "p": p, "threshold": threshold, "threshold_over_J": threshold / J})

    write_csv(pd.DataFrame(point_rows), out_dir / "fixed_points.csv")
    write_csv(pd.DataFrame(threshold_rows), out_dir / "threshold.csv")
    write_csv(pd.DataFrame(trajectory_rows), out_dir / "trajectories.csv")
    return {
        "thresholds": {float(r["J"]): r["threshold"] for r in threshold_rows},
        "diverged_trajectories": diverged_count,
    }


def run_instability(config: RunConfig, out_dir: Path, seed: int, workers: int) -> Dict[str, Any]:
    """
    Writes growth.csv (one fit per N and repeat) and traces.csv.

    growth.csv columns: n, repeat, sigma, slope, intercept, r2, d_min, d_max,
    run_start, run_length, imry_ma_ratio, rare_region, draws,
    max_split_residual, degenerate.

    Quenched fields are drawn from streams rooted at disorder.seed when it
    is set, so the fields stay fixed while the master seed changes.
    """
    section = config.require("instability")
    field_seed = config.disorder.seed if config.disorder.seed is not None else seed
    disorder = DisorderSpec(
        p=config.disorder.p,
        q1=config.disorder.q1,
        q2=config.disorder.q2,
        mode=DisorderMode.QUENCHED,
        seed=field_seed,
    )
    streams = RealizationStreams(field_seed)
    growth_rows, trace_rows = [], []
    for n in section.sizes:
        for repeat in range(section.repeats):
            rng = streams.stream(f"instability|n={n}", repeat)
            row: Dict[str, Any] = {"n": n, "repeat": repeat, "sigma": disorder.sigma}
            try:
                fit = instability_experiment(
                    n,
                    disorder,
                    section.d_max,
                    InitialForm(section.form),
                    rng=rng,
                    require_rare_region=section.rare_region,
                    max_draws=section.max_draws,
                )
            except DegenerateFieldError as e:
                logger.warning(str(e))
                growth_rows.append({**row, "degenerate": True})
                continue
            growth_rows.append({**row, **fit.to_dict(), "degenerate": False})
            trace_rows.extend(
                {"n": n, "repeat": repeat, "depth": t, "log_trace_plus": float(v)}
                for t, v in enumerate(fit.log_traces)
            )

    growth = pd.DataFrame(growth_rows)
    write_csv(growth, out_dir / "growth.csv")
    write_csv(pd.DataFrame(trace_rows), out_dir / "traces.csv")
    fitted = growth[~growth["degenerate"]]
    return {
        "fits": int(len(fitted)),
        "degenerate": int(growth["degenerate"].sum()),
        "rare_regions": int(fitted["rare_region"].sum()) if len(fitted) else 0,
        "mean_slope": float(fitted["slope"].mean()) if len(fitted) else math.nan,
    }


def run_xeb(config: RunConfig, out_dir: Path, seed: int, workers: int) -> Dict[str, Any]:
    """
    Writes fidelity.csv (one row per setting, N, depth) and fidelity_fits.csv
    (std(log F) = c d^beta per setting and N).
    """
    section = config.require("xeb")
    settings = [
        FidelitySetting(
            label=s.label,
            sigma_ratio=s.sigma_ratio,
            mitigated=s.mitigated,
            q_bar=section.q_bar,
            p=config.disorder.p,
        )
        for s in section.settings
    ]
    table = fidelity_scaling(
        section.sizes, section.depths, settings, section.realizations, EnsembleRunner(seed, workers)
    )
    fit_rows = []
    for column in ("log_F_M_std", "log_F_XEB_bar_std"):
        if column not in table.columns:
            continue
        fit_rows.extend({"quantity": column, **f.to_dict()} for f in fit_fluctuation_exponent(table, column))

    write_csv(table, out_dir / "fidelity.csv")
    write_csv(pd.DataFrame(fit_rows), out_dir / "fidelity_fits.csv")
    return {"rows": int(len(table)), "fits": len(fit_rows)}


def run_collapse(
    config: RunConfig,
    out_dir: Path,
    seed: int,
    workers: int,
    sigma_c: Optional[float] = None,
    mu: Optional[float] = None,
) -> Dict[str, Any]:
    """
    Reads a sweep.csv and writes collapsed.csv (n, x_scaled, y_scaled) and,
    when a scan grid is configured, collapse_scan.csv (sigma_c, mu, quality).
    """
    section = config.require("collapse")
    input_path = Path(section.input)
    if not input_path.exists():
        raise ConfigError(f"collapse.input: file not found: {input_path}")
    curves = curves_from_table(read_csv(input_path))

    spec = CollapseSpec(
        sigma_c=sigma_c if sigma_c is not None else section.sigma_c,
        mu=mu if mu is not None else section.mu,
        y_exponent=section.y_exponent,
    )
    collapse = scaling_collapse(curves, spec)
    write_csv(collapse.table, out_dir / "collapsed.csv")
    summary: Dict[str, Any] = {"sigma_c": spec.sigma_c, "mu": spec.mu, "quality": collapse.quality}

    if len(curves) >= 2:
        crossing = find_crossing(curves)
        summary["crossing"] = {"found": crossing.found, "estimate": crossing.estimate}

    if section.scan is not None:
        scan_cfg = section.scan
        sigma_grid = _grid(scan_cfg.sigma_min, scan_cfg.sigma_max, scan_cfg.sigma_step)
        mu_grid = _grid(scan_cfg.mu_min, scan_cfg.mu_max, scan_cfg.mu_step)
        scan = scan_collapse(curves, sigma_grid, mu_grid, section.y_exponent)
        write_csv(scan.to_frame(), out_dir / "collapse_scan.csv")
        summary["best"] = {"sigma_c": scan.best_sigma_c, "mu": scan.best_mu}
    return summary


def _grid(lo: float, hi: float, step: float) -> np.ndarray:
    count = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return np.round(lo + step * np.arange(count), 12)


RUNNERS: Dict[str, Callable[..., Dict[str, Any]]] = {
    "sweep": run_sweep,
    "meanfield": run_meanfield,
    "instability": run_instability,
    "xeb": run_xeb,
    "collapse": run_collapse,
}


# =============================================================================
# Shared command plumbing
# =============================================================================


def _load(config_path: str) -> RunConfig:
    try:
        return load_config(Path(config_path))
    except ConfigError as e:
        raise click.UsageError(str(e))


def _flatten(data: Dict[str, Any], prefix: str = "") -> List[tuple]:
    rows = []
    for key, value in data.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            rows.extend(_flatten(value, f"{name}."))
        elif value is not None:
            rows.append((name, str(value)))
    return rows


def _show_config(command: str, config: RunConfig, seed: int, workers: int, out_dir: Path) -> None:
    table = Table(title=f"{command} configuration")
    table.add_column("Key", style="cyan")
    table.add_column("Value")
    for key, value in [("seed", str(seed)), ("workers", str(workers)), ("out", str(out_dir))]:
        table.add_row(key, value)
    section = getattr(config, command)
    shared = config.model_dump(mode="json", include={"topology", "depth", "disorder", "mitigation"})
    for key, value in _flatten(shared) + _flatten({command: section.model_dump(mode="json")}):
        table.add_row(key, value)
    console.print(table)


def _execute(
    command: str,
    config_path: str,
    out: Optional[str],
    workers: Optional[int],
    seed: Optional[int],
    dry_run: bool,
    **kwargs: Any,
) -> None:
    config = _load(config_path)
    try:
        config.require(command)
    except ConfigError as e:
        raise click.UsageError(str(e))

    seed = resolve_setting(seed, config.seed, "MITIGATION_SEED", DEFAULT_SEED)
    workers = resolve_setting(workers, config.workers, "MITIGATION_WORKERS", DEFAULT_WORKERS)
    out_dir = Path(resolve_setting(out, config.out, "MITIGATION_OUT", f"results/{command}", cast=str))

    console.print(Panel.fit(
        f"[bold cyan]{command}[/]\n"
        f"Config: {config_path}\n"
        f"Seed: {seed}  Workers: {workers}",
        title="Mitigation Threshold Lab",
    ))
    _show_config(command, config, seed, workers, out_dir)

    if dry_run:
        console.print("\n[yellow]Dry run - no experiments executed[/]")
        return

    started = datetime.now()
    t0 = time.perf_counter()
    try:
        with capture_run_log(out_dir):
            with Progress(
                SpinnerColumn(),
                TextColumn("[progress.description]{task.description}"),
                console=console,
                transient=True,
            ) as progress:
                progress.add_task(f"Running {command}...", total=None)
                summary = RUNNERS[command](config, out_dir, seed, workers, **kwargs)
    except ConfigError as e:
        raise click.UsageError(str(e))
    except Exception as e:
        logger.exception(f"{command} failed")
        console.print(f"[bold red]Error:[/] {e}")
        raise click.Abort()

    manifest = {
        "command": command,
        "version": __version__,
        "seed": seed,
        "workers": workers,
        "started": started.isoformat(),
        "finished": datetime.now().isoformat(),
        "wall_time_seconds": round(time.perf_counter() - t0, 3),
        "config": config.model_dump(mode="json"),
        "summary": _plain(summary),
    }
    write_manifest(manifest, out_dir / "manifest.yaml")

    table = Table(title="Summary")
    table.add_column("Key", style="cyan")
    table.add_column("Value")
    for key, value in _flatten(_plain(summary)):
        table.add_row(key, value)
    console.print(table)
    console.print(f"\n[green]Results written to {out_dir}[/]")


def _plain(value: Any) -> Any:
    """numpy scalars and NaN to YAML-safe builtins"""
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, (np.floating, float)):
        return None if math.isnan(float(value)) else float(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, np.bool_):
        return bool(value)
    return value


def run_options(func):
    """--config, --out, --workers, --seed and --dry-run shared by every run command"""
    options = [
        click.option("--config", "-c", "config_path", type=click.Path(exists=True), required=True,
                     help="YAML run configuration"),
        click.option("--out", "-o", type=click.Path(), default=None,
                     help="Output directory (default: results/<command>)"),
        click.option("--workers", "-w", type=click.IntRange(min=1), default=None,
                     help="Worker processes (default: MITIGATION_WORKERS or 1)"),
        click.option("--seed", "-s", type=int, default=None,
                     help="Master seed (default: config, MITIGATION_SEED or built-in)"),
        click.option("--dry-run", is_flag=True, help="Validate and show the configuration only"),
    ]
    for option in reversed(options):
        func = option(func)
    return func


# =============================================================================
# Commands
# =============================================================================


@click.group()
@click.version_option(version=__version__)
def cli():
    """Mitigation Threshold Lab - noise/antinoise circuits and their error mitigation threshold"""
    pass


@cli.command("sweep")
@run_options
def sweep_command(config_path, out, workers, seed, dry_run):
    """
    Disorder-averaged probe over system sizes and sigma/q_bar.

    Output: sweep.csv, peaks.csv, manifest.yaml, run.log.
    """
    _execute("sweep", config_path, out, workers, seed, dry_run)


@cli.command("meanfield")
@run_options
def meanfield_command(config_path, out, workers, seed, dry_run):
    """
    Mean-field fixed points, stability, threshold and trajectories.

    Output: fixed_points.csv, threshold.csv, trajectories.csv, manifest.yaml.
    """
    _execute("meanfield", config_path, out, workers, seed, dry_run)


@cli.command("instability")
@run_options
def instability_command(config_path, out, workers, seed, dry_run):
    """
    Growth of the signed replica trace in quenched 1D disorder.

    Output: growth.csv, traces.csv, manifest.yaml.
    """
    _execute("instability", config_path, out, workers, seed, dry_run)


@cli.command("xeb")
@run_options
def xeb_command(config_path, out, workers, seed, dry_run):
    """
    Mitigated fidelity and XEB statistics versus size and depth.

    Output: fidelity.csv, fidelity_fits.csv, manifest.yaml.
    """
    _execute("xeb", config_path, out, workers, seed, dry_run)


@cli.command("collapse")
@run_options
@click.option("--sigma-c", type=float, default=None, help="Critical sigma/q_bar (overrides config)")
@click.option("--mu", type=float, default=None, help="x-axis exponent (overrides config)")
def collapse_command(config_path, out, workers, seed, dry_run, sigma_c, mu):
    """
    Scaling collapse (and optional quality scan) of a sweep table.

    Output: collapsed.csv, collapse_scan.csv (with a scan grid), manifest.yaml.
    """
    _execute("collapse", config_path, out, workers, seed, dry_run, sigma_c=sigma_c, mu=mu)


@cli.command("validate")
@click.argument("config_path", type=click.Path(exists=True))
@click.option("--command", "command", type=click.Choice(list(RUNNERS)), default=None,
              help="Also require the section for this command")
def validate_command(config_path, command):
    """Schema-check a configuration file (exit 0 valid, 2 invalid)."""
    config = _load(config_path)
    command = command or config.command
    if command is not None:
        try:
            config.require(command)
        except ConfigError as e:
            raise click.UsageError(str(e))
    console.print(f"[green]✓[/] {config_path} is valid" + (f" for '{command}'" if command else ""))


def main():
    cli()


if __name__ == "__main__":
    main()
