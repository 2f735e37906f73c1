"""
Quenched-disorder instability of the signed two-replica state

In a quenched 1D field the longest run of low-noise sites is
over-mitigated at every layer. Starting from the simple initial condition
on that run, log Tr rho_2^+ grows linearly in depth when the run is long
enough to beat its domain-wall cost.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Tuple

import numpy as np
from scipy.stats import linregress

from ..circuits.disorder import (
    DisorderMode,
    DisorderSpec,
    MitigationSpec,
    NoiseField,
    imry_ma_ratio,
    longest_low_noise_run,
    sample_noise_field,
)
from ..circuits.topology import build_brickwork_schedule
from ..errors import DegenerateFieldError
from ..replica.engine import ReplicaEngine
from ..replica.observables import log_sign_resolved_traces
from ..replica.state import InitialForm, Region, init_simple

logger = logging.getLogger("InstabilityExperiment")

DEFAULT_MAX_DRAWS = 256


@dataclass
class GrowthFit:
    """Linear fit of log Tr rho_2^+ against depth over [d_min, d_max]"""
    slope: float
    intercept: float
    r2: float
    d_min: int
    d_max: int
    run_start: int = 0
    run_length: int = 0
    imry_ma_ratio: float = math.nan
    rare_region: bool = False
    draws: int = 1
    max_split_residual: float = 0.0
    log_traces: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "slope": self.slope,
            "intercept": self.intercept,
            "r2": self.r2,
            "d_min": self.d_min,
            "d_max": self.d_max,
            "run_start": self.run_start,
            "run_length": self.run_length,
            "imry_ma_ratio": self.imry_ma_ratio,
            "rare_region": self.rare_region,
            "draws": self.draws,
            "max_split_residual": self.max_split_residual,
        }


def fit_growth(log_traces: np.ndarray, d_min: int, d_max: int) -> GrowthFit:
    """log_traces[t] is the value after t layers"""
    if not 0 <= d_min < d_max < len(log_traces):
        raise ValueError(f"Invalid fit window [{d_min}, {d_max}] for depth {len(log_traces) - 1}")
    depths = np.arange(d_min, d_max + 1)
    values = np.asarray(log_traces[d_min : d_max + 1], dtype=float)
    if np.ptp(values) < 1e-14:
        return GrowthFit(slope=0.0, intercept=float(values[0]), r2=1.0, d_min=d_min, d_max=d_max)
    fit = linregress(depths, values)
    return GrowthFit(
        slope=float(fit.slope),
        intercept=float(fit.intercept),
        r2=float(fit.rvalue**2),
        d_min=d_min,
        d_max=d_max,
    )


def draw_rare_region_field(
    n: int,
    disorder: DisorderSpec,
    depth: int,
    rng: Optional[np.random.Generator] = None,
    max_draws: int = DEFAULT_MAX_DRAWS,
) -> Tuple[NoiseField, int]:
    """
    Redraw the quenched field until its longest low-noise run is a rare
    region (imry_ma_ratio > 1).

    Returns the field and the number of draws it took. Raises
    DegenerateFieldError when no draw qualifies.
    """
    if max_draws < 1:
        raise ValueError(f"Invalid max_draws '{max_draws}'. Must be >= 1")
    if rng is None:
        rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(disorder.seed)))
    q_a = MitigationSpec.zero_mean_field(disorder).q_a
    for draw in range(1, max_draws + 1):
        field = sample_noise_field(disorder, n, depth, rng)
        _, length = longest_low_noise_run(field)
        if imry_ma_ratio(length, disorder.q1, q_a) > 1.0:
            return field, draw
    raise DegenerateFieldError(
        f"No rare region in {max_draws} quenched fields on n={n} (q1={disorder.q1}, q2={disorder.q2})"
    )


def instability_experiment(
    n: int,
    disorder: DisorderSpec,
    d_max: int,
    form: InitialForm = InitialForm.PRODUCT_ON_A,
    field: Optional[NoiseField] = None,
    rng: Optional[np.random.Generator] = None,
    require_rare_region: bool = False,
    max_draws: int = DEFAULT_MAX_DRAWS,
) -> GrowthFit:
    """
    Evolve the signed state on a brickwork chain at the zero-mean-field
    antinoise and fit the tail half of log Tr rho_2^+.

    With require_rare_region the field is redrawn until its longest
    low-noise run beats the wall cost; otherwise the first draw is used
    and GrowthFit.rare_region reports whether it does.
    """
    if disorder.mode != DisorderMode.QUENCHED:
        raise ValueError(f"Instability experiment needs quenched disorder, got '{disorder.mode.value}'")
    if d_max < 2:
        raise ValueError(f"Invalid d_max '{d_max}'. Must be >= 2")
    draws = 1
    if field is None and require_rare_region:
        field, draws = draw_rare_region_field(n, disorder, d_max, rng, max_draws)
    elif field is None:
        field = sample_noise_field(disorder, n, d_max, rng)
    elif field.n_qubits != n or field.depth < d_max or not field.quenched:
        raise ValueError("Provided field must be quenched with shape (n, >= d_max)")

    start, length = longest_low_noise_run(field)
    if length == 0:
        raise DegenerateFieldError(f"Quenched field on n={n} has no q1={disorder.q1} site")

    mitigation = MitigationSpec.zero_mean_field(disorder)
    region = Region.of((start + k) % n for k in range(length))
    state = init_simple(n, region, form, signed=True)

    log_traces = np.zeros(d_max + 1)
    residuals = np.zeros(d_max + 1)
    log_traces[0], _, residuals[0] = log_sign_resolved_traces(state)

    def record(t: int, current) -> None:
        log_traces[t], _, residuals[t] = log_sign_resolved_traces(current)

    ReplicaEngine().evolve(state, build_brickwork_schedule(n, d_max), field, mitigation, observer=record)

    fit = fit_growth(log_traces, d_max // 2, d_max)
    fit.run_start = start
    fit.run_length = length
    fit.imry_ma_ratio = imry_ma_ratio(length, disorder.q1, mitigation.q_a)
    fit.rare_region = fit.imry_ma_ratio > 1.0
    fit.draws = draws
    fit.max_split_residual = float(residuals.max())
    fit.log_traces = log_traces
    logger.info(
        f"n={n} sigma={disorder.sigma:.4g}: run {length} at {start} "
        f"(rare={fit.rare_region}, draws={draws}), slope={fit.slope:.4g} r2={fit.r2:.3f}"
    )
    return fit
