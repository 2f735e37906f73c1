"""
Disorder Model - Binary noise rates and antinoise calibration

This module:
1. Describes the binary disorder distribution (q1 w.p. p, q2 w.p. 1-p)
2. Samples spacetime or quenched noise fields
3. Calibrates the antinoise strength at the zero-mean-field point
4. Provides the statistics used on sweep axes (sigma, mean rate)
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Optional, Tuple

import numpy as np


class DisorderMode(Enum):
    """How rates vary across the circuit"""
    SPACETIME = "spacetime"  # fresh draw at every (site, layer)
    QUENCHED = "quenched"    # one spatial row, constant in time


class MitigationMode(Enum):
    ZERO_MEAN_FIELD = "zero-mean-field"
    FIXED = "fixed"


def zero_mean_field_rate(p: float, q1: float, q2: float) -> float:
    """Antinoise strength whose complement is the geometric mean of the noise complements."""
    return 1.0 - (1.0 - q1) ** p * (1.0 - q2) ** (1.0 - p)


def disorder_sigma(p: float, q1: float, q2: float) -> float:
    """Standard deviation of the binary rate distribution."""
    return math.sqrt(p * (1.0 - p)) * (q2 - q1)


def mean_noise_rate(p: float, q1: float, q2: float) -> float:
    return p * q1 + (1.0 - p) * q2


@dataclass(frozen=True)
class DisorderSpec:
    """Binary disorder distribution of depolarizing rates"""
    p: float
    q1: float
    q2: float
    mode: DisorderMode = DisorderMode.SPACETIME
    seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"Invalid p '{self.p}'. Must lie in [0, 1]")
        # q1 == q2 is accepted for the sigma = 0 rows of a sweep
        if not 0.0 <= self.q1 <= self.q2 < 1.0:
            raise ValueError(
                f"Invalid rates q1={self.q1}, q2={self.q2}. Need 0 <= q1 <= q2 < 1"
            )

    @property
    def sigma(self) -> float:
        return disorder_sigma(self.p, self.q1, self.q2)

    @property
    def q_bar(self) -> float:
        return mean_noise_rate(self.p, self.q1, self.q2)

    @property
    def sigma_ratio(self) -> float:
        return self.sigma / self.q_bar if self.q_bar > 0 else 0.0

    @classmethod
    def from_sigma_ratio(
        cls,
        ratio: float,
        q_bar: float,
        p: float = 0.5,
        mode: DisorderMode = DisorderMode.SPACETIME,
        seed: int = 0,
    ) -> "DisorderSpec":
        """
        Place q1, q2 around a fixed mean so that sigma / q_bar equals ratio.

        With spread s = q2 - q1 = ratio * q_bar / sqrt(p(1-p)):
        q1 = q_bar - (1-p) s and q2 = q_bar + p s.
        """
        if ratio < 0:
            raise ValueError(f"Invalid sigma ratio '{ratio}'. Must be >= 0")
        if ratio == 0:
            return cls(p=p, q1=q_bar, q2=q_bar, mode=mode, seed=seed)
        if not 0.0 < p < 1.0:
            raise ValueError(f"Invalid p '{p}'. Disorder needs 0 < p < 1")
        spread = ratio * q_bar / math.sqrt(p * (1.0 - p))
        q1 = q_bar - (1.0 - p) * spread
        q2 = q_bar + p * spread
        if q1 < -1e-12 or q2 >= 1.0:
            raise ValueError(
                f"Sigma ratio {ratio} at q_bar={q_bar}, p={p} gives rates "
                f"q1={q1:.6g}, q2={q2:.6g} outside [0, 1)"
            )
        return cls(p=p, q1=max(q1, 0.0), q2=q2, mode=mode, seed=seed)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "p": self.p,
            "q1": self.q1,
            "q2": self.q2,
            "mode": self.mode.value,
            "seed": self.seed,
        }


@dataclass(frozen=True)
class MitigationSpec:
    """Antinoise applied after every noise channel"""
    mode: MitigationMode
    q_a: float

    def __post_init__(self):
        if not 0.0 <= self.q_a < 1.0:
            raise ValueError(f"Invalid q_a '{self.q_a}'. Must lie in [0, 1)")

    @classmethod
    def zero_mean_field(cls, spec: DisorderSpec) -> "MitigationSpec":
        return cls(
            mode=MitigationMode.ZERO_MEAN_FIELD,
            q_a=zero_mean_field_rate(spec.p, spec.q1, spec.q2),
        )

    @classmethod
    def fixed(cls, q_a: float) -> "MitigationSpec":
        return cls(mode=MitigationMode.FIXED, q_a=q_a)

    @classmethod
    def none(cls) -> "MitigationSpec":
        """Unmitigated circuit"""
        return cls(mode=MitigationMode.FIXED, q_a=0.0)

    def to_dict(self) -> Dict[str, Any]:
        return {"mode": self.mode.value, "q_a": self.q_a}


def create_mitigation(mode: str, spec: DisorderSpec, q_a: Optional[float] = None) -> MitigationSpec:
    valid = [m.value for m in MitigationMode]
    if mode not in valid:
        raise ValueError(f"Invalid mitigation mode '{mode}'. Valid: {valid}")
    if mode == MitigationMode.ZERO_MEAN_FIELD.value:
        return MitigationSpec.zero_mean_field(spec)
    if q_a is None:
        raise ValueError("Mitigation mode 'fixed' requires q_a")
    return MitigationSpec.fixed(q_a)


@dataclass(frozen=True, eq=False)
class NoiseField:
    """Depolarizing rate at every (site, layer); entries are q1 or q2"""
    rates: np.ndarray
    quenched: bool
    q1: float
    q2: float

    @property
    def n_qubits(self) -> int:
        return int(self.rates.shape[0])

    @property
    def depth(self) -> int:
        return int(self.rates.shape[1])

    def layer(self, t: int) -> np.ndarray:
        return self.rates[:, t]

    def low_noise_sites(self) -> np.ndarray:
        """Boolean row of the sites carrying q1 in layer 0"""
        return self.rates[:, 0] == self.q1


def sample_noise_field(
    spec: DisorderSpec, n: int, d: int, rng: Optional[np.random.Generator] = None
) -> NoiseField:
    """
    Draw q1 with probability p and q2 otherwise at every entry.

    Without an explicit stream the field is seeded from spec.seed, which
    makes the result a pure function of (spec, n, d).
    """
    if n < 1 or d < 0:
        raise ValueError(f"Invalid field shape ({n}, {d})")
    if rng is None:
        rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(spec.seed)))

    if spec.mode == DisorderMode.QUENCHED:
        row = np.where(rng.random(n) < spec.p, spec.q1, spec.q2)
        rates = np.repeat(row[:, None], d, axis=1)
    else:
        rates = np.where(rng.random((n, d)) < spec.p, spec.q1, spec.q2)

    rates = np.ascontiguousarray(rates, dtype=np.float64)
    rates.setflags(write=False)
    return NoiseField(
        rates=rates,
        quenched=spec.mode == DisorderMode.QUENCHED,
        q1=spec.q1,
        q2=spec.q2,
    )


def longest_low_noise_run(field: NoiseField, periodic: bool = True) -> Tuple[int, int]:
    """
    Longest contiguous run of q1 sites in the spatial row of a quenched field.

    Returns (start, length); the run may wrap around a periodic chain.
    When q1 == q2 every site counts as low noise.
    """
    low = field.low_noise_sites()
    n = len(low)
    if low.all():
        return 0, n
    if not low.any():
        return 0, 0

    # start scanning just after a high-noise site so wrapped runs are contiguous
    offset = int(np.flatnonzero(~low)[-1]) + 1 if periodic else 0
    best_start, best_len = 0, 0
    run_start, run_len = 0, 0
    for k in range(n):
        x = (offset + k) % n
        if low[x]:
            if run_len == 0:
                run_start = x
            run_len += 1
            if run_len > best_len:
                best_start, best_len = run_start, run_len
        else:
            run_len = 0
    return best_start, best_len


def imry_ma_ratio(run_length: int, q1: float, q_a: float) -> float:
    """
    Bulk amplification of an all-S domain over its two (5/2) boundary costs.

    Each site of the run multiplies the domain weight by the replica
    factor r = ((1 - q1) / (1 - q_a))^2 per layer, so the gain over a run
    of |A| sites is ((1 - q1) / (1 - q_a))^(2|A|) = r^|A|. A ratio above 1
    marks a run long enough to grow.
    """
    gain = ((1.0 - q1) / (1.0 - q_a)) ** (2 * run_length)
    return gain / (5.0 / 2.0) ** 2
