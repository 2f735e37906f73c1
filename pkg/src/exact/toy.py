"""
Few-qubit checks of noise/antinoise cancellation

1. Pauli prefactor law on gate-free circuits
2. Log-prefactor statistics over disorder draws
3. Two-site toy model with identity, SWAP or Haar gates
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Optional, Sequence, Tuple

import numpy as np

from ..circuits.disorder import DisorderSpec, zero_mean_field_rate
from ..errors import ConsistencyError
from .density import PAULI, DensityMatrix, apply_2q_unitary, apply_antinoise_map, apply_depolarizing
from .haar import sample_haar_2q

SWAP = np.array(
    [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex
)
DEFAULT_BLOCH = (0.3, 0.4, 0.5)


def pauli_prefactor_check(
    q_schedule: Sequence[float],
    q_a: float,
    mu: str = "Z",
    rho0: Optional[DensityMatrix] = None,
    site: int = 0,
    tolerance: float = 1e-10,
) -> float:
    """
    Ratio <sigma^mu>_final / <sigma^mu>_initial after rounds of noise and antinoise.

    Raises ConsistencyError unless the ratio equals prod_t (1-q_t)/(1-q_a).
    """
    if mu not in PAULI:
        raise ValueError(f"Invalid Pauli '{mu}'. Valid: {list(PAULI)}")
    rho = (rho0 or DensityMatrix.from_bloch([DEFAULT_BLOCH])).copy()
    initial = rho.expectation(PAULI[mu], site)
    if abs(initial) < 1e-14:
        raise ValueError(f"Initial <{mu}> vanishes on site {site}; ratio undefined")

    for q in q_schedule:
        apply_depolarizing(rho, site, q)
        apply_antinoise_map(rho, site, q_a)

    ratio = rho.expectation(PAULI[mu], site) / initial
    expected = math.prod((1.0 - q) / (1.0 - q_a) for q in q_schedule)
    if abs(ratio - expected) > tolerance * max(1.0, abs(expected)):
        raise ConsistencyError(f"Pauli prefactor {ratio!r} differs from product law {expected!r}")
    return ratio


@dataclass
class PrefactorStats:
    """Statistics of log prod_t (1-q_t)/(1-q_a) over disorder draws"""
    mean: float
    var: float
    stderr: float
    draws: int
    depth: int
    q_a: float

    def to_dict(self) -> Dict[str, Any]:
        return self.__dict__.copy()


def log_prefactor_statistics(
    spec: DisorderSpec,
    d: int,
    draws: int,
    q_a: Optional[float] = None,
    rng: Optional[np.random.Generator] = None,
) -> PrefactorStats:
    """At the zero-mean-field q_a the mean vanishes; other q_a give a mean linear in d."""
    if draws < 2:
        raise ValueError(f"Invalid draws '{draws}'. Need at least 2")
    if q_a is None:
        q_a = zero_mean_field_rate(spec.p, spec.q1, spec.q2)
    if rng is None:
        rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(spec.seed)))

    rates = np.where(rng.random((draws, d)) < spec.p, spec.q1, spec.q2)
    logs = np.log1p(-rates).sum(axis=1) - d * math.log1p(-q_a)
    var = float(np.var(logs, ddof=1))
    return PrefactorStats(
        mean=float(np.mean(logs)),
        var=var,
        stderr=math.sqrt(var / draws),
        draws=draws,
        depth=d,
        q_a=q_a,
    )


class ToyGate(Enum):
    IDENTITY = "identity"
    SWAP = "swap"
    HAAR = "haar"


@dataclass
class ToyModelReport:
    """
    Per-layer comparison of the mitigated two-site circuit with its noiseless twin.

    site_ratios[t, s] is <Z_s>_mitigated / <Z_s>_ideal after t layers;
    expected_ratios holds the analytic values for identity and SWAP gates.
    log_norm_ratio[t] compares the traceless parts of the two states.
    """
    gate: ToyGate
    q_L: float
    q_R: float
    q_a: float
    depth: int
    site_ratios: np.ndarray
    log_norm_ratio: np.ndarray
    expected_ratios: Optional[np.ndarray] = None

    @property
    def residual(self) -> Tuple[float, float]:
        """Deviation factors left after the final layer"""
        return float(self.site_ratios[-1, 0]), float(self.site_ratios[-1, 1])

    def to_dict(self) -> Dict[str, Any]:
        return {
            "gate": self.gate.value,
            "q_L": self.q_L,
            "q_R": self.q_R,
            "q_a": self.q_a,
            "depth": self.depth,
            "site_ratios": self.site_ratios.tolist(),
            "log_norm_ratio": self.log_norm_ratio.tolist(),
            "expected_ratios": None if self.expected_ratios is None else self.expected_ratios.tolist(),
        }


def _expected_ratios(gate: ToyGate, factors: Tuple[float, float], d: int) -> np.ndarray:
    expected = np.ones((d + 1, 2))
    for t in range(1, d + 1):
        for s in (0, 1):
            if gate == ToyGate.IDENTITY:
                expected[t, s] = factors[s] ** t
            else:
                # walking back from layer t the operator alternates sites
                expected[t, s] = math.prod(factors[s if (t - k) % 2 == 0 else 1 - s] for k in range(1, t + 1))
    return expected


def two_site_toy_model(
    q_L: float,
    q_R: float,
    d: int,
    gate: ToyGate = ToyGate.SWAP,
    rng: Optional[np.random.Generator] = None,
    q_a: Optional[float] = None,
    bloch: Tuple[Sequence[float], Sequence[float]] = ((0.3, 0.2, 0.6), (-0.1, 0.4, 0.5)),
    tolerance: float = 1e-10,
) -> ToyModelReport:
    """
    Two sites with noise q_L, q_R and a shared antinoise q_a.

    The default q_a is the zero-mean-field value 1 - sqrt((1-q_L)(1-q_R)).
    For identity and SWAP gates the measured ratios are checked against the
    analytic products and a ConsistencyError is raised on mismatch.
    """
    gate = ToyGate(gate)
    if d < 0:
        raise ValueError(f"Invalid depth '{d}'")
    if q_a is None:
        q_a = zero_mean_field_rate(0.5, q_L, q_R)
    if gate == ToyGate.HAAR and rng is None:
        raise ValueError("Haar toy model needs an rng")

    ideal = DensityMatrix.from_bloch(bloch)
    mitigated = ideal.copy()
    identity4 = np.eye(4) / 4.0

    site_ratios = np.ones((d + 1, 2))
    log_norm = np.zeros(d + 1)

    for t in range(1, d + 1):
        if gate != ToyGate.IDENTITY:
            u = SWAP if gate == ToyGate.SWAP else sample_haar_2q(rng)
            apply_2q_unitary(ideal, u, (0, 1))
            apply_2q_unitary(mitigated, u, (0, 1))
        for site, q in ((0, q_L), (1, q_R)):
            apply_depolarizing(mitigated, site, q)
            apply_antinoise_map(mitigated, site, q_a)

        for s in (0, 1):
            ref = ideal.expectation(PAULI["Z"], s)
            site_ratios[t, s] = mitigated.expectation(PAULI["Z"], s) / ref if abs(ref) > 1e-12 else math.nan
        log_norm[t] = math.log(
            np.linalg.norm(mitigated.matrix - identity4) / np.linalg.norm(ideal.matrix - identity4)
        )

    expected = None
    if gate != ToyGate.HAAR:
        factors = ((1.0 - q_L) / (1.0 - q_a), (1.0 - q_R) / (1.0 - q_a))
        expected = _expected_ratios(gate, factors, d)
        if not np.allclose(site_ratios, expected, rtol=tolerance, atol=tolerance):
            raise ConsistencyError(
                f"{gate.value} toy model ratios {site_ratios[-1]} differ from analytic {expected[-1]}"
            )

    return ToyModelReport(
        gate=gate,
        q_L=q_L,
        q_R=q_R,
        q_a=q_a,
        depth=d,
        site_ratios=site_ratios,
        log_norm_ratio=log_norm,
        expected_ratios=expected,
    )


def swap_toy_model(q_L: float, q_R: float, d: int) -> ToyModelReport:
    """
    SWAP-gate toy model at the zero-mean-field antinoise.

    The residual after d layers depends only on the parity of d:

    - d even (including 0): residual == (1, 1). Each operator has visited
      both sites equally often and the two factors cancel.
    - d odd: residual == ((1-q_L)/(1-q_a), (1-q_R)/(1-q_a)). Site s keeps
      the factor of the last layer applied at s.
    """
    return two_site_toy_model(q_L, q_R, d, gate=ToyGate.SWAP)
