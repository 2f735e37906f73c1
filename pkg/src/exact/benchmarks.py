"""
Output distributions and cross-entropy benchmarks

1. Computational-basis distributions (probability or quasi-probability)
2. Sampling from physical distributions
3. Linear XEB, its mitigated and circuit-averaged variants
4. The sampling estimator of the mitigated XEB
"""

from dataclasses import dataclass
from enum import Enum
from typing import Sequence, Union

import numpy as np

from ..errors import QuasiProbabilityError

CLAMP_TOLERANCE = 1e-12


class DistributionKind(Enum):
    PROBABILITY = "probability"
    QUASI_PROBABILITY = "quasi-probability"


@dataclass
class OutcomeDistribution:
    values: np.ndarray
    kind: DistributionKind

    @property
    def n_qubits(self) -> int:
        return int(round(np.log2(len(self.values))))

    @property
    def negativity(self) -> float:
        """Total weight on negative entries"""
        return float(-np.sum(self.values[self.values < 0]))


Distribution = Union[OutcomeDistribution, np.ndarray, Sequence[float]]


def _values(dist: Distribution) -> np.ndarray:
    if isinstance(dist, OutcomeDistribution):
        return dist.values
    return np.asarray(dist, dtype=float)


def output_distribution(rho) -> OutcomeDistribution:
    """Diagonal of rho; entries within -1e-12 of zero are clamped to zero"""
    values = np.real(np.diag(rho.matrix)).copy()
    if values.min() >= -CLAMP_TOLERANCE:
        return OutcomeDistribution(values=np.clip(values, 0.0, None), kind=DistributionKind.PROBABILITY)
    return OutcomeDistribution(values=values, kind=DistributionKind.QUASI_PROBABILITY)


def sample_outcomes(dist: OutcomeDistribution, m: int, rng: np.random.Generator) -> np.ndarray:
    """m i.i.d. outcome indices; bit x of the bitstring is bit (n-1-x) of the index"""
    if dist.kind != DistributionKind.PROBABILITY:
        raise QuasiProbabilityError(
            f"Cannot sample a quasi-probability distribution (negativity {dist.negativity:.3g})"
        )
    if m < 0:
        raise ValueError(f"Invalid sample count '{m}'")
    p = dist.values / dist.values.sum()
    return rng.choice(len(p), size=m, p=p)


def format_bitstring(index: int, n: int) -> str:
    return format(int(index), f"0{n}b")


def _cross(a: Distribution, b: Distribution, n: int) -> float:
    va, vb = _values(a), _values(b)
    if va.shape != vb.shape or len(va) != 2**n:
        raise ValueError(f"Distribution lengths {len(va)}, {len(vb)} do not match n={n}")
    return float(2**n * np.dot(va, vb) - 1.0)


def xeb(p_n: Distribution, p_0: Distribution, n: int) -> float:
    """Linear cross-entropy benchmark 2^n sum p_n p_0 - 1"""
    return _cross(p_n, p_0, n)


def xeb_mitigated(p_n: Distribution, p_a: Distribution, n: int) -> float:
    """Scores noisy outcomes against the antinoise-only quasi-probabilities"""
    return _cross(p_n, p_a, n)


def xeb_circuit_averaged(p_0: Distribution, p_an: Distribution, n: int) -> float:
    return _cross(p_0, p_an, n)


def estimate_xeb_from_samples(samples: Sequence[int], p_a: Distribution, n: int) -> float:
    """(2^n / M) sum_i p_a(x_i) - 1 over samples drawn from p_n"""
    samples = np.asarray(samples, dtype=int)
    if samples.size == 0:
        raise ValueError("XEB estimate needs at least one sample")
    return float(2**n * np.mean(_values(p_a)[samples]) - 1.0)
