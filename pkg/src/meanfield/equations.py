"""
Mean-field equations of the Brownian noisy circuit

Per-site deviations delta_i from the infinite-temperature state obey

    d delta_i / dt = -4 [Delta_i + (J/N) sum_{j != i} (3 + 4 delta_j)] delta_i

and the population sums G_plus = (S_1 + S_2)/N, G_minus = (S_1 - S_2)/N
(S_k the sum of delta over population k, population 1 carrying the lower
noise rate) close in the large-N limit.
"""

from dataclasses import dataclass
from typing import Any, Callable, Dict, Optional, Tuple

import numpy as np

Rhs = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class MeanFieldParams:
    """Couplings and rates; Delta_k = gamma_k - gamma_a"""
    J: float
    gamma1: float
    gamma2: float
    p: float
    gamma_a: float
    n_sites: int = 2

    def __post_init__(self):
        if self.J <= 0:
            raise ValueError(f"Invalid J '{self.J}'. Must be > 0")
        if min(self.gamma1, self.gamma2, self.gamma_a) < 0:
            raise ValueError(
                f"Invalid rates gamma1={self.gamma1}, gamma2={self.gamma2}, "
                f"gamma_a={self.gamma_a}. Must be >= 0"
            )
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"Invalid p '{self.p}'. Must lie in [0, 1]")
        if self.n_sites < 1:
            raise ValueError(f"Invalid n_sites '{self.n_sites}'")

    @property
    def delta1(self) -> float:
        return self.gamma1 - self.gamma_a

    @property
    def delta2(self) -> float:
        return self.gamma2 - self.gamma_a

    @classmethod
    def zero_mean_field(
        cls, J: float, gamma1: float, gamma2: float, p: float, n_sites: int = 2
    ) -> "MeanFieldParams":
        return cls(
            J=J,
            gamma1=gamma1,
            gamma2=gamma2,
            p=p,
            gamma_a=p * gamma1 + (1.0 - p) * gamma2,
            n_sites=n_sites,
        )

    @classmethod
    def from_disorder(
        cls,
        J: float,
        delta1_abs: float,
        p: float = 0.5,
        gamma_bar: Optional[float] = None,
        n_sites: int = 2,
    ) -> "MeanFieldParams":
        """
        Rates at the zero-mean-field point with |Delta_1| = delta1_abs.

        gamma_a = gamma_bar, gamma1 = gamma_bar - |Delta_1| and
        gamma2 = gamma_bar + p |Delta_1| / (1 - p). The default gamma_bar puts
        gamma1 at zero.
        """
        if delta1_abs < 0:
            raise ValueError(f"Invalid |Delta_1| '{delta1_abs}'. Must be >= 0")
        if not 0.0 < p < 1.0:
            raise ValueError(f"Invalid p '{p}'. Two populations need 0 < p < 1")
        if gamma_bar is None:
            gamma_bar = delta1_abs
        return cls(
            J=J,
            gamma1=gamma_bar - delta1_abs,
            gamma2=gamma_bar + p * delta1_abs / (1.0 - p),
            p=p,
            gamma_a=gamma_bar,
            n_sites=n_sites,
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "J": self.J,
            "gamma1": self.gamma1,
            "gamma2": self.gamma2,
            "p": self.p,
            "gamma_a": self.gamma_a,
            "n_sites": self.n_sites,
        }


@dataclass
class MeanFieldState:
    """Either a per-site delta vector (with its population mask) or the reduced pair"""
    delta: Optional[np.ndarray] = None
    low_noise: Optional[np.ndarray] = None
    reduced: Optional[Tuple[float, float]] = None

    def __post_init__(self):
        if (self.delta is None) == (self.reduced is None):
            raise ValueError("MeanFieldState needs exactly one of delta or reduced")
        if self.delta is not None and self.low_noise is None:
            raise ValueError("A delta state needs its low-noise population mask")


def two_population_mask(n_sites: int, p: float) -> np.ndarray:
    """First round(p N) sites form the low-noise population"""
    mask = np.zeros(n_sites, dtype=bool)
    mask[: int(round(p * n_sites))] = True
    return mask


def site_rates(params: MeanFieldParams, low_noise: np.ndarray) -> np.ndarray:
    """Delta_i per site"""
    return np.where(low_noise, params.delta1, params.delta2)


def delta_rhs(state: MeanFieldState, params: MeanFieldParams, exclude_self: bool = True) -> np.ndarray:
    """
    Time derivative of the per-site deviations.

    exclude_self=False includes j = i in the coupling sum, the large-N form
    whose population averages reproduce gpm_rhs exactly.
    """
    if state.delta is None:
        raise ValueError("delta_rhs needs the per-site representation")
    delta = np.asarray(state.delta, dtype=float)
    n = len(delta)
    weights = 3.0 + 4.0 * delta
    coupling = weights.sum() - (weights if exclude_self else 0.0)
    bracket = site_rates(params, state.low_noise) + params.J / n * coupling
    return -4.0 * bracket * delta


def gpm_rhs(g_plus: float, g_minus: float, params: MeanFieldParams) -> Tuple[float, float]:
    """
    Large-N equations for (G_plus, G_minus) at general p.

    With k = 4|Delta_1| / (2(1-p)):
        dG+ = -4J(3 + 4G+)G+ + k [G- - (2p-1) G+]
        dG- = -4J(3 + 4G+)G- + k [G+ - (2p-1) G-]
    """
    if params.p <= 0.0 or params.p >= 1.0:
        raise ValueError(f"Invalid p '{params.p}'. The reduced equations need 0 < p < 1")
    k = 4.0 * abs(params.delta1) / (2.0 * (1.0 - params.p))
    damping = -4.0 * params.J * (3.0 + 4.0 * g_plus)
    skew = 2.0 * params.p - 1.0
    return (
        damping * g_plus + k * (g_minus - skew * g_plus),
        damping * g_minus + k * (g_plus - skew * g_minus),
    )


def reduce_to_gpm(delta: np.ndarray, low_noise: np.ndarray) -> Tuple[float, float]:
    n = len(delta)
    s1 = float(np.sum(delta[low_noise]))
    s2 = float(np.sum(delta[~low_noise]))
    return (s1 + s2) / n, (s1 - s2) / n


def delta_system(params: MeanFieldParams, low_noise: np.ndarray, exclude_self: bool = True) -> Rhs:
    """Autonomous right-hand side y -> d delta / dt for the integrator"""
    def rhs(y: np.ndarray) -> np.ndarray:
        return delta_rhs(MeanFieldState(delta=y, low_noise=low_noise), params, exclude_self)

    return rhs


def gpm_system(params: MeanFieldParams) -> Rhs:
    def rhs(y: np.ndarray) -> np.ndarray:
        return np.array(gpm_rhs(float(y[0]), float(y[1]), params))

    return rhs
