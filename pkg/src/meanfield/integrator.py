"""Fixed-step fourth-order Runge-Kutta integration with divergence cutoff"""

from dataclasses import dataclass
from typing import Any, Callable, Dict, Optional

import numpy as np

DIVERGENCE_CUTOFF = 10.0


@dataclass
class Trajectory:
    """States at times[k]; truncated at the first runaway step when diverged"""
    times: np.ndarray
    states: np.ndarray
    diverged: bool
    error_estimate: Optional[float] = None

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "times": self.times.tolist(),
            "states": self.states.tolist(),
            "diverged": self.diverged,
            "error_estimate": self.error_estimate,
        }


def _rk4(
    rhs: Callable[[np.ndarray], np.ndarray],
    y0: np.ndarray,
    n_steps: int,
    dt: float,
    cutoff: float,
):
    y = np.array(y0, dtype=float)
    states = [y.copy()]
    for _ in range(n_steps):
        k1 = rhs(y)
        k2 = rhs(y + 0.5 * dt * k1)
        k3 = rhs(y + 0.5 * dt * k2)
        k4 = rhs(y + dt * k3)
        y = y + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not np.all(np.isfinite(y)) or np.max(np.abs(y)) > cutoff:
            return states, True
        states.append(y.copy())
    return states, False


def integrate(
    rhs: Callable[[np.ndarray], np.ndarray],
    y0: np.ndarray,
    t_end: float,
    dt: float = 1e-3,
    cutoff: float = DIVERGENCE_CUTOFF,
    estimate_error: bool = True,
) -> Trajectory:
    """
    Integrate dy/dt = rhs(y) from t = 0 to t_end.

    A component leaving [-cutoff, cutoff] (or turning non-finite) ends the
    run with diverged=True. When the run completes, the final state is
    compared with a half-step run and the Richardson estimate |y_h - y_h/2|/15
    is reported.
    """
    if dt <= 0:
        raise ValueError(f"Invalid dt '{dt}'. Must be > 0")
    if t_end < 0:
        raise ValueError(f"Invalid t_end '{t_end}'. Must be >= 0")
    n_steps = int(round(t_end / dt))
    states, diverged = _rk4(rhs, np.atleast_1d(y0), n_steps, dt, cutoff)

    error = None
    if estimate_error and not diverged and n_steps > 0:
        fine, fine_diverged = _rk4(rhs, np.atleast_1d(y0), 2 * n_steps, dt / 2.0, cutoff)
        if not fine_diverged:
            error = float(np.max(np.abs(states[-1] - fine[-1])) / 15.0)

    return Trajectory(
        times=np.arange(len(states)) * dt,
        states=np.array(states),
        diverged=diverged,
        error_estimate=error,
    )
