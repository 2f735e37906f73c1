"""Haar-random two-qubit gates and global states"""

import numpy as np
from scipy.linalg import qr


def sample_haar_2q(rng: np.random.Generator) -> np.ndarray:
    """QR of a complex Ginibre matrix with the phases of R's diagonal absorbed."""
    z = (rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))) / np.sqrt(2.0)
    q, r = qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def sample_haar_state(n: int, rng: np.random.Generator) -> np.ndarray:
    """Uniformly random pure state vector of n qubits"""
    dim = 2**n
    psi = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return psi / np.linalg.norm(psi)
