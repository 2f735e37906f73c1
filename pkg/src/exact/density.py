"""
Density Matrix - Dense N-qubit state and the channels acting on it

The matrix is kept C-contiguous so that reshaping to (2,) * 2N exposes row
axes 0..N-1 and column axes N..2N-1 as views.
"""

from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

PAULI = {
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


class DensityMatrix:
    """
    2^N x 2^N Hermitian matrix of one circuit realization.

    Positivity is not maintained: antinoise can push eigenvalues below zero.
    """

    def __init__(self, n: int, matrix: np.ndarray):
        dim = 2**n
        if matrix.shape != (dim, dim):
            raise ValueError(f"Matrix shape {matrix.shape} does not match n={n}")
        self.n = n
        self.matrix = np.ascontiguousarray(matrix, dtype=np.complex128)

    @classmethod
    def zero_state(cls, n: int) -> "DensityMatrix":
        matrix = np.zeros((2**n, 2**n), dtype=np.complex128)
        matrix[0, 0] = 1.0
        return cls(n, matrix)

    @classmethod
    def maximally_mixed(cls, n: int) -> "DensityMatrix":
        return cls(n, np.eye(2**n, dtype=np.complex128) / 2**n)

    @classmethod
    def from_statevector(cls, psi: np.ndarray) -> "DensityMatrix":
        n = int(round(np.log2(len(psi))))
        if 2**n != len(psi):
            raise ValueError(f"State vector length {len(psi)} is not a power of two")
        psi = np.asarray(psi, dtype=np.complex128)
        return cls(n, np.outer(psi, psi.conj()))

    @classmethod
    def from_bloch(cls, vectors: Sequence[Sequence[float]]) -> "DensityMatrix":
        """Product state with one Bloch vector per site (site 0 first)"""
        matrix = np.ones((1, 1), dtype=np.complex128)
        for rx, ry, rz in vectors:
            site = 0.5 * (np.eye(2) + rx * PAULI["X"] + ry * PAULI["Y"] + rz * PAULI["Z"])
            matrix = np.kron(matrix, site)
        return cls(len(vectors), matrix)

    def copy(self) -> "DensityMatrix":
        return DensityMatrix(self.n, self.matrix.copy())

    def tensor(self) -> np.ndarray:
        return self.matrix.reshape((2,) * (2 * self.n))

    def trace(self) -> complex:
        return complex(np.trace(self.matrix))

    def purity(self) -> float:
        return float(np.real(np.vdot(self.matrix.conj().T, self.matrix)))

    def hermiticity_residual(self) -> float:
        return float(np.max(np.abs(self.matrix - self.matrix.conj().T)))

    def reduced(self, sites: Sequence[int]) -> np.ndarray:
        """Partial trace onto the given sites (returned in ascending site order)"""
        keep = sorted(set(int(x) for x in sites))
        for x in keep:
            if not 0 <= x < self.n:
                raise ValueError(f"Invalid site '{x}' for n={self.n}")
        traced = [x for x in range(self.n) if x not in keep]
        dk, dt = 2 ** len(keep), 2 ** len(traced)
        perm = keep + traced + [self.n + x for x in keep] + [self.n + x for x in traced]
        blocks = self.tensor().transpose(perm).reshape(dk, dt, dk, dt)
        return np.einsum("ajbj->ab", blocks)

    def expectation(self, operator: np.ndarray, site: int) -> float:
        """Real part of Tr[rho O_site] for a single-site operator"""
        return float(np.real(np.trace(self.reduced([site]) @ operator)))


def _check_sites(rho: DensityMatrix, sites: Sequence[int]) -> None:
    for x in sites:
        if not 0 <= x < rho.n:
            raise ValueError(f"Invalid site '{x}' for n={rho.n}")


def apply_2q_unitary(rho: DensityMatrix, unitary: np.ndarray, pair: Tuple[int, int]) -> DensityMatrix:
    """rho <- U rho U^dagger with U acting on (i, j)"""
    i, j = pair
    if i == j:
        raise ValueError(f"Invalid gate pair ({i}, {j}). Sites must differ")
    _check_sites(rho, pair)
    n = rho.n
    u = np.asarray(unitary, dtype=np.complex128).reshape(2, 2, 2, 2)

    t = np.tensordot(u, rho.tensor(), axes=([2, 3], [i, j]))
    t = np.moveaxis(t, [0, 1], [i, j])
    t = np.tensordot(t, u.conj(), axes=([n + i, n + j], [2, 3]))
    t = np.moveaxis(t, [-2, -1], [n + i, n + j])
    rho.matrix = np.ascontiguousarray(t.reshape(2**n, 2**n))
    return rho


def _site_block(rho: DensityMatrix, site: int) -> np.ndarray:
    _check_sites(rho, (site,))
    return np.moveaxis(rho.tensor(), [site, rho.n + site], [0, 1])


def apply_depolarizing(rho: DensityMatrix, site: int, q: float) -> DensityMatrix:
    """rho <- (1-q) rho + q Tr_site[rho] (x) 1/2"""
    if not 0.0 <= q <= 1.0:
        raise ValueError(f"Invalid noise rate '{q}'. Must lie in [0, 1]")
    v = _site_block(rho, site)
    half_trace = 0.5 * (v[0, 0] + v[1, 1])
    for a in (0, 1):
        v[a, a] *= 1.0 - q
        v[a, a] += q * half_trace
    v[0, 1] *= 1.0 - q
    v[1, 0] *= 1.0 - q
    return rho


def apply_antinoise_map(rho: DensityMatrix, site: int, q_a: float) -> DensityMatrix:
    """rho <- (rho - q_a Tr_site[rho] (x) 1/2) / (1 - q_a); trace preserving, not CP"""
    if not 0.0 <= q_a < 1.0:
        raise ValueError(f"Invalid antinoise rate '{q_a}'. Must lie in [0, 1)")
    if q_a == 0.0:
        return rho
    v = _site_block(rho, site)
    half_trace = 0.5 * (v[0, 0] + v[1, 1])
    scale = 1.0 / (1.0 - q_a)
    for a in (0, 1):
        v[a, a] -= q_a * half_trace
        v[a, a] *= scale
    v[0, 1] *= scale
    v[1, 0] *= scale
    return rho


@dataclass
class SpectralDecomp:
    """Eigenvalues in descending order; may be negative for unphysical states"""
    eigenvalues: np.ndarray

    @property
    def min_eigenvalue(self) -> float:
        return float(self.eigenvalues[-1])


def spectrum(matrix: np.ndarray) -> SpectralDecomp:
    hermitian = 0.5 * (matrix + matrix.conj().T)
    return SpectralDecomp(eigenvalues=np.linalg.eigvalsh(hermitian)[::-1])


def von_neumann_entropy(matrix: np.ndarray, cutoff: float = 1e-15) -> float:
    """
    S = -sum_i lambda_i log2 |lambda_i| over nonzero eigenvalues.

    Equals the usual entropy on physical states and goes negative on states
    with negative eigenvalues.
    """
    if isinstance(matrix, DensityMatrix):
        matrix = matrix.matrix
    lam = spectrum(np.asarray(matrix)).eigenvalues
    lam = lam[np.abs(lam) > cutoff]
    return float(-np.sum(lam * np.log2(np.abs(lam))))


def mutual_information(rho: DensityMatrix, a: int, b: int) -> float:
    """I_ab = S_a + S_b - S_ab"""
    if a == b:
        raise ValueError(f"Mutual information needs distinct sites, got ({a}, {b})")
    return (
        von_neumann_entropy(rho.reduced([a]))
        + von_neumann_entropy(rho.reduced([b]))
        - von_neumann_entropy(rho.reduced([a, b]))
    )
