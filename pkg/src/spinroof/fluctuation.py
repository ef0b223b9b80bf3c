"""Variances, quantum Fisher information, and the 3x3 Fisher/covariance matrices.

The QFI uses the spectral form over the cached eigendecomposition,

    F_Q[rho, A] = 2 sum_{k,l} (w_k - w_l)^2 / (w_k + w_l) |<k|A|l>|^2,

with (k, l) pairs dropped when w_k + w_l < 1e-12 (both numerically zero), the
standard regularization at rank deficiency.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .states import DensityMatrix, require_ket

SPECTRAL_FLOOR = 1e-12
CURVE_PURE_THRESHOLD = 1e-9
TANGENT_ATOL = 1e-10


def expectation(rho: DensityMatrix, a: np.ndarray) -> float:
    """<A> = Tr(rho A), real for Hermitian A."""
    if a.shape != rho.entries.shape:
        raise ValueError(f"operator shape {a.shape} does not match state dim {rho.dim}")
    return float(np.trace(rho.entries @ a).real)


def variance(rho: DensityMatrix, a: np.ndarray) -> float:
    """<A^2> - <A>^2, clamped at zero from below (negative roundoff is noise)."""
    mean = expectation(rho, a)
    second = float(np.trace(rho.entries @ a @ a).real)
    return max(second - mean * mean, 0.0)


def ket_variance(ket: np.ndarray, a: np.ndarray) -> float:
    """Variance of A in a pure state given as a vector."""
    ket = require_ket(ket)
    aket = a @ ket
    mean = float(np.vdot(ket, aket).real)
    second = float(np.vdot(aket, aket).real)
    return max(second - mean * mean, 0.0)


def _spectral_weights(w: np.ndarray) -> np.ndarray:
    num = (w[:, None] - w[None, :]) ** 2
    den = w[:, None] + w[None, :]
    return np.divide(num, den, out=np.zeros_like(num), where=den >= SPECTRAL_FLOOR)


def qfi(rho: DensityMatrix, a: np.ndarray) -> float:
    """Quantum Fisher information of rho for the generator A."""
    if a.shape != rho.entries.shape:
        raise ValueError(f"operator shape {a.shape} does not match state dim {rho.dim}")
    v = rho.eigenvectors
    am = v.conj().T @ a @ v
    weights = _spectral_weights(rho.eigenvalues)
    return float(2 * np.sum(weights * np.abs(am) ** 2))


def qfi_bloch_unitary(r, n) -> float:
    """QFI of a qubit with Bloch vector r under rotation about the unit axis n.

    Equals |n x r|^2 = |r|^2 - (n . r)^2.
    """
    r = np.asarray(r, dtype=float).reshape(3)
    if np.linalg.norm(r) > 1 + 1e-12:
        raise ValueError("Bloch vector length exceeds 1")
    n = np.asarray(n, dtype=float).reshape(3)
    if abs(np.linalg.norm(n) - 1.0) > 1e-12:
        raise ValueError("rotation axis must be a unit vector")
    cross = np.cross(n, r)
    return float(cross @ cross)


@dataclass(frozen=True)
class TangentBloch:
    """A Bloch vector together with its parameter derivative along a curve."""

    r: np.ndarray
    dr: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "r", np.asarray(self.r, dtype=float).reshape(3))
        object.__setattr__(self, "dr", np.asarray(self.dr, dtype=float).reshape(3))
        norm = np.linalg.norm(self.r)
        if norm > 1 + 1e-12:
            raise ValueError(f"Bloch vector length {norm} exceeds 1")


def qfi_bloch_curve(t: TangentBloch) -> float:
    """QFI of a parameterized qubit curve from (r, dr/dtheta).

    |dr|^2 + (dr . r)^2 / (1 - |r|^2) for mixed states; |dr|^2 on the sphere
    surface, where the radial term must vanish for a consistent tangent.
    """
    norm = np.linalg.norm(t.r)
    radial = float(t.dr @ t.r)
    if norm >= 1 - CURVE_PURE_THRESHOLD:
        if abs(radial) > TANGENT_ATOL:
            raise ValueError(
                f"inconsistent tangent: |r| = {norm} but r . dr = {radial} != 0"
            )
        return float(t.dr @ t.dr)
    return float(t.dr @ t.dr) + radial**2 / (1 - norm**2)


def fisher_matrix(rho: DensityMatrix, ops) -> np.ndarray:
    """Real symmetric 3x3 matrix F with n^T F n = qfi(rho, n . L) for unit n."""
    v = rho.eigenvectors
    mats = []
    for a in ops:
        if a.shape != rho.entries.shape:
            raise ValueError(
                f"operator shape {a.shape} does not match state dim {rho.dim}"
            )
        mats.append(v.conj().T @ a @ v)
    weights = _spectral_weights(rho.eigenvalues)
    f = np.empty((3, 3))
    for i in range(3):
        for j in range(i, 3):
            val = 2 * np.sum(weights * (mats[i] * mats[j].T).real)
            f[i, j] = f[j, i] = val
    return f


def covariance_matrix(rho: DensityMatrix, ops) -> np.ndarray:
    """Symmetrized covariances of the operator triple: (<ab+ba>/2 - <a><b>)_ij."""
    means = [expectation(rho, a) for a in ops]
    gamma = np.empty((3, 3))
    for i in range(3):
        for j in range(i, 3):
            sym = float(np.trace(rho.entries @ (ops[i] @ ops[j] + ops[j] @ ops[i])).real) / 2
            gamma[i, j] = gamma[j, i] = sym - means[i] * means[j]
    return gamma


def purity_gap_bound(rho: DensityMatrix, a: np.ndarray) -> tuple[float, float]:
    """Variance-vs-QFI/4 gap and its purity upper bound.

    Returns (gap, bound) with gap = Var - F_Q/4 and
    bound = (1 - Tr rho^2)/2 * (spread of A's spectrum)^2.
    """
    gap = variance(rho, a) - qfi(rho, a) / 4
    eigs = np.linalg.eigvalsh(a)
    pur = float(np.vdot(rho.entries, rho.entries).real)
    bound = (1 - pur) / 2 * (eigs[-1] - eigs[0]) ** 2
    return float(gap), float(bound)
