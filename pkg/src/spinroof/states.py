"""Quantum state constructors: density matrices, Bloch vectors, random ensembles,
Dicke and product states.

A ``DensityMatrix`` validates its invariants once and caches the spectral
decomposition, so downstream information measures never re-diagonalize.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb

import numpy as np

from .spinops import HERMITICITY_ATOL, COLLECTIVE_DIM_CAP

TRACE_ATOL = 1e-10
EIG_CLAMP_WINDOW = 1e-10
PURE_NORM_ATOL = 1e-12


class DensityMatrix:
    """Positive-semidefinite, unit-trace complex matrix with cached spectrum.

    Eigenvalues in the roundoff window [-1e-10, 0] are clamped to zero and the
    spectrum is renormalized to unit sum; anything more negative is rejected.
    Instances are immutable after construction.
    """

    __slots__ = ("entries", "eigenvalues", "eigenvectors")

    def __init__(self, entries) -> None:
        a = np.array(entries, dtype=complex)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"density matrix must be square, got shape {a.shape}")
        if np.abs(a - a.conj().T).max() > HERMITICITY_ATOL:
            raise ValueError("density matrix is not Hermitian within 1e-12")
        tr = a.trace()
        if abs(tr - 1.0) > TRACE_ATOL:
            raise ValueError(f"density matrix trace {tr} is not 1 within 1e-10")
        w, v = np.linalg.eigh(a)
        if w.min() < -EIG_CLAMP_WINDOW:
            raise ValueError(f"density matrix has negative eigenvalue {w.min()}")
        w = np.clip(w, 0.0, None)
        w = w / w.sum()
        a.setflags(write=False)
        w.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "entries", a)
        object.__setattr__(self, "eigenvalues", w)
        object.__setattr__(self, "eigenvectors", v)

    def __setattr__(self, name, value):
        raise AttributeError("DensityMatrix is immutable")

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @classmethod
    def from_ket(cls, ket) -> "DensityMatrix":
        ket = np.asarray(ket, dtype=complex).reshape(-1)
        norm2 = float(np.vdot(ket, ket).real)
        if abs(norm2 - 1.0) > PURE_NORM_ATOL:
            raise ValueError(f"state vector squared norm {norm2} is not 1 within 1e-12")
        return cls(np.outer(ket, ket.conj()))

    def __repr__(self) -> str:
        return f"DensityMatrix(dim={self.dim})"


def require_ket(ket) -> np.ndarray:
    """Validate a normalized state vector and return it as a complex array."""
    ket = np.asarray(ket, dtype=complex).reshape(-1)
    norm2 = float(np.vdot(ket, ket).real)
    if abs(norm2 - 1.0) > PURE_NORM_ATOL:
        raise ValueError(f"state vector squared norm {norm2} is not 1 within 1e-12")
    return ket


def bloch_to_density(r) -> DensityMatrix:
    """Qubit state (1 + r.sigma) / 2 from a Bloch vector with |r| <= 1."""
    r = np.asarray(r, dtype=float).reshape(3)
    norm = np.linalg.norm(r)
    if norm > 1 + 1e-12:
        raise ValueError(f"Bloch vector length {norm} exceeds 1")
    x, y, z = r
    return DensityMatrix(
        0.5 * np.array([[1 + z, x - 1j * y], [x + 1j * y, 1 - z]], dtype=complex)
    )


def density_to_bloch(rho: DensityMatrix) -> np.ndarray:
    """Bloch vector of a qubit state; inverse of :func:`bloch_to_density`."""
    if rho.dim != 2:
        raise ValueError(f"Bloch vector defined for qubits only, got dim {rho.dim}")
    a = rho.entries
    return np.array(
        [2 * a[1, 0].real, 2 * a[1, 0].imag, (a[0, 0] - a[1, 1]).real]
    )


def bloch_to_ket(r) -> np.ndarray:
    """State vector of a pure qubit with unit Bloch vector r."""
    r = np.asarray(r, dtype=float).reshape(3)
    norm = np.linalg.norm(r)
    if abs(norm - 1.0) > 1e-10:
        raise ValueError(f"pure qubit requires |r| = 1, got {norm}")
    x, y, z = r / norm
    # Use the dominant column of (1 + r.sigma)/2 for numerical stability.
    if z >= 0:
        ket = np.array([np.sqrt((1 + z) / 2), (x + 1j * y) / np.sqrt(2 * (1 + z))])
    else:
        ket = np.array([(x - 1j * y) / np.sqrt(2 * (1 - z)), np.sqrt((1 - z) / 2)])
    return ket / np.sqrt(np.vdot(ket, ket).real)


def ket_to_bloch(ket) -> np.ndarray:
    """Bloch vector of a pure qubit state vector."""
    a, b = require_ket(ket)
    cross = a.conjugate() * b
    return np.array([2 * cross.real, 2 * cross.imag, abs(a) ** 2 - abs(b) ** 2])


@dataclass(frozen=True)
class HaarPure:
    """Haar-random pure state measure."""


@dataclass(frozen=True)
class GinibreMixed:
    """Mixed states rho = G^dag G / tr(G^dag G) with G a rank x dim complex Gaussian."""

    rank: int


@dataclass(frozen=True)
class RandomSpec:
    """Reproducible sampling recipe: 64-bit seed plus measure."""

    seed: int
    measure: HaarPure | GinibreMixed = HaarPure()


def _complex_gaussian(rng: np.random.Generator, shape) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_state(dim: int, spec: RandomSpec, sample_index: int = 0) -> DensityMatrix:
    """Draw one random state; deterministic in (spec.seed, sample_index).

    Counter-based seeding keeps samples independent of evaluation order, so
    batches may be generated in parallel without changing the result.
    """
    if dim < 2:
        raise ValueError(f"dim must be at least 2, got {dim}")
    rng = np.random.default_rng([spec.seed & (2**64 - 1), sample_index])
    if isinstance(spec.measure, HaarPure):
        ket = _complex_gaussian(rng, dim)
        ket /= np.sqrt(np.vdot(ket, ket).real)
        return DensityMatrix.from_ket(ket)
    rank = spec.measure.rank
    if not 1 <= rank <= dim:
        raise ValueError(f"rank {rank} out of range [1, {dim}]")
    g = _complex_gaussian(rng, (rank, dim))
    rho = g.conj().T @ g
    rho /= rho.trace().real
    rho = (rho + rho.conj().T) / 2
    return DensityMatrix(rho)


def dicke_ket(n_qubits: int, n_up: int) -> np.ndarray:
    """Symmetric N-qubit state vector with exactly n_up qubits in |0> (spin up).

    Qubit 0 is the most significant bit; bit value 0 means spin up, so the
    state is a collective-Lz eigenstate with eigenvalue (2 n_up - N) / 2.
    """
    if not 0 <= n_up <= n_qubits:
        raise ValueError(f"n_up must lie in [0, {n_qubits}], got {n_up}")
    dim = 2**n_qubits
    if dim > COLLECTIVE_DIM_CAP:
        raise ValueError(f"dimension 2^{n_qubits} exceeds the cap {COLLECTIVE_DIM_CAP}")
    ket = np.zeros(dim, dtype=complex)
    amp = 1 / np.sqrt(comb(n_qubits, n_up))
    n_down = n_qubits - n_up
    for down_positions in combinations(range(n_qubits), n_down):
        index = sum(1 << (n_qubits - 1 - q) for q in down_positions)
        ket[index] = amp
    return ket


def dicke_state(n_qubits: int, n_up: int) -> DensityMatrix:
    """Pure Dicke state with n_up spins up; see :func:`dicke_ket`."""
    return DensityMatrix.from_ket(dicke_ket(n_qubits, n_up))


def ghz_ket(n_qubits: int) -> np.ndarray:
    """(|0...0> + |1...1>) / sqrt(2)."""
    dim = 2**n_qubits
    if dim > COLLECTIVE_DIM_CAP:
        raise ValueError(f"dimension 2^{n_qubits} exceeds the cap {COLLECTIVE_DIM_CAP}")
    ket = np.zeros(dim, dtype=complex)
    ket[0] = ket[-1] = 1 / np.sqrt(2)
    return ket


def product_ket(blochs) -> np.ndarray:
    """Tensor product of pure qubits with the given unit Bloch vectors, in order."""
    blochs = list(blochs)
    if not blochs:
        raise ValueError("need at least one Bloch vector")
    if 2 ** len(blochs) > COLLECTIVE_DIM_CAP:
        raise ValueError(f"dimension 2^{len(blochs)} exceeds the cap {COLLECTIVE_DIM_CAP}")
    ket = np.ones(1, dtype=complex)
    for r in blochs:
        ket = np.kron(ket, bloch_to_ket(r))
    return ket


def product_state(blochs) -> DensityMatrix:
    """Pure product state of qubits polarized along the given unit Bloch vectors."""
    return DensityMatrix.from_ket(product_ket(blochs))


def tetrahedron_ket() -> np.ndarray:
    """Spin-2 pure state with vanishing first moments and isotropic second moments.

    Amplitudes (1, 0, 0, sqrt(2), 0) / sqrt(3) in the descending-m basis; the
    isotropy properties are asserted by the test suite rather than assumed.
    """
    return np.array([1, 0, 0, np.sqrt(2), 0], dtype=complex) / np.sqrt(3)


def tetrahedron_state() -> DensityMatrix:
    return DensityMatrix.from_ket(tetrahedron_ket())


def diagonal_spin1(a: float, b: float) -> DensityMatrix:
    """Incoherent mixture diag(a, b, 1-a-b) of spin-1 Lz eigenstates (m = 1, 0, -1)."""
    if a < 0 or b < 0 or a + b > 1:
        raise ValueError(f"(a, b) = ({a}, {b}) outside the probability simplex")
    return DensityMatrix(np.diag([a, b, 1 - a - b]).astype(complex))


def purity(rho: DensityMatrix) -> float:
    """Tr(rho^2)."""
    return float(np.vdot(rho.entries, rho.entries).real)


def symmetric_embedding(n_qubits: int) -> np.ndarray:
    """Isometry from the spin-N/2 space onto the symmetric sector of N qubits.

    Column i is the Dicke state with m = N/2 - i, matching the descending-m
    ordering of :func:`spinroof.spinops.spin_operators`.
    """
    cols = [dicke_ket(n_qubits, n_qubits - i) for i in range(n_qubits + 1)]
    return np.column_stack(cols)


def embed_symmetric_ket(ket, n_qubits: int) -> np.ndarray:
    """Lift a spin-N/2 state vector into the N-qubit symmetric sector."""
    ket = require_ket(ket)
    if ket.size != n_qubits + 1:
        raise ValueError(f"expected dimension {n_qubits + 1}, got {ket.size}")
    return symmetric_embedding(n_qubits) @ ket


def density_to_json(rho: DensityMatrix) -> dict:
    """JSON-ready dict {"dim", "re", "im"} with row-major entry lists."""
    return {
        "dim": rho.dim,
        "re": rho.entries.real.tolist(),
        "im": rho.entries.imag.tolist(),
    }


def density_from_json(data: dict) -> DensityMatrix:
    """Rebuild a state from :func:`density_to_json` output; invariants re-checked."""
    try:
        dim = int(data["dim"])
        re = np.asarray(data["re"], dtype=float)
        im = np.asarray(data["im"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed density-matrix JSON: {exc}") from exc
    if re.shape != (dim, dim) or im.shape != (dim, dim):
        raise ValueError(
            f"entry arrays must be {dim}x{dim}, got re {re.shape}, im {im.shape}"
        )
    return DensityMatrix(re + 1j * im)
