"""Angular momentum operators for a single spin and for collective N-qubit systems.

Operators are plain complex ``numpy`` arrays in the Lz eigenbasis, with basis
states ordered by descending magnetic quantum number m = s, s-1, ..., -s.
Ladder-operator matrix elements use the standard Condon-Shortley phases.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

HERMITICITY_ATOL = 1e-12
UNIT_ATOL = 1e-12
COLLECTIVE_DIM_CAP = 2**12


@dataclass(frozen=True)
class Spin:
    """Spin quantum number stored as the integer 2s (dimension d = 2s + 1)."""

    two_s: int

    def __post_init__(self) -> None:
        if int(self.two_s) != self.two_s or self.two_s < 1:
            raise ValueError(f"two_s must be a positive integer, got {self.two_s!r}")

    @classmethod
    def from_s(cls, s: float) -> "Spin":
        two_s = round(2 * s)
        if abs(2 * s - two_s) > 1e-12:
            raise ValueError(f"s must be integer or half-integer, got {s}")
        return cls(two_s)

    @property
    def s(self) -> float:
        return self.two_s / 2

    @property
    def dim(self) -> int:
        return self.two_s + 1


def is_hermitian(a: np.ndarray, atol: float = HERMITICITY_ATOL) -> bool:
    a = np.asarray(a)
    return a.ndim == 2 and a.shape[0] == a.shape[1] and np.abs(a - a.conj().T).max() <= atol


def as_direction(n) -> np.ndarray:
    """Validate and return a unit 3-vector."""
    n = np.asarray(n, dtype=float).reshape(3)
    norm = np.linalg.norm(n)
    if abs(norm - 1.0) > UNIT_ATOL:
        raise ValueError(f"direction must be a unit vector, got |n| = {norm}")
    return n


def normalized(v) -> np.ndarray:
    """Scale an arbitrary nonzero 3-vector to unit length."""
    v = np.asarray(v, dtype=float).reshape(3)
    norm = np.linalg.norm(v)
    if norm == 0.0:
        raise ValueError("cannot normalize the zero vector")
    return v / norm


def spin_operators(spin: Spin) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Return (Lx, Ly, Lz) for the given spin.

    Built from the raising operator L+ |s,m> = sqrt(s(s+1) - m(m+1)) |s,m+1>
    in the descending-m basis, so that [Lx, Ly] = i Lz (and cyclic) and
    Lx^2 + Ly^2 + Lz^2 = s(s+1) * identity.
    """
    s = spin.s
    d = spin.dim
    m = s - np.arange(d)
    lz = np.diag(m).astype(complex)
    raise_amp = np.sqrt(s * (s + 1) - m[1:] * (m[1:] + 1))
    lp = np.zeros((d, d), dtype=complex)
    lp[np.arange(d - 1), np.arange(1, d)] = raise_amp
    lm = lp.conj().T
    lx = (lp + lm) / 2
    ly = (lp - lm) / 2j
    return lx, ly, lz


def direction_operator(ops: tuple[np.ndarray, np.ndarray, np.ndarray], n) -> np.ndarray:
    """Angular momentum component n . L; linear in n."""
    lx, ly, lz = ops
    if not (lx.shape == ly.shape == lz.shape):
        raise ValueError("operator triple has mismatched dimensions")
    n = np.asarray(n, dtype=float).reshape(3)
    return n[0] * lx + n[1] * ly + n[2] * lz


@dataclass(frozen=True)
class Triad:
    """Right-handed orthonormal basis (n1, n2, n3) of R^3."""

    n1: np.ndarray
    n2: np.ndarray
    n3: np.ndarray

    def __post_init__(self) -> None:
        for v in (self.n1, self.n2, self.n3):
            as_direction(v)
        dots = (
            abs(float(self.n1 @ self.n2)),
            abs(float(self.n1 @ self.n3)),
            abs(float(self.n2 @ self.n3)),
        )
        if max(dots) > UNIT_ATOL:
            raise ValueError(f"triad axes are not orthogonal, dot products {dots}")
        if np.abs(np.cross(self.n1, self.n2) - self.n3).max() > 1e-12:
            raise ValueError("triad is not right-handed (n1 x n2 != n3)")

    def __iter__(self):
        return iter((self.n1, self.n2, self.n3))


def complete_triad(n1) -> Triad:
    """Deterministically extend a unit vector to a right-handed orthonormal triad.

    The coordinate axis least aligned with n1 is Gram-Schmidt orthogonalized to
    give n2; n3 = n1 x n2.
    """
    n1 = as_direction(n1)
    axis = int(np.argmin(np.abs(n1)))
    e = np.zeros(3)
    e[axis] = 1.0
    n2 = e - (e @ n1) * n1
    n2 /= np.linalg.norm(n2)
    n3 = np.cross(n1, n2)
    return Triad(n1, n2, n3)


def random_triad(rng: np.random.Generator) -> Triad:
    """Haar-random right-handed orthonormal triad."""
    n1 = normalized(rng.standard_normal(3))
    v = rng.standard_normal(3)
    v -= (v @ n1) * n1
    while np.linalg.norm(v) < 1e-8:
        v = rng.standard_normal(3)
        v -= (v @ n1) * n1
    n2 = v / np.linalg.norm(v)
    return Triad(n1, n2, np.cross(n1, n2))


def collective_operator(n_qubits: int, single: np.ndarray) -> np.ndarray:
    """Sum of one single-qubit operator acting on each of N qubits.

    Qubit 0 is the leftmost (most significant) tensor factor.
    """
    single = np.asarray(single, dtype=complex)
    if single.shape != (2, 2):
        raise ValueError(f"single-qubit operator must be 2x2, got {single.shape}")
    if n_qubits < 1:
        raise ValueError("need at least one qubit")
    dim = 2**n_qubits
    if dim > COLLECTIVE_DIM_CAP:
        raise ValueError(
            f"collective dimension 2^{n_qubits} exceeds the cap {COLLECTIVE_DIM_CAP}"
        )
    total = np.zeros((dim, dim), dtype=complex)
    for i in range(n_qubits):
        term = np.kron(np.eye(2**i), np.kron(single, np.eye(2 ** (n_qubits - 1 - i))))
        total += term
    return total


def collective_spin_operators(n_qubits: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Collective (Lx, Ly, Lz) for N qubits, each component a sum of sigma_k / 2."""
    lx1, ly1, lz1 = spin_operators(Spin(1))
    return (
        collective_operator(n_qubits, lx1),
        collective_operator(n_qubits, ly1),
        collective_operator(n_qubits, lz1),
    )
