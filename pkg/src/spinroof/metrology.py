"""Rotation sensing with an unknown axis: worst-case QFI over axis sets,
the quantum/classical limits, states that saturate them, and the resulting
entanglement witness.

For N qubits the worst-case QFI over all axes in a plane is capped at
N(N+2)/2 (N for separable states); over the full sphere the caps are
N(N+2)/3 and 2N/3.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import log2
from typing import Literal, Union

import numpy as np

from .spinops import as_direction, collective_spin_operators, complete_triad
from .states import (
    DensityMatrix,
    dicke_state,
    embed_symmetric_ket,
    ghz_ket,
    product_state,
    tetrahedron_ket,
)
from .fluctuation import fisher_matrix, qfi

WITNESS_SLACK = 1e-9

StateClass = Literal["all", "separable"]

XYZ_TRIPLE = (
    np.array([1.0, 0.0, 0.0]),
    np.array([0.0, 1.0, 0.0]),
    np.array([0.0, 0.0, 1.0]),
)
TETRAD = tuple(
    np.array(v) / np.sqrt(3)
    for v in ((-1.0, 1.0, 1.0), (1.0, -1.0, 1.0), (1.0, 1.0, -1.0), (1.0, 1.0, 1.0))
)


@dataclass(frozen=True)
class Plane:
    """Rotation axes restricted to the plane orthogonal to ``normal``."""

    normal: np.ndarray = None  # type: ignore[assignment]

    def __post_init__(self) -> None:
        normal = self.normal if self.normal is not None else np.array([0.0, 0.0, 1.0])
        object.__setattr__(self, "normal", as_direction(normal))

    def label(self) -> str:
        return "plane"


@dataclass(frozen=True)
class FullSphere:
    """Rotation axis unrestricted in three dimensions."""

    def label(self) -> str:
        return "sphere"


AxisSet = Union[Plane, FullSphere]


def quantum_limit(axes: AxisSet, n_qubits: int) -> float:
    """Largest worst-case QFI any N-qubit state can reach over the axis set."""
    if n_qubits < 1:
        raise ValueError("need at least one qubit")
    if isinstance(axes, Plane):
        return n_qubits * (n_qubits + 2) / 2
    return n_qubits * (n_qubits + 2) / 3


def classical_limit(axes: AxisSet, n_qubits: int) -> float:
    """Largest worst-case QFI reachable without entanglement."""
    if n_qubits < 1:
        raise ValueError("need at least one qubit")
    if isinstance(axes, Plane):
        return float(n_qubits)
    return 2 * n_qubits / 3


def min_fisher_direction(f: np.ndarray, axes: AxisSet) -> tuple[float, np.ndarray]:
    """Smallest quadratic form n^T F n over the axis set, with its minimizer."""
    if isinstance(axes, FullSphere):
        w, v = np.linalg.eigh(f)
        return float(w[0]), v[:, 0].copy()
    triad = complete_triad(axes.normal)
    basis = (triad.n2, triad.n3)
    block = np.array(
        [[b1 @ f @ b2 for b2 in basis] for b1 in basis]
    )
    w, v = np.linalg.eigh(block)
    # Cross-check the eigensolve against the explicit 2x2 closed form.
    closed = 0.5 * (
        block[0, 0]
        + block[1, 1]
        - np.sqrt((block[0, 0] - block[1, 1]) ** 2 + 4 * block[0, 1] ** 2)
    )
    if abs(closed - w[0]) > 1e-9 * max(1.0, abs(w[0])):
        raise RuntimeError("plane minimum mismatch between eigensolve and closed form")
    direction = v[0, 0] * basis[0] + v[1, 0] * basis[1]
    return float(w[0]), direction / np.linalg.norm(direction)


def min_qfi(rho: DensityMatrix, ops, axes: AxisSet) -> tuple[float, np.ndarray]:
    """Worst-case QFI of rho over the axis set, and the worst axis."""
    f = fisher_matrix(rho, ops)
    return min_fisher_direction(f, axes)


def _infer_qubits(rho: DensityMatrix) -> int:
    n = round(log2(rho.dim))
    if 2**n != rho.dim:
        raise ValueError(f"state dimension {rho.dim} is not a power of 2")
    return n


def optimal_state(axes: AxisSet, state_class: StateClass, n_qubits: int) -> DensityMatrix:
    """A state whose worst-case QFI saturates the requested limit.

    Constructions: twin-Fock Dicke state (plane, all states, N even); all-up
    product (plane, separable); spin-2 state with isotropic second moments in
    the 4-qubit symmetric sector (sphere, all states, N = 4); x/y/z-polarized
    or tetrad-polarized products (sphere, separable, N a multiple of 3 or 4).
    """
    if n_qubits < 1:
        raise ValueError("need at least one qubit")
    if isinstance(axes, Plane):
        if state_class == "all":
            if n_qubits % 2 != 0:
                raise ValueError(
                    "the balanced Dicke construction needs an even number of qubits"
                )
            return dicke_state(n_qubits, n_qubits // 2)
        return product_state([(0.0, 0.0, 1.0)] * n_qubits)
    if state_class == "all":
        if n_qubits != 4:
            raise ValueError(
                "the isotropic (spin-2) construction is implemented for N = 4 only"
            )
        return DensityMatrix.from_ket(embed_symmetric_ket(tetrahedron_ket(), 4))
    if n_qubits % 3 == 0:
        return product_state([XYZ_TRIPLE[i % 3] for i in range(n_qubits)])
    if n_qubits % 4 == 0:
        return product_state([TETRAD[i % 4] for i in range(n_qubits)])
    raise ValueError(
        "balanced Bloch constructions need more than 2 qubits and N a multiple of 3 or 4"
    )


@dataclass(frozen=True)
class ConstraintReport:
    """Residuals of the single-qubit Bloch constraints for saturating the
    full-sphere separable limit: unit norms, balanced squared components
    across axes, vanishing cross sums."""

    norm_residual: float
    balance_residual: float
    cross_residual: float

    @property
    def satisfied(self) -> bool:
        return max(self.norm_residual, self.balance_residual, self.cross_residual) <= 1e-10


def separable_constraints_check(blochs) -> ConstraintReport:
    rs = np.array([np.asarray(r, dtype=float).reshape(3) for r in blochs])
    norms2 = np.sum(rs**2, axis=1)
    norm_res = float(np.abs(norms2 - 1).max())
    sq = np.sum(rs**2, axis=0)
    balance_res = float(sq.max() - sq.min())
    crosses = [
        float(abs(np.sum(rs[:, i] * rs[:, j]))) for i, j in ((0, 1), (0, 2), (1, 2))
    ]
    return ConstraintReport(norm_res, balance_res, float(max(crosses)))


@dataclass(frozen=True)
class LimitReport:
    """Worst-case sensitivity of one state against the quantum and classical caps."""

    n_qubits: int
    axes_label: str
    achieved: float
    quantum_limit: float
    classical_limit: float
    witness: bool
    worst_axis: tuple[float, float, float]
    per_axis_qfi: tuple[float, float, float]

    def to_json(self) -> dict:
        return {
            "n_qubits": self.n_qubits,
            "axes": self.axes_label,
            "achieved": self.achieved,
            "quantum_limit": self.quantum_limit,
            "classical_limit": self.classical_limit,
            "witness": self.witness,
            "worst_axis": list(self.worst_axis),
            "per_axis_qfi": list(self.per_axis_qfi),
        }


def witness_entanglement(rho: DensityMatrix, axes: AxisSet) -> LimitReport:
    """Flag entanglement when the worst-case QFI beats the separable cap.

    The per-axis QFI triple is included so states that saturate the average
    but not the minimum (unequal axes) are easy to diagnose.
    """
    n = _infer_qubits(rho)
    ops = collective_spin_operators(n)
    f = fisher_matrix(rho, ops)
    achieved, axis = min_fisher_direction(f, axes)
    classical = classical_limit(axes, n)
    return LimitReport(
        n_qubits=n,
        axes_label=axes.label(),
        achieved=achieved,
        quantum_limit=quantum_limit(axes, n),
        classical_limit=classical,
        witness=achieved > classical + WITNESS_SLACK,
        worst_axis=tuple(float(x) for x in axis),
        per_axis_qfi=(float(f[0, 0]), float(f[1, 1]), float(f[2, 2])),
    )


def crb(rho: DensityMatrix, a: np.ndarray) -> float:
    """Phase-estimation precision floor 1 / QFI; undefined when the QFI vanishes."""
    value = qfi(rho, a)
    if value <= 1e-12:
        raise ValueError("QFI is zero: the parameter is not estimable with this state")
    return 1.0 / value


def builtin_state(name: str, n_qubits: int) -> DensityMatrix:
    """Named probe states used by the command-line interface."""
    if name == "twin-fock":
        if n_qubits % 2 != 0:
            raise ValueError("twin-fock needs an even number of qubits")
        return dicke_state(n_qubits, n_qubits // 2)
    if name == "all-up":
        return product_state([(0.0, 0.0, 1.0)] * n_qubits)
    if name == "xyz-product":
        if n_qubits % 3 != 0:
            raise ValueError("xyz-product needs a multiple of 3 qubits")
        return product_state([XYZ_TRIPLE[i % 3] for i in range(n_qubits)])
    if name == "tetrad-product":
        if n_qubits % 4 != 0:
            raise ValueError("tetrad-product needs a multiple of 4 qubits")
        return product_state([TETRAD[i % 4] for i in range(n_qubits)])
    if name == "tetrahedron":
        if n_qubits != 4:
            raise ValueError("tetrahedron is a 4-qubit (spin-2) state")
        return DensityMatrix.from_ket(embed_symmetric_ket(tetrahedron_ket(), 4))
    if name == "ghz":
        return DensityMatrix.from_ket(ghz_ket(n_qubits))
    raise ValueError(f"unknown built-in state {name!r}")
