"""Pure-state decompositions of mixed states and their average variances.

For qubits, two-element decompositions are chords of the Bloch sphere through
the target vector. The chord parallel to the rotation axis minimizes the
average variance (reaching QFI/4); any chord perpendicular to it maximizes the
average (reaching the variance). A numerical optimizer over decomposition
isometries covers general dimension.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .spinops import Spin, as_direction, complete_triad, direction_operator, spin_operators
from .states import (
    DensityMatrix,
    bloch_to_density,
    bloch_to_ket,
    density_to_bloch,
    ket_to_bloch,
    require_ket,
)
from .fluctuation import ket_variance, qfi_bloch_unitary, variance

WEIGHT_ATOL = 1e-10
RECONSTRUCTION_ATOL = 1e-9
PURE_TARGET_THRESHOLD = 1e-10
CROSS_CHECK_ATOL = 1e-9


@dataclass(frozen=True)
class Decomposition:
    """Weighted pure states {(p_k, |psi_k>)} whose mixture is some target state."""

    weights: np.ndarray
    kets: tuple

    def __post_init__(self) -> None:
        w = np.asarray(self.weights, dtype=float).reshape(-1)
        kets = tuple(require_ket(k) for k in self.kets)
        if w.size != len(kets) or w.size == 0:
            raise ValueError("weights and states must pair up and be nonempty")
        if w.min() <= 0:
            raise ValueError(f"weights must be positive, got min {w.min()}")
        if abs(w.sum() - 1.0) > WEIGHT_ATOL:
            raise ValueError(f"weights sum to {w.sum()}, not 1 within 1e-10")
        dims = {k.size for k in kets}
        if len(dims) != 1:
            raise ValueError("all pure states must share one dimension")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "kets", kets)

    def __len__(self) -> int:
        return len(self.kets)

    def reconstruct(self) -> DensityMatrix:
        dim = self.kets[0].size
        rho = np.zeros((dim, dim), dtype=complex)
        for p, ket in zip(self.weights, self.kets):
            rho += p * np.outer(ket, ket.conj())
        rho = (rho + rho.conj().T) / 2
        return DensityMatrix(rho)

    def to_json(self) -> dict:
        return {
            "weights": self.weights.tolist(),
            "states": [
                {"re": k.real.tolist(), "im": k.imag.tolist()} for k in self.kets
            ],
        }


def decomposition_from_json(data: dict) -> Decomposition:
    try:
        weights = data["weights"]
        kets = [
            np.asarray(s["re"], dtype=float) + 1j * np.asarray(s["im"], dtype=float)
            for s in data["states"]
        ]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed decomposition JSON: {exc}") from exc
    return Decomposition(np.asarray(weights, dtype=float), tuple(kets))


def average_variance(d: Decomposition, a: np.ndarray) -> float:
    """Weighted mean of the pure-state variances of A over the decomposition."""
    return float(sum(p * ket_variance(k, a) for p, k in zip(d.weights, d.kets)))


@dataclass(frozen=True)
class ChordDecomposition:
    """Two-element qubit decomposition: a Bloch-sphere chord through the target.

    ``degenerate`` marks the trivial single-element case returned for a pure
    target, where no chord interior exists.
    """

    p: float
    r1: np.ndarray
    r2: np.ndarray
    target: np.ndarray
    degenerate: bool = field(default=False)

    def __post_init__(self) -> None:
        r1 = np.asarray(self.r1, dtype=float).reshape(3)
        r2 = np.asarray(self.r2, dtype=float).reshape(3)
        target = np.asarray(self.target, dtype=float).reshape(3)
        object.__setattr__(self, "r1", r1)
        object.__setattr__(self, "r2", r2)
        object.__setattr__(self, "target", target)
        for r in (r1, r2):
            if abs(np.linalg.norm(r) - 1.0) > 1e-10:
                raise ValueError("chord endpoints must be unit Bloch vectors")
        if not self.degenerate:
            if not 0 < self.p < 1:
                raise ValueError(f"interior weight required, got p = {self.p}")
            mix = self.p * r1 + (1 - self.p) * r2
            if np.abs(mix - target).max() > 1e-10:
                raise ValueError("chord does not reconstruct its target")

    def separations(self) -> tuple[np.ndarray, np.ndarray]:
        """Vectors from the target to the two endpoints."""
        return self.r1 - self.target, self.r2 - self.target

    def to_decomposition(self) -> Decomposition:
        if self.degenerate:
            return Decomposition(np.array([1.0]), (bloch_to_ket(self.r1),))
        return Decomposition(
            np.array([self.p, 1 - self.p]),
            (bloch_to_ket(self.r1), bloch_to_ket(self.r2)),
        )


def chord_decomposition(target, u) -> ChordDecomposition:
    """Two-element decomposition of a mixed qubit along the chord direction u.

    Endpoint distances from the target follow from intersecting the line
    target + t*u with the unit sphere; the weights make the convex combination
    hit the target exactly. A pure target yields the degenerate single-element
    decomposition.
    """
    target = np.asarray(target, dtype=float).reshape(3)
    norm = np.linalg.norm(target)
    if norm > 1 + 1e-12:
        raise ValueError(f"target Bloch length {norm} exceeds 1")
    if norm >= 1 - PURE_TARGET_THRESHOLD:
        unit = target / norm
        return ChordDecomposition(1.0, unit, unit, target, degenerate=True)
    u = as_direction(u)
    along = float(u @ target)
    half_span = np.sqrt(along**2 - norm**2 + 1)
    m1 = half_span - along
    m2 = half_span + along
    r1 = target + m1 * u
    r2 = target - m2 * u
    p = m2 / (m1 + m2)
    return ChordDecomposition(p, r1, r2, target)


def minimal_decomposition(target, n) -> ChordDecomposition:
    """The unique chord parallel to n: average variance of n . L drops to QFI/4."""
    return chord_decomposition(target, as_direction(n))


def maximal_decomposition(target, n) -> ChordDecomposition:
    """A chord perpendicular to n: average variance of n . L equals the variance.

    The perpendicular choice is not unique; deterministic tie-break is
    u = normalize(n x target), falling back to a triad completion of n when
    the target is (anti)parallel to n.
    """
    target = np.asarray(target, dtype=float).reshape(3)
    n = as_direction(n)
    cross = np.cross(n, target)
    cross_norm = np.linalg.norm(cross)
    if cross_norm > 1e-9:
        u = cross / cross_norm
    else:
        u = complete_triad(n).n2
    return chord_decomposition(target, u)


def parallel_axis_gaps(target, d: Decomposition, n) -> tuple[float, float]:
    """Decomposition-averaged QFI and variance gaps for a qubit.

    Returns (qfi_gap, var_gap), where

        qfi_gap = sum_k p_k F_Q[psi_k] - F_Q[rho] = sum_k p_k |n x (r_k - r)|^2
        var_gap = Var[rho] - sum_k p_k Var[psi_k] = (1/4) sum_k p_k (n . (r_k - r))^2

    Both are evaluated from the separation vectors and cross-checked against
    the directly computed averages.
    """
    target = np.asarray(target, dtype=float).reshape(3)
    n = as_direction(n)
    rho = bloch_to_density(target)
    recon = d.reconstruct()
    if np.abs(recon.entries - rho.entries).max() > RECONSTRUCTION_ATOL:
        raise ValueError("decomposition does not reconstruct the target state")
    blochs = [ket_to_bloch(k) for k in d.kets]
    seps = [r - target for r in blochs]
    qfi_gap = sum(
        p * float(np.cross(n, s) @ np.cross(n, s)) for p, s in zip(d.weights, seps)
    )
    var_gap = sum(p * float(n @ s) ** 2 for p, s in zip(d.weights, seps)) / 4

    avg_qfi = sum(p * qfi_bloch_unitary(r, n) for p, r in zip(d.weights, blochs))
    direct_qfi_gap = avg_qfi - qfi_bloch_unitary(target, n)
    ln = direction_operator(spin_operators(Spin(1)), n)
    direct_var_gap = variance(rho, ln) - average_variance(d, ln)
    if abs(direct_qfi_gap - qfi_gap) > CROSS_CHECK_ATOL or (
        abs(direct_var_gap - var_gap) > CROSS_CHECK_ATOL
    ):
        raise ValueError(
            "separation-vector gaps disagree with directly computed averages"
        )
    return float(qfi_gap), float(var_gap)


def eigendecomposition_gaps(rho: DensityMatrix, n) -> tuple[float, float]:
    """Closed-form gaps of the eigendecomposition of a nondegenerate mixed qubit.

    Returns (var_gap, qfi_gap) with

        var_gap = 4 Var[rho] - 4 sum_k w_k Var[phi_k] = (1 - |r|^2) (n . rhat)^2
        qfi_gap = sum_k w_k F_Q[phi_k] - F_Q[rho]    = (1 - |r|^2) |n x rhat|^2

    (note the factor 4 on the variance side), each verified against the
    directly computed averages over the eigenvectors.
    """
    if rho.dim != 2:
        raise ValueError("eigendecomposition gaps are defined for qubits")
    n = as_direction(n)
    r = density_to_bloch(rho)
    norm = np.linalg.norm(r)
    if norm <= 1e-10:
        raise ValueError("degenerate state: eigendecomposition is not unique")
    if norm >= 1 - 1e-10:
        raise ValueError("pure state: no mixed eigendecomposition")
    rhat = r / norm
    var_gap = (1 - norm**2) * float(n @ rhat) ** 2
    cross = np.cross(n, rhat)
    qfi_gap = (1 - norm**2) * float(cross @ cross)

    eigvecs = (rhat, -rhat)
    eigwts = ((1 + norm) / 2, (1 - norm) / 2)
    ln = direction_operator(spin_operators(Spin(1)), n)
    avg_var = sum(
        w * ket_variance(bloch_to_ket(v), ln) for w, v in zip(eigwts, eigvecs)
    )
    direct_var_gap = 4 * (variance(rho, ln) - avg_var)
    avg_qfi = sum(w * qfi_bloch_unitary(v, n) for w, v in zip(eigwts, eigvecs))
    direct_qfi_gap = avg_qfi - qfi_bloch_unitary(r, n)
    if abs(direct_var_gap - var_gap) > CROSS_CHECK_ATOL or (
        abs(direct_qfi_gap - qfi_gap) > CROSS_CHECK_ATOL
    ):
        raise ValueError("closed-form gaps disagree with directly computed averages")
    return float(var_gap), float(qfi_gap)


class RoofResult(NamedTuple):
    value: float
    decomposition: Decomposition
    converged: bool


def _qf(x: np.ndarray) -> np.ndarray:
    """Thin-QR orthonormalization with a deterministic phase convention."""
    q, r = np.linalg.qr(x)
    diag = np.diagonal(r).copy()
    diag = np.where(np.abs(diag) < 1e-300, 1.0, diag)
    return q * (diag / np.abs(diag)).conj()


def _tangent_project(v: np.ndarray, g: np.ndarray) -> np.ndarray:
    """Project an ambient gradient onto the tangent space of {V : V^dag V = 1}."""
    vg = v.conj().T @ g
    return g - v @ ((vg + vg.conj().T) / 2)


def _roof_objective_grad(v: np.ndarray, m0, m1, m2, need_grad=True):
    """Average variance over the decomposition encoded by isometry rows, plus
    its Wirtinger gradient."""
    n = np.einsum("ki,ij,kj->k", v.conj(), m0, v).real
    a = np.einsum("ki,ij,kj->k", v.conj(), m1, v).real
    b = np.einsum("ki,ij,kj->k", v.conj(), m2, v).real
    n = np.maximum(n, 1e-30)
    value = float(np.sum(b - a**2 / n))
    if not need_grad:
        return value, None
    grad = (
        v @ m2.T
        - (2 * a / n)[:, None] * (v @ m1.T)
        + (a**2 / n**2)[:, None] * (v @ m0.T)
    )
    return value, grad


def _bb_descent(v, m0, m1, m2, max_steps: int, step0: float):
    """Non-monotone Barzilai-Borwein descent on the isometry manifold."""
    val, grad = _roof_objective_grad(v, m0, m1, m2)
    rgrad = _tangent_project(v, grad)
    history = [val]
    step = step0
    prev_v = prev_rg = None
    for _ in range(max_steps):
        gnorm2 = float(np.sum(np.abs(rgrad) ** 2))
        if gnorm2 < 1e-22:
            break
        if prev_v is not None:
            dv = v - prev_v
            dg = rgrad - prev_rg
            denom = float(np.sum((dv.conj() * dg)).real)
            if abs(denom) > 1e-30:
                step = float(np.sum(np.abs(dv) ** 2)) / denom
            step = min(max(abs(step), 1e-12), 1e3)
        reference = max(history[-8:])
        ok = False
        while step > 1e-18:
            trial = _qf(v - step * rgrad)
            trial_val, trial_grad = _roof_objective_grad(trial, m0, m1, m2)
            if trial_val <= reference - 1e-4 * step * gnorm2:
                ok = True
                break
            step /= 2
        if not ok:
            break
        prev_v, prev_rg = v, rgrad
        v, val = trial, trial_val
        rgrad = _tangent_project(v, trial_grad)
        history.append(val)
        if len(history) > 30 and max(history[-30:]) - min(history[-30:]) < 1e-13:
            break
    return v, val


def _monotone_polish(v, m0, m1, m2, max_steps: int, step0: float):
    """Monotone Armijo descent; its interior termination defines convergence."""
    val, grad = _roof_objective_grad(v, m0, m1, m2)
    step = step0
    converged = False
    for _ in range(max_steps):
        rgrad = _tangent_project(v, grad)
        gnorm2 = float(np.sum(np.abs(rgrad) ** 2))
        if gnorm2 < 1e-22:
            converged = True
            break
        ok = False
        while step > 1e-18:
            trial = _qf(v - step * rgrad)
            trial_val, trial_grad = _roof_objective_grad(trial, m0, m1, m2)
            if trial_val <= val - 1e-4 * step * gnorm2:
                ok = True
                break
            step /= 2
        if not ok:
            converged = True
            break
        improvement = val - trial_val
        v, val, grad = trial, trial_val, trial_grad
        step *= 1.3
        if improvement < 1e-14:
            converged = True
            break
    return v, val, converged


def numeric_convex_roof(
    rho: DensityMatrix,
    a: np.ndarray,
    restarts: int = 200,
    max_steps: int = 500,
    seed: int = 0,
    elements: int | None = None,
    value_tol: float = 1e-5,
) -> RoofResult:
    """Minimize the decomposition-averaged variance of A by local descent.

    Decompositions of a rank-r state are parameterized by m x r isometries
    acting on the square-root factorization (m = r^2 elements by default).
    Each restart runs projected Barzilai-Borwein descent on the isometry
    manifold; restarts stop early once the best value stalls, and a monotone
    polish pass refines the winner. The result is flagged unconverged when
    neither the polish terminated interiorly nor a second restart reproduced
    the best value within ``value_tol``.
    """
    if rho.dim > 16:
        raise ValueError("numeric roof search supports dim <= 16")
    if a.shape != rho.entries.shape:
        raise ValueError(f"operator shape {a.shape} does not match state dim {rho.dim}")
    keep = rho.eigenvalues > 1e-12
    rank = int(keep.sum())
    factor = rho.eigenvectors[:, keep] * np.sqrt(rho.eigenvalues[keep])
    if rank == 1:
        ket = factor[:, 0] / np.linalg.norm(factor[:, 0])
        d = Decomposition(np.array([1.0]), (ket,))
        return RoofResult(average_variance(d, a), d, True)

    m = elements if elements is not None else rank * rank
    if m < rank:
        raise ValueError(f"need at least rank={rank} elements, got {m}")
    m0 = factor.conj().T @ factor
    m1 = factor.conj().T @ a @ factor
    m2 = factor.conj().T @ (a @ a) @ factor

    best_val = np.inf
    best_v = None
    second_val = np.inf
    stall = 0
    step0 = 0.5 / max(np.abs(np.linalg.eigvalsh(a)).max() ** 2, 1e-12)
    for restart in range(restarts):
        rng = np.random.default_rng([seed & (2**64 - 1), restart])
        v0 = _qf(rng.standard_normal((m, rank)) + 1j * rng.standard_normal((m, rank)))
        v, val = _bb_descent(v0, m0, m1, m2, max_steps, step0)
        if val < best_val - 1e-12:
            second_val = best_val
            best_val, best_v = val, v
            stall = 0
        else:
            second_val = min(second_val, val)
            stall += 1
            if stall >= 20:
                break
    best_v, best_val, polished = _monotone_polish(best_v, m0, m1, m2, max_steps, step0)
    # Converged means the minimum is reproducible: either the polish terminated
    # interiorly or an independent restart landed within value_tol of it.
    converged = polished or (second_val - best_val <= value_tol)

    tilde = best_v @ factor.T  # (m, dim): row k is sum_j V_kj * factor[:, j]
    weights = np.einsum("ki,ki->k", tilde.conj(), tilde).real
    keep_rows = weights > 1e-12
    kets = tuple(
        tilde[k] / np.sqrt(weights[k]) for k in range(m) if keep_rows[k]
    )
    w = weights[keep_rows]
    d = Decomposition(w / w.sum(), kets)
    return RoofResult(float(average_variance(d, a)), d, bool(converged))


@dataclass(frozen=True)
class DualityReport:
    """Cross-direction check: the chord minimizing one axis maximizes the others."""

    avg_n2: float
    var_n2: float
    avg_n3: float
    var_n3: float

    @property
    def residual_n2(self) -> float:
        return self.avg_n2 - self.var_n2

    @property
    def residual_n3(self) -> float:
        return self.avg_n3 - self.var_n3

    @property
    def ok(self) -> bool:
        return abs(self.residual_n2) <= 1e-10 and abs(self.residual_n3) <= 1e-10


def min_max_duality_check(target, triad) -> DualityReport:
    """Verify that the minimal decomposition along triad.n1 attains the plain
    variance along both triad.n2 and triad.n3."""
    d = minimal_decomposition(target, triad.n1).to_decomposition()
    rho = bloch_to_density(target)
    ops = spin_operators(Spin(1))
    out = []
    for n in (triad.n2, triad.n3):
        ln = direction_operator(ops, n)
        out.append((average_variance(d, ln), variance(rho, ln)))
    return DualityReport(out[0][0], out[0][1], out[1][0], out[1][1])
