"""Uncertainty-relation checks and the numerically determined two-axis floor c(s).

Every check returns a ``RelationReport`` with a stable name, the two sides of
the relation, and a residual whose sign convention makes ``satisfied``
equivalent to ``residual >= -1e-9`` for inequalities and ``|residual| <= 1e-9``
for equalities.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .spinops import Spin, Triad, as_direction, direction_operator, spin_operators
from .states import DensityMatrix, density_to_bloch, purity
from .fluctuation import qfi, variance

INEQUALITY_SLACK = 1e-9
EQUALITY_ATOL = 1e-9


@dataclass(frozen=True)
class RelationReport:
    name: str
    lhs: float
    rhs: float
    satisfied: bool
    residual: float

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "satisfied": self.satisfied,
            "residual": self.residual,
        }


def lower_bound_report(name: str, lhs: float, rhs: float) -> RelationReport:
    """Report for lhs >= rhs; residual = lhs - rhs."""
    residual = lhs - rhs
    return RelationReport(name, float(lhs), float(rhs), residual >= -INEQUALITY_SLACK, float(residual))


def upper_bound_report(name: str, lhs: float, rhs: float) -> RelationReport:
    """Report for lhs <= rhs; residual = rhs - lhs."""
    residual = rhs - lhs
    return RelationReport(name, float(lhs), float(rhs), residual >= -INEQUALITY_SLACK, float(residual))


def equality_report(name: str, lhs: float, rhs: float) -> RelationReport:
    residual = lhs - rhs
    return RelationReport(name, float(lhs), float(rhs), abs(residual) <= EQUALITY_ATOL, float(residual))


def _commutator_mean(rho: DensityMatrix, a: np.ndarray, b: np.ndarray) -> float:
    """<i[A, B]>, real for Hermitian A, B."""
    return float(np.trace(rho.entries @ (1j * (a @ b - b @ a))).real)


def check_robertson(rho: DensityMatrix, a: np.ndarray, b: np.ndarray) -> RelationReport:
    """Product of variances against the squared commutator mean over 4."""
    lhs = variance(rho, a) * variance(rho, b)
    rhs = _commutator_mean(rho, a, b) ** 2 / 4
    return lower_bound_report("robertson.var", lhs, rhs)


def check_robertson_qfi(rho: DensityMatrix, a: np.ndarray, b: np.ndarray) -> RelationReport:
    """QFI times variance against the squared commutator mean (the sharper form)."""
    lhs = qfi(rho, a) * variance(rho, b)
    rhs = _commutator_mean(rho, a, b) ** 2
    return lower_bound_report("robertson.qfi", lhs, rhs)


def check_robertson_tightening(rho: DensityMatrix, a: np.ndarray, b: np.ndarray) -> RelationReport:
    """The QFI form is never weaker: its left side is at most 4x the variance form's."""
    lhs = qfi(rho, a) * variance(rho, b)
    rhs = 4 * variance(rho, a) * variance(rho, b)
    return upper_bound_report("robertson.qfi_no_weaker", lhs, rhs)


def _triple(ops, triad: Triad):
    return tuple(direction_operator(ops, n) for n in triad)


def check_sum3(rho: DensityMatrix, triad: Triad, spin: Spin) -> RelationReport:
    """Three orthogonal variances sum to at least s."""
    ops = spin_operators(spin)
    l1, l2, l3 = _triple(ops, triad)
    lhs = variance(rho, l1) + variance(rho, l2) + variance(rho, l3)
    return lower_bound_report("sum3.var", lhs, spin.s)


def check_sum3_qfi(rho: DensityMatrix, triad: Triad, spin: Spin) -> RelationReport:
    """Replacing the first variance by QFI/4 keeps the floor s and tightens the sum."""
    ops = spin_operators(spin)
    l1, l2, l3 = _triple(ops, triad)
    lhs = qfi(rho, l1) / 4 + variance(rho, l2) + variance(rho, l3)
    return lower_bound_report("sum3.qfi", lhs, spin.s)


def check_sum2(rho: DensityMatrix, n1, n2, spin: Spin, c_of_s: float) -> RelationReport:
    """Two orthogonal variances sum to at least the spin-dependent floor c(s)."""
    ops = spin_operators(spin)
    la = direction_operator(ops, as_direction(n1))
    lb = direction_operator(ops, as_direction(n2))
    lhs = variance(rho, la) + variance(rho, lb)
    return lower_bound_report("sum2.var", lhs, c_of_s)


def check_sum2_qfi(rho: DensityMatrix, n1, n2, spin: Spin, c_of_s: float) -> RelationReport:
    ops = spin_operators(spin)
    la = direction_operator(ops, as_direction(n1))
    lb = direction_operator(ops, as_direction(n2))
    lhs = qfi(rho, la) / 4 + variance(rho, lb)
    return lower_bound_report("sum2.qfi", lhs, c_of_s)


def check_angle_pair(rho: DensityMatrix, a_dir, b_dir) -> RelationReport:
    """Qubit pair bound for arbitrary axes: Var + Var >= (1 - |a.b|) / 4."""
    if rho.dim != 2:
        raise ValueError("angle-pair bound is a qubit relation")
    a_dir = as_direction(a_dir)
    b_dir = as_direction(b_dir)
    ops = spin_operators(Spin(1))
    la = direction_operator(ops, a_dir)
    lb = direction_operator(ops, b_dir)
    lhs = variance(rho, la) + variance(rho, lb)
    rhs = (1 - abs(float(a_dir @ b_dir))) / 4
    return lower_bound_report("angle_pair.var", lhs, rhs)


def check_angle_pair_qfi(rho: DensityMatrix, a_dir, b_dir) -> RelationReport:
    if rho.dim != 2:
        raise ValueError("angle-pair bound is a qubit relation")
    a_dir = as_direction(a_dir)
    b_dir = as_direction(b_dir)
    ops = spin_operators(Spin(1))
    la = direction_operator(ops, a_dir)
    lb = direction_operator(ops, b_dir)
    lhs = qfi(rho, la) / 4 + variance(rho, lb)
    rhs = (1 - abs(float(a_dir @ b_dir))) / 4
    return lower_bound_report("angle_pair.qfi", lhs, rhs)


def qubit_equalities(rho: DensityMatrix, triad: Triad) -> list[RelationReport]:
    """The four purity equalities tying qubit variances and QFI together.

    With P = Tr rho^2 and QFI/4 written q_i, variances v_i along the triad:
    v1+v2+v3 = 1 - P/2; q1+v2+v3 = 1/2; q1+q2+v3 = P/2; q1+q2+q3 = P - 1/2.
    """
    if rho.dim != 2:
        raise ValueError("qubit equalities require dim 2")
    ops = spin_operators(Spin(1))
    l1, l2, l3 = _triple(ops, triad)
    v = [variance(rho, l) for l in (l1, l2, l3)]
    q = [qfi(rho, l) / 4 for l in (l1, l2, l3)]
    p = purity(rho)
    return [
        equality_report("qubit_eq.var3", v[0] + v[1] + v[2], 1 - p / 2),
        equality_report("qubit_eq.qfi1_var2", q[0] + v[1] + v[2], 0.5),
        equality_report("qubit_eq.qfi2_var1", q[0] + q[1] + v[2], p / 2),
        equality_report("qubit_eq.qfi3", q[0] + q[1] + q[2], p - 0.5),
    ]


def purity_band(rho: DensityMatrix, n1, n2) -> list[RelationReport]:
    """Purity-resolved two-axis bands for a qubit, as lower/upper report pairs.

    For orthogonal axes and R = |r|^2: Var+Var in [1/2 - R/4, 1/2];
    QFI/4+Var in [1/4, (1+R)/4]; QFI/4+QFI/4 in [R/4, R/2].
    """
    if rho.dim != 2:
        raise ValueError("purity bands require dim 2")
    n1 = as_direction(n1)
    n2 = as_direction(n2)
    if abs(float(n1 @ n2)) > 1e-10:
        raise ValueError("purity bands require orthogonal directions")
    ops = spin_operators(Spin(1))
    l1 = direction_operator(ops, n1)
    l2 = direction_operator(ops, n2)
    r2 = float(np.linalg.norm(density_to_bloch(rho)) ** 2)
    v1, v2 = variance(rho, l1), variance(rho, l2)
    q1, q2 = qfi(rho, l1) / 4, qfi(rho, l2) / 4
    return [
        lower_bound_report("purity_band.var_var.lower", v1 + v2, 0.5 - r2 / 4),
        upper_bound_report("purity_band.var_var.upper", v1 + v2, 0.5),
        lower_bound_report("purity_band.qfi_var.lower", q1 + v2, 0.25),
        upper_bound_report("purity_band.qfi_var.upper", q1 + v2, (1 + r2) / 4),
        lower_bound_report("purity_band.qfi_qfi.lower", q1 + q2, r2 / 4),
        upper_bound_report("purity_band.qfi_qfi.upper", q1 + q2, r2 / 2),
    ]


@dataclass(frozen=True)
class CsResult:
    """Two-axis variance floor for one spin, with the optimizing pure state."""

    spin: Spin
    c: float
    argmin_state: np.ndarray
    optimizer_trace: tuple = field(default=())
    converged: bool = True


def _two_axis_objective(psi, lx, ly, q):
    n = float(np.vdot(psi, psi).real)
    qpsi = q @ psi
    xpsi = lx @ psi
    ypsi = ly @ psi
    mq = float(np.vdot(psi, qpsi).real) / n
    mx = float(np.vdot(psi, xpsi).real) / n
    my = float(np.vdot(psi, ypsi).real) / n
    value = mq - mx * mx - my * my
    grad = (qpsi - mq * psi) / n - 2 * mx * (xpsi - mx * psi) / n - 2 * my * (ypsi - my * psi) / n
    return value, grad


def compute_c(spin: Spin, restarts: int = 32, seed: int = 0, max_iters: int = 2000) -> CsResult:
    """Minimize Var(Lx) + Var(Ly) over pure states by multi-start projected descent.

    The objective is a smooth quartic in the amplitudes; each restart runs
    gradient descent on the unit sphere (normalize after every step) with
    backtracking line search. Deterministic in (seed, restart index).
    """
    if spin.dim > 201:
        raise ValueError("c(s) search supports dimensions up to 201")
    lx, ly, _ = spin_operators(spin)
    q = lx @ lx + ly @ ly
    scale = max(float(np.abs(np.diagonal(q)).max()), 1.0)

    best_val = np.inf
    best_psi = None
    best_trace: list[tuple[int, float]] = []
    best_converged = False
    for restart in range(restarts):
        rng = np.random.default_rng([seed & (2**64 - 1), restart])
        psi = rng.standard_normal(spin.dim) + 1j * rng.standard_normal(spin.dim)
        psi /= np.linalg.norm(psi)
        val, grad = _two_axis_objective(psi, lx, ly, q)
        trace = [(0, val)]
        step = 0.5 / scale
        converged = False
        it = 0
        for it in range(1, max_iters + 1):
            gnorm2 = float(np.vdot(grad, grad).real)
            if gnorm2 < 1e-24:
                converged = True
                break
            while step > 1e-18:
                trial = psi - step * grad
                trial /= np.linalg.norm(trial)
                trial_val, trial_grad = _two_axis_objective(trial, lx, ly, q)
                if trial_val <= val - 1e-4 * step * gnorm2:
                    break
                step /= 2
            else:
                converged = True
                break
            improvement = val - trial_val
            psi, val, grad = trial, trial_val, trial_grad
            step *= 1.3
            if it % 50 == 0:
                trace.append((it, val))
            if improvement < 1e-15 * scale:
                converged = True
                break
        trace.append((it, val))
        if val < best_val:
            best_val, best_psi = val, psi
            best_trace = trace
            best_converged = converged
    return CsResult(spin, float(best_val), best_psi, tuple(best_trace), best_converged)


def fit_loglog_slope(s_values, c_values) -> float:
    """Least-squares slope of log c against log s."""
    s_values = np.asarray(s_values, dtype=float)
    c_values = np.asarray(c_values, dtype=float)
    if s_values.size < 2:
        return float("nan")
    return float(np.polyfit(np.log(s_values), np.log(c_values), 1)[0])
