"""Tests for variances, QFI, and the Fisher/covariance matrices."""

import numpy as np
import pytest

from spinroof import (
    DensityMatrix,
    GinibreMixed,
    RandomSpec,
    Spin,
    TangentBloch,
    bloch_to_density,
    covariance_matrix,
    diagonal_spin1,
    dicke_state,
    direction_operator,
    expectation,
    fisher_matrix,
    purity,
    purity_gap_bound,
    qfi,
    qfi_bloch_curve,
    qfi_bloch_unitary,
    random_state,
    random_triad,
    spin_operators,
    variance,
)

QUBIT_OPS = spin_operators(Spin(1))
SPIN1_OPS = spin_operators(Spin(2))


def random_bloch(rng, mixed=True):
    v = rng.standard_normal(3)
    v /= np.linalg.norm(v)
    return v * rng.uniform(0, 1) ** (1 / 3) if mixed else v


class TestVariance:
    def test_eigenstate_has_zero_variance(self):
        rho = bloch_to_density([0, 0, 1])
        assert variance(rho, QUBIT_OPS[2]) < 1e-15

    def test_half_x_qubit(self):
        rho = bloch_to_density([0.5, 0, 0])
        assert abs(variance(rho, QUBIT_OPS[2]) - 0.25) < 1e-12

    def test_diagonal_spin1_value(self):
        rho = diagonal_spin1(0.2, 0.5)
        assert abs(variance(rho, SPIN1_OPS[2]) - 0.49) < 1e-12

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            variance(bloch_to_density([0, 0, 0]), SPIN1_OPS[2])


class TestQfi:
    def test_commuting_gives_zero(self):
        rho = diagonal_spin1(0.2, 0.5)
        assert qfi(rho, SPIN1_OPS[2]) < 1e-10

    def test_pure_state_equality(self):
        rho = bloch_to_density([0, 0, 1])
        assert abs(qfi(rho, QUBIT_OPS[0]) - 1.0) < 1e-12

    def test_half_x_about_z(self):
        rho = bloch_to_density([0.5, 0, 0])
        assert abs(qfi(rho, QUBIT_OPS[2]) - 0.25) < 1e-10

    def test_bounded_by_four_variances(self):
        rng = np.random.default_rng(0)
        for i in range(200):
            dim = int(rng.integers(2, 5))
            rho = random_state(dim, RandomSpec(1, GinibreMixed(dim)), i)
            a = direction_operator(spin_operators(Spin(dim - 1)), random_triad(rng).n1)
            assert qfi(rho, a) <= 4 * variance(rho, a) + 1e-9

    def test_zero_qfi_iff_commuting(self):
        # commuting pair: diagonal state, diagonal generator
        rho = diagonal_spin1(0.6, 0.3)
        lz = SPIN1_OPS[2]
        assert np.abs(rho.entries @ lz - lz @ rho.entries).max() < 1e-12
        assert qfi(rho, lz) < 1e-10
        # non-commuting pair: same state, transverse generator
        lx = SPIN1_OPS[0]
        assert np.abs(rho.entries @ lx - lx @ rho.entries).max() > 1e-3
        assert qfi(rho, lx) > 1e-6

    def test_additivity_over_tensor_products(self):
        rng = np.random.default_rng(4)
        for i in range(30):
            rho1 = random_state(2, RandomSpec(10, GinibreMixed(2)), i)
            rho2 = random_state(3, RandomSpec(11, GinibreMixed(3)), i)
            a1 = direction_operator(QUBIT_OPS, random_triad(rng).n1)
            a2 = direction_operator(SPIN1_OPS, random_triad(rng).n1)
            joint = DensityMatrix(np.kron(rho1.entries, rho2.entries))
            gen = np.kron(a1, np.eye(3)) + np.kron(np.eye(2), a2)
            total = qfi(joint, gen)
            assert abs(total - qfi(rho1, a1) - qfi(rho2, a2)) < 1e-9

    def test_mixture_hierarchy(self):
        rng = np.random.default_rng(8)
        for trial in range(1000):
            dim = int(rng.integers(2, 5))
            parts = [
                random_state(dim, RandomSpec(20 + dim, GinibreMixed(dim)), 3 * trial + j)
                for j in range(3)
            ]
            p = rng.dirichlet(np.ones(3))
            mixed = DensityMatrix(sum(w * r.entries for w, r in zip(p, parts)))
            a = direction_operator(spin_operators(Spin(dim - 1)), random_triad(rng).n1)
            avg_qfi4 = sum(w * qfi(r, a) / 4 for w, r in zip(p, parts))
            avg_var = sum(w * variance(r, a) for w, r in zip(p, parts))
            assert qfi(mixed, a) / 4 <= avg_qfi4 + 1e-9
            assert avg_qfi4 <= avg_var + 1e-9
            assert avg_var <= variance(mixed, a) + 1e-9


class TestQfiBlochForms:
    def test_center_is_zero(self):
        for n in ([0, 0, 1], [1, 0, 0]):
            assert qfi_bloch_unitary([0, 0, 0], n) == 0

    def test_rotation_about_own_axis(self):
        assert qfi_bloch_unitary([0, 0, 1], [0, 0, 1]) < 1e-15

    def test_half_x_about_z(self):
        assert abs(qfi_bloch_unitary([0.5, 0, 0], [0, 0, 1]) - 0.25) < 1e-12

    def test_matches_spectral_on_random_qubits(self):
        rng = np.random.default_rng(2)
        for _ in range(300):
            r = random_bloch(rng)
            n = random_triad(rng).n1
            ln = direction_operator(QUBIT_OPS, n)
            assert abs(qfi_bloch_unitary(r, n) - qfi(bloch_to_density(r), ln)) < 1e-10

    def test_curve_zero_tangent(self):
        assert qfi_bloch_curve(TangentBloch([0.3, 0, 0], [0, 0, 0])) == 0

    def test_curve_matches_unitary_tangent(self):
        # dr = n x r for a rotation about n
        value = qfi_bloch_curve(TangentBloch([0.5, 0, 0], [0, 0.5, 0]))
        assert abs(value - 0.25) < 1e-12

    def test_curve_pure_branch(self):
        value = qfi_bloch_curve(TangentBloch([0, 0, 1], [0.7, 0.1, 0]))
        assert abs(value - 0.5) < 1e-12

    def test_curve_rejects_inconsistent_pure_tangent(self):
        with pytest.raises(ValueError):
            qfi_bloch_curve(TangentBloch([0, 0, 1 - 1e-10], [0, 0, 0.1]))

    def test_curve_radial_term(self):
        r = np.array([0.3, 0.2, -0.1])
        dr = np.array([0.05, -0.02, 0.4])
        expected = dr @ dr + (dr @ r) ** 2 / (1 - r @ r)
        assert abs(qfi_bloch_curve(TangentBloch(r, dr)) - expected) < 1e-12

    def test_rejects_long_bloch(self):
        with pytest.raises(ValueError):
            TangentBloch([1.1, 0, 0], [0, 0, 0])


class TestFisherMatrix:
    def test_maximally_mixed_is_zero(self):
        rho = DensityMatrix(np.eye(3) / 3)
        assert np.abs(fisher_matrix(rho, SPIN1_OPS)).max() < 1e-12

    def test_twin_fock_two_qubits(self):
        from spinroof import collective_spin_operators

        rho = dicke_state(2, 1)
        f = fisher_matrix(rho, collective_spin_operators(2))
        assert np.abs(f - np.diag([4.0, 4.0, 0.0])).max() < 1e-10

    def test_half_x_qubit_matrix(self):
        rho = bloch_to_density([0.5, 0, 0])
        f = fisher_matrix(rho, QUBIT_OPS)
        assert np.abs(f - np.diag([0.0, 0.25, 0.25])).max() < 1e-10

    def test_quadratic_form_matches_qfi(self):
        rng = np.random.default_rng(6)
        for i in range(50):
            rho = random_state(3, RandomSpec(31, GinibreMixed(2)), i)
            f = fisher_matrix(rho, SPIN1_OPS)
            for _ in range(5):
                n = random_triad(rng).n1
                ln = direction_operator(SPIN1_OPS, n)
                assert abs(n @ f @ n - qfi(rho, ln)) < 1e-9

    def test_dominated_by_four_covariances(self):
        for i in range(50):
            rho = random_state(4, RandomSpec(32, GinibreMixed(3)), i)
            ops = spin_operators(Spin(3))
            gap = 4 * covariance_matrix(rho, ops) - fisher_matrix(rho, ops)
            assert np.linalg.eigvalsh(gap).min() > -1e-9

    def test_symmetric_psd(self):
        for i in range(20):
            rho = random_state(3, RandomSpec(33, GinibreMixed(3)), i)
            f = fisher_matrix(rho, SPIN1_OPS)
            assert np.abs(f - f.T).max() < 1e-10
            assert np.linalg.eigvalsh(f).min() > -1e-10


class TestCovarianceMatrix:
    def test_pure_qubit_north(self):
        rho = bloch_to_density([0, 0, 1])
        g = covariance_matrix(rho, QUBIT_OPS)
        assert np.abs(g - np.diag([0.25, 0.25, 0.0])).max() < 1e-12

    def test_twin_fock(self):
        from spinroof import collective_spin_operators

        g = covariance_matrix(dicke_state(2, 1), collective_spin_operators(2))
        assert np.abs(g - np.diag([1.0, 1.0, 0.0])).max() < 1e-12

    def test_diagonal_spin1_transverse(self):
        for a, b in ((0.2, 0.5), (0.1, 0.1), (0.6, 0.35)):
            rho = diagonal_spin1(a, b)
            g = covariance_matrix(rho, SPIN1_OPS)
            assert abs(g[0, 0] - (1 + b) / 2) < 1e-12
            assert abs(g[1, 1] - (1 + b) / 2) < 1e-12

    def test_diagonal_matches_variance(self):
        for i in range(20):
            rho = random_state(3, RandomSpec(34, GinibreMixed(3)), i)
            g = covariance_matrix(rho, SPIN1_OPS)
            for k in range(3):
                assert abs(g[k, k] - variance(rho, SPIN1_OPS[k])) < 1e-12


class TestPurityGapBound:
    def test_pure_state_zero_gap(self):
        gap, bound = purity_gap_bound(bloch_to_density([0, 0, 1]), QUBIT_OPS[0])
        assert abs(gap) < 1e-12 and bound < 1e-12

    def test_qubit_saturates(self):
        rng = np.random.default_rng(7)
        for _ in range(100):
            r = random_bloch(rng)
            rho = bloch_to_density(r)
            n = random_triad(rng).n1
            gap, bound = purity_gap_bound(rho, direction_operator(QUBIT_OPS, n))
            expected = (1 - purity(rho)) / 2
            assert abs(gap - expected) < 1e-10
            assert abs(bound - expected) < 1e-12

    def test_spin1_maximally_mixed(self):
        gap, bound = purity_gap_bound(diagonal_spin1(1 / 3, 1 / 3), SPIN1_OPS[2])
        assert abs(gap - 2 / 3) < 1e-12
        assert abs(bound - 4 / 3) < 1e-12

    def test_gap_within_bound_randomly(self):
        for i in range(100):
            rho = random_state(3, RandomSpec(35, GinibreMixed(2)), i)
            gap, bound = purity_gap_bound(rho, SPIN1_OPS[2])
            assert -1e-9 <= gap <= bound + 1e-9


class TestPerpendicularAxis:
    def test_qubit_identity(self):
        rng = np.random.default_rng(9)
        for _ in range(1000):
            r = random_bloch(rng)
            rho = bloch_to_density(r)
            t = random_triad(rng)
            l1, l2, l3 = (direction_operator(QUBIT_OPS, n) for n in t)
            lhs = qfi(rho, l1)
            rhs = qfi(rho, l2) + qfi(rho, l3) - 8 * expectation(rho, l1) ** 2
            assert abs(lhs - rhs) < 1e-10


class TestQubitBounds:
    def test_variance_and_qfi_windows(self):
        rng = np.random.default_rng(10)
        for _ in range(1000):
            r = random_bloch(rng)
            rho = bloch_to_density(r)
            n = random_triad(rng).n1
            ln = direction_operator(QUBIT_OPS, n)
            r2 = float(r @ r)
            v4 = 4 * variance(rho, ln)
            assert 1 - r2 - 1e-10 <= v4 <= 1 + 1e-10
            f = qfi(rho, ln)
            assert -1e-10 <= f <= r2 + 1e-10
