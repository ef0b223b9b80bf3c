"""Tests for chord decompositions, gap identities, and the numeric roof search."""

import numpy as np
import pytest

from spinroof import (
    ChordDecomposition,
    Decomposition,
    GinibreMixed,
    RandomSpec,
    Spin,
    average_variance,
    bloch_to_density,
    bloch_to_ket,
    chord_decomposition,
    complete_triad,
    decomposition_from_json,
    direction_operator,
    eigendecomposition_gaps,
    ket_to_bloch,
    maximal_decomposition,
    min_max_duality_check,
    minimal_decomposition,
    numeric_convex_roof,
    parallel_axis_gaps,
    qfi,
    qfi_bloch_unitary,
    random_state,
    random_triad,
    spin_operators,
    variance,
)

QUBIT_OPS = spin_operators(Spin(1))
LZ = QUBIT_OPS[2]


def random_mixed_bloch(rng, rmax=0.98):
    v = rng.standard_normal(3)
    v /= np.linalg.norm(v)
    return v * rng.uniform(0.02, rmax)


class TestDecomposition:
    def test_weight_validation(self):
        ket = bloch_to_ket([0, 0, 1])
        with pytest.raises(ValueError):
            Decomposition(np.array([0.6, 0.6]), (ket, ket))
        with pytest.raises(ValueError):
            Decomposition(np.array([1.5, -0.5]), (ket, ket))

    def test_reconstruct(self):
        d = Decomposition(
            np.array([0.5, 0.5]), (bloch_to_ket([0, 0, 1]), bloch_to_ket([0, 0, -1]))
        )
        assert np.abs(d.reconstruct().entries - np.eye(2) / 2).max() < 1e-12

    def test_json_round_trip(self):
        d = Decomposition(
            np.array([0.25, 0.75]), (bloch_to_ket([1, 0, 0]), bloch_to_ket([0, 1, 0]))
        )
        back = decomposition_from_json(d.to_json())
        assert np.abs(back.weights - d.weights).max() < 1e-15
        for a, b in zip(back.kets, d.kets):
            assert np.abs(a - b).max() < 1e-15


class TestAverageVariance:
    def test_single_element_pure(self):
        ket = bloch_to_ket([1, 0, 0])
        d = Decomposition(np.array([1.0]), (ket,))
        rho = bloch_to_density([1, 0, 0])
        assert abs(average_variance(d, LZ) - variance(rho, LZ)) < 1e-12

    def test_eigendecomposition_of_maximally_mixed(self):
        d = Decomposition(
            np.array([0.5, 0.5]), (bloch_to_ket([0, 0, 1]), bloch_to_ket([0, 0, -1]))
        )
        assert average_variance(d, LZ) < 1e-15

    def test_minimal_half_x_reaches_quarter_of_qfi(self):
        d = minimal_decomposition([0.5, 0, 0], [0, 0, 1]).to_decomposition()
        assert abs(average_variance(d, LZ) - 1 / 16) < 1e-12


class TestChordDecomposition:
    def test_center_vertical_chord(self):
        cd = chord_decomposition([0, 0, 0], [0, 0, 1])
        assert abs(cd.p - 0.5) < 1e-12
        assert np.abs(cd.r1 - [0, 0, 1]).max() < 1e-12
        assert np.abs(cd.r2 - [0, 0, -1]).max() < 1e-12

    def test_half_x_vertical_chord(self):
        cd = chord_decomposition([0.5, 0, 0], [0, 0, 1])
        assert abs(cd.p - 0.5) < 1e-12
        assert np.abs(cd.r1 - [0.5, 0, np.sqrt(3) / 2]).max() < 1e-12
        assert np.abs(cd.r2 - [0.5, 0, -np.sqrt(3) / 2]).max() < 1e-12

    def test_random_chords_reconstruct(self):
        rng = np.random.default_rng(0)
        for _ in range(200):
            target = random_mixed_bloch(rng)
            u = random_triad(rng).n1
            cd = chord_decomposition(target, u)
            assert abs(np.linalg.norm(cd.r1) - 1) < 1e-10
            assert abs(np.linalg.norm(cd.r2) - 1) < 1e-10
            mix = cd.p * cd.r1 + (1 - cd.p) * cd.r2
            assert np.abs(mix - target).max() < 1e-10
            recon = cd.to_decomposition().reconstruct()
            assert np.abs(recon.entries - bloch_to_density(target).entries).max() < 1e-10

    def test_pure_target_degenerate(self):
        cd = chord_decomposition([0, 0, 1], [1, 0, 0])
        assert cd.degenerate and len(cd.to_decomposition()) == 1

    def test_invariant_enforcement(self):
        with pytest.raises(ValueError):
            ChordDecomposition(0.5, np.array([0, 0, 0.5]), np.array([0, 0, -1.0]),
                               np.array([0, 0, -0.25]))


class TestOptimalChords:
    def test_minimal_reaches_qfi_quarter(self):
        rng = np.random.default_rng(1)
        for _ in range(200):
            target = random_mixed_bloch(rng)
            n = random_triad(rng).n1
            d = minimal_decomposition(target, n).to_decomposition()
            ln = direction_operator(QUBIT_OPS, n)
            assert abs(average_variance(d, ln) - qfi_bloch_unitary(target, n) / 4) < 1e-10

    def test_maximal_reaches_variance(self):
        rng = np.random.default_rng(2)
        for _ in range(200):
            target = random_mixed_bloch(rng)
            n = random_triad(rng).n1
            d = maximal_decomposition(target, n).to_decomposition()
            ln = direction_operator(QUBIT_OPS, n)
            rho = bloch_to_density(target)
            assert abs(average_variance(d, ln) - variance(rho, ln)) < 1e-10

    def test_axis_parallel_target_minimal_is_eigendecomposition(self):
        cd = minimal_decomposition([0, 0, 0.5], [0, 0, 1])
        assert np.abs(np.abs(cd.r1) - [0, 0, 1]).max() < 1e-12
        d = cd.to_decomposition()
        assert average_variance(d, LZ) < 1e-12  # both endpoints are Lz eigenstates

    def test_axis_perpendicular_target_eigendecomposition_is_maximal(self):
        # target along z, axis along x: the +/- z eigendecomposition attains Var
        rho = bloch_to_density([0, 0, 0.5])
        lx = QUBIT_OPS[0]
        eig = Decomposition(
            np.array([0.75, 0.25]), (bloch_to_ket([0, 0, 1]), bloch_to_ket([0, 0, -1]))
        )
        assert abs(average_variance(eig, lx) - variance(rho, lx)) < 1e-12

    def test_maximal_center_plane_value(self):
        d = maximal_decomposition([0, 0, 0], [0, 0, 1]).to_decomposition()
        assert abs(average_variance(d, LZ) - 0.25) < 1e-12
        for ket in d.kets:
            assert abs(ket_to_bloch(ket)[2]) < 1e-12  # chord lies in the xy plane


class TestParallelAxisGaps:
    def test_minimal_has_zero_qfi_gap(self):
        target = [0.5, 0, 0]
        d = minimal_decomposition(target, [0, 0, 1]).to_decomposition()
        qfi_gap, var_gap = parallel_axis_gaps(target, d, [0, 0, 1])
        assert qfi_gap < 1e-12 and var_gap > 0

    def test_maximal_has_zero_var_gap(self):
        target = [0.5, 0, 0]
        d = maximal_decomposition(target, [0, 0, 1]).to_decomposition()
        qfi_gap, var_gap = parallel_axis_gaps(target, d, [0, 0, 1])
        assert var_gap < 1e-12 and qfi_gap > 0

    def test_gap_identities_on_random_chords(self):
        rng = np.random.default_rng(3)
        ops = QUBIT_OPS
        for _ in range(200):
            target = random_mixed_bloch(rng)
            u = random_triad(rng).n1
            n = random_triad(rng).n1
            d = chord_decomposition(target, u).to_decomposition()
            qfi_gap, var_gap = parallel_axis_gaps(target, d, n)
            ln = direction_operator(ops, n)
            rho = bloch_to_density(target)
            avg_q = sum(
                p * qfi_bloch_unitary(ket_to_bloch(k), n)
                for p, k in zip(d.weights, d.kets)
            )
            assert abs(avg_q - qfi_bloch_unitary(target, n) - qfi_gap) < 1e-10
            assert abs(variance(rho, ln) - average_variance(d, ln) - var_gap) < 1e-10

    def test_multi_element_decomposition(self):
        # mixing the minimal and maximal chords gives a 4-element decomposition
        target = np.array([0.3, -0.2, 0.4])
        n = np.array([0.0, 0.0, 1.0])
        d1 = minimal_decomposition(target, n).to_decomposition()
        d2 = maximal_decomposition(target, n).to_decomposition()
        d = Decomposition(
            np.concatenate([0.5 * d1.weights, 0.5 * d2.weights]), d1.kets + d2.kets
        )
        qfi_gap, var_gap = parallel_axis_gaps(target, d, n)
        assert qfi_gap > 0 and var_gap > 0

    def test_reconstruction_mismatch_rejected(self):
        d = minimal_decomposition([0.5, 0, 0], [0, 0, 1]).to_decomposition()
        with pytest.raises(ValueError):
            parallel_axis_gaps([0.4, 0, 0], d, [0, 0, 1])


class TestEigendecompositionGaps:
    def test_axis_parallel_means_minimal(self):
        rho = bloch_to_density([0, 0, 0.5])
        var_gap, qfi_gap = eigendecomposition_gaps(rho, [0, 0, 1])
        assert qfi_gap < 1e-12

    def test_axis_perpendicular_means_maximal(self):
        rho = bloch_to_density([0, 0, 0.5])
        var_gap, qfi_gap = eigendecomposition_gaps(rho, [1, 0, 0])
        assert var_gap < 1e-12

    def test_half_x_about_z(self):
        rho = bloch_to_density([0.5, 0, 0])
        var_gap, qfi_gap = eigendecomposition_gaps(rho, [0, 0, 1])
        assert abs(var_gap) < 1e-12
        assert abs(qfi_gap - 0.75) < 1e-12

    def test_gaps_fill_purity_window(self):
        rng = np.random.default_rng(4)
        for _ in range(200):
            r = random_mixed_bloch(rng)
            rho = bloch_to_density(r)
            n = random_triad(rng).n1
            var_gap, qfi_gap = eigendecomposition_gaps(rho, n)
            assert abs(var_gap + qfi_gap - (1 - float(r @ r))) < 1e-10

    def test_rejects_degenerate_and_pure(self):
        with pytest.raises(ValueError):
            eigendecomposition_gaps(bloch_to_density([0, 0, 0]), [0, 0, 1])
        with pytest.raises(ValueError):
            eigendecomposition_gaps(bloch_to_density([0, 0, 1]), [0, 0, 1])


class TestRoofSandwich:
    def test_any_chord_between_roofs(self):
        rng = np.random.default_rng(5)
        for _ in range(200):
            target = random_mixed_bloch(rng)
            u = random_triad(rng).n1
            n = random_triad(rng).n1
            d = chord_decomposition(target, u).to_decomposition()
            ln = direction_operator(QUBIT_OPS, n)
            rho = bloch_to_density(target)
            avg = average_variance(d, ln)
            assert qfi(rho, ln) / 4 - 1e-9 <= avg <= variance(rho, ln) + 1e-9

    def test_minimal_uniquely_attains(self):
        rng = np.random.default_rng(6)
        for _ in range(100):
            target = random_mixed_bloch(rng)
            n = random_triad(rng).n1
            u = random_triad(rng).n1
            if np.linalg.norm(np.cross(u, n)) <= 1e-6:
                continue
            d = chord_decomposition(target, u).to_decomposition()
            ln = direction_operator(QUBIT_OPS, n)
            seps = [ket_to_bloch(k) - target for k in d.kets]
            excess = sum(
                p * float(np.cross(n, s) @ np.cross(n, s))
                for p, s in zip(d.weights, seps)
            ) / 4
            assert excess > 0
            avg = average_variance(d, ln)
            floor = qfi_bloch_unitary(target, n) / 4
            assert abs(avg - floor - excess) < 1e-10

    def test_planar_decomposition_axis_addition(self):
        # endpoints confined to the plane through the origin orthogonal to n1:
        # the average QFI about n1 splits into the n2 and n3 averages
        rng = np.random.default_rng(7)
        for _ in range(100):
            t = random_triad(rng)
            angle = rng.uniform(0, 2 * np.pi)
            in_plane = np.cos(angle) * t.n2 + np.sin(angle) * t.n3
            target = in_plane * rng.uniform(0.05, 0.95)
            u_angle = rng.uniform(0, 2 * np.pi)
            u = np.cos(u_angle) * t.n2 + np.sin(u_angle) * t.n3
            d = chord_decomposition(target, u).to_decomposition()
            avgs = []
            for axis in (t.n1, t.n2, t.n3):
                avgs.append(
                    sum(
                        p * qfi_bloch_unitary(ket_to_bloch(k), axis)
                        for p, k in zip(d.weights, d.kets)
                    )
                )
            assert abs(avgs[0] - avgs[1] - avgs[2]) < 1e-10


class TestNumericConvexRoof:
    def test_pure_state(self):
        rho = bloch_to_density([0, 0, 1])
        res = numeric_convex_roof(rho, QUBIT_OPS[0], seed=1)
        assert res.converged
        assert abs(res.value - variance(rho, QUBIT_OPS[0])) < 1e-12

    def test_maximally_mixed_qubit(self):
        res = numeric_convex_roof(bloch_to_density([0, 0, 0]), LZ, seed=1)
        assert res.value <= 1e-6 and res.converged

    @pytest.mark.parametrize("rank", [2, 3])
    def test_qutrit_matches_spectral_oracle(self, rank):
        lz1 = spin_operators(Spin(2))[2]
        for i in range(5):
            rho = random_state(3, RandomSpec(50 + rank, GinibreMixed(rank)), i)
            res = numeric_convex_roof(rho, lz1, seed=2)
            oracle = qfi(rho, lz1) / 4
            assert res.converged
            assert abs(res.value - oracle) < 1e-4
            assert res.value >= oracle - 1e-9

    def test_returns_valid_decomposition(self):
        lz1 = spin_operators(Spin(2))[2]
        rho = random_state(3, RandomSpec(51, GinibreMixed(3)), 0)
        res = numeric_convex_roof(rho, lz1, seed=2)
        assert np.abs(res.decomposition.reconstruct().entries - rho.entries).max() < 1e-9
        assert abs(average_variance(res.decomposition, lz1) - res.value) < 1e-12

    def test_budget_exhaustion_is_flagged(self):
        rho = random_state(3, RandomSpec(52, GinibreMixed(3)), 0)
        lz1 = spin_operators(Spin(2))[2]
        res = numeric_convex_roof(rho, lz1, restarts=1, max_steps=2, seed=2)
        assert not res.converged

    def test_rejects_large_dimension(self):
        rho = random_state(17, RandomSpec(53, GinibreMixed(1)), 0)
        with pytest.raises(ValueError):
            numeric_convex_roof(rho, np.eye(17, dtype=complex))


class TestMinMaxDuality:
    def test_center(self):
        rep = min_max_duality_check([0, 0, 0], complete_triad([0, 0, 1]))
        assert rep.ok
        assert abs(rep.avg_n2 - 0.25) < 1e-12 and abs(rep.avg_n3 - 0.25) < 1e-12

    def test_half_x(self):
        rep = min_max_duality_check([0.5, 0, 0], complete_triad([0, 0, 1]))
        assert rep.ok
        assert abs(rep.avg_n2 - 3 / 16) < 1e-12  # x direction
        assert abs(rep.avg_n3 - 1 / 4) < 1e-12  # y direction

    def test_random(self):
        rng = np.random.default_rng(8)
        for _ in range(100):
            target = random_mixed_bloch(rng)
            rep = min_max_duality_check(target, random_triad(rng))
            assert abs(rep.residual_n2) < 1e-10 and abs(rep.residual_n3) < 1e-10
