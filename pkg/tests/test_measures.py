"""Direct quantifiers, preferred bases, closed-form angles, and fidelity."""

import numpy as np
import pytest

from qcomplement.core import DensityMatrix, PureState, partial_trace
from qcomplement.measures import (
    concurrence_bipartition,
    concurrence_two_qubit,
    fidelity,
    predictability,
    preferred_basis,
    single_particle_character,
    single_visibility_direct,
    support_eigenvalues,
    table_basis,
    theta_angles,
)
from qcomplement.states import (
    StateClassTag,
    ghz_params,
    ghz_state,
    intermediate_params,
    intermediate_state,
    pseudopure,
    random_pure_state,
    w_params,
    w_state,
)


def _match_up_to_phase(a, b, tol):
    overlap = abs(np.vdot(a, b))
    return abs(overlap - 1.0) < tol


class TestConcurrence:
    @pytest.mark.parametrize("alpha1", np.linspace(0, np.pi, 9))
    def test_ghz_closed_form(self, alpha1):
        assert abs(concurrence_bipartition(ghz_state(alpha1), 0)
                   - abs(np.sin(alpha1))) < 1e-12

    def test_product_state_is_zero(self):
        psi = PureState(np.eye(8)[0], 3)
        assert concurrence_bipartition(psi, 0) == 0.0

    def test_invalid_qubit(self):
        with pytest.raises(ValueError):
            concurrence_bipartition(ghz_state(1.0), 3)

    def test_wootters_hand_oracle(self):
        # a|00> + b|11>: |<psi|sy x sy|psi*>| = 2ab.
        a, b = np.cos(0.4), np.sin(0.4)
        psi = PureState(np.array([a, 0, 0, b]), 2)
        assert abs(concurrence_two_qubit(psi) - 2 * a * b) < 1e-12

    def test_wootters_equals_bipartition(self):
        for seed in range(50):
            psi = random_pure_state(seed, 2)
            assert abs(concurrence_two_qubit(psi)
                       - concurrence_bipartition(psi, 0)) < 1e-10

    def test_wootters_rejects_three_qubits(self):
        with pytest.raises(ValueError):
            concurrence_two_qubit(ghz_state(1.0))


class TestLocalQuantifiers:
    def test_predictability_hand_oracle(self):
        # (cos t |0> + sin t |1>) x |00>: <sigma_z> = cos 2t; off-diagonal
        # rho_01 = cos t sin t, so V = sin 2t and S = 1.
        t = 0.35
        amps = np.zeros(8)
        amps[0b000], amps[0b100] = np.cos(t), np.sin(t)
        psi = PureState(amps, 3)
        assert abs(predictability(psi, 0) - abs(np.cos(2 * t))) < 1e-12
        assert abs(single_visibility_direct(psi, 0) - abs(np.sin(2 * t))) < 1e-12
        assert abs(single_particle_character(psi, 0) - 1.0) < 1e-12

    def test_ghz_has_zero_visibility(self):
        psi = ghz_state(0.9)
        assert single_visibility_direct(psi, 0) < 1e-15
        assert abs(predictability(psi, 0) - abs(np.cos(0.9))) < 1e-12

    @pytest.mark.parametrize("seed", range(25))
    def test_complementarity_direct(self, seed):
        psi = random_pure_state(seed)
        c = concurrence_bipartition(psi, 0)
        s = single_particle_character(psi, 0)
        assert abs(c * c + s * s - 1.0) < 1e-9


class TestPreferredBasis:
    @pytest.mark.parametrize("seed", range(10))
    def test_diagonalizes_rho_bc(self, seed):
        psi = random_pure_state(seed)
        rho_bc = partial_trace(psi.density_matrix(), [1, 2]).entries
        v = preferred_basis(psi).vectors()
        off = v.conj().T @ rho_bc @ v
        assert np.max(np.abs(off - np.diag(np.diag(off)))) < 1e-9

    def test_kernel_ports_carry_no_weight(self):
        psi = random_pure_state(11)
        rho_bc = partial_trace(psi.density_matrix(), [1, 2]).entries
        basis = preferred_basis(psi)
        for vec in (basis.phi2, basis.phi3):
            assert abs(vec.conj() @ rho_bc @ vec) < 1e-10

    def test_support_rank_two_generically(self):
        assert preferred_basis(random_pure_state(12)).support_rank == 2

    def test_support_eigenvalues_sum_to_one(self):
        lam0, lam1 = support_eigenvalues(random_pure_state(13))
        assert lam0 >= lam1 >= 0
        assert abs(lam0 + lam1 - 1.0) < 1e-12


class TestThetaAngles:
    def test_ghz_is_zero(self):
        t = theta_angles(ghz_params(1.1), StateClassTag.GHZ)
        assert (t.theta1, t.theta2, t.theta3) == (0.0, 0.0, 0.0)

    def test_w_closed_form(self):
        t = theta_angles(w_params(0.7, 1.3), StateClassTag.W)
        assert (t.theta1, t.theta2, t.theta3) == (0.0, 0.0, -1.3)

    def test_general_raises(self):
        with pytest.raises(ValueError, match="use eigenbasis route"):
            theta_angles(ghz_params(1.0), StateClassTag.GENERAL)

    @pytest.mark.parametrize("a1", [0.4, 1.2, 2.3])
    @pytest.mark.parametrize("a2", [0.5, 1.9])
    @pytest.mark.parametrize("a3", [0.6, 2.2])
    def test_intermediate_matches_eigensolve(self, a1, a2, a3):
        t = theta_angles(intermediate_params(a1, a2, a3),
                         StateClassTag.INTERMEDIATE)
        psi = intermediate_state(a1, a2, a3)
        basis = preferred_basis(psi)
        cand = np.array([np.cos(t.theta1 / 2),
                         np.sin(t.theta1 / 2) * np.sin(t.theta3 / 2),
                         np.sin(t.theta1 / 2) * np.cos(t.theta3 / 2),
                         0.0], dtype=complex)
        assert _match_up_to_phase(cand, basis.phi0, 1e-9)

    def test_intermediate_eigenvalue_formula(self):
        # lam_pm = (1 +- sqrt(1 - 4 A sin^2(a1/2)))/2 with
        # A = cos^2(a1/2)(cos^2(a2/2) sin^2(a3/2) + sin^2(a2/2)).
        a1, a2, a3 = 0.9, 1.4, 0.8
        big_a = np.cos(a1 / 2) ** 2 * (np.cos(a2 / 2) ** 2 * np.sin(a3 / 2) ** 2
                                       + np.sin(a2 / 2) ** 2)
        disc = np.sqrt(1 - 4 * big_a * np.sin(a1 / 2) ** 2)
        lam0, lam1 = support_eigenvalues(intermediate_state(a1, a2, a3))
        assert abs(lam0 - (1 + disc) / 2) < 1e-12
        assert abs(lam1 - (1 - disc) / 2) < 1e-12


class TestTableBasis:
    def test_ghz_support_vectors(self):
        basis = table_basis(StateClassTag.GHZ, ghz_params(0.8))
        assert np.array_equal(basis.phi0, np.eye(4, dtype=complex)[0])
        assert np.array_equal(basis.phi1, np.eye(4, dtype=complex)[3])

    def test_w_support_vectors(self):
        a2 = 1.1
        basis = table_basis(StateClassTag.W, w_params(0.6, a2))
        expected = np.array([0, np.cos(a2 / 2), np.sin(a2 / 2), 0], dtype=complex)
        assert np.max(np.abs(basis.phi1 - expected)) < 1e-12

    @pytest.mark.parametrize("tag,params", [
        (StateClassTag.GHZ, ghz_params(0.9)),
        (StateClassTag.W, w_params(0.7, 1.2)),
        (StateClassTag.INTERMEDIATE, intermediate_params(1.1, 0.8, 1.7)),
    ])
    def test_support_pair_spans_eigensolve_support(self, tag, params):
        from qcomplement.states import family_state
        psi = family_state(tag, params)
        table = table_basis(tag, params)
        eig = preferred_basis(psi)
        # The two support subspaces must coincide (the vector ordering may
        # differ when the table pins Phi0 = |00> regardless of eigenvalue
        # order).
        p_table = (np.outer(table.phi0, table.phi0.conj())
                   + np.outer(table.phi1, table.phi1.conj()))
        p_eig = (np.outer(eig.phi0, eig.phi0.conj())
                 + np.outer(eig.phi1, eig.phi1.conj()))
        assert np.max(np.abs(p_table - p_eig)) < 1e-9

    def test_intermediate_matches_eigensolve_vectorwise(self):
        params = intermediate_params(1.1, 0.8, 1.7)
        psi = intermediate_state(1.1, 0.8, 1.7)
        table = table_basis(StateClassTag.INTERMEDIATE, params)
        eig = preferred_basis(psi)
        assert _match_up_to_phase(table.phi0, eig.phi0, 1e-9)
        assert _match_up_to_phase(table.phi1, eig.phi1, 1e-9)


class TestFidelity:
    def test_identical_states(self):
        rho = random_pure_state(20).density_matrix()
        assert abs(fidelity(rho, rho) - 1.0) < 1e-9

    def test_pure_state_overlap(self):
        a, b = random_pure_state(21), random_pure_state(22)
        f = fidelity(a.density_matrix(), b.density_matrix())
        assert abs(f - abs(np.vdot(a.amplitudes, b.amplitudes))) < 1e-9

    def test_orthogonal_states(self):
        e0 = PureState(np.eye(8)[0], 3).density_matrix()
        e1 = PureState(np.eye(8)[1], 3).density_matrix()
        assert fidelity(e0, e1) < 1e-9

    def test_dimension_mismatch(self):
        r2 = PureState(np.eye(4)[0], 2).density_matrix()
        r3 = PureState(np.eye(8)[0], 3).density_matrix()
        with pytest.raises(ValueError):
            fidelity(r2, r3)

    def test_monotone_under_mixing(self):
        # F(|psi>, pseudopure(psi, eps)) decreases as eps decreases.
        psi = random_pure_state(23)
        rho_pure = psi.density_matrix()
        values = [fidelity(rho_pure, pseudopure(psi, eps))
                  for eps in (1.0, 0.75, 0.5, 0.25, 0.05)]
        assert all(values[i] >= values[i + 1] - 1e-12 for i in range(4))
        assert abs(values[0] - 1.0) < 1e-9
