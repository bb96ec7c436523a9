"""Direct (non-interferometric) quantifiers: concurrence, predictability,
single-particle character, preferred-basis extraction, Uhlmann fidelity.

These are the analytic oracles the interferometer simulation is validated
against.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import DensityMatrix, PureState, hermitian_eig, partial_trace
from .states import FamilyParams, StateClassTag

SUPPORT_TOL = 1e-10

_SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]])


@dataclass(frozen=True)
class PreferredBasis:
    """Ordered orthonormal basis of the BC subsystem.

    ``phi0``/``phi1`` span the support of rho_BC (at most rank 2 for a pure
    three-qubit state); ``phi2``/``phi3`` complete the basis deterministically.
    """

    phi0: np.ndarray
    phi1: np.ndarray
    phi2: np.ndarray
    phi3: np.ndarray
    support_rank: int

    def vectors(self) -> np.ndarray:
        """4x4 matrix whose columns are phi0..phi3."""
        return np.column_stack([self.phi0, self.phi1, self.phi2, self.phi3])

    def __post_init__(self):
        mat = self.vectors()
        if np.max(np.abs(mat.conj().T @ mat - np.eye(4))) > 1e-10:
            raise ValueError("basis vectors are not orthonormal")


@dataclass(frozen=True)
class ThetaAngles:
    theta1: float
    theta2: float
    theta3: float

    def __post_init__(self):
        if not all(np.isfinite([self.theta1, self.theta2, self.theta3])):
            raise ValueError("theta angles must be finite")


def _reduced(psi: PureState, keep) -> DensityMatrix:
    return partial_trace(psi.density_matrix(), keep)


def concurrence_bipartition(psi: PureState, k: int) -> float:
    """C = sqrt(2 (1 - Tr rho_k^2)) for the qubit-k vs rest bipartition."""
    if k < 0 or k >= psi.n_qubits:
        raise ValueError("qubit index out of range")
    rho_k = _reduced(psi, [k]).entries
    purity = np.trace(rho_k @ rho_k).real
    val = np.sqrt(max(0.0, 2.0 * (1.0 - purity)))
    return float(min(1.0, max(0.0, val)))


def concurrence_two_qubit(psi: PureState) -> float:
    """Wootters concurrence |<psi| sigma_y x sigma_y |psi*>| for 2-qubit pure states."""
    if psi.n_qubits != 2:
        raise ValueError("expected a 2-qubit state")
    yy = np.kron(_SIGMA_Y, _SIGMA_Y)
    val = abs(psi.amplitudes.conj() @ yy @ psi.amplitudes.conj())
    return float(min(1.0, max(0.0, val)))


def predictability(psi: PureState, k: int) -> float:
    """|<sigma_z>| of qubit k: the a-priori which-way knowledge."""
    if k < 0 or k >= psi.n_qubits:
        raise ValueError("qubit index out of range")
    rho_k = _reduced(psi, [k]).entries
    return float(min(1.0, abs((rho_k[0, 0] - rho_k[1, 1]).real)))


def single_visibility_direct(psi: PureState, k: int) -> float:
    """Analytic single-particle fringe visibility: 2 |off-diagonal of rho_k|."""
    if k < 0 or k >= psi.n_qubits:
        raise ValueError("qubit index out of range")
    rho_k = _reduced(psi, [k]).entries
    return float(min(1.0, 2.0 * abs(rho_k[0, 1])))


def single_particle_character(psi: PureState, k: int) -> float:
    """S = sqrt(V^2 + P^2): total local (wave + particle) content of qubit k."""
    v = single_visibility_direct(psi, k)
    p = predictability(psi, k)
    return float(min(1.0, np.sqrt(v * v + p * p)))


def preferred_basis(psi: PureState) -> PreferredBasis:
    """Eigenbasis of rho_BC, eigenvalues descending; the first two vectors span
    the support. Degenerate subspaces and the kernel completion follow the
    deterministic tie-break of :func:`qcomplement.core.hermitian_eig`."""
    if psi.n_qubits != 3:
        raise ValueError("expected a 3-qubit state")
    rho_bc = _reduced(psi, [1, 2])
    eig = hermitian_eig(rho_bc)
    rank = int(np.count_nonzero(eig.eigenvalues > SUPPORT_TOL))
    v = eig.eigenvectors
    return PreferredBasis(v[:, 0], v[:, 1], v[:, 2], v[:, 3], rank)


def support_eigenvalues(psi: PureState) -> tuple[float, float]:
    """The two largest eigenvalues of rho_BC (all others vanish for pure input)."""
    rho_bc = _reduced(psi, [1, 2])
    eig = hermitian_eig(rho_bc)
    return float(eig.eigenvalues[0]), float(eig.eigenvalues[1])


def _vectors_match(a: np.ndarray, b: np.ndarray, tol: float) -> bool:
    return min(np.linalg.norm(a - b), np.linalg.norm(a + b)) < tol


def theta_angles(p: FamilyParams, tag: StateClassTag) -> ThetaAngles:
    """Closed-form basis-rotation angles for the three named families.

    GHZ: (0, 0, 0). W: (0, 0, -alpha2_0). Intermediate: from the closed forms
    tan^2(theta1/2) = (A - lam_minus)/(lam_plus - A), theta2 = 0,
    tan(theta3/2) = cot(alpha2_0/2) sin(alpha3_00/2), with
    A = cos^2(a1/2)(cos^2(a2/2) sin^2(a3/2) + sin^2(a2/2)) and
    lam_pm = (1 +- sqrt(1 - 4 A sin^2(a1/2)))/2.

    Branches are taken in [0, pi/2] for theta1/2 and theta3/2 and verified
    against the eigendecomposition of rho_BC; the sign flips if the
    conventions disagree.
    """
    if tag is StateClassTag.GHZ:
        return ThetaAngles(0.0, 0.0, 0.0)
    if tag is StateClassTag.W:
        return ThetaAngles(0.0, 0.0, -p.alpha2_0)
    if tag is not StateClassTag.INTERMEDIATE:
        raise ValueError("use eigenbasis route")

    a1, a2, a3 = p.alpha1, p.alpha2_0, p.alpha3_00
    big_a = np.cos(a1 / 2) ** 2 * (
        np.cos(a2 / 2) ** 2 * np.sin(a3 / 2) ** 2 + np.sin(a2 / 2) ** 2
    )
    disc = max(0.0, 1.0 - 4.0 * big_a * np.sin(a1 / 2) ** 2)
    lam_plus = (1.0 + np.sqrt(disc)) / 2.0
    lam_minus = (1.0 - np.sqrt(disc)) / 2.0

    denom = lam_plus - big_a
    numer = big_a - lam_minus
    if abs(denom) < 1e-15:
        theta1 = np.pi
    else:
        theta1 = 2.0 * np.arctan(np.sqrt(max(0.0, numer / denom)))

    s2 = np.sin(a2 / 2)
    if abs(s2) < 1e-15:
        theta3 = np.pi if abs(np.sin(a3 / 2)) > 1e-15 else 0.0
    else:
        theta3 = 2.0 * np.arctan(np.cos(a2 / 2) / s2 * np.sin(a3 / 2))

    # Verify the branch against the eigensolve; flip signs if mismatched.
    from .states import intermediate_state  # local import to avoid cycle at module load

    psi = intermediate_state(a1, a2, a3)
    basis = preferred_basis(psi)
    for t1 in (theta1, -theta1):
        for t3 in (theta3, -theta3):
            cand = np.array([
                np.cos(t1 / 2),
                np.sin(t1 / 2) * np.sin(t3 / 2),
                np.sin(t1 / 2) * np.cos(t3 / 2),
                0.0,
            ], dtype=np.complex128)
            if _vectors_match(cand, basis.phi0, 1e-8):
                return ThetaAngles(float(t1), 0.0, float(t3))
    return ThetaAngles(float(theta1), 0.0, float(theta3))


def table_basis(tag: StateClassTag, p: FamilyParams) -> PreferredBasis:
    """Closed-form preferred bases of the three named families.

    GHZ: {|00>, |11>}; W: {|00>, cos(a2/2)|01> + sin(a2/2)|10>};
    intermediate: the theta-parametrized pair
    (cos(t1/2)|00> + sin(t1/2) w, -sin(t1/2)|00> + cos(t1/2) w) with
    w = sin(t3/2)|01> + cos(t3/2)|10>. The kernel completion mirrors the
    eigensolver's deterministic sequential-projection tie-break.
    """
    t = theta_angles(p, tag)
    if tag is StateClassTag.GHZ:
        phi0 = np.array([1, 0, 0, 0], dtype=np.complex128)
        phi1 = np.array([0, 0, 0, 1], dtype=np.complex128)
    elif tag is StateClassTag.W:
        c, s = np.cos(p.alpha2_0 / 2), np.sin(p.alpha2_0 / 2)
        phi0 = np.array([1, 0, 0, 0], dtype=np.complex128)
        phi1 = np.array([0, c, s, 0], dtype=np.complex128)
    else:
        c1, s1 = np.cos(t.theta1 / 2), np.sin(t.theta1 / 2)
        c3, s3 = np.cos(t.theta3 / 2), np.sin(t.theta3 / 2)
        w = np.array([0, s3, c3, 0], dtype=np.complex128)
        e00 = np.array([1, 0, 0, 0], dtype=np.complex128)
        phi0 = c1 * e00 + s1 * w
        phi1 = -s1 * e00 + c1 * w
    completion = _complete_basis(np.column_stack([phi0, phi1]))
    return PreferredBasis(phi0, phi1, completion[:, 0], completion[:, 1], 2)


def _complete_basis(support: np.ndarray) -> np.ndarray:
    """Deterministic orthonormal completion: sequential projection of the
    computational basis, ascending index, with phase fixing."""
    from .core import _phase_fix

    d, m = support.shape
    chosen = [support[:, i] for i in range(m)]
    out = []
    for k in range(d):
        cand = np.zeros(d, dtype=np.complex128)
        cand[k] = 1.0
        for u in chosen:
            cand -= u * (u.conj() @ cand)
        nrm = np.linalg.norm(cand)
        if nrm > 1e-6:
            vec = _phase_fix(cand / nrm)
            chosen.append(vec)
            out.append(vec)
        if len(chosen) == d:
            break
    return np.column_stack(out)


def fidelity(rho1: DensityMatrix, rho2: DensityMatrix) -> float:
    """Uhlmann fidelity Tr sqrt(sqrt(rho1) rho2 sqrt(rho1))."""
    if rho1.entries.shape != rho2.entries.shape:
        raise ValueError("dimension mismatch")
    eig1 = hermitian_eig(rho1)
    vals = np.clip(eig1.eigenvalues, 0.0, None)
    vals[vals < 1e-12] = 0.0
    sqrt1 = (eig1.eigenvectors * np.sqrt(vals)) @ eig1.eigenvectors.conj().T
    inner = sqrt1 @ rho2.entries @ sqrt1
    inner = (inner + inner.conj().T) / 2
    ivals = np.linalg.eigvalsh(inner)
    ivals = np.clip(ivals, 0.0, None)
    # sqrt amplifies noise-level eigenvalues (~1e-17 -> ~3e-9); clamp them.
    ivals[ivals < 1e-12] = 0.0
    return float(min(1.0, np.sum(np.sqrt(ivals))))
