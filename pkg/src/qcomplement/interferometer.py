"""Four-way interferometer: transducers, basis rotations, phase sweeps,
probability extraction and fringe visibilities.

Pipeline (particle A vs subsystem BC): the input state is rotated so the
preferred BC basis becomes computational, a 2x2 transducer acts on A with
phase phi1 and a block-diagonal 4x4 transducer acts on BC with phase phi2,
and joint detection probabilities are read out in the rotated frame. The
corrected joint probability p(i,j) - p_A(i) p_BC(j) + 1/4 removes
single-party fringes; its visibility equals the A(BC) concurrence when the
measurement basis spans the support of rho_BC.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .core import PureState, UnitaryMatrix, DensityMatrix, apply_unitary, tensor_product
from .measures import PreferredBasis, ThetaAngles, preferred_basis

GOLDEN_PHI_TOL = 1e-9
_INV_GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0

LOCKED = "locked"
INDEPENDENT = "independent"


@dataclass(frozen=True)
class PhaseGrid:
    """Uniform phase grid covering [0, 2pi) on each swept axis."""

    phi1_values: np.ndarray
    phi2_values: np.ndarray
    mode: str = LOCKED

    def __post_init__(self):
        if self.mode not in (LOCKED, INDEPENDENT):
            raise ValueError(f"unknown sweep mode {self.mode!r}")
        for name in ("phi1_values", "phi2_values"):
            vals = np.asarray(getattr(self, name), dtype=float)
            object.__setattr__(self, name, vals)
            if vals.size < 16:
                raise ValueError("phase grid needs at least 16 points per axis")
            diffs = np.diff(vals)
            if np.any(diffs <= 0) or np.max(np.abs(diffs - diffs[0])) > 1e-12:
                raise ValueError("phase grid must be strictly increasing and uniform")
            if vals[0] != 0.0 or vals[-1] + diffs[0] > 2 * np.pi + 1e-9:
                if vals[0] != 0.0:
                    raise ValueError("phase grid must start at 0")
        if self.mode == LOCKED and self.phi1_values.size != self.phi2_values.size:
            raise ValueError("locked mode requires equal-length phase axes")

    @classmethod
    def uniform(cls, n_points: int = 360, mode: str = LOCKED) -> "PhaseGrid":
        vals = np.linspace(0.0, 2 * np.pi, n_points, endpoint=False)
        return cls(vals, vals.copy(), mode)

    @property
    def spacing(self) -> float:
        return float(self.phi1_values[1] - self.phi1_values[0])


def transducer(phi: float) -> UnitaryMatrix:
    """Phase shifter + symmetric beam splitter acting on one qubit path pair."""
    em = np.exp(-0.5j * phi)
    ep = np.exp(0.5j * phi)
    mat = np.array([[em, ep], [-em, ep]]) / np.sqrt(2.0)
    return UnitaryMatrix(mat)


def transducer_bc(phi: float) -> UnitaryMatrix:
    """Block-diagonal BC transducer: one 2x2 transducer per output-port pair
    {0,1} and {2,3} of the rotated basis."""
    t = transducer(phi).entries
    mat = np.zeros((4, 4), dtype=np.complex128)
    mat[:2, :2] = t
    mat[2:, 2:] = t
    return UnitaryMatrix(mat)


def transducer_bc_general(beta: float, gamma: float, delta: float) -> UnitaryMatrix:
    """General block transducer; gamma = pi/2, beta = -delta = phi/2 reproduces
    :func:`transducer_bc`."""
    c, s = np.cos(gamma / 2.0), np.sin(gamma / 2.0)
    block = np.array([
        [c * np.exp(-1j * beta), s * np.exp(-1j * delta)],
        [-s * np.exp(1j * delta), c * np.exp(1j * beta)],
    ])
    mat = np.zeros((4, 4), dtype=np.complex128)
    mat[:2, :2] = block
    mat[2:, 2:] = block
    return UnitaryMatrix(mat)


def basis_rotation_R(t: ThetaAngles) -> UnitaryMatrix:
    """Explicit real orthogonal rotation mapping the theta-parametrized
    support vector Phi0 to |00>; reduces to CNOT (control = last qubit) at
    theta = (0, 0, 0)."""
    c1, s1 = np.cos(t.theta1 / 2), np.sin(t.theta1 / 2)
    c2, s2 = np.cos(t.theta2 / 2), np.sin(t.theta2 / 2)
    c3, s3 = np.cos(t.theta3 / 2), np.sin(t.theta3 / 2)
    rows = np.array([
        [c1, s1 * c2 * s3, s1 * c2 * c3, s1 * s2],
        [0.0, -s2 * s3, -s2 * c3, c2],
        [-s1, c1 * c2 * s3, c1 * c2 * c3, c1 * s2],
        [0.0, c3, -s3, 0.0],
    ])
    return UnitaryMatrix(rows.astype(np.complex128))


def rotation_support_vector(t: ThetaAngles) -> np.ndarray:
    """The general two-qubit support vector Phi0(theta) (= first row of
    :func:`basis_rotation_R`)."""
    return basis_rotation_R(t).entries[0].conj()


def general_basis_rotation(basis) -> UnitaryMatrix:
    """Unitary whose rows are the conjugated basis vectors: maps the j-th
    basis vector to computational |j>. Accepts a PreferredBasis or a 4x4
    matrix with basis vectors as columns."""
    cols = basis.vectors() if isinstance(basis, PreferredBasis) else np.asarray(basis, dtype=np.complex128)
    if cols.shape != (4, 4):
        raise ValueError("expected four basis vectors of dimension 4")
    if np.max(np.abs(cols.conj().T @ cols - np.eye(4))) > 1e-10:
        raise ValueError("basis vectors are not orthonormal")
    return UnitaryMatrix(cols.conj().T)


def output_state(xi: PureState, phi1: float, phi2: float,
                 r: UnitaryMatrix, perm: UnitaryMatrix | None = None) -> PureState:
    """Full three-qubit output state: transducer on A, and the BC transducer
    conjugated into the preferred frame (with optional port permutation)."""
    if xi.n_qubits != 3:
        raise ValueError("expected a 3-qubit state")
    if perm is None:
        perm = UnitaryMatrix(np.eye(4, dtype=np.complex128))
    u_a = transducer(phi1)
    u_bc = transducer_bc(phi2).entries
    rmat = r.entries
    pmat = perm.entries
    bc_op = UnitaryMatrix(rmat.conj().T @ pmat.conj().T @ u_bc @ pmat @ rmat)
    out = apply_unitary(xi, u_a, [0])
    return apply_unitary(out, bc_op, [1, 2])


def joint_probability(out: PureState, i: int, j: int, r: UnitaryMatrix) -> float:
    """p(i, j) = |<i|_A <j|_BC (I x R) |out>|^2."""
    if i not in (0, 1) or j not in (0, 1, 2, 3):
        raise ValueError("port out of range")
    rotated = tensor_product(np.eye(2), r.entries) @ out.amplitudes
    return float(abs(rotated[4 * i + j]) ** 2)


def single_probability(out: PureState, i: int) -> float:
    """Marginal detection probability of particle A at port i."""
    if i not in (0, 1):
        raise ValueError("port out of range")
    amps = out.amplitudes.reshape(2, 4)
    return float(np.sum(np.abs(amps[i]) ** 2))


@dataclass(frozen=True)
class Interferogram:
    """Joint/single/corrected detection probabilities over a phase grid.

    ``joint`` has shape (grid..., 2, 4); ``single_a`` (grid..., 2);
    ``corrected`` (grid..., 2, 2) covers the support ports. Locked grids have
    one leading grid axis, independent grids two (phi1, phi2).
    """

    grid: PhaseGrid
    joint: np.ndarray
    single_a: np.ndarray
    single_bc: np.ndarray
    corrected: np.ndarray
    corrected_full: np.ndarray = field(repr=False)
    point_joint: Callable[[float, float], np.ndarray] = field(repr=False, compare=False)


def _transducer_batch(phis: np.ndarray) -> np.ndarray:
    em = np.exp(-0.5j * phis)
    ep = np.exp(0.5j * phis)
    out = np.empty((phis.size, 2, 2), dtype=np.complex128)
    out[:, 0, 0] = em
    out[:, 0, 1] = ep
    out[:, 1, 0] = -em
    out[:, 1, 1] = ep
    return out / np.sqrt(2.0)


def _rotated_state_matrix(xi: PureState, rotation: UnitaryMatrix) -> np.ndarray:
    """Y[m, l] = l-th rotated-frame component of the BC part paired with
    A-path m."""
    x = xi.amplitudes.reshape(2, 4)
    return x @ rotation.entries.T


def _joint_from_y(y: np.ndarray, phi1: float, phi2: float) -> np.ndarray:
    # Inlined transducer action; this sits in the refinement hot path, so the
    # validated UnitaryMatrix wrappers are bypassed.
    em2 = np.exp(-0.5j * phi2)
    ep2 = np.conj(em2)
    z = np.empty_like(y)
    z[:, 0] = em2 * y[:, 0] + ep2 * y[:, 1]
    z[:, 1] = -em2 * y[:, 0] + ep2 * y[:, 1]
    z[:, 2] = em2 * y[:, 2] + ep2 * y[:, 3]
    z[:, 3] = -em2 * y[:, 2] + ep2 * y[:, 3]
    em1 = np.exp(-0.5j * phi1)
    ep1 = np.conj(em1)
    amp = np.empty_like(y)
    amp[0] = em1 * z[0] + ep1 * z[1]
    amp[1] = -em1 * z[0] + ep1 * z[1]
    return 0.25 * (amp.real**2 + amp.imag**2)


def _corrected_from_joint(joint: np.ndarray):
    single_a = joint.sum(axis=-1)
    single_bc = joint.sum(axis=-2)
    corrected_full = joint - single_a[..., :, None] * single_bc[..., None, :] + 0.25
    return single_a, single_bc, corrected_full


def sweep_interferogram(xi: PureState, basis, grid: PhaseGrid) -> Interferogram:
    """Populate all detection probabilities of the interferometer over a grid.

    ``basis`` is a PreferredBasis or a 4x4 matrix of measurement vectors
    (columns); the rotation is built with :func:`general_basis_rotation`.
    """
    rotation = basis if isinstance(basis, UnitaryMatrix) else general_basis_rotation(basis)
    y = _rotated_state_matrix(xi, rotation)
    ua = _transducer_batch(grid.phi1_values)          # (N1, 2, 2)
    t2 = _transducer_batch(grid.phi2_values)          # (N2, 2, 2)
    z = np.empty((grid.phi2_values.size, 2, 4), dtype=np.complex128)
    z[:, :, :2] = np.einsum("bjl,ml->bmj", t2, y[:, :2])
    z[:, :, 2:] = np.einsum("bjl,ml->bmj", t2, y[:, 2:])
    if grid.mode == LOCKED:
        amp = np.einsum("aim,amj->aij", ua, z)
    else:
        amp = np.einsum("aim,bmj->abij", ua, z)
    joint = np.abs(amp) ** 2
    single_a, single_bc, corrected_full = _corrected_from_joint(joint)

    def point_joint(phi1: float, phi2: float) -> np.ndarray:
        return _joint_from_y(y, phi1, phi2)

    return Interferogram(grid, joint, single_a, single_bc,
                         corrected_full[..., :, :2], corrected_full, point_joint)


def sweep_interferogram_density(rho: DensityMatrix, basis, grid: PhaseGrid) -> Interferogram:
    """Density-matrix variant of :func:`sweep_interferogram` (pseudopure runs)."""
    rotation = basis if isinstance(basis, UnitaryMatrix) else general_basis_rotation(basis)
    rmat = rotation.entries

    def point_joint(phi1: float, phi2: float) -> np.ndarray:
        k = tensor_product(transducer(phi1).entries, transducer_bc(phi2).entries @ rmat)
        probs = np.einsum("ij,jk,ik->i", k, rho.entries, k.conj()).real
        return probs.reshape(2, 4)

    if grid.mode == LOCKED:
        points = [(p, p) for p in grid.phi1_values]
        joint = np.array([point_joint(p1, p2) for p1, p2 in points])
    else:
        joint = np.array([
            [point_joint(p1, p2) for p2 in grid.phi2_values]
            for p1 in grid.phi1_values
        ])
    single_a, single_bc, corrected_full = _corrected_from_joint(joint)
    return Interferogram(grid, joint, single_a, single_bc,
                         corrected_full[..., :, :2], corrected_full, point_joint)


def _golden_section(f: Callable[[float], float], a: float, b: float,
                    tol: float = GOLDEN_PHI_TOL) -> tuple[float, float]:
    """Maximize a unimodal function on [a, b]; returns (x, f(x))."""
    x1 = b - _INV_GOLDEN * (b - a)
    x2 = a + _INV_GOLDEN * (b - a)
    f1, f2 = f(x1), f(x2)
    while b - a > tol:
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + _INV_GOLDEN * (b - a)
            f2 = f(x2)
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - _INV_GOLDEN * (b - a)
            f1 = f(x1)
    x = (a + b) / 2
    return x, f(x)


def _refine_1d(f: Callable[[float], float], x0: float, window: float,
               maximize: bool) -> tuple[float, float]:
    sign = 1.0 if maximize else -1.0
    x, v = _golden_section(lambda x_: sign * f(x_), x0 - window, x0 + window)
    return x, sign * v


def _refine_2d(f: Callable[[float, float], float], x0: float, y0: float,
               window: float, maximize: bool, max_rounds: int = 80) -> float:
    """Alternating golden-section refinement over the two phase axes."""
    sign = 1.0 if maximize else -1.0
    x, y = x0, y0
    best = sign * f(x, y)
    for _ in range(max_rounds):
        x, vx = _golden_section(lambda u: sign * f(u, y), x - window, x + window)
        y, vy = _golden_section(lambda u: sign * f(x, u), y - window, y + window)
        # Line searches along the phase-sum and phase-difference diagonals:
        # the corrected fringe separates in those coordinates, where
        # axis-aligned descent alone crawls along the ridge.
        t, vs = _golden_section(lambda u: sign * f(x + u, y + u),
                                -window, window)
        x, y = x + t, y + t
        t, vd = _golden_section(lambda u: sign * f(x + u, y - u),
                                -window, window)
        x, y = x + t, y - t
        improved = vd - best
        best = max(best, vd)
        if improved < 1e-16:
            break
    return sign * best


def _extremum(ig: Interferogram, value_of_joint: Callable[[np.ndarray], float],
              coarse: np.ndarray, maximize: bool) -> float:
    grid = ig.grid
    window = 1.5 * grid.spacing
    flat_idx = int(np.argmax(coarse) if maximize else np.argmin(coarse))
    if grid.mode == LOCKED:
        phi0 = grid.phi1_values[flat_idx]
        _, val = _refine_1d(lambda p: value_of_joint(ig.point_joint(p, p)),
                            phi0, window, maximize)
        return val
    i1, i2 = np.unravel_index(flat_idx, coarse.shape)
    phi1, phi2 = grid.phi1_values[i1], grid.phi2_values[i2]
    return _refine_2d(lambda p1, p2: value_of_joint(ig.point_joint(p1, p2)),
                      phi1, phi2, window, maximize)


def visibility_single(ig: Interferogram, i: int) -> float:
    """Single-particle fringe visibility (max-min)/(max+min) of p_A(i), with
    golden-section extremum refinement over phi1."""
    if i not in (0, 1):
        raise ValueError("port out of range")
    coarse = ig.single_a[..., i]

    def value(phi1: float) -> float:
        return float(ig.point_joint(phi1, 0.0)[i].sum())

    if ig.grid.mode == LOCKED:
        idx_max = int(np.argmax(coarse))
        idx_min = int(np.argmin(coarse))
        phis = ig.grid.phi1_values
    else:
        idx_max = int(np.unravel_index(np.argmax(coarse), coarse.shape)[0])
        idx_min = int(np.unravel_index(np.argmin(coarse), coarse.shape)[0])
        phis = ig.grid.phi1_values
    window = 1.5 * ig.grid.spacing
    _, vmax = _refine_1d(value, phis[idx_max], window, True)
    _, vmin = _refine_1d(value, phis[idx_min], window, False)
    if vmax + vmin <= 0.0:
        return 0.0
    return float(min(1.0, (vmax - vmin) / (vmax + vmin)))


def _corrected_value(joint: np.ndarray, i: int, j: int) -> float:
    single_a = joint.sum(axis=-1)
    single_bc = joint.sum(axis=-2)
    return float(joint[i, j] - single_a[i] * single_bc[j] + 0.25)


def corrected_port_visibility(ig: Interferogram, i: int, j: int) -> float:
    """Fringe visibility of the corrected joint probability for any BC port,
    including the zero-support ports 2 and 3."""
    if i not in (0, 1) or j not in (0, 1, 2, 3):
        raise ValueError("port out of range")
    coarse = ig.corrected_full[..., i, j]
    vmax = _extremum(ig, lambda jt: _corrected_value(jt, i, j), coarse, True)
    vmin = _extremum(ig, lambda jt: _corrected_value(jt, i, j), coarse, False)
    if vmax + vmin <= 0.0:
        return 0.0
    return float(min(1.0, (vmax - vmin) / (vmax + vmin)))


def visibility_two_party(ig: Interferogram, i: int, j: int) -> float:
    """Corrected two-party fringe visibility on the support ports; equals the
    A(BC) concurrence for pure states measured in the preferred basis."""
    if j in (2, 3):
        raise ValueError("outside support")
    return corrected_port_visibility(ig, i, j)


def _symplectic_partner(coeffs: np.ndarray) -> np.ndarray:
    c = coeffs
    return np.array([-np.conj(c[1]), np.conj(c[0]), -np.conj(c[3]), np.conj(c[2])])


def extended_measurement_basis(basis: PreferredBasis, coeffs: Sequence[complex]) -> np.ndarray:
    """Orthonormal measurement basis whose first vector is sum_i c_i Phi_i.

    The partner vector of each transducer port pair is the symplectic
    conjugate of the first, which keeps support and kernel contributions
    aligned between the two interfering arms.
    """
    c = np.asarray(coeffs, dtype=np.complex128).reshape(-1)
    if c.size != 4:
        raise ValueError("expected 4 coefficients")
    if abs(np.linalg.norm(c) - 1.0) > 1e-9:
        raise ValueError("coefficients must be normalized")
    k0 = c
    k1 = _symplectic_partner(k0)
    chosen = [k0, k1]
    k2 = None
    for idx in range(4):
        cand = np.zeros(4, dtype=np.complex128)
        cand[idx] = 1.0
        for u in chosen:
            cand -= u * (u.conj() @ cand)
        nrm = np.linalg.norm(cand)
        if nrm > 1e-6:
            k2 = cand / nrm
            break
    k3 = _symplectic_partner(k2)
    kmat = np.column_stack([k0, k1, k2, k3])
    return basis.vectors() @ kmat


def extended_basis_visibility(xi: PureState, coeffs: Sequence[complex],
                              grid: PhaseGrid) -> float:
    """Two-party visibility along the measurement direction sum_i c_i Phi_i
    of the extended basis: V = sum_i |c_i|^2 V(i), where V(i) is the measured
    corrected visibility of preferred port i (zero for the kernel ports of a
    pure state). The combination is a convex average, so
    min V(i) <= V <= max V(i), and V^2 + S^2 <= 1 with equality exactly when
    the direction lies in the support of rho_BC.
    """
    c = np.asarray(coeffs, dtype=np.complex128).reshape(-1)
    if c.size != 4:
        raise ValueError("expected 4 coefficients")
    if abs(np.linalg.norm(c) - 1.0) > 1e-9:
        raise ValueError("coefficients must be normalized")
    port_vis = _preferred_port_visibilities(
        xi.amplitudes.tobytes(), grid.phi1_values.tobytes(),
        grid.phi2_values.tobytes(), grid.mode)
    weights = np.abs(c) ** 2
    return float(np.dot(weights, port_vis))


@lru_cache(maxsize=128)
def _preferred_port_visibilities(amp_bytes: bytes, p1_bytes: bytes,
                                 p2_bytes: bytes, mode: str) -> tuple:
    """Corrected visibilities of the four preferred ports; cached because
    they are reused across every measurement direction of the same state."""
    xi = PureState(np.frombuffer(amp_bytes, dtype=np.complex128).copy(), 3)
    grid = PhaseGrid(np.frombuffer(p1_bytes, dtype=float).copy(),
                     np.frombuffer(p2_bytes, dtype=float).copy(), mode)
    ig = sweep_interferogram(xi, general_basis_rotation(preferred_basis(xi)), grid)
    return tuple(corrected_port_visibility(ig, 0, j) for j in range(4))
