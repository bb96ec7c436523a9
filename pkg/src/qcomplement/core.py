"""Dense linear-algebra primitives for few-qubit systems.

Conventions used throughout the package:

* Basis order is |00...0>, |00...1>, ..., |11...1> with qubit 0 (particle A)
  as the most significant bit of the basis index.
* All arrays are complex128. States and matrices are validated on
  construction and treated as immutable afterwards.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

NORM_TOL = 1e-12
HERMITIAN_TOL = 1e-12
PSD_TOL = 1e-10
UNITARY_TOL = 1e-10
DEGENERACY_TOL = 1e-9
PHASE_TOL = 1e-9


def _as_complex_array(values, ndim: int) -> np.ndarray:
    arr = np.asarray(values, dtype=np.complex128)
    if arr.ndim != ndim:
        raise ValueError(f"expected a {ndim}-dimensional array, got shape {arr.shape}")
    arr = arr.copy()
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class PureState:
    """Normalized amplitude vector over the computational basis of n qubits."""

    amplitudes: np.ndarray
    n_qubits: int

    def __post_init__(self):
        amps = _as_complex_array(self.amplitudes, 1)
        object.__setattr__(self, "amplitudes", amps)
        if self.n_qubits < 1:
            raise ValueError("n_qubits must be positive")
        if amps.shape[0] != 2**self.n_qubits:
            raise ValueError(
                f"amplitude vector of length {amps.shape[0]} does not match "
                f"{self.n_qubits} qubits"
            )
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > 1e-9:
            raise ValueError(f"state norm {norm} is not 1")
        if abs(norm - 1.0) > NORM_TOL:
            # Re-normalize rounding-level drift so composed pipelines stay exact.
            object.__setattr__(self, "amplitudes", _as_complex_array(amps / norm, 1))

    @classmethod
    def from_amplitudes(cls, values) -> "PureState":
        arr = np.asarray(values, dtype=np.complex128).reshape(-1)
        n = int(np.log2(arr.shape[0]))
        if 2**n != arr.shape[0]:
            raise ValueError("amplitude vector length must be a power of two")
        norm = np.linalg.norm(arr)
        if norm == 0:
            raise ValueError("zero vector cannot be normalized")
        return cls(arr / norm, n)

    def density_matrix(self) -> "DensityMatrix":
        return DensityMatrix(np.outer(self.amplitudes, self.amplitudes.conj()), self.n_qubits)


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, unit-trace, positive-semidefinite matrix over n qubits."""

    entries: np.ndarray
    n_qubits: int

    def __post_init__(self):
        mat = _as_complex_array(self.entries, 2)
        object.__setattr__(self, "entries", mat)
        d = 2**self.n_qubits
        if mat.shape != (d, d):
            raise ValueError(f"matrix shape {mat.shape} does not match {self.n_qubits} qubits")
        if np.max(np.abs(mat - mat.conj().T)) > HERMITIAN_TOL:
            raise ValueError("density matrix is not Hermitian")
        if abs(np.trace(mat).real - 1.0) > HERMITIAN_TOL or abs(np.trace(mat).imag) > HERMITIAN_TOL:
            raise ValueError("density matrix trace is not 1")
        evals = np.linalg.eigvalsh((mat + mat.conj().T) / 2)
        if evals.min() < -PSD_TOL:
            raise ValueError("density matrix has a negative eigenvalue")


@dataclass(frozen=True)
class UnitaryMatrix:
    """Dense complex square matrix with a unitarity certificate."""

    entries: np.ndarray
    dimension: int = field(default=0)

    def __post_init__(self):
        mat = _as_complex_array(self.entries, 2)
        object.__setattr__(self, "entries", mat)
        d = mat.shape[0]
        if mat.shape != (d, d):
            raise ValueError("unitary matrix must be square")
        if self.dimension == 0:
            object.__setattr__(self, "dimension", d)
        elif self.dimension != d:
            raise ValueError("declared dimension does not match matrix shape")
        if np.max(np.abs(mat @ mat.conj().T - np.eye(d))) > UNITARY_TOL:
            raise ValueError("matrix is not unitary")


@dataclass(frozen=True)
class EigenDecomposition:
    """Eigenvalues sorted descending with phase-fixed orthonormal eigenvectors.

    Column i of ``eigenvectors`` is paired with ``eigenvalues[i]``.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def tensor_product(a, b) -> np.ndarray:
    """Kronecker product with the package's qubit ordering (first factor = MSB)."""
    return np.kron(np.asarray(a, dtype=np.complex128), np.asarray(b, dtype=np.complex128))


def partial_trace(rho: DensityMatrix, keep: Sequence[int]) -> DensityMatrix:
    """Reduced density matrix over the kept qubits.

    ``keep`` lists qubit indices (0 = most significant) that survive the trace,
    in the order they should appear in the output.
    """
    n = rho.n_qubits
    keep = list(keep)
    if len(keep) == 0 or len(set(keep)) != len(keep):
        raise ValueError("invalid subsystem")
    if any((q < 0 or q >= n) for q in keep):
        raise ValueError("invalid subsystem")
    traced = [q for q in range(n) if q not in keep]
    tensor = rho.entries.reshape([2] * (2 * n))
    # Row index of qubit q lives on axis q, column index on axis n + q.
    for q in sorted(traced, reverse=True):
        tensor = np.trace(tensor, axis1=q, axis2=tensor.ndim // 2 + q)
        # After tracing axis q the remaining row axes shift down; recompute
        # positions by relabelling: build fresh axis map each iteration.
        n_rem = tensor.ndim // 2
        # Adjust subsequent qubit labels: every kept/traced qubit above q
        # moves down by one; handled implicitly because we trace from the
        # highest index downwards.
    k = len(keep)
    # The loop above preserved relative order of the remaining qubits; now
    # permute them into the requested output order.
    remaining = [q for q in range(n) if q not in traced]
    perm = [remaining.index(q) for q in keep]
    tensor = np.transpose(tensor, perm + [k + p for p in perm])
    reduced = tensor.reshape(2**k, 2**k)
    reduced = (reduced + reduced.conj().T) / 2
    return DensityMatrix(reduced, k)


def _phase_fix(vec: np.ndarray) -> np.ndarray:
    """Make the first component with modulus > PHASE_TOL real and positive."""
    idx = np.flatnonzero(np.abs(vec) > PHASE_TOL)
    if idx.size == 0:
        return vec
    pivot = vec[idx[0]]
    return vec * (abs(pivot) / pivot)


def _deterministic_cluster_basis(subspace: np.ndarray) -> np.ndarray:
    """Orthonormal basis of a degenerate eigenspace by sequential projection.

    Projects the computational basis vectors, in ascending index order, onto
    the subspace spanned by ``subspace`` columns and Gram-Schmidt-orthogonalizes
    the nonzero results.
    """
    d, m = subspace.shape
    projector = subspace @ subspace.conj().T
    chosen: list[np.ndarray] = []
    for k in range(d):
        cand = projector[:, k].copy()
        for u in chosen:
            cand -= u * (u.conj() @ cand)
        nrm = np.linalg.norm(cand)
        if nrm > 1e-6:
            chosen.append(cand / nrm)
        if len(chosen) == m:
            break
    if len(chosen) < m:
        # Fall back to the raw eigenvectors for pathological subspaces.
        for k in range(m):
            cand = subspace[:, k].copy()
            for u in chosen:
                cand -= u * (u.conj() @ cand)
            nrm = np.linalg.norm(cand)
            if nrm > 1e-9:
                chosen.append(cand / nrm)
            if len(chosen) == m:
                break
    return np.column_stack(chosen)


def hermitian_eig(matrix) -> EigenDecomposition:
    """Full eigendecomposition of a Hermitian matrix, deterministic across runs.

    Eigenvalues come out descending. Degenerate clusters (eigenvalue gap below
    1e-9) are re-orthonormalized by sequential projection of computational
    basis vectors so the output does not depend on LAPACK internals. Each
    eigenvector's first significant component is made real positive.
    """
    mat = np.asarray(matrix.entries if isinstance(matrix, DensityMatrix) else matrix,
                     dtype=np.complex128)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValueError("not Hermitian")
    if np.max(np.abs(mat - mat.conj().T)) > HERMITIAN_TOL:
        raise ValueError("not Hermitian")
    sym = (mat + mat.conj().T) / 2
    evals, evecs = np.linalg.eigh(sym)
    order = np.argsort(evals)[::-1]
    evals = evals[order]
    evecs = evecs[:, order]

    # Group adjacent eigenvalues into degenerate clusters.
    clusters: list[list[int]] = [[0]] if evals.size else []
    for i in range(1, evals.size):
        if abs(evals[i] - evals[clusters[-1][-1]]) < DEGENERACY_TOL:
            clusters[-1].append(i)
        else:
            clusters.append([i])
    for cluster in clusters:
        if len(cluster) > 1:
            cols = evecs[:, cluster]
            evecs[:, cluster] = _deterministic_cluster_basis(cols)
    for i in range(evals.size):
        evecs[:, i] = _phase_fix(evecs[:, i])
    return EigenDecomposition(evals.copy(), evecs.copy())


def apply_unitary(state: PureState, u: UnitaryMatrix, targets: Sequence[int]) -> PureState:
    """Apply a unitary to the listed target qubits of a pure state."""
    targets = list(targets)
    n = state.n_qubits
    if len(set(targets)) != len(targets) or any(t < 0 or t >= n for t in targets):
        raise ValueError("invalid target qubits")
    k = len(targets)
    if u.entries.shape[0] != 2**k:
        raise ValueError("unitary dimension does not match target count")
    psi = state.amplitudes.reshape([2] * n)
    rest = [q for q in range(n) if q not in targets]
    psi = np.transpose(psi, targets + rest).reshape(2**k, -1)
    psi = u.entries @ psi
    psi = psi.reshape([2] * n)
    inverse = np.argsort(targets + rest)
    psi = np.transpose(psi, inverse).reshape(-1)
    return PureState(psi, n)
