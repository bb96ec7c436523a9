"""Parametrized three-qubit source states, random test states, pseudopure mixtures.

The three named families (GHZ-class, W-class, intermediate-class) are special
cases of a single product-of-cosines amplitude formula over seven angles. The
half-angle convention is cos(x - pi*k/2), i.e. the k=1 factor equals sin(x),
with the positive sign.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .core import DensityMatrix, PureState


class StateClassTag(enum.Enum):
    GHZ = "ghz"
    W = "w"
    INTERMEDIATE = "intermediate"
    GENERAL = "general"


@dataclass(frozen=True)
class FamilyParams:
    """Angles (radians) of the seven-parameter source-state family.

    ``alpha2_0``/``alpha2_1`` are conditioned on the first qubit, the four
    ``alpha3_ij`` on the first two.
    """

    alpha1: float = 0.0
    alpha2_0: float = 0.0
    alpha2_1: float = 0.0
    alpha3_00: float = 0.0
    alpha3_01: float = 0.0
    alpha3_10: float = 0.0
    alpha3_11: float = 0.0

    def __post_init__(self):
        for name in ("alpha1", "alpha2_0", "alpha2_1",
                     "alpha3_00", "alpha3_01", "alpha3_10", "alpha3_11"):
            if not np.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")


def _half(angle: float, k: int) -> float:
    # cos(angle/2 - pi*k/2): cos for k=0, sin for k=1.
    return np.cos(angle / 2.0) if k == 0 else np.sin(angle / 2.0)


def amplitudes_from_angles(p: FamilyParams) -> PureState:
    """Real 8-amplitude state from the product-of-cosines coefficient formula."""
    alpha2 = (p.alpha2_0, p.alpha2_1)
    alpha3 = ((p.alpha3_00, p.alpha3_01), (p.alpha3_10, p.alpha3_11))
    amps = np.zeros(8, dtype=np.complex128)
    for i in range(2):
        for j in range(2):
            for k in range(2):
                amps[4 * i + 2 * j + k] = (
                    _half(p.alpha1, i) * _half(alpha2[i], j) * _half(alpha3[i][j], k)
                )
    return PureState(amps, 3)


def ghz_params(alpha1: float) -> FamilyParams:
    return FamilyParams(alpha1=alpha1, alpha2_1=np.pi, alpha3_11=np.pi)


def w_params(alpha1: float, alpha2_0: float) -> FamilyParams:
    return FamilyParams(alpha1=alpha1, alpha2_0=alpha2_0, alpha3_00=np.pi)


def intermediate_params(alpha1: float, alpha2_0: float, alpha3_00: float) -> FamilyParams:
    return FamilyParams(alpha1=alpha1, alpha2_0=alpha2_0, alpha3_00=alpha3_00)


def ghz_state(alpha1: float) -> PureState:
    """cos(a1/2)|000> + sin(a1/2)|111>."""
    amps = np.zeros(8, dtype=np.complex128)
    amps[0] = np.cos(alpha1 / 2.0)
    amps[7] = np.sin(alpha1 / 2.0)
    return PureState(amps, 3)


def w_state(alpha1: float, alpha2_0: float = 0.0) -> PureState:
    """Bipartite-entanglement family supported on {|001>, |010>, |100>}."""
    amps = np.zeros(8, dtype=np.complex128)
    amps[1] = np.cos(alpha1 / 2.0) * np.cos(alpha2_0 / 2.0)
    amps[2] = np.cos(alpha1 / 2.0) * np.sin(alpha2_0 / 2.0)
    amps[4] = np.sin(alpha1 / 2.0)
    return PureState(amps, 3)


def intermediate_state(alpha1: float, alpha2_0: float, alpha3_00: float) -> PureState:
    """Family supported on {|000>, |001>, |010>, |100>}; reduces to the W family
    at alpha3_00 = pi."""
    amps = np.zeros(8, dtype=np.complex128)
    c1, s1 = np.cos(alpha1 / 2.0), np.sin(alpha1 / 2.0)
    c2, s2 = np.cos(alpha2_0 / 2.0), np.sin(alpha2_0 / 2.0)
    c3, s3 = np.cos(alpha3_00 / 2.0), np.sin(alpha3_00 / 2.0)
    amps[0] = c1 * c2 * c3
    amps[1] = c1 * c2 * s3
    amps[2] = c1 * s2
    amps[4] = s1
    return PureState(amps, 3)


def family_state(tag: StateClassTag, p: FamilyParams) -> PureState:
    if tag is StateClassTag.GHZ:
        return ghz_state(p.alpha1)
    if tag is StateClassTag.W:
        return w_state(p.alpha1, p.alpha2_0)
    if tag is StateClassTag.INTERMEDIATE:
        return intermediate_state(p.alpha1, p.alpha2_0, p.alpha3_00)
    return amplitudes_from_angles(p)


def random_pure_state(seed: int, n_qubits: int = 3) -> PureState:
    """Haar-distributed pure state: i.i.d. standard complex Gaussian amplitudes,
    normalized. Uses numpy's PCG64 generator; deterministic per seed."""
    rng = np.random.default_rng(seed)
    d = 2**n_qubits
    raw = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return PureState(raw / np.linalg.norm(raw), n_qubits)


def pseudopure(psi: PureState, epsilon: float) -> DensityMatrix:
    """(1-eps)/2^n * identity + eps |psi><psi|."""
    if not (0.0 < epsilon <= 1.0):
        raise ValueError("epsilon must lie in (0, 1]")
    d = 2**psi.n_qubits
    proj = np.outer(psi.amplitudes, psi.amplitudes.conj())
    rho = ((1.0 - epsilon) / d) * np.eye(d) + epsilon * proj
    return DensityMatrix(rho, psi.n_qubits)


def relevant_pure_part(rho: DensityMatrix, epsilon: float) -> DensityMatrix:
    """Invert the pseudopure construction: subtract the flat background and
    rescale back to unit trace."""
    if not (0.0 < epsilon <= 1.0):
        raise ValueError("epsilon must lie in (0, 1]")
    d = 2**rho.n_qubits
    dev = (rho.entries - ((1.0 - epsilon) / d) * np.eye(d)) / epsilon
    # Small epsilon amplifies float rounding of the unit trace; renormalize.
    dev = dev / np.trace(dev).real
    return DensityMatrix(dev, rho.n_qubits)
