"""Sweep orchestration: verify the complementarity equality and inequality
over state families and random states, and emit deterministic record sets.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .core import PureState
from .interferometer import (
    INDEPENDENT,
    PhaseGrid,
    extended_basis_visibility,
    general_basis_rotation,
    sweep_interferogram,
    sweep_interferogram_density,
    visibility_two_party,
)
from .measures import (
    concurrence_bipartition,
    predictability,
    preferred_basis,
    single_particle_character,
    single_visibility_direct,
    table_basis,
)
from .states import FamilyParams, StateClassTag, family_state, pseudopure

RECORD_CONSISTENCY_TOL = 1e-10

CSV_HEADER = (
    "# qcomplement records v1\n"
    "descriptor,C,P,V_single,S,V2,residual_equality,slack_inequality"
)


@dataclass(frozen=True)
class ComplementarityRecord:
    """One verified data point: direct quantifiers plus the interferometric
    two-party visibility and the equality/inequality residuals."""

    descriptor: str
    c: float
    p: float
    v_single: float
    s: float
    v2: float
    residual_equality: float
    slack_inequality: float

    def __post_init__(self):
        for name in ("c", "p", "v_single", "s", "v2"):
            val = getattr(self, name)
            if not (-1e-12 <= val <= 1.0 + 1e-12):
                raise ValueError(f"{name}={val} outside [0, 1]")
        if self.residual_equality < 0:
            raise ValueError("residual must be nonnegative")
        if abs(self.s**2 - (self.v_single**2 + self.p**2)) > RECORD_CONSISTENCY_TOL:
            raise ValueError("S^2 != V_single^2 + P^2")


@dataclass(frozen=True)
class SweepSpec:
    """A one-parameter family sweep: which family, which angle varies, over
    which grid, with the remaining angles fixed."""

    family: StateClassTag
    parameter: str = "alpha1"
    values: tuple = tuple(np.linspace(0.0, np.pi, 33))
    fixed: Mapping[str, float] = None
    phase_points: int = 360
    basis_source: str = "table"

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        if len(self.values) == 0:
            raise ValueError("value grid must be nonempty")
        object.__setattr__(self, "fixed", dict(self.fixed or {}))
        valid = {"alpha1", "alpha2_0", "alpha2_1",
                 "alpha3_00", "alpha3_01", "alpha3_10", "alpha3_11"}
        if self.parameter not in valid:
            raise ValueError(f"invalid parameter name {self.parameter!r}")
        for key in self.fixed:
            if key not in valid:
                raise ValueError(f"invalid parameter name {key!r}")
        if self.basis_source not in ("table", "eigensolve"):
            raise ValueError("basis_source must be 'table' or 'eigensolve'")


def _grid(phase_points: int) -> PhaseGrid:
    return PhaseGrid.uniform(phase_points, INDEPENDENT)


def _direct_quantifiers(xi: PureState):
    c = concurrence_bipartition(xi, 0)
    p = predictability(xi, 0)
    v1 = single_visibility_direct(xi, 0)
    s = single_particle_character(xi, 0)
    return c, p, v1, s


def verify_equality(xi: PureState, phase_points: int = 360,
                    descriptor: str = "state") -> ComplementarityRecord:
    """Measure V2 interferometrically in the preferred basis and check
    V2^2 + S^2 = 1 against the directly computed single-particle character."""
    c, p, v1, s = _direct_quantifiers(xi)
    ig = sweep_interferogram(xi, general_basis_rotation(preferred_basis(xi)),
                             _grid(phase_points))
    v2 = visibility_two_party(ig, 0, 0)
    residual = abs(v2 * v2 + s * s - 1.0)
    return ComplementarityRecord(descriptor, c, p, v1, s, v2, residual,
                                 1.0 - (v2 * v2 + s * s))


def verify_inequality(xi: PureState, coeffs: Sequence[complex],
                      phase_points: int = 360,
                      descriptor: str = "state") -> ComplementarityRecord:
    """Measure the extended-basis visibility along the given direction and
    check V^2 + S^2 <= 1; the slack vanishes for support-aligned directions."""
    c, p, v1, s = _direct_quantifiers(xi)
    v = extended_basis_visibility(xi, coeffs, _grid(phase_points))
    slack = 1.0 - (v * v + s * s)
    return ComplementarityRecord(descriptor, c, p, v1, s, v,
                                 abs(v * v + s * s - 1.0), slack)


def _family_params(spec: SweepSpec, value: float) -> FamilyParams:
    base = {"alpha1": 0.0, "alpha2_0": 0.0, "alpha2_1": 0.0,
            "alpha3_00": 0.0, "alpha3_01": 0.0, "alpha3_10": 0.0,
            "alpha3_11": 0.0}
    if spec.family is StateClassTag.GHZ:
        base.update(alpha2_1=np.pi, alpha3_11=np.pi)
    elif spec.family is StateClassTag.W:
        base.update(alpha3_00=np.pi)
    base.update(spec.fixed)
    base[spec.parameter] = value
    return FamilyParams(**base)


def family_sweep(spec: SweepSpec) -> list[ComplementarityRecord]:
    """One complementarity record per grid value. The measurement basis comes
    from the closed-form table for the named families (default) or from the
    eigendecomposition of rho_BC."""
    grid = _grid(spec.phase_points)
    records = []
    for value in spec.values:
        params = _family_params(spec, value)
        xi = family_state(spec.family, params)
        if spec.basis_source == "table" and spec.family is not StateClassTag.GENERAL:
            basis = table_basis(spec.family, params)
        else:
            basis = preferred_basis(xi)
        c, p, v1, s = _direct_quantifiers(xi)
        ig = sweep_interferogram(xi, general_basis_rotation(basis), grid)
        v2 = visibility_two_party(ig, 0, 0)
        residual = abs(v2 * v2 + s * s - 1.0)
        descriptor = f"{spec.family.value}:{spec.parameter}={value:.17g}"
        records.append(ComplementarityRecord(descriptor, c, p, v1, s, v2,
                                             residual, 1.0 - (v2 * v2 + s * s)))
    return records


@dataclass(frozen=True)
class PseudopureReport:
    epsilon: float
    max_joint_deviation: float
    max_corrected_deviation: float
    passed: bool


def pseudopure_check(xi: PureState, epsilon: float, phase_points: int = 36,
                     tolerance: float = 1e-9) -> PseudopureReport:
    """Run the interferometer on the pseudopure mixture, subtract the flat
    (1-eps)/8 background from every joint channel, rescale by 1/eps, and
    compare to the pure-state interferogram pointwise."""
    grid = _grid(phase_points)
    rotation = general_basis_rotation(preferred_basis(xi))
    pure_ig = sweep_interferogram(xi, rotation, grid)
    mixed_ig = sweep_interferogram_density(pseudopure(xi, epsilon), rotation, grid)

    rescaled_joint = (mixed_ig.joint - (1.0 - epsilon) / 8.0) / epsilon
    max_joint = float(np.max(np.abs(rescaled_joint - pure_ig.joint)))

    single_a = rescaled_joint.sum(axis=-1)
    single_bc = rescaled_joint.sum(axis=-2)
    corrected = (rescaled_joint[..., :, :2]
                 - single_a[..., :, None] * single_bc[..., None, :2] + 0.25)
    max_corr = float(np.max(np.abs(corrected - pure_ig.corrected)))
    passed = max_joint < tolerance and max_corr < tolerance
    return PseudopureReport(float(epsilon), max_joint, max_corr, passed)


def records_csv(records: Sequence[ComplementarityRecord]) -> str:
    """Deterministic CSV serialization: fixed column order, 17 significant
    digits, byte-identical across repeated runs."""
    buf = io.StringIO()
    buf.write(CSV_HEADER + "\n")
    for r in records:
        fields = [r.descriptor] + [
            f"{v:.17g}" for v in (r.c, r.p, r.v_single, r.s, r.v2,
                                  r.residual_equality, r.slack_inequality)
        ]
        buf.write(",".join(fields) + "\n")
    return buf.getvalue()


def summarize(records: Sequence[ComplementarityRecord],
              tolerance: float = 1e-6, check: str = "equality") -> dict:
    """Aggregate pass/fail summary over a record set. ``check='equality'``
    gates on the equality residual staying below the tolerance;
    ``check='inequality'`` gates on the slack staying above -tolerance
    (the slack itself may be large and positive)."""
    if check not in ("equality", "inequality"):
        raise ValueError("check must be 'equality' or 'inequality'")
    residuals = np.array([r.residual_equality for r in records])
    slacks = np.array([r.slack_inequality for r in records])
    if check == "equality":
        ok = bool(residuals.max(initial=0.0) < tolerance)
    else:
        ok = bool(slacks.min(initial=0.0) >= -tolerance)
    return {
        "max_residual": float(residuals.max(initial=0.0)),
        "mean_residual": float(residuals.mean()) if len(records) else 0.0,
        "n_states": len(records),
        "pass": ok,
    }
