"""Four-way interferometer simulation for three-qubit pure states.

The package verifies, numerically and via a simulated interferometer, the
complementarity relation between the A-vs-BC concurrence and the
single-particle character of qubit A: C^2 + S^2 = 1 for pure states, with the
inequality V^2 + S^2 <= 1 for measurements outside the preferred basis.
"""

from .core import (
    DensityMatrix,
    EigenDecomposition,
    PureState,
    UnitaryMatrix,
    apply_unitary,
    hermitian_eig,
    partial_trace,
    tensor_product,
)
from .harness import (
    ComplementarityRecord,
    PseudopureReport,
    SweepSpec,
    family_sweep,
    pseudopure_check,
    records_csv,
    summarize,
    verify_equality,
    verify_inequality,
)
from .interferometer import (
    INDEPENDENT,
    LOCKED,
    Interferogram,
    PhaseGrid,
    basis_rotation_R,
    extended_basis_visibility,
    extended_measurement_basis,
    general_basis_rotation,
    joint_probability,
    output_state,
    single_probability,
    sweep_interferogram,
    sweep_interferogram_density,
    transducer,
    transducer_bc,
    visibility_single,
    visibility_two_party,
)
from .measures import (
    PreferredBasis,
    ThetaAngles,
    concurrence_bipartition,
    concurrence_two_qubit,
    fidelity,
    predictability,
    preferred_basis,
    single_particle_character,
    single_visibility_direct,
    table_basis,
    theta_angles,
)
from .states import (
    FamilyParams,
    StateClassTag,
    amplitudes_from_angles,
    family_state,
    ghz_state,
    intermediate_state,
    pseudopure,
    random_pure_state,
    relevant_pure_part,
    w_state,
)

__version__ = "0.1.0"
