"""Local-unitary orbit geometry of multiqubit pure states.

Shifted one-qubit marginal spectra, the polytope they fill, closed-form
reduced-space dimensions per boundary stratum, explicit wall and stable
states, and a numerical fiber oracle that cross-checks the formulas.
"""

from .dimension import DimReport, dim_for_point, dim_reduced_space, report_document
from .errors import (
    ConvergenceError,
    InternalInvariantError,
    LupolyError,
    NumericalError,
    ValidationError,
)
from .fiberlab import (
    DmuReport,
    FiberSample,
    NumericDimEstimate,
    SampleAudit,
    momentum_differential_matrix,
    momentum_rank_report,
    numeric_dim,
    rank_dmu,
    sample_fiber,
)
from .polytope import (
    Facet,
    Inequality,
    MembershipResult,
    PolytopeModel,
    StratumClass,
    Vertex,
    VertexList,
    classify,
    facets,
    membership,
    polytope_model,
    random_interior_point,
    random_wall_point,
    vertices,
    vertices_oracle,
)
from .qstate import (
    DensityMatrix2,
    MomentumValue,
    PureState,
    SpectraPoint,
    apply_local_unitary,
    dump_state,
    haar_state,
    load_state,
    loads_state,
    momentum_map,
    psi_map,
    purity_invariants,
    random_local_unitaries,
    random_state,
    reduce_one_qubit,
    state_document,
    state_from_document,
)
from .stability import (
    GeneratorSet,
    OrbitReport,
    StabilityReport,
    complement_pair_state,
    generator_set,
    orbit_dimensions,
    stable_state,
    verify_stable,
)
from .wall import (
    TorusCertificate,
    WallConditionReport,
    WallOperator,
    WeightSubspaceBasis,
    build_wall_operator,
    check_wall_condition,
    eigenspace_basis,
    torus_transitivity_check,
    wall_state,
    zero_pattern_basis,
)

__version__ = "0.1.0"

__all__ = [
    "ConvergenceError",
    "DensityMatrix2",
    "DimReport",
    "DmuReport",
    "Facet",
    "FiberSample",
    "GeneratorSet",
    "Inequality",
    "InternalInvariantError",
    "LupolyError",
    "MembershipResult",
    "MomentumValue",
    "NumericDimEstimate",
    "NumericalError",
    "OrbitReport",
    "PolytopeModel",
    "PureState",
    "SampleAudit",
    "SpectraPoint",
    "StabilityReport",
    "StratumClass",
    "TorusCertificate",
    "ValidationError",
    "Vertex",
    "VertexList",
    "WallConditionReport",
    "WallOperator",
    "WeightSubspaceBasis",
    "apply_local_unitary",
    "build_wall_operator",
    "check_wall_condition",
    "classify",
    "complement_pair_state",
    "dim_for_point",
    "dim_reduced_space",
    "dump_state",
    "eigenspace_basis",
    "facets",
    "generator_set",
    "haar_state",
    "load_state",
    "loads_state",
    "membership",
    "momentum_map",
    "momentum_differential_matrix",
    "momentum_rank_report",
    "numeric_dim",
    "orbit_dimensions",
    "polytope_model",
    "psi_map",
    "purity_invariants",
    "random_interior_point",
    "random_local_unitaries",
    "random_state",
    "random_wall_point",
    "rank_dmu",
    "reduce_one_qubit",
    "report_document",
    "sample_fiber",
    "stable_state",
    "state_document",
    "state_from_document",
    "torus_transitivity_check",
    "verify_stable",
    "vertices",
    "vertices_oracle",
    "wall_state",
    "zero_pattern_basis",
]
