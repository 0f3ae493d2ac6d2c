"""Equilibration diagnostics for random tensor network states."""

from .geometry import (
    Geometry,
    TilingSpec,
    asymptotic_rate,
    build_black_hole_center,
    build_hyperbolic_patch,
    build_rtt,
    build_single_tensor,
    build_square_disc,
    build_square_patch,
    fuse_vertices,
    inflation_counts,
    min_cut,
    tensor_dimension,
)
from .ising import (
    BoundPair,
    PartitionValue,
    bound_hyperbolic,
    bound_recursive,
    bound_square,
    fusion_delta_ratio_bound,
    partition_exact,
    partition_exact_elimination,
    partition_with_boundary_field,
)
from .effdim import (
    EffDimReport,
    HierarchyRow,
    coe_two_tensor_constant,
    fusion_ratio,
    hierarchy_table,
    inverse_effdim_bound,
    inverse_effdim_rtt,
    inverse_effdim_single,
    limit_large_b,
    limit_large_d,
    rtt_hyperbolic_crossover,
)
from .ensembles import (
    MomentReport,
    UnitarySample,
    moment2_cue,
    moment4_coe_contraction,
    moment4_cue_contraction,
    sample_coe,
    sample_cse,
    sample_cue,
    sample_orthogonal,
    verify_moments,
)
from .contraction import (
    McStats,
    RtnSample,
    expected_norm,
    mc_norm_stats,
    mc_overlap4,
    sample_rtn_state,
)
from .dynamics import (
    DynamicsResult,
    HamiltonianSpec,
    analyze,
    build_hamiltonian,
    effdim_of_state,
    loschmidt_average,
    npoint_fluctuation,
    pauli_on,
)

__version__ = "0.1.0"
