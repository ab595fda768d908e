"""Entanglement-to-geometry toolkit.

Builds finite-dimensional multi-factor quantum states, measures their
entanglement (von Neumann entropies, mutual information), turns pairwise
mutual information into weighted graphs with emergent shortest-path
distances, and tracks how branch decoherence degrades correlations and
stretches those distances.
"""

__version__ = "0.1.0"

from .hilbert import (
    DENSE_CAP,
    DensityMatrix,
    ExplicitWeightsRequired,
    FactorSpace,
    PureState,
    SchmidtPairState,
    TensorProductStructure,
    density_of,
    partial_trace,
    qubits,
    reduced_density,
    schmidt_reduce,
    schmidt_to_dense,
    tensor,
)
from .infotheory import (
    CorrelationBound,
    MiPropertyReport,
    check_mi_properties,
    correlation_lower_bound,
    entropy_from_spectrum,
    mutual_information,
    mutual_information_schmidt,
    von_neumann_entropy,
)
from .geometry import (
    EmergentMetric,
    InfoGraph,
    MetricReport,
    NoCorrelationsError,
    WeightFunction,
    build_info_graph,
    edge_records,
    edge_weight,
    emergent_distance,
    emergent_metric,
    metric_check,
    neg_log_weight,
)
from .channels import (
    BranchMixture,
    DecoherenceSchedule,
    LocalPerturbation,
    NonLocalPerturbation,
    ScheduleStep,
    SweepPoint,
    apply_local,
    apply_nonlocal,
    apply_unitary,
    decoherence_sweep,
    dephase_modes,
    haar_random_state,
    haar_random_unitary,
    localize_modes,
)
from .scenarios import (
    PhysicalScales,
    SectorState,
    bell_state,
    bell_with_environment,
    classical_mixture_state,
    momentum_sector_state,
    physical_scales,
    qudit_bell,
    spin_momentum_state,
)

__all__ = [
    "DENSE_CAP",
    "DensityMatrix",
    "ExplicitWeightsRequired",
    "FactorSpace",
    "PureState",
    "SchmidtPairState",
    "TensorProductStructure",
    "density_of",
    "partial_trace",
    "qubits",
    "reduced_density",
    "schmidt_reduce",
    "schmidt_to_dense",
    "tensor",
    "CorrelationBound",
    "MiPropertyReport",
    "check_mi_properties",
    "correlation_lower_bound",
    "entropy_from_spectrum",
    "mutual_information",
    "mutual_information_schmidt",
    "von_neumann_entropy",
    "EmergentMetric",
    "InfoGraph",
    "MetricReport",
    "NoCorrelationsError",
    "WeightFunction",
    "build_info_graph",
    "edge_records",
    "edge_weight",
    "emergent_distance",
    "emergent_metric",
    "metric_check",
    "neg_log_weight",
    "BranchMixture",
    "DecoherenceSchedule",
    "LocalPerturbation",
    "NonLocalPerturbation",
    "ScheduleStep",
    "SweepPoint",
    "apply_local",
    "apply_nonlocal",
    "apply_unitary",
    "decoherence_sweep",
    "dephase_modes",
    "haar_random_state",
    "haar_random_unitary",
    "localize_modes",
    "PhysicalScales",
    "SectorState",
    "bell_state",
    "bell_with_environment",
    "classical_mixture_state",
    "momentum_sector_state",
    "physical_scales",
    "qudit_bell",
    "spin_momentum_state",
]
