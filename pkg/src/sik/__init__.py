"""Index calculus for paths of complex symplectic maps and Lagrangian subspaces."""
from .symplectic import (
    DEFAULT_TOL,
    IsotropicReduction,
    SubspaceFrame,
    SymplecticMap,
    SymplecticSpace,
    Tolerances,
    annihilator,
    doubled_space,
    graph_lagrangian,
    intersect,
    is_lagrangian,
    random_lagrangian,
    random_symplectic,
    reduce_by_isotropic,
    rotate_lagrangian,
    subspace_sum,
)
from .paths import (
    FunctionPath,
    GraphPath,
    LagrangianPath,
    PiecewiseExpPath,
    SymplecticPath,
    path_from_generator,
    rotation_path,
)
from .forms import HermitianForm, InertiaTriple, crossing_form, inertia, q_derivative_form, q_form, q_inertia
from .indices import (
    IndexReport,
    e_ceil,
    hormander_index,
    hormander_via_paths,
    maslov_index,
    maslov_index_crossings,
    maslov_type_index,
    triple_index,
    triple_index_via_delta,
)
from .iteration import BrakeStructure, brake_iterate, iterate
from .mean_index import ExperimentConfig, FieldSpec, FlowSpec, MeanIndexReport, mean_index_estimate
from .report import AuditRecord, AuditReport
from .audit import SUITES, run_suite

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_TOL",
    "SUITES",
    "AuditRecord",
    "AuditReport",
    "BrakeStructure",
    "ExperimentConfig",
    "FieldSpec",
    "FlowSpec",
    "FunctionPath",
    "GraphPath",
    "HermitianForm",
    "IndexReport",
    "InertiaTriple",
    "IsotropicReduction",
    "LagrangianPath",
    "MeanIndexReport",
    "PiecewiseExpPath",
    "SubspaceFrame",
    "SymplecticMap",
    "SymplecticPath",
    "SymplecticSpace",
    "Tolerances",
    "annihilator",
    "brake_iterate",
    "crossing_form",
    "doubled_space",
    "e_ceil",
    "graph_lagrangian",
    "hormander_index",
    "hormander_via_paths",
    "inertia",
    "intersect",
    "is_lagrangian",
    "iterate",
    "maslov_index",
    "maslov_index_crossings",
    "maslov_type_index",
    "mean_index_estimate",
    "path_from_generator",
    "q_derivative_form",
    "q_form",
    "q_inertia",
    "random_lagrangian",
    "random_symplectic",
    "reduce_by_isotropic",
    "rotate_lagrangian",
    "rotation_path",
    "run_suite",
    "subspace_sum",
    "triple_index",
    "triple_index_via_delta",
]
