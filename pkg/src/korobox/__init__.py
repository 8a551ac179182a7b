"""korobox: approximation workbench for weighted Korobov spaces.

Spectral truncation with exact worst-case errors, randomized Fourier
coefficient estimation, rank-1 lattice quadrature, and a classically
simulated quantum amplitude-estimation pipeline, with tractability-exponent
calculators and cost/speedup accounting on top.
"""

from .errors import DimensionMismatchError, DomainError, InfeasibleError, KoroboxError
from .fourier import EvaluationPoint, FourierPolynomial
from .index_set import IndexSet, comp_wor_all, enumerate_index_set, truncate, truncation_error
from .lattice import LatticeRule, integrate, next_prime, nodes, search_generator, worst_case_int_error
from .quantum import (
    QuantumApproxOutput,
    QuantumPipeline,
    QuantumSumConfig,
    ResourceReport,
    amplitude_estimation_pmf,
    cost_model_quantum,
    qsum,
    qsum_boosted,
    quantum_approximate,
)
from .randomized import (
    ApproxOutput,
    McRun,
    approximate,
    cost_model_randomized,
    empirical_error,
    expected_sq_error,
    make_run,
    sample_size,
)
from .space import (
    SpaceDescriptor,
    WeightSchedule,
    algebra_constant,
    kernel_diag,
    kernel_eval,
    shifted_norm_bound,
    sum_exponent,
    sup_norm_bound,
    weight_factor,
    weight_product,
    zeta,
)
from .tractability import (
    TractabilityVerdict,
    exponent_all,
    growth_study,
    speedup_table,
    verdict,
    verdict_table,
)

__version__ = "0.1.0"

__all__ = [
    "DimensionMismatchError",
    "DomainError",
    "InfeasibleError",
    "KoroboxError",
    "EvaluationPoint",
    "FourierPolynomial",
    "IndexSet",
    "comp_wor_all",
    "enumerate_index_set",
    "truncate",
    "truncation_error",
    "LatticeRule",
    "integrate",
    "next_prime",
    "nodes",
    "search_generator",
    "worst_case_int_error",
    "QuantumApproxOutput",
    "QuantumPipeline",
    "QuantumSumConfig",
    "ResourceReport",
    "amplitude_estimation_pmf",
    "cost_model_quantum",
    "qsum",
    "qsum_boosted",
    "quantum_approximate",
    "ApproxOutput",
    "McRun",
    "approximate",
    "cost_model_randomized",
    "empirical_error",
    "expected_sq_error",
    "make_run",
    "sample_size",
    "SpaceDescriptor",
    "WeightSchedule",
    "algebra_constant",
    "kernel_diag",
    "kernel_eval",
    "shifted_norm_bound",
    "sum_exponent",
    "sup_norm_bound",
    "weight_factor",
    "weight_product",
    "zeta",
    "TractabilityVerdict",
    "exponent_all",
    "growth_study",
    "speedup_table",
    "verdict",
    "verdict_table",
]
