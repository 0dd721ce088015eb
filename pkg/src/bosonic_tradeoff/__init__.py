"""Trade-off capacity regions of the pure-loss bosonic channel."""

__version__ = "0.1.0"

from .channel import (
    ChannelSpec,
    PowerBudget,
    classical_capacity,
    ea_classical_capacity,
    quantum_capacity,
    quantum_capacity_limit,
)
from .entropy import g_entropy, g_inverse, von_neumann_entropy
from .errors import DomainError, IncompatibleFrontiersError, InfeasibleError
from .regions import (
    BoundTriple,
    Frontier,
    GainMetrics,
    RateTriple,
    ce_frontier,
    cq_frontier,
    cqe_bounds,
    gain_metrics,
    max_first_given_second,
    minkowski_sum,
    rp_frontier,
    rps_bounds,
    timeshare_frontier,
)
from .rule_of_thumb import lambda_star, taylor_lower_bound

__all__ = [
    "BoundTriple",
    "ChannelSpec",
    "DomainError",
    "Frontier",
    "GainMetrics",
    "IncompatibleFrontiersError",
    "InfeasibleError",
    "PowerBudget",
    "RateTriple",
    "ce_frontier",
    "classical_capacity",
    "cq_frontier",
    "cqe_bounds",
    "ea_classical_capacity",
    "g_entropy",
    "g_inverse",
    "gain_metrics",
    "lambda_star",
    "max_first_given_second",
    "minkowski_sum",
    "quantum_capacity",
    "quantum_capacity_limit",
    "rp_frontier",
    "rps_bounds",
    "taylor_lower_bound",
    "timeshare_frontier",
    "von_neumann_entropy",
]
