from .bounds import SourceModel, binary_entropy, gaussian_rd, upper_bound_1, upper_bound_2, lower_bound_trivial
from .minimax import MinimaxConfig, improvement_ri, improved_lower_bound, bound_set

__all__ = [
    "SourceModel",
    "binary_entropy",
    "gaussian_rd",
    "upper_bound_1",
    "upper_bound_2",
    "lower_bound_trivial",
    "MinimaxConfig",
    "improvement_ri",
    "improved_lower_bound",
    "bound_set"
]
