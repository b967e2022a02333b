from .bigraded import (BigradedExpansion, Weights, laplacian, maass_lower, maass_raise,
                       omega, split_parts, y_dy)
from .eigen import (EigenExpansion, alpha_pm, eigenvalue_bookkeeping,
                    eisenstein_constant_term, eisenstein_expansion)
from .qexp import QExpansion, d_power, hecke_tp, q_generator, weakly_holo_basis

__all__ = [
    "BigradedExpansion", "Weights", "laplacian", "maass_lower", "maass_raise", "omega",
    "split_parts", "y_dy", "EigenExpansion", "alpha_pm", "eigenvalue_bookkeeping",
    "eisenstein_constant_term", "eisenstein_expansion",
    "QExpansion", "d_power", "hecke_tp", "q_generator", "weakly_holo_basis",
]
