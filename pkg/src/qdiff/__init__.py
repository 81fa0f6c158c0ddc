"""Exact computation with free algebras carrying twisted (q-)derivations."""
from .scalars import QQ, QT, CyclotomicField, q_binomial, q_factorial, q_integer
from .freealg import FreePoly, word_basis
from .qstructure import (ParamSpec, Relation, apply_partial, apply_right_partial, generic_params,
                         param_from_constraints, q_bracket, sigma_powers)
from .constants import (find_constants, ideal_slice, normal_form, quotient_basis, s_gram, t_gram)
from .taylor import solve_gradient, taylor_coefficients, taylor_reconstruct

__all__ = [
    "QQ", "QT", "CyclotomicField", "q_binomial", "q_factorial", "q_integer",
    "FreePoly", "word_basis", "ParamSpec", "Relation", "apply_partial", "apply_right_partial",
    "generic_params", "param_from_constraints", "q_bracket", "sigma_powers",
    "find_constants", "ideal_slice", "normal_form", "quotient_basis", "s_gram", "t_gram",
    "solve_gradient", "taylor_coefficients", "taylor_reconstruct",
]
