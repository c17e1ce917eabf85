"""Rectangular lattice sums S0(lam, s) and the objects derived from them."""

from .types import DEFAULT_CONFIG, EvalConfig, LatticeShape, SumValue, as_shape
from .kober import macdonald_sum, s0, s0_tilde, s0_tilde_value, t_minus, t_plus
from .reference import factorized_reference, prefactor, prefactor_zeros
from .direct import direct_sum, trig_sum_c
from .expansion import expansion_eval, expansion_residual_extended, s2m_coefficient, t_plus_expansion, t_plus_split
from .identities import Residual, identity_residuals

__all__ = [
    "DEFAULT_CONFIG",
    "EvalConfig",
    "LatticeShape",
    "SumValue",
    "as_shape",
    "macdonald_sum",
    "s0",
    "s0_tilde",
    "s0_tilde_value",
    "t_minus",
    "t_plus",
    "factorized_reference",
    "prefactor",
    "prefactor_zeros",
    "direct_sum",
    "trig_sum_c",
    "expansion_eval",
    "expansion_residual_extended",
    "s2m_coefficient",
    "t_plus_expansion",
    "t_plus_split",
    "Residual",
    "identity_residuals",
]
