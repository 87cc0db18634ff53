"""Geometric crystal structures on cluster tori attached to reduced words.

Exact rational arithmetic throughout; every closed-form action is
cross-checked against an independent matrix realization in SL(r+1), and
tropicalizes to Kashiwara operators on integer points.
"""

from .exact import (
    ChartBoundaryError,
    ClusterCrystalsError,
    DomainError,
    InvalidInputError,
    POSITIVE_RATIONALS,
    Rational,
    TROPICAL_INTEGERS,
    expr_eval,
)
from .cartan import CartanData, build_cartan, cartan_a, check_reduced
from .seeds import Seed, seed_from_word, m_matrix, mutate_seed
from .tori import APoint, XPoint, ensemble_point, mutate_a_point, mutate_x_point
from .crystal_x import act_ex, epsilon_x, gamma_x, phi_x
from .crystal_a import act_ea, act_ea_typeA, epsilon_a, gamma_a
from .tropical import TropPoint, crystal_check, emit_dot, trop_act, trop_mutate, trop_wt_eps_phi

__all__ = [
    "APoint",
    "CartanData",
    "ChartBoundaryError",
    "ClusterCrystalsError",
    "DomainError",
    "InvalidInputError",
    "POSITIVE_RATIONALS",
    "Rational",
    "Seed",
    "TROPICAL_INTEGERS",
    "TropPoint",
    "XPoint",
    "act_ea",
    "act_ea_typeA",
    "act_ex",
    "build_cartan",
    "cartan_a",
    "check_reduced",
    "crystal_check",
    "emit_dot",
    "ensemble_point",
    "epsilon_a",
    "epsilon_x",
    "expr_eval",
    "gamma_a",
    "gamma_x",
    "m_matrix",
    "mutate_a_point",
    "mutate_seed",
    "mutate_x_point",
    "phi_x",
    "seed_from_word",
    "trop_act",
    "trop_mutate",
    "trop_wt_eps_phi",
]

__version__ = "0.1.0"
