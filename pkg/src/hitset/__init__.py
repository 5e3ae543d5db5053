"""Extremal set hitting times for finite Markov chains."""

from .chain import Chain, StateSet, check_irreducible, load_chain, save_chain, stationary_distribution, validate_stochastic
from .constructors import (
    ErrorSet,
    HittableStepSpec,
    LShapedChain,
    dyadic_discretize,
    error_set,
    l_shaped_from_spec,
    l_shaped_t_formula,
    three_state_tight,
    two_state_counterexample,
)
from .extremal import ExtremalWitness, HittingProfile, t_alpha, t_prod, t_profile
from .hitting import d_minus, d_plus, expected_hitting_times, expected_occupation, hitting_distribution
from .mixing import MixingReport, NotReached, cesaro_mixing_time, mixing_time, tv_distance
from .sim import SimEstimate, simulate_hitting, simulate_occupation

__all__ = [
    "Chain", "StateSet", "check_irreducible", "load_chain", "save_chain",
    "stationary_distribution", "validate_stochastic",
    "ErrorSet", "HittableStepSpec", "LShapedChain", "dyadic_discretize", "error_set",
    "l_shaped_from_spec", "l_shaped_t_formula", "three_state_tight", "two_state_counterexample",
    "ExtremalWitness", "HittingProfile", "t_alpha", "t_prod", "t_profile",
    "d_minus", "d_plus", "expected_hitting_times", "expected_occupation", "hitting_distribution",
    "MixingReport", "NotReached", "cesaro_mixing_time", "mixing_time", "tv_distance",
    "SimEstimate", "simulate_hitting", "simulate_occupation",
]
