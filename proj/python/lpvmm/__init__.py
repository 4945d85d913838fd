"""Moment-matching model reduction for affine LPV state-space models."""

from ._lpvmm import (
    DimensionError,
    Error,
    Mode,
    Model,
    PartialRealizationReport,
    RankConditionError,
    ReductionResult,
    SizeCapError,
    ValidationError,
    bfr,
    check_partial_realization,
    compare,
    find_isomorphism,
    hankel_rank,
    is_observable,
    is_reachable,
    load_model,
    markov_count,
    minimize,
    reach_basis,
    reduce,
    save_model,
    seven_state_example,
    simulate,
    sub_markov,
    unobs_cobasis,
)

__all__ = [name for name in dir() if not name.startswith("_")]
