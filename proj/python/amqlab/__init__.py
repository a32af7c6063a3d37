"""Exact and simulated false-positive analysis of approximate membership
query structures (Bloom, counting Bloom, quotient and blocked filters).

Exact probabilities are returned as :class:`fractions.Fraction`.
"""

from ._core import (
    CapacityExceeded,
    CounterSaturation,
    EnumerationTooLarge,
    Filter,
    FormatError,
    InfeasibleExact,
    UnderflowRemoval,
    analytic_false_positive,
    bloom_bit_set_prob,
    bloom_classic_bound,
    bloom_false_positive,
    bloom_false_positive_float,
    check_no_false_negatives,
    estimate_fp,
    oracle_false_positive,
    quotient_false_positive,
    run_cli,
    stirling2,
    stirling2_recurrence,
    wilson_interval,
)

STRUCTURES = (
    "bloom",
    "counting",
    "quotient",
    "blocked-bloom",
    "blocked-counting",
    "blocked-quotient",
)

__all__ = [
    "STRUCTURES",
    "CapacityExceeded",
    "CounterSaturation",
    "EnumerationTooLarge",
    "Filter",
    "FormatError",
    "InfeasibleExact",
    "UnderflowRemoval",
    "analytic_false_positive",
    "bloom_bit_set_prob",
    "bloom_classic_bound",
    "bloom_false_positive",
    "bloom_false_positive_float",
    "check_no_false_negatives",
    "estimate_fp",
    "oracle_false_positive",
    "quotient_false_positive",
    "run_cli",
    "stirling2",
    "stirling2_recurrence",
    "wilson_interval",
]
