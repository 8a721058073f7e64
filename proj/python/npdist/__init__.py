"""Next-prime distance sequence toolkit (OEIS A013632).

Thin Python surface over the C++ core: a segmented prime sieve, prime-gap
aggregates, the a_n sequence, exact closed-form sum/product identities with
brute-force cross-checks, and asymptotic diagnostic tables.
"""

from ._core import (
    Checkpoint,
    CheckpointError,
    ExactCapError,
    ExponentFit,
    GapAggregate,
    GapSquareReport,
    InsufficientPointsError,
    PrimeEngine,
    RangeError,
    RatioRow,
    SieveConfig,
    a_of,
    accumulate_to,
    gap_at,
    gap_square_exponent,
    gcd_characterization_check,
    geometric_mean_ratio,
    load_checkpoint,
    prod_a_brute_exact,
    prod_a_brute_log,
    prod_a_closed_exact,
    prod_a_closed_log,
    save_checkpoint,
    solution_count,
    stream_a,
    sum_a_brute,
    sum_a_closed,
    table_harmonic,
    table_lemma6,
    table_log_a,
    table_panaitopol,
    table_sum_a,
    verify_identities,
)

__version__ = "0.1.0"

__all__ = [
    "Checkpoint",
    "CheckpointError",
    "ExactCapError",
    "ExponentFit",
    "GapAggregate",
    "GapSquareReport",
    "InsufficientPointsError",
    "PrimeEngine",
    "RangeError",
    "RatioRow",
    "SieveConfig",
    "a_of",
    "accumulate_to",
    "gap_at",
    "gap_square_exponent",
    "gcd_characterization_check",
    "geometric_mean_ratio",
    "load_checkpoint",
    "prod_a_brute_exact",
    "prod_a_brute_log",
    "prod_a_closed_exact",
    "prod_a_closed_log",
    "save_checkpoint",
    "solution_count",
    "stream_a",
    "sum_a_brute",
    "sum_a_closed",
    "table_harmonic",
    "table_lemma6",
    "table_log_a",
    "table_panaitopol",
    "table_sum_a",
    "verify_identities",
]
