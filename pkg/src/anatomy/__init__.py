"""Exact enumeration of bad, very bad and type F3 intervals, and the
arithmetic around them: smooth-number counts, factorial kernels, Pell-type
equations and a few analytic probes."""

__version__ = "0.1.0"

from .arith import (
    DomainError,
    Factorization,
    ParitySet,
    PreconditionError,
    factorize,
    factorize_interval,
    largest_prime_factor,
    primes_in_range,
    primes_up_to,
    squarefree_part,
)
from .characters import CharacterSpec, char_sum, characters, exceptional_scan
from .diophantine import (
    HyperbolaQuery,
    count_hyperbola,
    count_powerful_linear,
    f3_from_pell,
    pell_fundamental,
    pell_like_solutions,
)
from .factorial_square import FactorialSquareSolution, enumerate_solutions
from .intervals import (
    IntervalProduct,
    build_factorial_kernels,
    f3_witnesses,
    interval_product,
    is_bad,
    is_very_bad,
)
from .probes import (
    Certified,
    SieveProblem,
    c31_constant,
    erdos_szekeres_constant,
    fracpart_histogram,
    large_sieve_report,
    montgomery_check,
)
from .sets import (
    MembershipRecord,
    SetId,
    cumulative_counts,
    enumerate_b,
    enumerate_b1,
    enumerate_f3,
    enumerate_f31,
    enumerate_set,
    enumerate_vb,
    enumerate_vb1,
)
from .smooth import b1_count_exact, psi, scale_params
