"""Leximax cohort selection: finite-set approximation checkers, staged LPs with lazy
constraint generation, dependent rounding and sampling, and brute-force integer oracles."""

from .errors import (
    CardinalityError,
    DimensionError,
    DocumentError,
    DuplicateIdError,
    InfeasibleStageError,
    LeximaxError,
    MalformedProblemError,
    NumericalError,
    RangeError,
    SchemaError,
    SizeLimitError,
    ValidationError,
)
from .finite_approx import (
    NoiseMatrix,
    RecursiveChain,
    SlackVector,
    exact_leximax_set,
    greedy_slack,
    is_elementwise_approx,
    is_function_slack_significant,
    is_recursive_approx,
    is_sig_tradeoff,
    is_tradeoff_approx,
    perturb,
    recursive_chain,
    significant_set,
)
from .integer_oracle import (
    hitting_set_to_instance,
    integer_leximax_bruteforce,
    integer_maxmin_bruteforce,
    min_hitting_set_size,
    min_k_with_full_cover,
)
from .leximax_lp import (
    GammaVector,
    LeximaxResult,
    approx_leximax_marginals,
    full_enumeration_reference,
    leximax_marginals,
    significant_leximax_marginals,
)
from .lp_core import BoundedSimplex, LpProblem, LpRow, LpSolution, solve
from .model import (
    FiniteInstance,
    Instance,
    MarginalVector,
    Order,
    SortedUtilityVector,
    group_utilities,
    group_utility,
    lex_compare,
    sorted_utilities,
)
from .rounding import Cohort, dependent_round, dependent_round_many
from .sampling import chernoff_bound, concentration_report, sample_cohort, sample_cohorts
from .separation import SeparationResult, separate

__version__ = "0.1.0"
