"""Amplitude-controlled interference of two bosonic Fock sources.

Generalized Hong-Ou-Mandel statistics, parity observables versus
beam-splitter transmittivity, and CHSH violations driven by transmission
coefficients.
"""

__version__ = "0.1.0"

from . import oracle
from .errors import BudgetError, ConsistencyError, DomainError, SizeGuardError
from .fock import (
    FockPair,
    ModeMap,
    OutcomeDistribution,
    Splitter,
    bell_mode_map,
    ghom_mode_map,
    validate_mode_map,
)
from .ghom import (
    amplitude,
    binomial_average_parity,
    binomial_source_parity,
    outcome_distribution,
    parity_average,
    parity_extrema,
    parity_scan,
    sanaka_check,
)
from .bell import (
    BellSettings,
    ChshResult,
    ReducedSettings,
    canonical_settings,
    chsh_q,
    correlator_array,
    joint_distribution,
    joint_probability,
    optimize_chsh,
    parity_correlator,
    parity_correlator_general,
    q_vs_n_curve,
)
