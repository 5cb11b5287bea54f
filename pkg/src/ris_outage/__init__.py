"""Outage probability of a dual-hop DF relaying network whose source is
assisted by an N-element reflecting surface, under co-channel interference
at the relays and the destination.

Three evaluation routes are provided and cross-checked against each other:
closed-form expressions, their high-SNR limits with diversity/coding-gain
extraction, and a deterministic Monte-Carlo simulator of the full system.
"""

from .analytic import (
    METHOD_ANALYTIC,
    METHOD_ASYMPTOTIC,
    METHOD_MONTE_CARLO,
    OutageNumericsError,
    OutageResult,
    decoding_set_pmf,
    first_hop_outage,
    outage_probability,
    second_hop_conditional_outage,
)
from .asymptotic import (
    AsymptoticFit,
    asym_first_hop_outage,
    asym_outage_case1,
    asym_outage_case2,
    asym_outage_general,
    asym_second_hop_conditional,
    fit_diversity_coding_gain,
)
from .mc import (
    MCEstimate,
    TrialPlan,
    estimate_outage,
    make_plan,
    sample_first_hop_gain,
    simulate_trial,
)
from .model import (
    RateParams,
    SystemConfig,
    db_to_linear,
    derive_rate_params,
    ris_shape_constant,
)
from .specfun import binom, scaled_upper_gamma, upper_gamma_int
from .sweep import (
    ConfigError,
    PRESETS,
    SweepRow,
    SweepSpec,
    emit_csv,
    parse_config,
    run_sweep,
)

__version__ = "0.1.0"

__all__ = [
    "AsymptoticFit",
    "ConfigError",
    "MCEstimate",
    "METHOD_ANALYTIC",
    "METHOD_ASYMPTOTIC",
    "METHOD_MONTE_CARLO",
    "OutageNumericsError",
    "OutageResult",
    "PRESETS",
    "RateParams",
    "SweepRow",
    "SweepSpec",
    "SystemConfig",
    "TrialPlan",
    "asym_first_hop_outage",
    "asym_outage_case1",
    "asym_outage_case2",
    "asym_outage_general",
    "asym_second_hop_conditional",
    "binom",
    "db_to_linear",
    "decoding_set_pmf",
    "derive_rate_params",
    "emit_csv",
    "estimate_outage",
    "first_hop_outage",
    "fit_diversity_coding_gain",
    "make_plan",
    "outage_probability",
    "parse_config",
    "ris_shape_constant",
    "run_sweep",
    "sample_first_hop_gain",
    "scaled_upper_gamma",
    "second_hop_conditional_outage",
    "simulate_trial",
    "upper_gamma_int",
]
