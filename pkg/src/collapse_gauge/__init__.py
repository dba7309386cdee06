"""Detectability of wave-function collapse by yes-no experiments."""

from .core import (
    CollapseParams,
    DensityMatrix,
    DimensionMismatch,
    Effect,
    HermitianOperator,
    PureState,
    SignedSpectrum,
    ValidationError,
    blind_guess_effect,
    blind_guess_reliability,
    collapse_hypotheses,
    collapse_indicator_operator,
    diag_part,
    discrimination_operator,
    discrimination_reliability,
    helstrom_optimal,
    helstrom_upper_bound,
    indicator_trace,
    reliability_density,
    reliability_pure,
    simulate_collapse,
)
from .measure import (
    LambdaResult,
    Method,
    chernoff_bound,
    conjecture_bound,
    good_p_threshold,
    lambda_p,
    markov_bound,
    measure_positive_form,
    single_negative_regime,
    uniform_projector_measure,
)
from .montecarlo import EstimateWithCI, estimate_lambda, estimate_positive_form, estimate_reliability
from .search import SearchReport, Strategy, maximize_lambda, p_sweep, uniform_projector_effect

__version__ = "0.1.0"
