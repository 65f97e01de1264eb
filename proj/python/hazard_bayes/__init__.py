"""Bayesian dismissal-hazard inference for batting records."""

from ._core import (
    BattingParams,
    Degenerate,
    InvalidInput,
    ParseError,
    SamplerError,
    analyze_player,
    bayes_factor,
    career_summary,
    compare,
    effective_average,
    hazard,
    hierarchical,
    log_likelihood,
    parse_innings,
    predictive_curve,
    score_pmf,
    simulate_career,
    survival,
)

__version__ = "0.1.0"

__all__ = [
    "BattingParams",
    "Degenerate",
    "InvalidInput",
    "ParseError",
    "SamplerError",
    "analyze_player",
    "bayes_factor",
    "career_summary",
    "compare",
    "effective_average",
    "hazard",
    "hierarchical",
    "log_likelihood",
    "parse_innings",
    "predictive_curve",
    "score_pmf",
    "simulate_career",
    "survival",
]
