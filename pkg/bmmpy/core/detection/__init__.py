from bmmpy.core.detection.detector import (
    CorrelationKind,
    HypothesisStats,
    IndexScore,
    ScoreTable,
    chi_mean_tau,
    compute_scores,
    correlation,
    hypothesis_stats,
    log_erf_difference,
    log_likelihood_uniform,
    residual_sparsity,
    score_indices,
    select_top,
)

__all__ = [
    "CorrelationKind",
    "HypothesisStats",
    "IndexScore",
    "ScoreTable",
    "chi_mean_tau",
    "compute_scores",
    "correlation",
    "hypothesis_stats",
    "log_erf_difference",
    "log_likelihood_uniform",
    "residual_sparsity",
    "score_indices",
    "select_top",
]
