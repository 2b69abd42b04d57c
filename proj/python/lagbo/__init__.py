"""Lag-aware LSTM forecasting with Gaussian-process Bayesian optimization."""

from ._core import (
    LagboError,
    __version__,
    adf_test,
    arank,
    average_ranks,
    bo_optimize,
    expected_improvement,
    generate_synthetic,
    holt_winters,
    mae,
    predict_recursive,
    rmse,
    run_experiment,
    run_pipeline,
    seasonal_naive,
    smape,
    stats_only,
    train_lstm,
    two_step,
)

__all__ = [
    "LagboError",
    "__version__",
    "adf_test",
    "arank",
    "average_ranks",
    "bo_optimize",
    "expected_improvement",
    "generate_synthetic",
    "holt_winters",
    "mae",
    "predict_recursive",
    "rmse",
    "run_experiment",
    "run_pipeline",
    "seasonal_naive",
    "smape",
    "stats_only",
    "train_lstm",
    "two_step",
]
