"""Radiation-response (SF2) prediction from transcriptome and proteome data."""

from ._radsens import (  # noqa: F401
    Error,
    ExpressionMatrix,
    IoError,
    ParseError,
    ValidationError,
    cross_validate,
    fit_with_support,
    lasso_fit,
    lq_fit,
    oracle_lasso,
    pearson,
    r_squared,
    read_expression_matrix,
    rmse,
    run_cli,
    select_features,
    svr_train,
    synth,
    vif,
    zscore,
)

__all__ = [name for name in dir() if not name.startswith("_")]
