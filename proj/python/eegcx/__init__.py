"""EEG complexity classification testbed.

Thin wrapper over the C++ core: nonlinear features (Higuchi fractal
dimension, sample entropy), PCA, seven classifiers, stratified k-fold
cross-validation and leakage/optimism audits.
"""

import json as _json

from ._eegcx import (
    ConfigError,
    DataError,
    FeatureMatrix,
    NumericError,
    PcaModel,
    Recording,
    Scaler,
    TrainedModel,
    TrainingError,
    apply_scaler,
    build_feature_matrix,
    compute_auc,
    explained_variance,
    fit_pca,
    fit_scaler,
    gen_fgn,
    gen_logistic_map,
    higuchi_fd,
    leakage_audit_json,
    model_from_json,
    optimism_curve_json,
    project,
    run_cv_json,
    sample_entropy,
    sample_entropy_counts,
    synth_cohort,
    train,
)

__all__ = [
    "ConfigError",
    "DataError",
    "FeatureMatrix",
    "NumericError",
    "PcaModel",
    "Recording",
    "Scaler",
    "TrainedModel",
    "TrainingError",
    "apply_scaler",
    "build_feature_matrix",
    "compute_auc",
    "explained_variance",
    "fit_pca",
    "fit_scaler",
    "gen_fgn",
    "gen_logistic_map",
    "higuchi_fd",
    "leakage_audit",
    "model_from_json",
    "optimism_curve",
    "project",
    "run_cv",
    "sample_entropy",
    "sample_entropy_counts",
    "synth_cohort",
    "train",
]

__version__ = "0.1.0"


def run_cv(features, folds=10, seed=0, mode="proper", group="subject",
           pc_counts=(1, 2, 3, 10), restandardize_pcs=True):
    """Stratified k-fold evaluation; returns the report as a dict."""
    return _json.loads(run_cv_json(features, folds, seed, mode, group,
                                   list(pc_counts), restandardize_pcs))


def leakage_audit(n=34, k=38, seeds=50, folds=10, seed=42):
    """Null-data leakage audit; returns the three-pipeline table as a dict."""
    return _json.loads(leakage_audit_json(n, k, seeds, folds, seed))


def optimism_curve(sizes, ks, seeds=50, folds=10, seed=42):
    """Selection-leak accuracy over (n, k) grids; returns a dict."""
    return _json.loads(optimism_curve_json(list(sizes), list(ks), seeds, folds, seed))
