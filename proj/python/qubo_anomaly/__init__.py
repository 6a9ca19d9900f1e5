"""QUBO formulation of anomaly detection with simulated-annealing and exact solvers."""

from ._core import (
    CovarianceModel,
    Dataset,
    DetectionResult,
    DetectorConfig,
    Error,
    EvalReport,
    InvalidArgument,
    Qubo,
    SaConfig,
    Solution,
    apply_cardinality_penalty,
    baseline_knn_dist,
    baseline_mahalanobis_topk,
    build_anomaly_qubo,
    detect,
    fit_alpha,
    fit_covariance,
    generate_gaussian,
    load_csv,
    mahalanobis_to_centroid,
    make_dataset,
    pairwise_mahalanobis,
    roc_auc_binary,
    roc_auc_scores,
    solve_exact,
    solve_sa,
)

__all__ = [name for name in dir() if not name.startswith("_")]
