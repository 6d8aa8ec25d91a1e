"""Cost-sensitive multiclass classification with apportioned margins.

Each class j carries a positive priority theta_j; the decision rule is
argmax_j (w_j . x) / theta_j, so the boundary between two classes splits
their joint margin in the ratio theta_i : theta_j instead of evenly. The
package trains that family of models with a Pegasos-style stochastic
subgradient solver (primal or kernelized), ships the usual cost-sensitive
reductions as baselines, and carries the measurement tools (margin
geometry, surrogate checks, cross-validated benchmarks) used to validate
the behavior.
"""

from .baselines import (BaselineModel, pair_index, pair_normal,
                        predict_baseline, train_cscs, train_csova,
                        train_csovo)
from .data import (ParseError, SynthSpec, dumps_libsvm, generate_synthetic,
                   load_dataset, parse_csv, parse_libsvm, standardize)
from .evaluation import (DEFAULT_C_GRID, DEFAULT_GAMMA_GRID, CVResult,
                         EvalReport, GridSearchResult, MethodSpec, Predictor,
                         evaluate, expected_risk, fit, grid_search, kfold_cv,
                         resolve_lambda, stratified_folds)
from .fisher import (FisherCheck, closed_form_minimizer, expected_surrogate,
                     fisher_check, minimize_expected_surrogate)
from .geometry import (MarginReport, NormCheck, PairMargin, bisector,
                       margin_gamma, margin_report, nearest_distance_ratio,
                       pairwise_norm_check, support_plane_distance)
from .kernel import (GramCapExceeded, decision_scores, kernel_cross,
                     kernel_eval, list_support_vectors, predict_kernel,
                     predict_kernel_batch, reconstruct_primal, train_kernel)
from .linear import objective, sgd_step, train_linear
from .losses import (delta_sign_matrix, signed_delta, surrogate_batch,
                     surrogate_loss, true_batch, true_loss)
from .models import (KernelModel, KernelSpec, LabeledDataset, LinearModel,
                     PriorityVector, Scaler, TrainConfig, TrainTrace, augment,
                     predict_linear, scaled_rows)
from .storage import dumps_model, load_model, loads_model, save_model

__version__ = "0.1.0"

__all__ = [
    "BaselineModel", "pair_index", "pair_normal", "predict_baseline",
    "train_cscs", "train_csova", "train_csovo",
    "ParseError", "SynthSpec", "dumps_libsvm", "generate_synthetic",
    "load_dataset", "parse_csv", "parse_libsvm", "standardize",
    "DEFAULT_C_GRID", "DEFAULT_GAMMA_GRID", "CVResult", "EvalReport",
    "GridSearchResult", "MethodSpec", "Predictor", "evaluate",
    "expected_risk", "fit", "grid_search", "kfold_cv", "resolve_lambda",
    "stratified_folds",
    "FisherCheck", "closed_form_minimizer", "expected_surrogate",
    "fisher_check", "minimize_expected_surrogate",
    "MarginReport", "NormCheck", "PairMargin", "bisector", "margin_gamma",
    "margin_report", "nearest_distance_ratio", "pairwise_norm_check",
    "support_plane_distance",
    "GramCapExceeded", "decision_scores", "kernel_cross", "kernel_eval",
    "list_support_vectors", "predict_kernel", "predict_kernel_batch",
    "reconstruct_primal", "train_kernel",
    "objective", "sgd_step", "train_linear",
    "delta_sign_matrix", "signed_delta", "surrogate_batch", "surrogate_loss",
    "true_batch", "true_loss",
    "KernelModel", "KernelSpec", "LabeledDataset", "LinearModel",
    "PriorityVector", "Scaler", "TrainConfig", "TrainTrace", "augment",
    "predict_linear", "scaled_rows",
    "dumps_model", "load_model", "loads_model", "save_model",
    "__version__",
]
