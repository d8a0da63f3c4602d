"""Scoring engine for inferred directed networks.

Compares a weighted estimate against a binary benchmark at three levels:
cell-wise weights (local), max-min path closure against reachability (mss1),
and propagated-effects matrices over a threshold grid (mss2).  Each level
reports AUROC and AUPR; permutation p-values and a combined overall score
quantify how far an estimate sits above relabeling chance.
"""

from .closure import DescendancyLabels, TauMatrix, boolean_closure, weighted_closure
from .curves import (DEFAULT_SEGMENT_SAMPLES, ConfusionPoint, Curve, auc_pr,
                     auc_roc, confusion_series_binary, confusion_series_effects,
                     interpolated_segment_area, pr_curve, roc_curve)
from .effects import (DEFAULT_MAX_ITER, EffectsMatrix, default_tol,
                      effects_matrix, effects_oracle, effects_row,
                      iteration_matrix)
from .errors import (ConvergenceError, DegenerateClassError,
                     DegenerateEstimateError, DegenerateNullError,
                     NetscoreError, ValidationError)
from .graph_core import (UnweightedNetwork, VertexPermutation, WeightedNetwork,
                         as_unweighted, as_weighted, permute, threshold,
                         validate)
from .io_cli import (BatchJob, ParsedEdgeList, dumps_stable, load_manifest,
                     parse_edge_list, run_cli, serialize_edge_list)
from .scores import (MSS2_GRID, ScoreKind, ScoreReport, score, score_all,
                     score_local, score_mss1, score_mss2)
from .selfcheck import (fan_benchmark, fan_estimate, reversed_ring,
                        ring_network, run_selftest)
from .significance import (OverallScore, PValueReport, mc_pvalue,
                           mc_pvalues_both, null_statistics, overall_score,
                           permutation_for_sample)

__version__ = "0.1.0"

__all__ = [
    "BatchJob",
    "ConfusionPoint",
    "ConvergenceError",
    "Curve",
    "DEFAULT_MAX_ITER",
    "DEFAULT_SEGMENT_SAMPLES",
    "DegenerateClassError",
    "DegenerateEstimateError",
    "DegenerateNullError",
    "DescendancyLabels",
    "EffectsMatrix",
    "MSS2_GRID",
    "NetscoreError",
    "OverallScore",
    "PValueReport",
    "ParsedEdgeList",
    "ScoreKind",
    "ScoreReport",
    "TauMatrix",
    "UnweightedNetwork",
    "ValidationError",
    "VertexPermutation",
    "WeightedNetwork",
    "as_unweighted",
    "as_weighted",
    "auc_pr",
    "auc_roc",
    "boolean_closure",
    "confusion_series_binary",
    "confusion_series_effects",
    "default_tol",
    "dumps_stable",
    "effects_matrix",
    "effects_oracle",
    "effects_row",
    "fan_benchmark",
    "fan_estimate",
    "interpolated_segment_area",
    "iteration_matrix",
    "load_manifest",
    "mc_pvalue",
    "mc_pvalues_both",
    "null_statistics",
    "overall_score",
    "parse_edge_list",
    "permutation_for_sample",
    "permute",
    "pr_curve",
    "reversed_ring",
    "ring_network",
    "roc_curve",
    "run_cli",
    "run_selftest",
    "score",
    "score_all",
    "score_local",
    "score_mss1",
    "score_mss2",
    "serialize_edge_list",
    "threshold",
    "validate",
    "weighted_closure",
]
