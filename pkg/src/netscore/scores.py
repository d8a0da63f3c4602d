"""The three score families: local, mss1 (descendancy), mss2 (effects).

* local compares raw estimate weights to benchmark edges, cell by cell.
* mss1 compares the max-min weight closure of the estimate to benchmark
  reachability, so credit flows along predicted paths.  Thresholds are the
  exact distinct closure values.
* mss2 compares effects matrices: the estimate is thresholded on a grid of
  at most 100 support sizes, each thresholded network is converted to its
  effects matrix, and the (fractional) confusion counts against the
  benchmark effects matrix include the diagonal.

All scores report AUROC and AUPR under the shared curve conventions.  When a
statistic is undefined because one label class is empty (for example a cycle
benchmark where every ordered pair is reachable), the report carries None for
that statistic plus a diagnostic, instead of failing the whole run.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .closure import boolean_closure, weighted_closure
from .curves import (ConfusionPoint, auc_pr, auc_roc, confusion_series_binary,
                     confusion_series_effects, roc_curve)
from .effects import effects_matrix
from .errors import DegenerateClassError, DegenerateEstimateError
from .graph_core import WeightedNetwork, threshold, validate

MSS2_GRID = 100


class ScoreKind(str, enum.Enum):
    LOCAL = "local"
    MSS1 = "mss1"
    MSS2 = "mss2"


@dataclass(frozen=True)
class ScoreReport:
    kind: ScoreKind
    auroc: float | None
    aupr: float | None
    thresholds_used: int
    diagnostics: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "auroc": self.auroc,
            "aupr": self.aupr,
            "thresholds_used": self.thresholds_used,
            "diagnostics": dict(self.diagnostics),
        }


def _auc_pair(series: list[ConfusionPoint], diagnostics: dict,
              samples_per_segment: int | None = None) -> tuple[float | None, float | None]:
    pr_kwargs = {}
    if samples_per_segment is not None:
        pr_kwargs["samples_per_segment"] = samples_per_segment
    try:
        auroc = auc_roc(roc_curve(series))
    except DegenerateClassError as err:
        auroc = None
        diagnostics["auroc_degenerate"] = (
            f"ROC undefined: no {err.empty_class} examples among the scored cells")
    try:
        aupr = auc_pr(series, **pr_kwargs)
    except DegenerateClassError as err:
        aupr = None
        diagnostics["aupr_degenerate"] = (
            f"PR undefined: no {err.empty_class} examples among the scored cells")
    return auroc, aupr


def score_local(est, bench, mask: np.ndarray | None = None,
                samples_per_segment: int | None = None) -> ScoreReport:
    """Cell-wise comparison of estimate weights to benchmark edges."""
    est, bench = validate(est, bench)
    series = confusion_series_binary(est.w, bench.adj, include_diag=False, mask=mask)
    diag: dict = {}
    auroc, aupr = _auc_pair(series, diag, samples_per_segment=samples_per_segment)
    return ScoreReport(ScoreKind.LOCAL, auroc, aupr, max(len(series) - 2, 0), diag)


def score_mss1(est, bench, mask: np.ndarray | None = None,
               samples_per_segment: int | None = None) -> ScoreReport:
    """Closure-vs-reachability comparison at every distinct closure value."""
    est, bench = validate(est, bench)
    tau = weighted_closure(est)
    z = boolean_closure(bench)
    series = confusion_series_binary(tau.tau, z.z.astype(float),
                                     include_diag=False, mask=mask)
    diag: dict = {}
    auroc, aupr = _auc_pair(series, diag, samples_per_segment=samples_per_segment)
    return ScoreReport(ScoreKind.MSS1, auroc, aupr, max(len(series) - 2, 0), diag)


def _grid_thresholds(est: WeightedNetwork) -> list[float]:
    """Distinct weights of the k-th largest nonzero entries, k = round(i*m/100)."""
    w = est.w.copy()
    np.fill_diagonal(w, 0.0)
    vals = w[w > 0]
    m = vals.size
    if m == 0:
        raise DegenerateEstimateError("estimate has no nonzero weights to threshold")
    vals = np.sort(vals)[::-1]
    ks = sorted({int(math.floor(i * m / MSS2_GRID + 0.5)) for i in range(1, MSS2_GRID + 1)} - {0})
    taus = []
    for k in ks:
        v = float(vals[k - 1])
        if not taus or v != taus[-1]:
            taus.append(v)
    return taus  # descending: larger k means smaller weight


def score_mss2(est, bench, tol: float | None = None,
               mask: np.ndarray | None = None,
               samples_per_segment: int | None = None) -> ScoreReport:
    """Effects-matrix comparison over the support-size threshold grid.

    ``tol`` is the power-iteration stopping tolerance (default 0.01 * p).
    The series is prepended with the all-negative point so curves reach (0, 0).
    """
    est, bench = validate(est, bench)
    e_bench = effects_matrix(bench, tol=tol)
    taus = _grid_thresholds(est)
    est_effects = []
    iters = 0
    for tau in taus:
        eh = effects_matrix(threshold(est, tau), tol=tol)
        est_effects.append(eh.e)
        iters += sum(eh.iterations)
    series = confusion_series_effects(est_effects, e_bench.e,
                                      thresholds=taus, mask=mask)
    t = series[0].tp + series[0].fn
    n = series[0].fp + series[0].tn
    series = [ConfusionPoint(0.0, 0.0, n, t, np.inf)] + series
    diag: dict = {"effects_iterations": iters + sum(e_bench.iterations)}
    auroc, aupr = _auc_pair(series, diag, samples_per_segment=samples_per_segment)
    return ScoreReport(ScoreKind.MSS2, auroc, aupr, len(taus), diag)


_SCORERS = {
    ScoreKind.LOCAL: score_local,
    ScoreKind.MSS1: score_mss1,
    ScoreKind.MSS2: score_mss2,
}


def score(kind: ScoreKind | str, est, bench, **kwargs) -> ScoreReport:
    """Dispatch to one of the three scorers by kind."""
    kind = ScoreKind(kind)
    fn = _SCORERS[kind]
    if kind is not ScoreKind.MSS2:
        kwargs.pop("tol", None)
    return fn(est, bench, **kwargs)


def score_all(est, bench, kinds=None, **kwargs) -> list[ScoreReport]:
    if kinds is None:
        kinds = [ScoreKind.LOCAL, ScoreKind.MSS1, ScoreKind.MSS2]
    return [score(k, est, bench, **kwargs) for k in kinds]
