"""Confusion series, ROC/PR curves, and areas under them.

Conventions, fixed once here and shared by every score:

* A confusion series runs from the most conservative prediction to the most
  liberal: the first point is all-negative (tp = fp = 0) and the last is
  all-positive (tp = T, fp = N).  Thresholding is inclusive (weight >= tau).
* Confusion counts may be fractional: when predictions and labels are soft
  matrices in [0, 1], tp = sum(pred * label), fp = sum(pred * (1 - label)),
  and so on, over the included cells.
* ROC curves are the (FPR, TPR) points of the series with corner points
  (0, 0) and (1, 1); area is linear interpolation between plotted points.
* PR curves are (recall, precision) points, precision defined as 0 when
  tp + fp = 0.  The curve is anchored at (0, 0) and terminated at recall 1
  with precision T / (total cells).  Between consecutive confusion points the
  curve is interpolated linearly in (tp, fp) count space (Davis & Goadrich);
  the area integrates precision over recall along that locus by fine uniform
  sub-sampling, which handles fractional counts with the same code path.
  Along a segment leaving the origin the locus precision is the constant
  ray precision tp_b / (tp_b + fp_b).
* Every area uses the same rule: sort the plotted points by x ascending with
  a stable sort (original curve order breaks ties), then apply the trapezium
  rule.  For monotone series this is ordinary linear-interpolation area; for
  non-monotone series (possible with fractional counts) it stays in [0, 1].
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateClassError, ValidationError

DEFAULT_SEGMENT_SAMPLES = 4096


@dataclass(frozen=True)
class ConfusionPoint:
    """Confusion counts at one threshold; counts may be fractional."""

    tp: float
    fp: float
    tn: float
    fn: float
    threshold: float

    @property
    def total(self) -> float:
        return self.tp + self.fp + self.tn + self.fn


@dataclass(frozen=True)
class Curve:
    """Plotted curve points; kind is "roc" or "pr"."""

    kind: str
    points: np.ndarray


def _included_mask(p: int, include_diag: bool, mask: np.ndarray | None) -> np.ndarray:
    inc = np.ones((p, p), dtype=bool)
    if not include_diag:
        inc &= ~np.eye(p, dtype=bool)
    if mask is not None:
        mask = np.asarray(mask, dtype=bool)
        if mask.shape != (p, p):
            raise ValidationError("cell mask shape does not match the matrices")
        inc &= mask
    return inc


def confusion_series_binary(weights: np.ndarray, labels: np.ndarray,
                            include_diag: bool = False,
                            mask: np.ndarray | None = None) -> list[ConfusionPoint]:
    """Series over every distinct positive weight value, plus both endpoints.

    ``weights`` ranks the cells; ``labels`` is the 0/1 truth.  One point per
    distinct positive weight value, descending, bracketed by the all-negative
    endpoint (threshold above the maximum) and the all-positive endpoint
    (threshold 0, every included cell predicted).
    """
    w = np.asarray(weights, dtype=float)
    lab = np.asarray(labels, dtype=float)
    if w.shape != lab.shape or w.ndim != 2 or w.shape[0] != w.shape[1]:
        raise ValidationError("weights and labels must be equal square matrices")
    inc = _included_mask(w.shape[0], include_diag, mask)
    vals = w[inc]
    labs = lab[inc]
    t = float(labs.sum())
    n = float(labs.size - labs.sum())
    order = np.argsort(-vals, kind="stable")
    v_sorted = vals[order]
    cum_tp = np.cumsum(labs[order])
    series = [ConfusionPoint(0.0, 0.0, n, t, np.inf)]
    pos = v_sorted > 0
    npos = int(pos.sum())
    if npos:
        vp = v_sorted[:npos]
        # last index of each run of equal values
        last = np.flatnonzero(np.diff(vp) != 0)
        ends = np.concatenate([last, [npos - 1]])
        for k in ends:
            tp = float(cum_tp[k])
            fp = float(k + 1 - cum_tp[k])
            series.append(ConfusionPoint(tp, fp, n - fp, t - tp, float(vp[k])))
    series.append(ConfusionPoint(t, n, 0.0, 0.0, 0.0))
    return series


def confusion_series_effects(est_effects: list[np.ndarray], bench_effects: np.ndarray,
                             thresholds: list[float] | None = None,
                             mask: np.ndarray | None = None) -> list[ConfusionPoint]:
    """Fractional confusion points comparing soft predictions to soft labels.

    Each entry of ``est_effects`` is a p x p matrix in [0, 1] (the prediction
    at one threshold); ``bench_effects`` is the soft label matrix.  Diagonal
    cells are included.
    """
    e = np.asarray(bench_effects, dtype=float)
    p = e.shape[0]
    inc = _included_mask(p, include_diag=True, mask=mask)
    ev = e[inc]
    t = float(ev.sum())
    n = float((1.0 - ev).sum())
    if thresholds is None:
        thresholds = [float(k) for k in range(len(est_effects))]
    if len(thresholds) != len(est_effects):
        raise ValidationError("thresholds and effects sequences differ in length")
    series = []
    for tau, eh in zip(thresholds, est_effects):
        hv = np.asarray(eh, dtype=float)[inc]
        tp = float((hv * ev).sum())
        fp = float((hv * (1.0 - ev)).sum())
        series.append(ConfusionPoint(tp, fp, n - fp, t - tp, float(tau)))
    return series


def _series_totals(series: list[ConfusionPoint]) -> tuple[float, float]:
    first = series[0]
    t = first.tp + first.fn
    n = first.fp + first.tn
    return float(t), float(n)


def roc_curve(series: list[ConfusionPoint]) -> Curve:
    """(FPR, TPR) per point, with (0, 0) and (1, 1) corners appended."""
    if not series:
        raise ValidationError("empty confusion series")
    t, n = _series_totals(series)
    if t <= 0:
        raise DegenerateClassError("positive")
    if n <= 0:
        raise DegenerateClassError("negative")
    pts = [(0.0, 0.0)]
    for cp in series:
        pts.append((cp.fp / n, cp.tp / t))
    pts.append((1.0, 1.0))
    dedup = [pts[0]]
    for q in pts[1:]:
        if q != dedup[-1]:
            dedup.append(q)
    return Curve("roc", np.array(dedup, dtype=float))


def _sorted_trapezium(x: np.ndarray, y: np.ndarray) -> float:
    """Trapezium rule after a stable ascending sort on x."""
    order = np.argsort(x, kind="stable")
    xs = x[order]
    ys = y[order]
    return float(np.sum((ys[1:] + ys[:-1]) * np.diff(xs)) / 2.0)


def auc_roc(curve: Curve) -> float:
    pts = curve.points
    return _sorted_trapezium(pts[:, 0], pts[:, 1])


def _augmented_count_points(series: list[ConfusionPoint]) -> tuple[list[tuple[float, float]], float]:
    """(tp, fp) per point with the (0, 0) anchor and all-positive terminal added."""
    if not series:
        raise ValidationError("empty confusion series")
    t, n = _series_totals(series)
    if t <= 0:
        raise DegenerateClassError("positive")
    pts = [(0.0, 0.0)]
    for cp in series:
        q = (float(cp.tp), float(cp.fp))
        if q != pts[-1]:
            pts.append(q)
    if pts[-1] != (t, n):
        pts.append((t, n))
    return pts, t


def pr_curve(series: list[ConfusionPoint]) -> Curve:
    """(recall, precision) at each confusion point, anchored and terminated."""
    pts, t = _augmented_count_points(series)
    out = []
    for tp, fp in pts:
        denom = tp + fp
        prec = tp / denom if denom > 0 else 0.0
        out.append((tp / t, prec))
    return Curve("pr", np.array(out, dtype=float))


def _segment_locus(tp_a: float, fp_a: float, tp_b: float, fp_b: float,
                   t: float, samples: int) -> tuple[np.ndarray, np.ndarray] | None:
    """Sub-sampled (recall, precision) points along one count-space segment."""
    d_tp = tp_b - tp_a
    d_fp = fp_b - fp_a
    if d_tp == 0.0 and d_fp == 0.0:
        return None
    s = np.linspace(0.0, 1.0, samples + 1)
    tp = tp_a + s * d_tp
    fp = fp_a + s * d_fp
    denom = tp + fp
    prec = np.zeros_like(tp)
    np.divide(tp, denom, out=prec, where=denom > 0)
    if denom[0] == 0.0 and (d_tp + d_fp) > 0.0:
        # leaving the origin the locus has constant ray precision; use its limit
        prec[0] = d_tp / (d_tp + d_fp)
    return tp / t, prec


def interpolated_segment_area(tp_a: float, fp_a: float, tp_b: float, fp_b: float,
                              total_positives: float,
                              samples: int = DEFAULT_SEGMENT_SAMPLES) -> float:
    """Area contribution of one interpolated segment, precision over recall."""
    locus = _segment_locus(tp_a, fp_a, tp_b, fp_b, total_positives, samples)
    if locus is None:
        return 0.0
    x, y = locus
    return _sorted_trapezium(x, y)


def auc_pr(series: list[ConfusionPoint],
           samples_per_segment: int = DEFAULT_SEGMENT_SAMPLES) -> float:
    """Area under the interpolated PR curve of a confusion series.

    Sub-samples every count-space segment, pools the locus points, and applies
    the sorted-trapezium rule, so monotone series integrate exactly like the
    closed form and non-monotone series follow the same stable convention.
    """
    if samples_per_segment < 100:
        raise ValidationError("samples_per_segment must be at least 100")
    pts, t = _augmented_count_points(series)
    xs = []
    ys = []
    for a, b in zip(pts[:-1], pts[1:]):
        locus = _segment_locus(a[0], a[1], b[0], b[1], t, samples_per_segment)
        if locus is None:
            continue
        xs.append(locus[0])
        ys.append(locus[1])
    if not xs:
        return 0.0
    return _sorted_trapezium(np.concatenate(xs), np.concatenate(ys))
