"""Permutation-null significance and the combined overall score.

The null hypothesis relabels the vertices of the estimate uniformly at
random and rescores against the fixed benchmark, so the null distribution is
specific to the submitted estimate's structure.  The Monte Carlo p-value is
the plain fraction of null samples whose score is >= the observed score
(optionally the (k+1)/(n+1) estimator).

Reproducibility: permutation i of a run is drawn from its own child stream
of the seed, PCG64 seeded with SeedSequence(seed, spawn_key=(i,)), and
permutations use the generator's Fisher-Yates shuffle.  Results therefore
do not depend on evaluation order, and any parallel split over sample
indices reproduces the serial output.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .errors import (DegenerateClassError, DegenerateNullError, NetscoreError,
                     ValidationError)
from .graph_core import VertexPermutation, permute, validate
from .scores import ScoreKind, score

logger = logging.getLogger(__name__)

_STATS = ("auroc", "aupr")


@dataclass(frozen=True)
class PValueReport:
    kind: ScoreKind
    statistic: str
    observed: float
    p_value: float
    n_samples: int
    seed: int
    estimator: str

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "statistic": self.statistic,
            "observed": self.observed,
            "p_value": self.p_value,
            "n_samples": self.n_samples,
            "seed": self.seed,
            "estimator": self.estimator,
        }


@dataclass(frozen=True)
class OverallScore:
    combined_auroc: float
    combined_aupr: float
    overall: float

    def to_dict(self) -> dict:
        return {
            "combined_auroc": self.combined_auroc,
            "combined_aupr": self.combined_aupr,
            "overall": self.overall,
        }


def permutation_for_sample(seed: int, index: int, p: int) -> VertexPermutation:
    """The deterministic permutation used for null sample ``index``."""
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(index,))
    rng = np.random.Generator(np.random.PCG64(ss))
    return VertexPermutation(rng.permutation(p))


def _check_nontrivial_null(est) -> None:
    off = est.w[~np.eye(est.p, dtype=bool)]
    if off.size == 0 or np.all(off == off[0]):
        raise DegenerateNullError(
            "estimate is invariant under vertex relabeling (empty or uniformly "
            "complete), so every null sample scores identically")


def _stat_of(kind: ScoreKind, statistic: str, est, bench, score_kwargs: dict) -> float:
    report = score(kind, est, bench, **score_kwargs)
    value = getattr(report, statistic)
    if value is None:
        which = report.diagnostics.get(f"{statistic}_degenerate", "statistic undefined")
        empty = "positive" if "positive" in which else "negative"
        raise DegenerateClassError(empty, which)
    return value


def null_statistics(kind: ScoreKind | str, statistic: str, est, bench,
                    n: int, seed: int, **score_kwargs) -> np.ndarray:
    """The n null-sample statistics, in sample-index order."""
    kind = ScoreKind(kind)
    if statistic not in _STATS:
        raise ValidationError(f"statistic must be one of {_STATS}, got {statistic!r}")
    if n < 1:
        raise ValidationError("the number of null samples must be >= 1")
    if seed < 0:
        raise ValidationError("seed must be a non-negative integer")
    est, bench = validate(est, bench)
    _check_nontrivial_null(est)
    out = np.empty(n)
    for i in range(n):
        perm = permutation_for_sample(seed, i, est.p)
        out[i] = _stat_of(kind, statistic, permute(est, perm), bench, score_kwargs)
    return out


def mc_pvalue(kind: ScoreKind | str, statistic: str, est, bench, n: int, seed: int,
              corrected: bool = False, **score_kwargs) -> PValueReport:
    """Monte Carlo permutation p-value for one score statistic.

    ``corrected=True`` uses the (k+1)/(n+1) estimator instead of the plain
    fraction k/n.
    """
    kind = ScoreKind(kind)
    est, bench = validate(est, bench)
    observed = _stat_of(kind, statistic, est, bench, score_kwargs)
    null = null_statistics(kind, statistic, est, bench, n, seed, **score_kwargs)
    k = int(np.count_nonzero(null >= observed))
    if corrected:
        p = (k + 1) / (n + 1)
        estimator = "corrected"
    else:
        p = k / n
        estimator = "plain"
    return PValueReport(kind, statistic, float(observed), float(p), n, seed, estimator)


def mc_pvalues_both(kind: ScoreKind | str, est, bench, n: int, seed: int,
                    corrected: bool = False, **score_kwargs) -> dict[str, PValueReport | None]:
    """p-values for AUROC and AUPR sharing one pass of null evaluations.

    A statistic that is undefined for this pair (degenerate class) maps to
    None instead of raising, so batch runs can report partial results.
    """
    kind = ScoreKind(kind)
    if n < 1:
        raise ValidationError("the number of null samples must be >= 1")
    if seed < 0:
        raise ValidationError("seed must be a non-negative integer")
    est, bench = validate(est, bench)
    _check_nontrivial_null(est)
    observed = score(kind, est, bench, **score_kwargs)
    live = [s for s in _STATS if getattr(observed, s) is not None]
    counts = {s: 0 for s in live}
    for i in range(n):
        perm = permutation_for_sample(seed, i, est.p)
        sample = score(kind, permute(est, perm), bench, **score_kwargs)
        for s in live:
            value = getattr(sample, s)
            if value is None:
                raise NetscoreError(
                    f"null sample {i} lost the {s} statistic the observed pair has")
            if value >= getattr(observed, s):
                counts[s] += 1
    out: dict[str, PValueReport | None] = {}
    for s in _STATS:
        if s not in counts:
            out[s] = None
            continue
        if corrected:
            p, estimator = (counts[s] + 1) / (n + 1), "corrected"
        else:
            p, estimator = counts[s] / n, "plain"
        out[s] = PValueReport(kind, s, float(getattr(observed, s)), float(p),
                              n, seed, estimator)
    return out


def overall_score(pvals_auroc, pvals_aupr, n_samples: int | None = None) -> OverallScore:
    """Combine per-dataset p-values into the headline number.

    Each statistic's p-values are combined as the negative log10 of their
    geometric mean; the overall score is the arithmetic mean of the two
    combined values.  A p-value of exactly 0 (possible with the plain
    estimator) is clamped to 1/n_samples with a warning, since its log
    diverges; passing such a p-value without ``n_samples`` is an error.
    """
    def combined(pvals) -> float:
        vals = [float(v) for v in pvals]
        if not vals:
            raise ValidationError("at least one p-value is required")
        logs = []
        for v in vals:
            if not 0.0 <= v <= 1.0:
                raise ValidationError(f"p-values must lie in [0, 1], got {v}")
            if v == 0.0:
                if n_samples is None:
                    raise ValidationError(
                        "p-value of 0 cannot be log-combined; pass n_samples to clamp")
                v = 1.0 / n_samples
                logger.warning("p-value of 0 clamped to 1/%d before log-combining",
                               n_samples)
            logs.append(math.log10(v))
        return -sum(logs) / len(logs)

    ca = combined(pvals_auroc)
    cp = combined(pvals_aupr)
    return OverallScore(ca, cp, (ca + cp) / 2.0)
