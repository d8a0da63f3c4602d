"""Edge-list ingestion, stable report serialization, and the command line.

Edge lists are whitespace-delimited 3-column text (source id, target id,
value), with '#' starting a comment.  The benchmark file defines the vertex
universe in encounter order; estimate rows naming other vertices are dropped
with a reported count, and absent pairs default to weight 0.

Reports are JSON with a fixed key set and all numbers printed as decimal
text with at most 12 significant digits, so reruns and cross-language
consumers can diff them byte for byte.  Batch summaries are TSV.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import json
import logging
import math
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import DegenerateClassError, NetscoreError, ValidationError
from .graph_core import UnweightedNetwork, WeightedNetwork
from .scores import ScoreKind, ScoreReport, score
from .selfcheck import run_selftest
from .significance import mc_pvalue, mc_pvalues_both

logger = logging.getLogger(__name__)

ALL_KINDS = (ScoreKind.LOCAL, ScoreKind.MSS1, ScoreKind.MSS2)


# ---------------------------------------------------------------------------
# edge-list files

@dataclass(frozen=True)
class ParsedEdgeList:
    """A parsed edge-list file plus bookkeeping the reports expose."""

    network: WeightedNetwork | UnweightedNetwork
    ids: tuple[str, ...]
    listed: np.ndarray
    self_rows_dropped: int
    foreign_rows_dropped: int


def _read_rows(path) -> list[tuple[int, str, str, float]]:
    try:
        text = Path(path).read_text()
    except OSError as err:
        raise ValidationError(f"cannot read {path}: {err}") from err
    rows = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        parts = body.split()
        if len(parts) != 3:
            raise ValidationError(
                f"{path}:{lineno}: expected 3 whitespace-separated fields, got {len(parts)}")
        try:
            value = float(parts[2])
        except ValueError as err:
            raise ValidationError(
                f"{path}:{lineno}: value {parts[2]!r} is not a number") from err
        if not math.isfinite(value):
            raise ValidationError(f"{path}:{lineno}: value must be finite")
        rows.append((lineno, parts[0], parts[1], value))
    return rows


def parse_edge_list(path, role: str,
                    vertices: Sequence[str] | None = None) -> ParsedEdgeList:
    """Read one edge-list file as a network.

    ``role`` is "benchmark" (values must be exactly 0 or 1) or "estimate"
    (values are nonnegative weights, normalized by the largest).  When
    ``vertices`` is given it fixes the universe and rows naming any other id
    are dropped; otherwise the universe is the ids of the retained rows in
    encounter order.  Self-edge rows are dropped with a count.  A duplicate
    (source, target) pair is an error.
    """
    if role not in ("estimate", "benchmark"):
        raise ValidationError(f"role must be 'estimate' or 'benchmark', got {role!r}")
    rows = _read_rows(path)
    known = None if vertices is None else set(vertices)
    keep: list[tuple[int, str, str, float]] = []
    self_dropped = 0
    foreign_dropped = 0
    for lineno, s, t, v in rows:
        if s == t:
            self_dropped += 1
            continue
        if known is not None and (s not in known or t not in known):
            foreign_dropped += 1
            continue
        if role == "benchmark":
            if v not in (0.0, 1.0):
                raise ValidationError(
                    f"{path}:{lineno}: benchmark value must be 0 or 1, got {v!r}")
        elif v < 0:
            raise ValidationError(
                f"{path}:{lineno}: estimate weight must be >= 0, got {v!r}")
        keep.append((lineno, s, t, v))
    if vertices is None:
        order: dict[str, int] = {}
        for _, s, t, _ in keep:
            for name in (s, t):
                if name not in order:
                    order[name] = len(order)
        ids = tuple(order)
    else:
        ids = tuple(vertices)
        order = {name: i for i, name in enumerate(ids)}
    if not ids:
        raise ValidationError(f"{path}: no usable rows")
    p = len(ids)
    w = np.zeros((p, p))
    listed = np.zeros((p, p), dtype=bool)
    first_line: dict[tuple[int, int], int] = {}
    for lineno, s, t, v in keep:
        cell = (order[s], order[t])
        if cell in first_line:
            raise ValidationError(
                f"{path}:{lineno}: duplicate edge {s} -> {t}"
                f" (first listed at line {first_line[cell]})")
        first_line[cell] = lineno
        w[cell] = v
        listed[cell] = True
    if self_dropped:
        logger.warning("%s: dropped %d self-edge row(s)", path, self_dropped)
    if foreign_dropped:
        logger.warning("%s: dropped %d row(s) naming vertices outside the benchmark",
                       path, foreign_dropped)
    net = (UnweightedNetwork.from_array(w) if role == "benchmark"
           else WeightedNetwork.from_array(w))
    listed.setflags(write=False)
    return ParsedEdgeList(net, ids, listed, self_dropped, foreign_dropped)


def serialize_edge_list(parsed: ParsedEdgeList) -> str:
    """Inverse of parse_edge_list on the retained, normalized content.

    Estimates emit their nonzero weights with full precision; benchmarks
    emit every explicitly listed pair, keeping 0 rows so the known-pair set
    survives a round trip.  Rows come out in row-major vertex order.
    """
    lines = []
    if isinstance(parsed.network, WeightedNetwork):
        w = parsed.network.w
        for i, j in zip(*np.nonzero(w)):
            lines.append(f"{parsed.ids[i]}\t{parsed.ids[j]}\t{float(w[i, j])!r}")
    else:
        adj = parsed.network.adj
        for i, j in zip(*np.nonzero(parsed.listed)):
            lines.append(f"{parsed.ids[i]}\t{parsed.ids[j]}\t{int(adj[i, j])}")
    return "".join(line + "\n" for line in lines)


# ---------------------------------------------------------------------------
# stable JSON

def _scalar(x) -> str:
    if x is None:
        return "null"
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    v = float(x)
    if not math.isfinite(v):
        raise ValidationError("reports may contain finite numbers only")
    return format(v, ".12g")


def _emit(obj, pad: str, out: list[str]) -> None:
    if isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        inner = pad + "  "
        for i, (key, val) in enumerate(obj.items()):
            if not isinstance(key, str):
                raise TypeError("report keys must be strings")
            out.append(inner + json.dumps(key) + ": ")
            _emit(val, inner, out)
            out.append(",\n" if i < len(obj) - 1 else "\n")
        out.append(pad + "}")
    elif isinstance(obj, (list, tuple)):
        if not obj:
            out.append("[]")
            return
        out.append("[\n")
        inner = pad + "  "
        for i, val in enumerate(obj):
            out.append(inner)
            _emit(val, inner, out)
            out.append(",\n" if i < len(obj) - 1 else "\n")
        out.append(pad + "]")
    elif obj is None or isinstance(obj, (bool, np.bool_, int, float,
                                         np.integer, np.floating)):
        out.append(_scalar(obj))
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__} into a report")


def dumps_stable(obj) -> str:
    """Deterministic JSON text: insertion-ordered keys, 12-digit numbers."""
    out: list[str] = []
    _emit(obj, "", out)
    return "".join(out) + "\n"


def _fmt_cell(x) -> str:
    return "NA" if x is None else _scalar(x)


# ---------------------------------------------------------------------------
# report assembly

def _report_block(r: ScoreReport) -> dict:
    d = r.diagnostics
    return {
        "kind": r.kind.value,
        "auroc": r.auroc,
        "aupr": r.aupr,
        "thresholds_used": r.thresholds_used,
        "diagnostics": {
            "auroc_degenerate": d.get("auroc_degenerate"),
            "aupr_degenerate": d.get("aupr_degenerate"),
            "effects_iterations": d.get("effects_iterations"),
        },
    }


def _dropped_block(est: ParsedEdgeList, bench: ParsedEdgeList) -> dict:
    return {
        "estimate_self_rows": est.self_rows_dropped,
        "estimate_foreign_rows": est.foreign_rows_dropped,
        "benchmark_self_rows": bench.self_rows_dropped,
    }


def _cell_mask(bench: ParsedEdgeList, kind: ScoreKind,
               unknowns: str) -> np.ndarray | None:
    """Cells to score.  None means every cell the kind normally uses."""
    if unknowns == "negative":
        return None
    mask = bench.listed.copy()
    if kind is ScoreKind.MSS2:
        # self-effects are definitional, keep the diagonal scoreable
        mask |= np.eye(len(bench.ids), dtype=bool)
    return mask


def _score_kwargs(kind: ScoreKind, bench: ParsedEdgeList,
                  effects_tol: float | None, unknowns: str) -> dict:
    kwargs: dict = {}
    if effects_tol is not None:
        kwargs["tol"] = effects_tol
    mask = _cell_mask(bench, kind, unknowns)
    if mask is not None:
        kwargs["mask"] = mask
    return kwargs


def _load_pair(estimate_path, benchmark_path) -> tuple[ParsedEdgeList, ParsedEdgeList]:
    bench = parse_edge_list(benchmark_path, "benchmark")
    est = parse_edge_list(estimate_path, "estimate", vertices=bench.ids)
    return est, bench


def _write_or_print(text: str, out_path) -> None:
    if out_path is None:
        sys.stdout.write(text)
        return
    try:
        Path(out_path).write_text(text)
    except OSError as err:
        raise ValidationError(f"cannot write {out_path}: {err}") from err


def _check_effects_tol(value: float | None) -> None:
    if value is not None and not (value > 0):
        raise ValidationError("effects-tol must be > 0")


# ---------------------------------------------------------------------------
# subcommands

def _cmd_score(args) -> int:
    _check_effects_tol(args.effects_tol)
    est, bench = _load_pair(args.estimate, args.benchmark)
    kinds = ALL_KINDS if args.kind == "all" else (ScoreKind(args.kind),)
    blocks = {}
    for kind in kinds:
        kwargs = _score_kwargs(kind, bench, args.effects_tol, args.unknowns)
        blocks[kind.value] = _report_block(score(kind, est.network, bench.network, **kwargs))
    doc = {
        "estimate": str(args.estimate),
        "benchmark": str(args.benchmark),
        "vertices": len(bench.ids),
        "benchmark_edges": bench.network.edge_count,
        "unknowns": args.unknowns,
        "dropped_rows": _dropped_block(est, bench),
        "scores": blocks,
    }
    _write_or_print(dumps_stable(doc), args.out)
    return 0


def _cmd_pvalue(args) -> int:
    _check_effects_tol(args.effects_tol)
    if args.mc_its < 1:
        raise ValidationError("mc-its must be >= 1")
    if args.seed < 0:
        raise ValidationError("seed must be a non-negative integer")
    est, bench = _load_pair(args.estimate, args.benchmark)
    kind = ScoreKind(args.kind)
    kwargs = _score_kwargs(kind, bench, args.effects_tol, args.unknowns)
    report = mc_pvalue(kind, args.stat, est.network, bench.network,
                       n=args.mc_its, seed=args.seed, corrected=args.corrected,
                       **kwargs)
    doc = {
        "estimate": str(args.estimate),
        "benchmark": str(args.benchmark),
        "unknowns": args.unknowns,
    }
    doc.update(report.to_dict())
    _write_or_print(dumps_stable(doc), args.out)
    return 0


@dataclass(frozen=True)
class BatchJob:
    name: str
    estimate_path: str
    benchmark_path: str
    kinds: tuple[ScoreKind, ...]
    mc_its: int
    seed: int


def load_manifest(path) -> list[BatchJob]:
    try:
        raw = json.loads(Path(path).read_text())
    except OSError as err:
        raise ValidationError(f"cannot read {path}: {err}") from err
    except json.JSONDecodeError as err:
        raise ValidationError(f"{path}: invalid JSON: {err}") from err
    if not isinstance(raw, dict) or not isinstance(raw.get("jobs"), list):
        raise ValidationError(f"{path}: manifest must be an object with a 'jobs' list")
    jobs: list[BatchJob] = []
    seen_names: set[str] = set()
    for i, entry in enumerate(raw["jobs"]):
        where = f"{path}: job {i}"
        if not isinstance(entry, dict):
            raise ValidationError(f"{where} must be an object")
        est = entry.get("estimate_path")
        ben = entry.get("benchmark_path")
        if not isinstance(est, str) or not isinstance(ben, str):
            raise ValidationError(f"{where} needs string estimate_path and benchmark_path")
        if est == ben:
            raise ValidationError(f"{where}: estimate_path and benchmark_path must differ")
        kinds_raw = entry.get("kinds", [k.value for k in ALL_KINDS])
        if not isinstance(kinds_raw, list) or not kinds_raw:
            raise ValidationError(f"{where}: kinds must be a non-empty list")
        kinds: list[ScoreKind] = []
        for k in kinds_raw:
            try:
                kind = ScoreKind(k)
            except ValueError as err:
                raise ValidationError(f"{where}: unknown kind {k!r}") from err
            if kind not in kinds:
                kinds.append(kind)
        mc_its = entry.get("mc_its", 0)
        seed = entry.get("seed", 0)
        for label, value in (("mc_its", mc_its), ("seed", seed)):
            if isinstance(value, bool) or not isinstance(value, int) or value < 0:
                raise ValidationError(f"{where}: {label} must be a non-negative integer")
        name = entry.get("name", f"job{i:03d}")
        if (not isinstance(name, str) or not name
                or any(c in name for c in "/\\") or name in (".", "..")):
            raise ValidationError(f"{where}: name must be a plain file name")
        if name in seen_names:
            raise ValidationError(f"{where}: duplicate job name {name!r}")
        seen_names.add(name)
        jobs.append(BatchJob(name, est, ben, tuple(kinds), mc_its, seed))
    return jobs


def _run_job(job: BatchJob, effects_tol: float | None,
             unknowns: str) -> tuple[str, list[list[str]]]:
    """One batch job: returns (report JSON text, summary rows)."""
    est, bench = _load_pair(job.estimate_path, job.benchmark_path)
    scores_block: dict = {}
    pvalues_block: dict = {}
    rows: list[list[str]] = []
    for kind in job.kinds:
        kwargs = _score_kwargs(kind, bench, effects_tol, unknowns)
        report = score(kind, est.network, bench.network, **kwargs)
        scores_block[kind.value] = _report_block(report)
        p_auroc = p_aupr = None
        if job.mc_its > 0:
            both = mc_pvalues_both(kind, est.network, bench.network,
                                   n=job.mc_its, seed=job.seed, **kwargs)
            pvalues_block[kind.value] = {
                stat: (None if both[stat] is None else both[stat].to_dict())
                for stat in ("auroc", "aupr")
            }
            p_auroc = None if both["auroc"] is None else both["auroc"].p_value
            p_aupr = None if both["aupr"] is None else both["aupr"].p_value
        rows.append([job.name, kind.value,
                     _fmt_cell(report.auroc), _fmt_cell(report.aupr),
                     _fmt_cell(p_auroc), _fmt_cell(p_aupr)])
    doc = {
        "job": job.name,
        "estimate": job.estimate_path,
        "benchmark": job.benchmark_path,
        "vertices": len(bench.ids),
        "benchmark_edges": bench.network.edge_count,
        "unknowns": unknowns,
        "mc_its": job.mc_its,
        "seed": job.seed,
        "dropped_rows": _dropped_block(est, bench),
        "scores": scores_block,
        "pvalues": pvalues_block if job.mc_its > 0 else None,
    }
    return dumps_stable(doc), rows


def _cmd_batch(args) -> int:
    _check_effects_tol(args.effects_tol)
    jobs = load_manifest(args.manifest)
    if args.threads is not None:
        threads = args.threads
    else:
        raw = os.environ.get("NETSCORE_THREADS", "1")
        try:
            threads = int(raw)
        except ValueError as err:
            raise ValidationError(
                f"NETSCORE_THREADS must be an integer, got {raw!r}") from err
    if threads < 1:
        raise ValidationError("threads must be >= 1")
    out_dir = Path(args.out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as err:
        raise ValidationError(f"cannot create {out_dir}: {err}") from err

    def run(job: BatchJob):
        return _run_job(job, args.effects_tol, args.unknowns)

    if threads == 1 or len(jobs) <= 1:
        results = [run(job) for job in jobs]
    else:
        with concurrent.futures.ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run, jobs))

    # results are in manifest order, so output bytes do not depend on threads
    summary = ["job\tkind\tauroc\taupr\tp_auroc\tp_aupr"]
    for job, (text, rows) in zip(jobs, results):
        _write_or_print(text, out_dir / f"{job.name}.json")
        summary.extend("\t".join(row) for row in rows)
    _write_or_print("".join(line + "\n" for line in summary), out_dir / "summary.tsv")
    sys.stdout.write(f"wrote {len(jobs)} report(s) and summary.tsv to {out_dir}\n")
    return 0


def _cmd_selftest(args) -> int:
    return 0 if run_selftest(verbose=True) else 1


# ---------------------------------------------------------------------------
# entry points

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="netscore",
        description="Score inferred directed networks against a benchmark.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--estimate", required=True, help="estimate edge-list file")
        p.add_argument("--benchmark", required=True, help="benchmark edge-list file")
        p.add_argument("--effects-tol", type=float, default=None,
                       help="power-iteration tolerance for mss2 (default 0.01 * vertices)")
        p.add_argument("--unknowns", choices=("ignore", "negative"), default="negative",
                       help="treat pairs missing from the benchmark file as "
                            "negatives (default) or leave them unscored")
        p.add_argument("--out", default=None, help="write the JSON report to this file")

    sc = sub.add_parser("score", help="AUROC and AUPR for one estimate")
    add_common(sc)
    sc.add_argument("--kind", choices=("local", "mss1", "mss2", "all"), default="all")

    pv = sub.add_parser("pvalue", help="permutation p-value for one statistic")
    add_common(pv)
    pv.add_argument("--kind", choices=("local", "mss1", "mss2"), required=True)
    pv.add_argument("--stat", choices=("auroc", "aupr"), required=True)
    pv.add_argument("--mc-its", type=int, required=True,
                    help="number of null permutation samples")
    pv.add_argument("--seed", type=int, default=0)
    pv.add_argument("--corrected", action="store_true",
                    help="use the (k+1)/(n+1) estimator")

    bt = sub.add_parser("batch", help="run every job in a manifest")
    bt.add_argument("--manifest", required=True, help="JSON manifest of jobs")
    bt.add_argument("--out-dir", required=True)
    bt.add_argument("--threads", type=int, default=None,
                    help="worker threads (default: NETSCORE_THREADS or 1)")
    bt.add_argument("--effects-tol", type=float, default=None)
    bt.add_argument("--unknowns", choices=("ignore", "negative"), default="negative")

    sub.add_parser("selftest", help="run the built-in construction checks")
    return parser


_HANDLERS = {
    "score": _cmd_score,
    "pvalue": _cmd_pvalue,
    "batch": _cmd_batch,
    "selftest": _cmd_selftest,
}


def _fail(err: BaseException, code: int) -> int:
    sys.stderr.write(dumps_stable({
        "error": type(err).__name__,
        "message": str(err),
        "exit_code": code,
    }))
    return code


def run_cli(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except ValidationError as err:
        return _fail(err, 2)
    except DegenerateClassError as err:
        return _fail(err, 3)
    except NetscoreError as err:
        return _fail(err, 1)
    except OSError as err:
        return _fail(err, 2)
    except Exception as err:
        return _fail(err, 1)


def main() -> None:
    logging.basicConfig(format="%(levelname)s %(name)s: %(message)s")
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
