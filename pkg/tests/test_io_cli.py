"""Edge-list parsing, stable JSON, and the four CLI subcommands."""

import json
import logging

import numpy as np
import pytest

from netscore import (ScoreKind, ValidationError, dumps_stable, load_manifest,
                      parse_edge_list, run_cli, serialize_edge_list)
from netscore.io_cli import _cell_mask
from conftest import random_weighted


def write(path, text):
    path.write_text(text)
    return str(path)


@pytest.fixture
def fan_files(tmp_path):
    """Fan benchmark and estimate edge lists on disk, p = 5."""
    hub, mids, sink = "HUB", ["M1", "M2", "M3"], "SINK"
    bench_rows = [f"{hub}\t{m}\t1" for m in mids] + [f"{m}\t{sink}\t1" for m in mids]
    est_rows = bench_rows + [f"{sink}\t{hub}\t1"]
    bench = write(tmp_path / "bench.tsv", "".join(r + "\n" for r in bench_rows))
    est = write(tmp_path / "est.tsv", "".join(r.replace("\t1", "\t1.0") + "\n"
                                              for r in est_rows))
    return est, bench


def test_parse_benchmark_with_explicit_zero(tmp_path):
    path = write(tmp_path / "b.tsv", "G1 G2 1\nG2 G1 0\n")
    parsed = parse_edge_list(path, "benchmark")
    assert parsed.ids == ("G1", "G2")
    assert parsed.network.edge_count == 1
    assert parsed.network.adj[0, 1] == 1.0
    assert parsed.network.adj[1, 0] == 0.0
    assert parsed.listed[0, 1] and parsed.listed[1, 0]


def test_parse_estimate_normalizes_by_max(tmp_path):
    path = write(tmp_path / "e.tsv", "A B 2.0\nB C 4.0\n")
    parsed = parse_edge_list(path, "estimate")
    assert parsed.ids == ("A", "B", "C")
    assert parsed.network.w[0, 1] == 0.5
    assert parsed.network.w[1, 2] == 1.0


def test_parse_comments_blanks_and_self_rows(tmp_path, caplog):
    text = "# header comment\n\nA B 0.9  # trailing\nA A 1.0\n"
    path = write(tmp_path / "e.tsv", text)
    with caplog.at_level(logging.WARNING, logger="netscore.io_cli"):
        parsed = parse_edge_list(path, "estimate")
    assert parsed.self_rows_dropped == 1
    assert parsed.ids == ("A", "B")
    assert any("self-edge" in rec.message for rec in caplog.records)


def test_parse_foreign_rows_against_fixed_universe(tmp_path):
    path = write(tmp_path / "e.tsv", "A B 0.5\nA C 0.9\nD B 0.2\n")
    parsed = parse_edge_list(path, "estimate", vertices=("A", "B"))
    assert parsed.foreign_rows_dropped == 2
    assert parsed.ids == ("A", "B")
    assert parsed.network.w[0, 1] == 0.5


def test_parse_errors_carry_line_numbers(tmp_path):
    bad_fields = write(tmp_path / "a.tsv", "A B 1\nA B\n")
    with pytest.raises(ValidationError, match=r"a\.tsv:2: expected 3"):
        parse_edge_list(bad_fields, "estimate")

    bad_value = write(tmp_path / "b.tsv", "A B x\n")
    with pytest.raises(ValidationError, match=r"b\.tsv:1: value 'x'"):
        parse_edge_list(bad_value, "estimate")

    non_finite = write(tmp_path / "c.tsv", "A B inf\n")
    with pytest.raises(ValidationError, match=r"c\.tsv:1: value must be finite"):
        parse_edge_list(non_finite, "estimate")

    bad_bench = write(tmp_path / "d.tsv", "A B 0.5\n")
    with pytest.raises(ValidationError, match="benchmark value must be 0 or 1"):
        parse_edge_list(bad_bench, "benchmark")

    negative = write(tmp_path / "e.tsv", "A B -0.2\n")
    with pytest.raises(ValidationError, match="must be >= 0"):
        parse_edge_list(negative, "estimate")

    dup = write(tmp_path / "f.tsv", "A B 0.5\nB A 0.1\nA B 0.7\n")
    with pytest.raises(ValidationError, match=r"f\.tsv:3: duplicate edge A -> B.*line 1"):
        parse_edge_list(dup, "estimate")

    empty = write(tmp_path / "g.tsv", "# nothing\n")
    with pytest.raises(ValidationError, match="no usable rows"):
        parse_edge_list(empty, "estimate")

    with pytest.raises(ValidationError, match="cannot read"):
        parse_edge_list(tmp_path / "missing.tsv", "estimate")

    with pytest.raises(ValidationError, match="role"):
        parse_edge_list(empty, "labels")


def test_estimate_round_trip_is_bitwise(tmp_path, rng):
    w = random_weighted(rng, 6)
    ids = [f"V{i}" for i in range(6)]
    lines = [f"{ids[i]}\t{ids[j]}\t{float(w[i, j])!r}"
             for i, j in zip(*np.nonzero(w))]
    path = write(tmp_path / "e.tsv", "".join(l + "\n" for l in lines))
    first = parse_edge_list(path, "estimate")
    # the universe is encounter order, so pin it for the second read
    again = parse_edge_list(write(tmp_path / "e2.tsv", serialize_edge_list(first)),
                            "estimate", vertices=first.ids)
    assert first.ids == again.ids
    assert np.array_equal(first.network.w, again.network.w)
    assert np.array_equal(first.listed, again.listed)


def test_benchmark_round_trip_keeps_zero_rows(tmp_path):
    path = write(tmp_path / "b.tsv", "G1 G2 1\nG2 G1 0\nG1 G3 1\n")
    first = parse_edge_list(path, "benchmark")
    text = serialize_edge_list(first)
    assert "G2\tG1\t0" in text.splitlines()
    again = parse_edge_list(write(tmp_path / "b2.tsv", text), "benchmark")
    assert first.ids == again.ids
    assert np.array_equal(first.network.adj, again.network.adj)
    assert np.array_equal(first.listed, again.listed)


def test_dumps_stable_formatting():
    doc = {"b": 1, "a": None, "flag": True, "x": 0.1 + 0.2,
           "items": [1.5, "two"], "empty": {}, "none_list": []}
    text = dumps_stable(doc)
    assert text == dumps_stable(doc)
    assert json.loads(text) == {"b": 1, "a": None, "flag": True, "x": 0.3,
                                "items": [1.5, "two"], "empty": {}, "none_list": []}
    # insertion order survives, keys are never sorted
    assert text.index('"b"') < text.index('"a"') < text.index('"flag"')
    assert '"x": 0.3\n' in text or '"x": 0.3,' in text
    assert text.endswith("\n")


def test_dumps_stable_rejects_bad_payloads():
    with pytest.raises(ValidationError):
        dumps_stable({"v": float("nan")})
    with pytest.raises(TypeError):
        dumps_stable({"v": {1: 2}})
    with pytest.raises(TypeError):
        dumps_stable({"v": object()})


def test_dumps_stable_numpy_scalars():
    text = dumps_stable({"i": np.int64(4), "f": np.float64(0.25),
                         "t": np.bool_(True)})
    assert json.loads(text) == {"i": 4, "f": 0.25, "t": True}


def test_cell_mask_mss2_keeps_diagonal(tmp_path):
    path = write(tmp_path / "b.tsv", "A B 1\nB C 0\n")
    bench = parse_edge_list(path, "benchmark")
    assert _cell_mask(bench, ScoreKind.LOCAL, "negative") is None
    local_mask = _cell_mask(bench, ScoreKind.LOCAL, "ignore")
    assert local_mask.sum() == 2
    mss2_mask = _cell_mask(bench, ScoreKind.MSS2, "ignore")
    assert mss2_mask.sum() == 5
    assert mss2_mask.diagonal().all()


def test_cli_score_perfect_estimate(tmp_path, capsys):
    bench = write(tmp_path / "b.tsv", "A B 1\nB C 1\n")
    est = write(tmp_path / "e.tsv", "A B 1.0\nB C 1.0\n")
    code = run_cli(["score", "--estimate", est, "--benchmark", bench,
                    "--kind", "local"])
    assert code == 0
    out = capsys.readouterr().out
    doc = json.loads(out)
    assert doc["vertices"] == 3
    assert doc["benchmark_edges"] == 2
    assert doc["scores"]["local"]["auroc"] == 1.0
    assert doc["scores"]["local"]["aupr"] == pytest.approx(1.0, abs=1e-9)
    assert doc["scores"]["local"]["diagnostics"]["auroc_degenerate"] is None
    assert out.startswith('{\n  "estimate":')


def test_cli_score_all_kinds_to_file(tmp_path, fan_files):
    est, bench = fan_files
    out_path = tmp_path / "report.json"
    code = run_cli(["score", "--estimate", est, "--benchmark", bench,
                    "--out", str(out_path)])
    assert code == 0
    doc = json.loads(out_path.read_text())
    assert set(doc["scores"]) == {"local", "mss1", "mss2"}
    assert doc["scores"]["mss1"]["auroc"] == 0.5
    assert doc["scores"]["mss2"]["diagnostics"]["effects_iterations"] > 0
    assert doc["dropped_rows"] == {"estimate_self_rows": 0,
                                   "estimate_foreign_rows": 0,
                                   "benchmark_self_rows": 0}


def test_cli_unknowns_mask_changes_local_score(tmp_path, capsys):
    bench = write(tmp_path / "b.tsv", "A B 1\nB C 0\n")
    est = write(tmp_path / "e.tsv", "C A 0.95\nA B 0.9\nB C 0.1\n")

    def local_auroc(mode):
        code = run_cli(["score", "--estimate", est, "--benchmark", bench,
                        "--kind", "local", "--unknowns", mode])
        assert code == 0
        return json.loads(capsys.readouterr().out)["scores"]["local"]["auroc"]

    assert local_auroc("negative") == 0.8
    assert local_auroc("ignore") == 1.0


def test_cli_pvalue_roundtrip(tmp_path, fan_files, capsys):
    est, bench = fan_files
    code = run_cli(["pvalue", "--estimate", est, "--benchmark", bench,
                    "--kind", "local", "--stat", "auroc",
                    "--mc-its", "60", "--seed", "7"])
    assert code == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["kind"] == "local"
    assert doc["statistic"] == "auroc"
    assert doc["n_samples"] == 60
    assert doc["seed"] == 7
    assert doc["estimator"] == "plain"
    assert 0.0 <= doc["p_value"] <= 1.0


def test_cli_pvalue_argument_errors(fan_files, capsys):
    est, bench = fan_files
    code = run_cli(["pvalue", "--estimate", est, "--benchmark", bench,
                    "--kind", "local", "--stat", "auroc", "--mc-its", "0"])
    assert code == 2
    err = json.loads(capsys.readouterr().err)
    assert err["error"] == "ValidationError"
    assert err["message"] == "mc-its must be >= 1"
    assert err["exit_code"] == 2


def test_cli_pvalue_degenerate_statistic_exit(tmp_path, capsys):
    ring = "\n".join(f"V{i} V{(i + 1) % 4} 1" for i in range(4)) + "\n"
    rev = "\n".join(f"V{(i + 1) % 4} V{i} 1.0" for i in range(4)) + "\n"
    bench = write(tmp_path / "ring.tsv", ring)
    est = write(tmp_path / "rev.tsv", rev)
    code = run_cli(["pvalue", "--estimate", est, "--benchmark", bench,
                    "--kind", "mss1", "--stat", "auroc", "--mc-its", "5"])
    assert code == 3
    err = json.loads(capsys.readouterr().err)
    assert err["error"] == "DegenerateClassError"
    assert "negative" in err["message"]


def test_cli_missing_file_is_validation_error(tmp_path, capsys):
    code = run_cli(["score", "--estimate", str(tmp_path / "nope.tsv"),
                    "--benchmark", str(tmp_path / "nope2.tsv")])
    assert code == 2
    err = json.loads(capsys.readouterr().err)
    assert err["error"] == "ValidationError"
    assert "cannot read" in err["message"]


def test_cli_bad_effects_tol(fan_files, capsys):
    est, bench = fan_files
    code = run_cli(["score", "--estimate", est, "--benchmark", bench,
                    "--effects-tol", "0"])
    assert code == 2
    assert "effects-tol" in json.loads(capsys.readouterr().err)["message"]


def manifest_for(tmp_path, est, bench):
    doc = {"jobs": [
        {"name": "quick", "estimate_path": est, "benchmark_path": bench,
         "kinds": ["local", "mss1"], "mc_its": 5, "seed": 3},
        {"estimate_path": est, "benchmark_path": bench},
        {"name": "fx", "estimate_path": est, "benchmark_path": bench,
         "kinds": ["mss2"]},
    ]}
    return write(tmp_path / "manifest.json", json.dumps(doc))


def test_load_manifest_defaults(tmp_path, fan_files):
    est, bench = fan_files
    jobs = load_manifest(manifest_for(tmp_path, est, bench))
    assert [j.name for j in jobs] == ["quick", "job001", "fx"]
    assert jobs[0].kinds == (ScoreKind.LOCAL, ScoreKind.MSS1)
    assert jobs[1].kinds == (ScoreKind.LOCAL, ScoreKind.MSS1, ScoreKind.MSS2)
    assert jobs[1].mc_its == 0
    assert jobs[2].seed == 0


def test_load_manifest_rejections(tmp_path, fan_files):
    est, bench = fan_files

    def reject(jobs, match):
        path = write(tmp_path / "bad.json", json.dumps({"jobs": jobs}))
        with pytest.raises(ValidationError, match=match):
            load_manifest(path)

    reject([{"estimate_path": est, "benchmark_path": est}], "must differ")
    reject([{"estimate_path": est, "benchmark_path": bench, "kinds": []}],
           "non-empty")
    reject([{"estimate_path": est, "benchmark_path": bench, "kinds": ["roc"]}],
           "unknown kind")
    reject([{"estimate_path": est, "benchmark_path": bench, "mc_its": -1}],
           "non-negative")
    reject([{"estimate_path": est, "benchmark_path": bench, "mc_its": True}],
           "non-negative")
    reject([{"estimate_path": est, "benchmark_path": bench, "name": "a/b"}],
           "plain file name")
    reject([{"estimate_path": est, "benchmark_path": bench, "name": "x"},
            {"estimate_path": est, "benchmark_path": bench, "name": "x"}],
           "duplicate job name")
    reject([[est, bench]], "must be an object")

    not_obj = write(tmp_path / "notobj.json", json.dumps([1, 2]))
    with pytest.raises(ValidationError, match="'jobs' list"):
        load_manifest(not_obj)
    broken = write(tmp_path / "broken.json", "{nope")
    with pytest.raises(ValidationError, match="invalid JSON"):
        load_manifest(broken)


def test_cli_batch_outputs_and_thread_independence(tmp_path, fan_files, capsys):
    est, bench = fan_files
    manifest = manifest_for(tmp_path, est, bench)

    def run_batch(out_name, threads):
        out_dir = tmp_path / out_name
        argv = ["batch", "--manifest", manifest, "--out-dir", str(out_dir)]
        if threads is not None:
            argv += ["--threads", str(threads)]
        assert run_cli(argv) == 0
        capsys.readouterr()
        return out_dir

    serial = run_batch("serial", None)
    names = sorted(f.name for f in serial.iterdir())
    assert names == ["fx.json", "job001.json", "quick.json", "summary.tsv"]

    summary = (serial / "summary.tsv").read_text().splitlines()
    assert summary[0] == "job\tkind\tauroc\taupr\tp_auroc\tp_aupr"
    assert len(summary) == 1 + 2 + 3 + 1
    quick_rows = [line for line in summary if line.startswith("quick\t")]
    assert all(line.split("\t")[4] != "NA" for line in quick_rows)
    fx_row = next(line for line in summary if line.startswith("fx\t"))
    assert fx_row.split("\t")[4] == "NA"

    quick_doc = json.loads((serial / "quick.json").read_text())
    assert quick_doc["pvalues"]["local"]["auroc"]["n_samples"] == 5
    no_pv = json.loads((serial / "job001.json").read_text())
    assert no_pv["pvalues"] is None

    parallel = run_batch("parallel", 3)
    for name in names:
        assert (serial / name).read_bytes() == (parallel / name).read_bytes()


def test_cli_batch_thread_env(tmp_path, fan_files, capsys, monkeypatch):
    est, bench = fan_files
    manifest = manifest_for(tmp_path, est, bench)
    monkeypatch.setenv("NETSCORE_THREADS", "2")
    assert run_cli(["batch", "--manifest", manifest,
                    "--out-dir", str(tmp_path / "env")]) == 0
    capsys.readouterr()

    monkeypatch.setenv("NETSCORE_THREADS", "many")
    code = run_cli(["batch", "--manifest", manifest,
                    "--out-dir", str(tmp_path / "env2")])
    assert code == 2
    assert "NETSCORE_THREADS" in json.loads(capsys.readouterr().err)["message"]


def test_cli_selftest_passes(capsys):
    assert run_cli(["selftest"]) == 0
    assert "[PASS]" in capsys.readouterr().out
