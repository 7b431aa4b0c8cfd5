import csv
import json
import subprocess
import sys

import jsonschema
import numpy as np
import pytest

from cnmbi import schemas
from cnmbi.cli import main


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture(scope="module")
def blob_csv(tmp_path_factory):
    path = tmp_path_factory.mktemp("cli") / "blobs.csv"
    assert main(["generate", "blobs", "--k", "3", "--per-cluster", "100", "--seed", "1", "--out", str(path)]) == 0
    return path


def rows(path):
    with open(path) as fh:
        return list(csv.reader(fh))


def test_estimate_three_blobs(capsys, blob_csv, tmp_path):
    out_json = tmp_path / "r.json"
    code, out, _ = run(capsys, "estimate", "--input", blob_csv, "--label-col", "label", "--out", out_json)
    assert code == 0 and "K* = 3" in out
    doc = json.loads(out_json.read_text())
    jsonschema.validate(doc, schemas.SWEEP_REPORT)
    manifest = json.loads((tmp_path / "r.json.manifest.json").read_text())
    jsonschema.validate(manifest, schemas.RUN_MANIFEST)
    assert manifest["subcommand"] == "estimate" and len(manifest["input_sha256"]) == 64


def test_invalid_k_range(capsys, blob_csv):
    code, _, err = run(capsys, "estimate", "--input", blob_csv, "--label-col", "label", "--k-min", 5, "--k-max", 3)
    assert code == 1 and "k range" in err


def test_emit_curve(capsys, blob_csv, tmp_path):
    curve = tmp_path / "c.csv"
    code, _, _ = run(capsys, "estimate", "--input", blob_csv, "--label-col", "label",
                     "--k-min", 2, "--k-max", 6, "--emit-curve", curve)
    table = rows(curve)
    assert code == 0 and table[0] == ["k", "loss"] and len(table) - 1 == 5


def test_json_is_reproducible(capsys, blob_csv, tmp_path):
    docs = []
    for name in ("a.json", "b.json"):
        run(capsys, "estimate", "--input", blob_csv, "--label-col", "label", "--k-max", 6, "--out", tmp_path / name)
        doc = json.loads((tmp_path / name).read_text())
        doc.pop("timings")
        docs.append(json.dumps(doc, sort_keys=True))
    assert docs[0] == docs[1]


def test_trials(capsys, blob_csv, tmp_path):
    out_json = tmp_path / "t.json"
    code, out, _ = run(capsys, "trials", "--input", blob_csv, "--label-col", "label",
                       "--k-max", 5, "--trials", 1, "--out", out_json)
    assert code == 0
    assert "ACC = 0" in out or "ACC = 1" in out
    jsonschema.validate(json.loads(out_json.read_text()), schemas.TRIALS_REPORT)


def test_trials_without_labels(capsys, blob_csv):
    code, out, _ = run(capsys, "trials", "--input", blob_csv, "--k-max", 4, "--trials", 2)
    # the label column is read as a feature here; only the contract matters
    assert code == 0 and "NC = " in out and "ACC = unavailable" in out


@pytest.mark.slow
def test_trials_count_five(capsys, tmp_path):
    path = tmp_path / "c5.csv"
    run(capsys, "generate", "scenario", "--family", "count", "--level", 5, "--seed", 0, "--out", path)
    code, out, _ = run(capsys, "trials", "--input", path, "--label-col", "label", "--trials", 20)
    assert code == 0 and "NC = 5" in out


@pytest.fixture
def outlier_csv(tmp_path):
    pts = [[0, 0], [1, 0], [-1, 0], [0, 1], [0, -1], [30, 30]]
    path = tmp_path / "o.csv"
    path.write_text("".join(f"{x},{y}\n" for x, y in pts))
    return path


def test_boundary_top(capsys, outlier_csv):
    code, out, _ = run(capsys, "boundary", "--input", outlier_csv, "--top", 0)
    assert code == 0 and out.splitlines() == ["original_index,phi"]
    code, out, _ = run(capsys, "boundary", "--input", outlier_csv, "--top", 1, "--dc-percentile", 0.5)
    assert out.splitlines()[1].split(",")[0] == "5"


def test_boundary_full_export(capsys, outlier_csv, tmp_path):
    out_csv = tmp_path / "phi.csv"
    code, _, _ = run(capsys, "boundary", "--input", outlier_csv, "--out", out_csv)
    table = rows(out_csv)
    assert code == 0 and table[0] == ["original_index", "phi", "neighbor_count", "removed"]
    assert len(table) - 1 == 6
    code, out, _ = run(capsys, "boundary", "--input", outlier_csv)
    assert len(out.splitlines()) == 7


def test_generate_counts_and_noise(capsys, tmp_path):
    a = tmp_path / "a.csv"
    run(capsys, "generate", "blobs", "--k", 3, "--per-cluster", 50, "--out", a)
    assert len(rows(a)) - 1 == 150
    noisy = tmp_path / "n.csv"
    run(capsys, "generate", "scenario", "--family", "noise", "--level", 30, "--seed", 2, "--out", noisy)
    labels = np.array([r[-1] for r in rows(noisy)[1:]], dtype=int)
    assert np.mean(labels == -1) == pytest.approx(0.3, abs=0.01)


def test_generate_deterministic(capsys, tmp_path):
    for name in ("x.csv", "y.csv"):
        run(capsys, "generate", "scenario", "--family", "density", "--level", 2, "--seed", 4, "--out", tmp_path / name)
    assert (tmp_path / "x.csv").read_bytes() == (tmp_path / "y.csv").read_bytes()


def test_generate_to_stdout(capsys):
    code, out, _ = run(capsys, "generate", "blobs", "--k", 2, "--per-cluster", 3)
    assert code == 0 and len(out.splitlines()) == 7


def test_generate_scenario_needs_level(capsys):
    code, _, err = run(capsys, "generate", "scenario", "--family", "count")
    assert code == 1 and "--level" in err


def test_degenerate_exit_code(capsys, tmp_path):
    path = tmp_path / "same.csv"
    path.write_text("1,1\n" * 6)
    code, _, err = run(capsys, "estimate", "--input", path)
    assert code == 2 and "degenerate" in err


def test_parse_error_exit_code(capsys, tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("1,2\n3,abc\n")
    code, _, err = run(capsys, "estimate", "--input", path)
    assert code == 1 and "line 2" in err


def test_bench_small(capsys, tmp_path):
    out_json = tmp_path / "b.json"
    code, out, _ = run(capsys, "bench", "--trials", 1, "--families", "count", "--restarts", 2, "--out", out_json)
    doc = json.loads(out_json.read_text())
    jsonschema.validate(doc, schemas.BENCH_REPORT)
    assert code == 0 and len(doc["rows"]) == 4 and "count-5" in out


def test_module_entry_point(blob_csv):
    proc = subprocess.run([sys.executable, "-m", "cnmbi.cli", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0 and "0.1.0" in proc.stdout
