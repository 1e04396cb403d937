"""End-to-end tests of the command-line interface, run in-process.

Success paths must exit 0 and produce the documented artifacts; validation
failures (bad flags, unreadable input, malformed CSV, corrupt models) must
exit 2 with a diagnostic on stderr rather than raising."""

import json
import os

import numpy as np
import pytest

from ordsel.cli import main
from ordsel.features import N_FEATURES, FeatureVector, write_feature_csv
from ordsel.heuristics import CONFIG_NUMBERS
from ordsel.runtimes import RuntimeRow, read_runtime_csv, write_runtime_csv

from conftest import BASIC_TEXT

SPEC = {"count": 10, "seed": 3, "all_timeout_count": 1, "hot_fraction": 0.0}


@pytest.fixture(scope="module")
def basic_path(tmp_path_factory):
    path = tmp_path_factory.mktemp("onts") / "basic.krss"
    path.write_text(BASIC_TEXT)
    return str(path)


@pytest.fixture(scope="module")
def corpus_dir(tmp_path_factory):
    root = tmp_path_factory.mktemp("corpus")
    spec_path = root / "spec.json"
    spec_path.write_text(json.dumps(SPEC))
    out = root / "krss"
    assert main(["gen-corpus", "--spec", str(spec_path), "--out", str(out)]) == 0
    return str(out)


@pytest.fixture(scope="module")
def trained(tmp_path_factory):
    """Hand-built feature/runtime tables plus a model trained on them."""
    root = tmp_path_factory.mktemp("train")
    rng = np.random.default_rng(2)
    feature_rows = []
    runtime_rows = []
    for i in range(8):
        vals = rng.normal(size=N_FEATURES) * 0.01
        vals[0] = float(i)
        oid = f"t{i}"
        feature_rows.append((oid, FeatureVector(tuple(float(v) for v in vals))))
        for c in CONFIG_NUMBERS:
            if i < 4:
                runtime_rows.append(RuntimeRow(oid, c, 10.0, "finished"))
            else:
                runtime_rows.append(RuntimeRow(oid, c, 5000.0, "timeout"))
    features = str(root / "features.csv")
    runtimes = str(root / "runtimes.csv")
    model = str(root / "model.json")
    write_feature_csv(feature_rows, features)
    write_runtime_csv(runtime_rows, runtimes)
    rc = main(
        ["train", "--features", features, "--runtimes", runtimes,
         "--folds", "2", "--quick", "--out", model]
    )
    assert rc == 0
    return {"features": features, "runtimes": runtimes, "model": model}


# -------------------------------------------------------------------- sat


def test_sat_tbox_and_class(basic_path, capsys):
    assert main(["sat", "--ontology", basic_path]) == 0
    out = capsys.readouterr().out.split()
    assert out[0] == "satisfiable" and len(out) == 3
    assert main(["sat", "--ontology", basic_path, "--class", "A", "--config", "Sap"]) == 0
    out = capsys.readouterr().out.split()
    assert out[0] == "satisfiable"
    assert int(out[1]) > 0


def test_sat_numeric_and_unsorted_configs(basic_path, capsys):
    for cfg in ("5", "0", "Ddn"):
        assert main(["sat", "--ontology", basic_path, "--config", cfg]) == 0
        assert capsys.readouterr().out.startswith("satisfiable")


def test_sat_error_paths(basic_path, capsys):
    assert main(["sat", "--ontology", basic_path, "--class", "Nope"]) == 2
    assert "Nope" in capsys.readouterr().err
    assert main(["sat", "--ontology", basic_path, "--config", "Zap"]) == 2
    assert "error:" in capsys.readouterr().err
    assert main(["sat", "--ontology", "/nonexistent.krss"]) == 2
    assert "cannot read" in capsys.readouterr().err


def test_no_subcommand_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2


# ------------------------------------------------------------------ sweep


def test_sweep_csv_shape(basic_path, capsys):
    assert main(["sweep", "--ontology", basic_path]) == 0
    lines = capsys.readouterr().out.strip().split("\n")
    assert lines[0] == "class,outcome,steps"
    assert len(lines) == 6  # four classes + total row
    names = [line.split(",")[0] for line in lines[1:-1]]
    assert names == ["C", "D", "F", "A"]  # declaration order
    total = lines[-1].split(",")
    assert total[0] == "#total" and total[1] == "finished"
    assert int(total[2]) == sum(int(line.split(",")[2]) for line in lines[1:-1])


def test_sweep_to_file(basic_path, tmp_path):
    out = str(tmp_path / "sweep.csv")
    assert main(["sweep", "--ontology", basic_path, "--out", out]) == 0
    assert open(out).read().startswith("class,outcome,steps\n")


# --------------------------------------------------------------- features


def test_features_stdout(basic_path, capsys):
    assert main(["features", "--ontology", basic_path]) == 0
    lines = capsys.readouterr().out.strip().split("\n")
    assert len(lines) == 39
    assert lines[0] == "numNominals,0.0"


def test_features_csv(basic_path, tmp_path):
    out = str(tmp_path / "f.csv")
    assert main(["features", "--ontology", basic_path, "--out", out]) == 0
    lines = open(out).read().strip().split("\n")
    assert len(lines) == 2
    assert lines[1].startswith("basic,")  # id from the file name


# ------------------------------------------------------------- gen-corpus


def test_gen_corpus_writes_files(corpus_dir):
    names = sorted(os.listdir(corpus_dir))
    assert names == [f"ont{i:04d}.krss" for i in range(10)]


def test_gen_corpus_rejects_bad_spec(tmp_path, capsys):
    bad = tmp_path / "spec.json"
    bad.write_text('{"count": 4, "mystery": 1}')
    assert main(["gen-corpus", "--spec", str(bad), "--out", str(tmp_path / "o")]) == 2
    assert "mystery" in capsys.readouterr().err
    bad.write_text("{not json")
    assert main(["gen-corpus", "--spec", str(bad), "--out", str(tmp_path / "o")]) == 2
    bad.write_text('{"classes": [2, 5]}')
    assert main(["gen-corpus", "--spec", str(bad), "--out", str(tmp_path / "o")]) == 2


# ------------------------------------------------------------------ bench


def test_bench_subset_of_configs(corpus_dir, tmp_path, capsys):
    out = str(tmp_path / "runtimes.csv")
    rc = main(
        ["bench", "--corpus", corpus_dir, "--budget", "2000",
         "--configs", "1,2,default", "--out", out]
    )
    assert rc == 0
    rows = read_runtime_csv(out)
    assert {r.config for r in rows} == {"1", "2", "default"}
    assert len(rows) == 30  # 10 ontologies x 3 configurations
    assert "wrote 30 rows" in capsys.readouterr().out


def test_bench_reports_parse_failures(corpus_dir, tmp_path, capsys):
    broken_dir = tmp_path / "broken"
    broken_dir.mkdir()
    (broken_dir / "good.krss").write_text(BASIC_TEXT)
    (broken_dir / "zzz.krss").write_text("(implies A")
    out = str(tmp_path / "r.csv")
    rc = main(["bench", "--corpus", str(broken_dir), "--configs", "1", "--out", out])
    assert rc == 0
    captured = capsys.readouterr()
    assert "parse failure: zzz" in captured.err
    assert {r.ontology_id for r in read_runtime_csv(out)} == {"good"}


def test_bench_error_paths(corpus_dir, tmp_path, capsys):
    out = str(tmp_path / "r.csv")
    assert main(["bench", "--corpus", corpus_dir, "--configs", "1,99", "--out", out]) == 2
    assert "99" in capsys.readouterr().err
    empty = tmp_path / "empty"
    empty.mkdir()
    assert main(["bench", "--corpus", str(empty), "--out", out]) == 2
    assert main(["bench", "--corpus", str(tmp_path / "missing"), "--out", out]) == 2


# ------------------------------------------------------- filter and split


def test_filter_cli(tmp_path):
    rows = []
    for c in CONFIG_NUMBERS:
        rows.append(RuntimeRow("ok", c, 10.0 + int(c), "finished"))
        rows.append(RuntimeRow("dead", c, 500.0, "timeout"))
    src = str(tmp_path / "r.csv")
    write_runtime_csv(rows, src)
    out, log = str(tmp_path / "kept.csv"), str(tmp_path / "log.csv")
    assert main(["filter", "--runtimes", src, "--out", out, "--log", log]) == 0
    assert {r.ontology_id for r in read_runtime_csv(out)} == {"ok"}
    assert open(log).read() == "id,reason\ndead,all-timeout\n"


def test_split_cli(tmp_path):
    rows = [RuntimeRow(f"o{i}", "1", 1.0, "finished") for i in range(8)]
    src = str(tmp_path / "r.csv")
    write_runtime_csv(rows, src)
    train_out, test_out = str(tmp_path / "train.csv"), str(tmp_path / "test.csv")
    rc = main(
        ["split", "--runtimes", src, "--test-fraction", "0.25", "--seed", "7",
         "--train-out", train_out, "--test-out", test_out]
    )
    assert rc == 0
    train = open(train_out).read().strip().split("\n")
    test = open(test_out).read().strip().split("\n")
    assert train[0] == "id" and test[0] == "id"
    assert len(train) - 1 == 6 and len(test) - 1 == 2
    assert sorted(train[1:] + test[1:]) == [f"o{i}" for i in range(8)]


def test_split_too_few(tmp_path, capsys):
    src = str(tmp_path / "r.csv")
    write_runtime_csv([RuntimeRow("a", "1", 1.0, "finished")], src)
    rc = main(
        ["split", "--runtimes", src, "--train-out", str(tmp_path / "a.csv"),
         "--test-out", str(tmp_path / "b.csv")]
    )
    assert rc == 2
    assert "at least 4" in capsys.readouterr().err


# -------------------------------------------------------- train / predict


def test_train_prints_threshold_and_accuracy(trained, capsys, tmp_path):
    # retrain to capture the output of a known-good invocation
    model = str(tmp_path / "m.json")
    rc = main(
        ["train", "--features", trained["features"], "--runtimes", trained["runtimes"],
         "--folds", "2", "--quick", "--out", model]
    )
    assert rc == 0
    out = capsys.readouterr().out
    assert out.startswith("threshold 10.0")
    assert "accuracy 1:" in out
    assert os.path.exists(model)


def test_train_rejects_empty_features(trained, tmp_path, capsys):
    empty = str(tmp_path / "f.csv")
    write_feature_csv([], empty)
    rc = main(
        ["train", "--features", empty, "--runtimes", trained["runtimes"],
         "--out", str(tmp_path / "m.json")]
    )
    assert rc == 2
    assert "no rows" in capsys.readouterr().err


def test_predict_lists_choices(trained, capsys):
    rc = main(["predict", "--features", trained["features"], "--model", trained["model"]])
    assert rc == 0
    lines = capsys.readouterr().out.strip().split("\n")
    assert lines[0] == "id,config,label"
    assert len(lines) == 9
    for line in lines[1:]:
        oid, config, label = line.split(",")
        assert config in CONFIG_NUMBERS
        assert len(label) == 3


def test_predict_rejects_corrupt_model(trained, tmp_path, capsys):
    bad = str(tmp_path / "model.json")
    with open(bad, "w") as fh:
        fh.write("{}")
    assert main(["predict", "--features", trained["features"], "--model", bad]) == 2
    assert "version" in capsys.readouterr().err


# ----------------------------------------------------------------- report


def _write_cost_csv(path, rows):
    write_runtime_csv(rows, path)


def test_report_text(tmp_path, capsys):
    learned = str(tmp_path / "learned.csv")
    standard = str(tmp_path / "standard.csv")
    _write_cost_csv(learned, [RuntimeRow("a", "5", 100.0, "finished")])
    _write_cost_csv(standard, [RuntimeRow("a", "default", 1000.0, "finished")])
    assert main(["report", "--learned", learned, "--standard", standard, "--budget", "5000"]) == 0
    out = capsys.readouterr().out
    assert "geometric mean ratio  10.00" in out
    assert "ontologies            1" in out


def test_report_rejects_duplicate_and_mismatched_ids(tmp_path, capsys):
    learned = str(tmp_path / "learned.csv")
    standard = str(tmp_path / "standard.csv")
    _write_cost_csv(
        learned,
        [RuntimeRow("a", "5", 1.0, "finished"), RuntimeRow("a", "6", 2.0, "finished")],
    )
    _write_cost_csv(standard, [RuntimeRow("a", "default", 1.0, "finished")])
    assert main(["report", "--learned", learned, "--standard", standard, "--budget", "10"]) == 2
    assert "duplicate" in capsys.readouterr().err
    _write_cost_csv(learned, [RuntimeRow("b", "5", 1.0, "finished")])
    assert main(["report", "--learned", learned, "--standard", standard, "--budget", "10"]) == 2


# --------------------------------------------------------------- pipeline

ARTIFACTS = (
    "runtimes.csv",
    "features.csv",
    "exclusions.csv",
    "train.csv",
    "test.csv",
    "model.json",
    "selections.csv",
    "report.txt",
)


def test_pipeline_writes_all_artifacts(tmp_path, capsys):
    spec_path = tmp_path / "spec.json"
    spec_path.write_text(json.dumps(SPEC))
    out1, out2 = str(tmp_path / "run1"), str(tmp_path / "run2")
    argv = ["pipeline", "--spec", str(spec_path), "--budget", "12000",
            "--folds", "3", "--quick", "--out-dir", out1]
    assert main(argv) == 0
    stdout = capsys.readouterr().out
    assert "eligible" in stdout and "geomean speedup" in stdout
    for name in ARTIFACTS:
        assert os.path.exists(os.path.join(out1, name)), name
    assert "ont0000,all-timeout" in open(os.path.join(out1, "exclusions.csv")).read()
    # a rerun of the same spec is byte-identical artifact for artifact
    argv[-1] = out2
    assert main(argv) == 0
    capsys.readouterr()
    for name in ARTIFACTS:
        a = open(os.path.join(out1, name), "rb").read()
        b = open(os.path.join(out2, name), "rb").read()
        assert a == b, name
