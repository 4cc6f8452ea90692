import csv
import io

import numpy as np
import pytest

from coeye import load_model, write_ucr
from coeye.cli import main
from tests.conftest import synth_dataset

FAST = ["--trees", "10", "--sax-alphas", "3,4", "--sfa-alphas", "3,4", "--threads", "1"]


@pytest.fixture(scope="module")
def workdir(tmp_path_factory):
    tmp = tmp_path_factory.mktemp("cli")
    for kind in ("waves", "trends"):
        write_ucr(synth_dataset(kind, seed=1), tmp / f"{kind}_TRAIN.tsv")
        write_ucr(synth_dataset(kind, seed=2), tmp / f"{kind}_TEST.tsv")
    return tmp


@pytest.fixture(scope="module")
def trained(workdir):
    model_path = workdir / "waves.model.json"
    code = main(["train", "--data", str(workdir), "--dataset", "waves",
                 "--out", str(model_path), *FAST])
    assert code == 0
    return model_path


class TestTrain:
    def test_success_writes_model(self, workdir, trained, capsys):
        assert trained.exists()
        load_model(trained)

    def test_prints_lens_counts_and_smote(self, workdir, tmp_path, capsys):
        out = tmp_path / "m.json"
        code = main(["train", "--data", str(workdir), "--dataset", "waves",
                     "--out", str(out), *FAST])
        captured = capsys.readouterr().out
        assert code == 0
        assert "sax lenses:" in captured and "sfa lenses:" in captured
        assert "smote percentage: 0.0000" in captured

    def test_missing_train_file_exit_2(self, workdir, tmp_path, capsys):
        code = main(["train", "--data", str(workdir), "--dataset", "nothere",
                     "--out", str(tmp_path / "m.json"), *FAST])
        assert code == 2

    def test_smote_off_flag(self, workdir, tmp_path, capsys):
        code = main(["train", "--data", str(workdir), "--dataset", "waves",
                     "--out", str(tmp_path / "m.json"), "--smote", "off", *FAST])
        assert code == 0
        assert "smote percentage: 0.0000" in capsys.readouterr().out


class TestPredict:
    def test_accuracy_printed_and_rows_match(self, workdir, trained, tmp_path, capsys):
        out = tmp_path / "preds.csv"
        code = main(["predict", "--model", str(trained), "--data", str(workdir),
                     "--dataset", "waves", "--out", str(out)])
        assert code == 0
        printed = capsys.readouterr().out
        assert "accuracy:" in printed
        accuracy = float(printed.split("accuracy:")[1].strip())
        assert 0.0 <= accuracy <= 1.0
        rows = list(csv.DictReader(io.StringIO(out.read_text())))
        assert len(rows) == 20
        assert set(rows[0]) == {"index", "predicted", "confidence", "round", "true", "correct"}

    def test_values_only_input(self, workdir, trained, tmp_path, capsys):
        series = synth_dataset("waves", seed=3).X[:4]
        path = tmp_path / "input.tsv"
        with open(path, "w") as fh:
            for row in series:
                fh.write("\t".join(f"{v:.17g}" for v in row) + "\n")
        code = main(["predict", "--model", str(trained), "--input", str(path)])
        assert code == 0
        printed = capsys.readouterr().out
        rows = list(csv.DictReader(io.StringIO(printed)))
        assert len(rows) == 4
        assert set(rows[0]) == {"index", "predicted", "confidence", "round"}

    def test_wrong_length_exit_4(self, workdir, trained, tmp_path, capsys):
        path = tmp_path / "short.tsv"
        path.write_text("\t".join(["0.5"] * 7) + "\n")
        code = main(["predict", "--model", str(trained), "--input", str(path)])
        assert code == 4

    def test_no_input_exit_2(self, trained, capsys, monkeypatch):
        monkeypatch.delenv("COEYE_DATA_DIR", raising=False)
        code = main(["predict", "--model", str(trained)])
        assert code == 2


class TestLenses:
    def test_csv_output(self, workdir, capsys):
        code = main(["lenses", "--data", str(workdir), "--dataset", "waves", *FAST])
        assert code == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0] == "representation,alpha,w,drop_dc,cv_accuracy"
        assert len(lines) >= 3
        for line in lines[1:]:
            rep, alpha, w, drop_dc, acc = line.split(",")
            assert rep in ("sax", "sfa")
            assert 0.0 <= float(acc) <= 1.0


class TestInspect:
    def test_rows_and_trace(self, workdir, trained, capsys):
        code = main(["inspect", "--model", str(trained), "--data", str(workdir),
                     "--dataset", "waves", "--index", "2"])
        assert code == 0
        out = capsys.readouterr().out
        lines = out.strip().splitlines()
        model = load_model(trained)
        expected_rows = len(model.eyes) * len(model.class_labels)
        data_lines = [l for l in lines if l[0].isdigit()]
        assert len(data_lines) == expected_rows
        assert "final label:" in out
        round_used = out.split("vote round: ")[1].split()[0]
        assert round_used in ("first", "second", "fallback")

        # per-eye probabilities sum to one
        probs = {}
        for line in data_lines:
            eye, rep, alpha, w, cls, p = line.split(",")
            probs.setdefault(eye, []).append(float(p))
        for eye, values in probs.items():
            assert sum(values) == pytest.approx(1.0, abs=1e-5)

    def test_final_label_matches_predict(self, workdir, trained, tmp_path, capsys):
        out = tmp_path / "preds.csv"
        main(["predict", "--model", str(trained), "--data", str(workdir),
              "--dataset", "waves", "--out", str(out)])
        capsys.readouterr()
        rows = list(csv.DictReader(io.StringIO(out.read_text())))
        code = main(["inspect", "--model", str(trained), "--data", str(workdir),
                     "--dataset", "waves", "--index", "0"])
        assert code == 0
        inspected = capsys.readouterr().out
        final = inspected.split("final label: ")[1].split()[0]
        assert final == rows[0]["predicted"]

    def test_bad_index_exit_2(self, workdir, trained, capsys):
        code = main(["inspect", "--model", str(trained), "--data", str(workdir),
                     "--dataset", "waves", "--index", "99"])
        assert code == 2


class TestTransform:
    def test_constant_series_single_letter(self, tmp_path, capsys):
        rows = np.vstack([np.full(16, 3.0), np.arange(16.0)])
        from coeye import Dataset
        write_ucr(Dataset(rows, np.array([1, 2])), tmp_path / "const_TRAIN.tsv")
        code = main(["transform", "--data", str(tmp_path), "--dataset", "const",
                     "--rep", "sax", "--alpha", "4", "--w", "8", "--index", "0"])
        assert code == 0
        word = capsys.readouterr().out.strip()
        assert len(word) == 8
        assert word == word[0] * 8

    def test_word_length(self, workdir, capsys):
        code = main(["transform", "--data", str(workdir), "--dataset", "waves",
                     "--rep", "sfa", "--alpha", "5", "--w", "10", "--index", "1"])
        assert code == 0
        assert len(capsys.readouterr().out.strip()) == 10

    def test_alpha_over_26_exit_2(self, workdir, capsys):
        code = main(["transform", "--data", str(workdir), "--dataset", "waves",
                     "--rep", "sax", "--alpha", "27", "--w", "8", "--index", "0"])
        assert code == 2

    def test_sfa_matches_library_word(self, workdir, capsys):
        from coeye import fit_mcb, load_ucr, sfa

        code = main(["transform", "--data", str(workdir), "--dataset", "waves",
                     "--rep", "sfa", "--alpha", "4", "--w", "12", "--index", "3"])
        assert code == 0
        printed = capsys.readouterr().out.strip()
        train_set = load_ucr(workdir / "waves_TRAIN.tsv")
        table = fit_mcb(train_set, 4, 12, drop_dc=False)
        assert printed == sfa(train_set.X[3], table).to_text()


class TestBenchmark:
    def test_rows_written(self, workdir, tmp_path, capsys):
        out = tmp_path / "bench.csv"
        code = main(["benchmark", "--data", str(workdir), "--datasets", "waves,trends",
                     "--modes", "coeye", "--seeds", "0,1", "--out", str(out), *FAST])
        assert code == 0
        rows = list(csv.DictReader(io.StringIO(out.read_text())))
        assert len(rows) == 4

    def test_unknown_mode_exit_2(self, workdir, tmp_path, capsys):
        code = main(["benchmark", "--data", str(workdir), "--datasets", "waves",
                     "--modes", "bogus", "--out", str(tmp_path / "b.csv"), *FAST])
        assert code == 2
        assert "mode" in capsys.readouterr().err

    def test_rerun_identical_non_timing_columns(self, workdir, tmp_path, capsys):
        timing = {"t_search_sax_s", "t_search_sfa_s", "t_train_s", "t_predict_s", "t_total_s"}

        def stable(path):
            rows = list(csv.DictReader(io.StringIO(path.read_text())))
            return [tuple(v for c, v in r.items() if c not in timing) for r in rows]

        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        for out in (a, b):
            code = main(["benchmark", "--data", str(workdir), "--datasets", "waves",
                         "--modes", "ed1nn", "--seeds", "5", "--out", str(out), *FAST])
            assert code == 0
        assert stable(a) == stable(b)

    def test_all_errors_nonzero_exit(self, workdir, tmp_path, capsys):
        code = main(["benchmark", "--data", str(workdir), "--datasets", "ghost",
                     "--modes", "coeye", "--seeds", "0", "--out", str(tmp_path / "g.csv"), *FAST])
        assert code == 3


class TestHelpAndUsage:
    @pytest.mark.parametrize(
        "command", ["train", "predict", "lenses", "inspect", "transform", "benchmark"]
    )
    def test_help_documents_defaults(self, command, capsys):
        code = main([command, "--help"])
        assert code == 0
        text = capsys.readouterr().out
        assert "--help" not in ("",)  # help text rendered
        if command in ("train", "lenses", "benchmark"):
            assert "42" in text  # seed default
            assert "100" in text  # trees default
            assert "minmax" in text

    def test_no_command_exit_2(self, capsys):
        assert main([]) == 2

    def test_version_flag(self, capsys):
        assert main(["--version"]) == 0
        assert "coeye" in capsys.readouterr().out
