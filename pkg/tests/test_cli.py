import csv
import io
import json

import pytest

from cremoji.cli import RunConfig, main, read_config
from cremoji.corpus import CommentRecord, Dataset, write_dataset
from cremoji.embeddings import write_vectors
from cremoji.synthetic import emoji_signal_corpus

THUMBS = "\U0001F44D"


@pytest.fixture
def workspace(tmp_path):
    corpus = emoji_signal_corpus(n=120, seed=3)
    write_dataset(corpus.dataset, tmp_path / "syn.csv")
    write_vectors(corpus.word_vectors, tmp_path / "w.vec")
    write_vectors(corpus.emoji_vectors, tmp_path / "e.vec")
    (tmp_path / "run.cfg").write_text(
        "# test run\nword_vectors = w.vec\nemoji_vectors = e.vec\nn_trees = 15\ndatasets = syn.csv\nfolds = 5\n",
        encoding="utf-8",
    )
    return tmp_path


def _rows(path):
    with open(path, encoding="utf-8", newline="") as fh:
        return list(csv.reader(fh))


def test_config_paths_resolve_against_config_dir(workspace):
    values = read_config(workspace / "run.cfg")
    assert values["word_vectors"] == str(workspace / "w.vec")
    assert values["n_trees"] == 15 and values["datasets"] == (str(workspace / "syn.csv"),)


def test_h2_outputs(workspace):
    out = workspace / "out"
    assert main(["h2", "--config", str(workspace / "run.cfg"), "--out", str(out), "--folds", "4"]) == 0
    deltas = _rows(out / "deltas.csv")
    assert deltas[0] == ["dataset", "mode", "P", "R", "A", "M", "F1"]
    assert [r[:2] for r in deltas[1:]] == [["syn", "features"], ["syn", "embeddings"]]
    assert float(deltas[1][5]) > 20
    assert len(_rows(out / "metrics.csv")) == 5


def test_h2_adds_union_for_several_datasets(workspace):
    other = Dataset(tuple(CommentRecord(f"o{i}", f"fine {THUMBS}" if i % 2 else "bad :(", i % 2) for i in range(20)))
    write_dataset(other, workspace / "other.csv")
    out = workspace / "out"
    args = ["h2", "--config", str(workspace / "run.cfg"), "--dataset", str(workspace / "syn.csv"),
            str(workspace / "other.csv"), "--mode", "features", "--out", str(out)]
    assert main(args) == 0
    assert [r[0] for r in _rows(out / "deltas.csv")[1:]] == ["syn", "other", "D_all"]


def test_h1_report(workspace):
    ds = Dataset(tuple(CommentRecord(str(i), f"great {THUMBS}" if i % 2 else "awful \U0001F44E", i % 2, 1 if i % 2 else -1)
                       for i in range(20)))
    write_dataset(ds, workspace / "s.csv")
    out = workspace / "out"
    assert main(["h1", "--dataset", str(workspace / "s.csv"), "--out", str(out)]) == 0
    rows = _rows(out / "correlations.csv")
    assert rows[0] == ["dataset", "channel", "target", "subset", "rho", "n"]
    cell = next(r for r in rows if r[1:4] == ["CR_E", "sentiment", "emoji_only"])
    assert float(cell[4]) >= 0.99
    first = (out / "correlations.csv").read_bytes()
    main(["h1", "--dataset", str(workspace / "s.csv"), "--out", str(out)])
    assert (out / "correlations.csv").read_bytes() == first


def test_h1_without_emojis_leaves_emoji_columns_undefined(workspace):
    ds = Dataset(tuple(CommentRecord(str(i), "good" if i % 2 else "bad", i % 2, i % 2) for i in range(10)))
    write_dataset(ds, workspace / "plain.csv")
    assert main(["h1", "--dataset", str(workspace / "plain.csv"), "--out", str(workspace / "o")]) == 0
    rows = _rows(workspace / "o" / "correlations.csv")
    assert all(r[4] == "" for r in rows[1:] if r[1] in ("G_E", "CR_E") or r[3] == "emoji_only")


def test_normalize_and_score(capsys, monkeypatch):
    assert main(["normalize", "+U1F60A"]) == 0
    assert capsys.readouterr().out == "\U0001F60A\n"
    monkeypatch.setattr("sys.stdin", io.StringIO("ok :+1:\nplain\n"))
    assert main(["normalize", "--json"]) == 0
    lines = [json.loads(x) for x in capsys.readouterr().out.splitlines()]
    assert lines[0]["tokens"][0]["source_form"] == "Shortcode" and lines[1]["tokens"] == []
    assert main(["score", "good"]) == 0
    assert capsys.readouterr().out.splitlines()[1].startswith("0.440")


def test_stats(workspace, capsys):
    ds = Dataset(tuple(CommentRecord(str(i), f"lgtm {THUMBS}", 1) for i in range(18)))
    write_dataset(ds, workspace / "rh.csv")
    assert main(["stats", "--dataset", str(workspace / "rh.csv"), "--out", str(workspace / "o")]) == 0
    text = (workspace / "o" / "stats.txt").read_text(encoding="utf-8")
    assert f"{THUMBS}(18)" in text and "size\t18" in text


def test_kappa(tmp_path, capsys):
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    a.write_text("comment_id,annotator_id,glyph\n1,a,x\n2,a,x\n3,a,y\n4,a,y\n", encoding="utf-8")
    b.write_text("comment_id,annotator_id,glyph\n1,b,x\n2,b,y\n3,b,y\n4,b,y\n", encoding="utf-8")
    assert main(["kappa", str(a), str(b), "--out", str(tmp_path / "o")]) == 0
    assert "kappa=0.5000" in capsys.readouterr().out
    assert _rows(tmp_path / "o" / "agreement.csv")[1][0] == "0.500000"


def test_augment_does_not_touch_input(workspace):
    ds = Dataset((CommentRecord("1", "why?", 1), CommentRecord("2", "done", 0)), "plain")
    write_dataset(ds, workspace / "plain.csv")
    before = (workspace / "plain.csv").read_bytes()
    assert main(["augment", "--dataset", str(workspace / "plain.csv"), "--out", str(workspace / "o")]) == 0
    assert (workspace / "plain.csv").read_bytes() == before
    rows = _rows(workspace / "o" / "plain+.csv")
    assert rows[1][1] == "why? \U0001F914" and rows[1][-1].startswith("rule")


def test_errors_are_single_line(tmp_path, capsys):
    assert main(["h2", "--dataset", str(tmp_path / "missing.csv")]) != 0
    err = capsys.readouterr().err
    assert err.count("\n") == 1 and err.startswith("error: DataError: ")
    bad = tmp_path / "bad.cfg"
    bad.write_text("nonsense_key = 1\n", encoding="utf-8")
    assert main(["h1", "--config", str(bad)]) != 0
    assert capsys.readouterr().err.startswith("error: DataError: ")


def test_small_class_reduces_folds(workspace, caplog):
    ds = Dataset(tuple(CommentRecord(str(i), f"x {THUMBS}" if i < 3 else "y", int(i < 3)) for i in range(30)))
    write_dataset(ds, workspace / "tiny.csv")
    out = workspace / "o"
    assert main(["h2", "--dataset", str(workspace / "tiny.csv"), "--mode", "features", "--out", str(out)]) == 0
    assert "reduced" in caplog.text
    assert len(_rows(out / "deltas.csv")) == 2


def test_run_config_defaults():
    cfg = RunConfig()
    assert (cfg.seed, cfg.folds, cfg.forest_params().n_trees) == (42, 10, 100)
