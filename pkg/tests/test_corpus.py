import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cremoji.corpus import CommentRecord, Dataset, filter_emoji_only, load_dataset, manifest_path, write_dataset
from cremoji.errors import DataError

THUMBS = "\U0001F44D"


def test_load_csv_with_aliases(tmp_path):
    p = tmp_path / "rh.csv"
    p.write_text("comment_id,comment,usefulness,sentiment_label\n1,hi,useful,positive\n2,no,0,\n", encoding="utf-8")
    ds = load_dataset(p)
    assert ds.name == "rh"
    assert ds.records[0] == CommentRecord("1", "hi", 1, 1, source="rh")
    assert ds.records[1].sentiment is None


def test_size_manifest(tmp_path):
    ds = Dataset(tuple(CommentRecord(str(i), "x", i % 2) for i in range(1481)), "RevHelper")
    write_dataset(ds, tmp_path / "rh.csv")
    manifest = json.loads(manifest_path(tmp_path / "rh.csv").read_text(encoding="utf-8"))
    assert manifest["size"] == 1481
    assert load_dataset(tmp_path / "rh.csv").manifest()["size"] == 1481


def test_duplicate_id(tmp_path):
    p = tmp_path / "d.csv"
    p.write_text("id,text,useful\nabc,x,1\nabc,y,0\n", encoding="utf-8")
    with pytest.raises(DataError, match="abc"):
        load_dataset(p)


def test_bad_label(tmp_path):
    p = tmp_path / "d.csv"
    p.write_text("id,text,useful\n1,x,maybe\n", encoding="utf-8")
    with pytest.raises(DataError):
        load_dataset(p)


def test_csv_jsonl_equivalent(tmp_path):
    ds = Dataset((CommentRecord("1", "a,b \"q\"\nline", 1, -1), CommentRecord("2", THUMBS, 0)))
    write_dataset(ds, tmp_path / "d.csv")
    write_dataset(ds, tmp_path / "d.jsonl")
    assert load_dataset(tmp_path / "d.csv") == load_dataset(tmp_path / "d.jsonl") == ds


def test_emoji_only_union():
    a = Dataset((CommentRecord("1", "plain", 1), CommentRecord("2", f"ok {THUMBS}", 0)), "A")
    b = Dataset((CommentRecord("3", ":tada:", 1),), "B")
    assert [r.id for r in filter_emoji_only([a, b])] == ["2", "3"]
    assert len(filter_emoji_only([Dataset((CommentRecord("1", "x", 0),))])) == 0
    assert filter_emoji_only([b]) == b


records = st.lists(
    st.builds(
        CommentRecord,
        id=st.from_regex(r"[a-z0-9]{1,6}", fullmatch=True),
        text=st.text(alphabet=st.characters(blacklist_categories=("Cs", "Cc")), max_size=30),
        useful=st.integers(0, 1),
        sentiment=st.sampled_from([None, -1, 0, 1]),
        source=st.sampled_from(["", "RH", "Kuma"]),
    ),
    max_size=8,
    unique_by=lambda r: r.id,
)


@settings(max_examples=60, deadline=None)
@given(records, st.sampled_from(["csv", "jsonl"]))
def test_round_trip(tmp_path_factory, recs, fmt):
    path = tmp_path_factory.mktemp("rt") / f"d.{fmt}"
    ds = Dataset(tuple(recs))
    write_dataset(ds, path)
    assert load_dataset(path) == ds
