"""Command-line verbs exercised in process through main(argv)."""

import json

import pytest

from stylomorph.cli import encode_source, main
from stylomorph.corpus import load_corpus


@pytest.fixture(scope="module")
def workdir(tmp_path_factory):
    """Corpus, tree, split, and model shared by the verb tests."""
    root = tmp_path_factory.mktemp("cli")
    corpus = root / "corpus.json"
    tree = root / "tree"
    split = root / "split.json"
    model = root / "model.json"
    assert main(["synth", "--authors", "4", "--seed", "0",
                 "--out", str(corpus), "--tree", str(tree)]) == 0
    assert main(["split", str(corpus), "--seed", "0",
                 "--train-fraction", "0.75", "--out", str(split)]) == 0
    assert main(["train-attrib", "--corpus", str(corpus),
                 "--split", str(split), "--out", str(model)]) == 0
    return root


def test_synth_writes_corpus_and_tree(workdir):
    corpus = load_corpus(workdir / "corpus.json")
    assert len(corpus.units) == 32
    assert (workdir / "tree" / "author00").is_dir()


def test_ingest_round_trips_tree(workdir, tmp_path, capsys):
    out = tmp_path / "reloaded.json"
    rejects = tmp_path / "rejects.json"
    assert main(["ingest", str(workdir / "tree"), "--out", str(out),
                 "--rejects", str(rejects)]) == 0
    capsys.readouterr()
    reloaded = load_corpus(out)
    original = load_corpus(workdir / "corpus.json")
    assert {u.key for u in reloaded.units} == {u.key for u in original.units}
    assert rejects.exists()


def test_split_file_shape(workdir):
    split = json.loads((workdir / "split.json").read_text())
    assert set(split) == {"train", "test"}
    assert len(split["train"]) == 24
    assert len(split["test"]) == 8
    assert not set(split["train"]) & set(split["test"])


def test_train_attrib_reports_accuracy(workdir, capsys):
    out = workdir / "model2.json"
    assert main(["train-attrib", "--corpus", str(workdir / "corpus.json"),
                 "--split", str(workdir / "split.json"),
                 "--out", str(out)]) == 0
    text = capsys.readouterr().out
    assert "accuracy" in text
    assert out.exists()


def test_evade_and_random_baseline(workdir, tmp_path, capsys):
    out = tmp_path / "evade.jsonl"
    assert main(["evade", "--corpus", str(workdir / "corpus.json"),
                 "--split", str(workdir / "split.json"),
                 "--units", "test", "--model", str(workdir / "model.json"),
                 "--budget", "10", "--out", str(out)]) == 0
    capsys.readouterr()
    rows = [json.loads(line) for line in out.read_text().splitlines()]
    assert len(rows) == 8
    for row in rows:
        assert {"author", "challenge", "success", "predicted",
                "final_code"} <= set(row)

    rnd = tmp_path / "random.jsonl"
    assert main(["evade", "--corpus", str(workdir / "corpus.json"),
                 "--split", str(workdir / "split.json"),
                 "--units", "test", "--model", str(workdir / "model.json"),
                 "--budget", "10", "--random", "--out", str(rnd)]) == 0
    capsys.readouterr()
    assert len(rnd.read_text().splitlines()) == 8


def test_pairgen_counts(workdir, tmp_path, capsys):
    out = tmp_path / "pairs.jsonl"
    meta_path = tmp_path / "meta.json"
    assert main(["pairgen", "--corpus", str(workdir / "corpus.json"),
                 "--split", str(workdir / "split.json"), "--units", "test",
                 "--model", str(workdir / "model.json"), "--budget", "6",
                 "--out", str(out), "--meta", str(meta_path)]) == 0
    capsys.readouterr()
    meta = json.loads(meta_path.read_text())
    # 4 authors: n-2 = 2 pairs per usable unit
    assert meta["pairs"] == len(out.read_text().splitlines())
    assert all(count == 2 for count in meta["per_unit"].values())


def test_encode_single_file(tmp_path, capsys):
    src = tmp_path / "p.cpp"
    src.write_text("int main() { int x = 1; cout << x << endl; return 0; }")
    assert main(["encode", str(src)]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert set(payload) == {"tokens", "paths", "dfg_edges"}
    assert ["keyword", "int"] == payload["tokens"][0]
    token_count = len(payload["tokens"])
    for index, kinds in payload["paths"]:
        assert 0 <= index < token_count
        assert kinds
    for a, b in payload["dfg_edges"]:
        assert 0 <= a < token_count or 0 <= b < token_count


def test_encode_matches_library_helper(tmp_path, capsys):
    source = "int main() { int k = 2; cout << k << endl; return 0; }"
    src = tmp_path / "q.cpp"
    src.write_text(source)
    assert main(["encode", str(src)]) == 0
    assert json.loads(capsys.readouterr().out) == json.loads(
        json.dumps(encode_source(source)))


def test_encode_pairs_batch(workdir, tmp_path, capsys):
    pairs = tmp_path / "pairs.jsonl"
    code = "int main() { int n = 3; cout << n << endl; return 0; }"
    rows = [{"src": code, "tgt": code, "author": "a", "from": "b", "to": "c"}]
    pairs.write_text("\n".join(json.dumps(r) for r in rows) + "\n")
    assert main(["encode", "--pairs", str(pairs)]) == 0
    out_rows = [json.loads(line)
                for line in capsys.readouterr().out.splitlines()]
    assert len(out_rows) == 1
    assert "src_enc" in out_rows[0] and "tgt_enc" in out_rows[0]
    assert out_rows[0]["src_enc"] == encode_source(code)


def test_encode_bad_source_exits_2(tmp_path, capsys):
    bad = tmp_path / "bad.cpp"
    bad.write_text("int main() { @ }")
    assert main(["encode", str(bad)]) == 2
    assert "frontend error" in capsys.readouterr().err


def test_missing_file_exits_2(capsys):
    assert main(["split", "/nonexistent/corpus.json",
                 "--out", "/tmp/never.json"]) == 2
    assert "missing file" in capsys.readouterr().err


def test_verify_verb(workdir, tmp_path, capsys):
    corpus = load_corpus(workdir / "corpus.json")
    unit = corpus.units[0]
    candidates = tmp_path / "candidates.jsonl"
    candidates.write_text(json.dumps({"key": unit.key, "code": unit.code})
                          + "\n")
    out = tmp_path / "verdicts.jsonl"
    assert main(["verify", "--corpus", str(workdir / "corpus.json"),
                 "--candidates", str(candidates), "--out", str(out)]) == 0
    text = capsys.readouterr().out
    assert "1.000 (1/1)" in text
    rows = [json.loads(line) for line in out.read_text().splitlines()]
    assert rows[0]["key"] == unit.key
    assert rows[0]["category"] is None


def test_transforms_catalog_and_file(tmp_path, capsys):
    assert main(["transforms"]) == 0
    listing = capsys.readouterr().out
    for tid in ("T1", "T5", "T12"):
        assert tid in listing

    src = tmp_path / "p.cpp"
    src.write_text("int main() { int total = 0; total = total + 1;"
                   " cout << total << endl; return 0; }")
    assert main(["transforms", str(src)]) == 0
    described = capsys.readouterr().out
    assert "T8@" in described


def test_run_and_report_verbs(tmp_path, capsys):
    out_dir = tmp_path / "artifacts"
    config = tmp_path / "run.json"
    config.write_text(json.dumps({
        "out_dir": str(out_dir), "synth_authors": 3,
        "search_budget": 8, "pairgen_enabled": False,
    }))
    assert main(["run", str(config)]) == 0
    run_text = capsys.readouterr().out
    assert "transformation success rate" in run_text
    assert (out_dir / "report.json").exists()

    assert main(["report", str(out_dir)]) == 0
    report_text = capsys.readouterr().out
    assert "evasion success rate [tfidf-rf]" in report_text
