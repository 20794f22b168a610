"""Shared fixtures: tiny inline pair files and the desk dataset.

The desk dataset is built once per session with the stylomorph command
line, the only channel this package is allowed to use: a synthetic
five-author corpus, an attribution model, and the style pairs derived
from them.
"""

import json
import subprocess
import sys

import pytest

from styloseq.encode import (EncodedExample, ExampleSet, KindVocab,
                             SPECIALS, Vocab)

STYLOMORPH = [sys.executable, "-m", "stylomorph.cli"]

TINY_PROGRAMS = [
    "int main() { int a; a = 1; cout << a; return 0; }",
    "int main() { int total; total = 0; for (int i = 0; i < 3; "
    "i = i + 1) { total = total + i; } cout << total; return 0; }",
    "int main() { int x; cin >> x; if (x > 0) { cout << x; } "
    "else { cout << 0; } return 0; }",
]


def run_stylomorph(*args, **kwargs):
    proc = subprocess.run(STYLOMORPH + list(args), capture_output=True,
                          text=True, **kwargs)
    assert proc.returncode == 0, proc.stderr
    return proc


def write_pairs(path, rows):
    with path.open("w", encoding="utf-8") as handle:
        for row in rows:
            handle.write(json.dumps(row) + "\n")
    return path


@pytest.fixture
def tiny_pairs(tmp_path):
    """Three handwritten pairs; src and tgt differ per row."""
    rows = []
    for i, src in enumerate(TINY_PROGRAMS):
        tgt = TINY_PROGRAMS[(i + 1) % len(TINY_PROGRAMS)]
        rows.append({"src": src, "tgt": tgt, "author": f"au{i}",
                     "from": "s1", "to": "s2"})
    return write_pairs(tmp_path / "pairs.jsonl", rows)


def toy_examples():
    """A hand-built two-example set; no subprocess involved."""
    vocab = Vocab(terms=SPECIALS + ("x", "y", "z"))
    kinds = KindVocab(terms=("<pad>", "k1", "k2"))
    first = EncodedExample(src_ids=[4, 5, 6], tgt_ids=[5, 4],
                           path_kinds=[[1], [1, 2], []],
                           dfg_edges=[(0, 2)], overlong=False)
    second = EncodedExample(src_ids=[4, 6], tgt_ids=[6],
                            path_kinds=[[2], []], dfg_edges=[],
                            overlong=False)
    return ExampleSet([first, second], vocab, kinds, 0)


@pytest.fixture(scope="session")
def desk(tmp_path_factory):
    """Corpus, split, attribution model, and 120 style pairs."""
    root = tmp_path_factory.mktemp("desk")
    corpus = root / "corpus.json"
    split = root / "split.json"
    model = root / "model.json"
    pairs = root / "pairs.jsonl"
    meta = root / "pairs.meta.json"
    run_stylomorph("synth", "--authors", "5", "--seed", "0",
                   "--out", str(corpus))
    run_stylomorph("split", str(corpus), "--train-fraction", "0.75",
                   "--seed", "0", "--out", str(split))
    run_stylomorph("train-attrib", "--corpus", str(corpus),
                   "--split", str(split), "--out", str(model))
    run_stylomorph("pairgen", "--corpus", str(corpus),
                   "--split", str(split), "--units", "all",
                   "--model", str(model), "--budget", "25",
                   "--depth", "6", "--rollout", "2", "--seed", "0",
                   "--out", str(pairs), "--meta", str(meta))
    return {"root": root, "corpus": corpus, "split": split,
            "model": model, "pairs": pairs, "meta": meta}
