"""Acceptance battery for the neural rewriter.

Everything here runs against a desk dataset produced by the stylomorph
command line and talks to that toolkit only through subprocesses, the
same boundary the package holds in production.
"""

import json
import subprocess
import sys
import time

import pytest

from styloseq import NeuralConfig, prepare_examples
from styloseq.decode import DecodeOverflow, greedy_decode
from styloseq.encode import ExampleSet, detokenize
from styloseq.train import restore, train

from conftest import run_stylomorph

SYNTAX_CATEGORIES = ("undeclared-variable", "redeclared-variable",
                     "missing-semicolon-or-brace", "return-statement",
                     "other")
SEMANTIC_CATEGORIES = ("input-statement", "output-statement",
                       "misused-variable")


def _subset(examples, count):
    return ExampleSet(examples[:count], examples.vocab, examples.kinds,
                      0)


def test_overfit_ten_pairs(desk):
    """Ten memorized pairs come back verbatim under greedy decoding."""
    config = NeuralConfig(epochs=150, seed=0)
    examples = prepare_examples(desk["pairs"], config)
    ten = _subset(examples, 10)
    started = time.time()
    ckpt = train(ten, config)
    model, _, _, _ = restore(ckpt)
    exact = sum(1 for e in ten
                if greedy_decode(model, e) == list(e.tgt_ids))
    elapsed = time.time() - started
    print(f"[ACCEPTANCE] overfit: {exact}/10 exact greedy "
          f"reconstructions, final loss "
          f"{ckpt['loss_history'][-1]:.5f}, {elapsed:.0f}s")
    assert exact >= 9


def test_identity_model_returns_inputs(desk):
    """A model trained on src -> src reproduces its inputs."""
    config = NeuralConfig(epochs=100, seed=0)
    examples = prepare_examples(desk["pairs"], config)
    ten = _subset(examples, 10)
    for example in ten:
        example.tgt_ids = list(example.src_ids)
    started = time.time()
    ckpt = train(ten, config)
    model, _, _, _ = restore(ckpt)
    unchanged = sum(1 for e in ten
                    if greedy_decode(model, e) == list(e.src_ids))
    elapsed = time.time() - started
    print(f"[ACCEPTANCE] identity: {unchanged}/10 inputs returned "
          f"unchanged, {elapsed:.0f}s")
    assert unchanged == 10


def test_early_loss_is_monotone_on_hundred_pairs(desk):
    """Mean epoch loss falls strictly over the first five epochs."""
    config = NeuralConfig(epochs=5, seed=0)
    examples = prepare_examples(desk["pairs"], config)
    hundred = _subset(examples, 100)
    history = train(hundred, config)["loss_history"]
    print(f"[ACCEPTANCE] early loss: "
          f"{[round(x, 4) for x in history]}")
    assert len(history) == 5
    for earlier, later in zip(history, history[1:]):
        assert later < earlier


def test_pipeline_rate_and_error_table(desk, tmp_path):
    """Trained outputs survive the equivalence oracle at >= 0.50."""
    config = NeuralConfig(epochs=100, seed=0)
    examples = prepare_examples(desk["pairs"], config)
    hundred = _subset(examples, 100)
    started = time.time()
    ckpt = train(hundred, config)
    model, vocab, _, _ = restore(ckpt)

    meta = json.loads(desk["meta"].read_text(encoding="utf-8"))
    keys = []
    for unit_key, pair_count in meta["per_unit"].items():
        keys.extend([unit_key] * pair_count)
    keys = keys[:100]

    candidates = tmp_path / "candidates.jsonl"
    with candidates.open("w", encoding="utf-8") as handle:
        for example, key in zip(hundred, keys):
            try:
                ids = greedy_decode(model, example)
                code = detokenize([vocab.text_of(i) for i in ids])
            except DecodeOverflow:
                # unparseable on purpose so the failure is counted
                code = "{"
            handle.write(json.dumps({"key": key, "code": code})
                         + "\n")

    verdicts = tmp_path / "verify.jsonl"
    run_stylomorph("verify", "--corpus", str(desk["corpus"]),
                   "--candidates", str(candidates),
                   "--workers", "4", "--out", str(verdicts))
    rows = [json.loads(line) for line in
            verdicts.read_text(encoding="utf-8").splitlines()]
    assert len(rows) == 100
    successes = sum(1 for r in rows if r["category"] is None)
    rate = successes / len(rows)

    table = {cat: 0 for cat in SYNTAX_CATEGORIES + SEMANTIC_CATEGORIES}
    for row in rows:
        if row["category"] is not None:
            assert row["category"] in table
            table[row["category"]] += 1
    elapsed = time.time() - started
    print(f"[ACCEPTANCE] pipeline: success rate {rate:.3f} "
          f"({successes}/100), error table {table}, {elapsed:.0f}s")
    assert rate >= 0.50
    assert set(table) == set(SYNTAX_CATEGORIES + SEMANTIC_CATEGORIES)
    assert sum(table.values()) == len(rows) - successes


def test_bridge_drives_the_staged_pipeline(tmp_path):
    """The bridge verb serves as a neural stage end to end."""
    config = {
        "out_dir": str(tmp_path / "run"),
        "seed": 0,
        "synth_authors": 4,
        "train_fraction": 0.75,
        "search_budget": 10,
        "search_depth": 6,
        "search_rollout": 2,
        "workers": 2,
        "pairgen_enabled": True,
        "neural_enabled": True,
        "neural_cmd": f"{sys.executable} -m styloseq.cli bridge "
                      f"--epochs 60 --seed 0",
    }
    cfg_path = tmp_path / "run.cfg.json"
    cfg_path.write_text(json.dumps(config), encoding="utf-8")
    started = time.time()
    proc = run_stylomorph("run", str(cfg_path))
    assert "neural stage" in proc.stdout

    out = tmp_path / "run"
    candidates = [json.loads(line) for line in
                  (out / "neural" / "candidates.jsonl")
                  .read_text(encoding="utf-8").splitlines()]
    assert len(candidates) == 16
    assert all(set(row) == {"key", "code"} for row in candidates)

    verdict_rows = [json.loads(line) for line in
                    (out / "verdicts" / "transform.jsonl")
                    .read_text(encoding="utf-8").splitlines()]
    neural_rows = [r for r in verdict_rows if r["source"] == "neural"]
    assert len(neural_rows) == 16

    report = json.loads((out / "report.json")
                        .read_text(encoding="utf-8"))
    neural = report["neural"]
    assert neural["sample_count"] == 16
    assert 0.0 <= neural["transformation_success_rate"] <= 1.0
    assert isinstance(neural["error_table"], dict)
    elapsed = time.time() - started
    print(f"[ACCEPTANCE] bridge: 16 candidates through the staged "
          f"pipeline, neural success rate "
          f"{neural['transformation_success_rate']:.4f}, {elapsed:.0f}s")
