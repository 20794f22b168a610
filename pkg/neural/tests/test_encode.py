"""Example preparation through the encode subprocess."""

import json

import pytest

from styloseq import NeuralConfig, SchemaError, prepare_examples
from styloseq.encode import (BOS, EOS, PAD, UNK, SPECIALS, Vocab,
                             detokenize, encode_source)

from conftest import TINY_PROGRAMS, write_pairs


def test_special_ids_are_fixed():
    assert (PAD, BOS, EOS, UNK) == (0, 1, 2, 3)
    vocab = Vocab.build(["b", "a"])
    assert vocab.terms[:4] == SPECIALS
    assert vocab.id_of("missing-token") == UNK


def test_empty_pairs_file_rejected(tmp_path):
    path = tmp_path / "empty.jsonl"
    path.write_text("", encoding="utf-8")
    with pytest.raises(SchemaError, match="no pairs"):
        prepare_examples(path, NeuralConfig())


def test_missing_field_rejected(tmp_path):
    path = write_pairs(tmp_path / "bad.jsonl",
                       [{"src": TINY_PROGRAMS[0], "author": "a",
                         "from": "x", "to": "y"}])
    with pytest.raises(SchemaError, match="tgt"):
        prepare_examples(path, NeuralConfig())


def test_token_ids_match_direct_encode(tiny_pairs):
    examples = prepare_examples(tiny_pairs, NeuralConfig())
    assert len(examples) == 3
    for example, src in zip(examples, TINY_PROGRAMS):
        enc = encode_source(src)
        texts = [text for _, text in enc["tokens"]]
        assert [examples.vocab.text_of(i) for i in example.src_ids] \
            == texts
        assert len(example.path_kinds) == len(texts)


def test_structure_alignment(tiny_pairs):
    examples = prepare_examples(tiny_pairs, NeuralConfig())
    for example in examples:
        n = len(example.src_ids)
        assert all(0 <= a < n and 0 <= b < n
                   for a, b in example.dfg_edges)
        assert any(example.path_kinds), "no leaf paths at all"
        for kinds in example.path_kinds:
            assert all(k > 0 for k in kinds)


def test_truncation_flags_but_keeps(tiny_pairs):
    config = NeuralConfig(max_io_len=10)
    examples = prepare_examples(tiny_pairs, config)
    assert len(examples) == 3
    assert examples.overlong_count == 3
    for example in examples:
        assert example.overlong
        assert len(example.src_ids) == 10
        assert len(example.tgt_ids) == 10


def test_path_depth_cap(tiny_pairs):
    config = NeuralConfig(max_ast_depth=2)
    examples = prepare_examples(tiny_pairs, config)
    for example in examples:
        assert all(len(k) <= 2 for k in example.path_kinds)
    assert examples.overlong_count == 3


def test_path_count_cap(tiny_pairs):
    config = NeuralConfig(max_ast=1)
    examples = prepare_examples(tiny_pairs, config)
    for example in examples:
        assert sum(1 for k in example.path_kinds if k) == 1
        assert example.overlong


def test_dfg_node_cap(tiny_pairs):
    full = prepare_examples(tiny_pairs, NeuralConfig())
    capped = prepare_examples(tiny_pairs, NeuralConfig(max_dfg=2))
    for a, b in zip(full, capped):
        endpoints = {i for edge in b.dfg_edges for i in edge}
        assert len(endpoints) <= 2
        assert len(b.dfg_edges) <= len(a.dfg_edges)


def test_detokenize_round_trips_through_encoder(tiny_pairs):
    examples = prepare_examples(tiny_pairs, NeuralConfig())
    for example in examples:
        texts = [examples.vocab.text_of(i) for i in example.src_ids]
        enc = encode_source(detokenize(texts))
        assert [t for _, t in enc["tokens"]] == texts


def test_overlong_none_by_default(tiny_pairs):
    examples = prepare_examples(tiny_pairs, NeuralConfig())
    assert examples.overlong_count == 0
    assert not any(e.overlong for e in examples)


def test_metadata_carried(tiny_pairs):
    examples = prepare_examples(tiny_pairs, NeuralConfig())
    assert [e.author for e in examples] == ["au0", "au1", "au2"]
    assert {e.style_from for e in examples} == {"s1"}
    assert {e.style_to for e in examples} == {"s2"}
