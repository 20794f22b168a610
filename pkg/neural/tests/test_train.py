"""Training loop behavior and checkpoint contents."""

import pytest
import torch

from styloseq import NeuralConfig
from styloseq.train import (Divergence, load_checkpoint, restore,
                            save_checkpoint, train)

from conftest import toy_examples

SMALL = NeuralConfig(d=16, heads=2, layers=1, max_io_len=32, epochs=5,
                     seed=0)


def test_history_has_one_entry_per_epoch():
    ckpt = train(toy_examples(), SMALL)
    assert len(ckpt["loss_history"]) == 5
    assert all(isinstance(x, float) for x in ckpt["loss_history"])


def test_loss_drops_on_toy_data():
    history = train(toy_examples(), SMALL)["loss_history"]
    assert history[-1] < history[0]


def test_checkpoint_echoes_config():
    ckpt = train(toy_examples(), SMALL)
    assert ckpt["config"] == SMALL.to_dict()
    assert NeuralConfig.from_dict(ckpt["config"]) == SMALL


def test_checkpoint_carries_vocabularies():
    examples = toy_examples()
    ckpt = train(examples, SMALL)
    assert tuple(ckpt["vocab"]) == examples.vocab.terms
    assert tuple(ckpt["kinds"]) == examples.kinds.terms


def test_empty_training_set_rejected():
    examples = toy_examples()
    empty = type(examples)([], examples.vocab, examples.kinds, 0)
    with pytest.raises(ValueError, match="no examples"):
        train(empty, SMALL)


def test_divergence_aborts_with_diagnostic():
    wild = NeuralConfig(d=16, heads=2, layers=1, max_io_len=32,
                        epochs=6, seed=0, lr=1e32)
    with pytest.raises(Divergence, match="non-finite loss"):
        train(toy_examples(), wild)
    try:
        train(toy_examples(), wild)
    except Divergence as exc:
        assert exc.epoch >= 0
        assert exc.value != exc.value or exc.value in (
            float("inf"), float("-inf"))


def test_save_load_round_trip(tmp_path):
    ckpt = train(toy_examples(), SMALL)
    path = tmp_path / "model.pt"
    save_checkpoint(ckpt, path)
    loaded = load_checkpoint(path)
    assert loaded["config"] == ckpt["config"]
    assert loaded["loss_history"] == ckpt["loss_history"]
    for name, tensor in ckpt["state"].items():
        assert torch.equal(tensor, loaded["state"][name])
    model, vocab, kinds, config = restore(loaded)
    assert config == SMALL
    assert len(vocab) == len(toy_examples().vocab)
