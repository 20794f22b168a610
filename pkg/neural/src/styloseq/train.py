"""Teacher-forced training loop and checkpoint handling."""

from __future__ import annotations

import random
from pathlib import Path

import torch
from torch import nn

from .config import NeuralConfig
from .encode import ExampleSet, KindVocab, Vocab, PAD
from .model import Seq2Seq, make_batch


class Divergence(RuntimeError):
    """Training hit a non-finite loss; carries the offending epoch."""

    def __init__(self, epoch: int, value: float):
        super().__init__(
            f"non-finite loss {value!r} at epoch {epoch}; "
            f"lower the learning rate or check the data")
        self.epoch = epoch
        self.value = value


def train(examples: ExampleSet, config: NeuralConfig,
          log=None) -> dict:
    """Fits a model to the example set, returning a checkpoint dict.

    Deterministic for a fixed (seed, config, data) triple. The epoch
    mean loss history rides along in the checkpoint.
    """
    config.validate()
    if not examples:
        raise ValueError("no examples to train on")
    torch.manual_seed(config.seed)
    model = Seq2Seq(config, len(examples.vocab), len(examples.kinds))
    model.train()
    opt = torch.optim.Adam(model.parameters(), lr=config.lr)
    loss_fn = nn.CrossEntropyLoss(ignore_index=PAD)
    order = list(range(len(examples)))
    shuffler = random.Random(config.seed)
    history = []
    for epoch in range(config.epochs):
        shuffler.shuffle(order)
        total = 0.0
        count = 0
        for start in range(0, len(order), config.batch_size):
            chunk = [examples[i] for i in order[start:start +
                                               config.batch_size]]
            batch = make_batch(chunk, config)
            logits = model(batch)
            loss = loss_fn(logits.transpose(1, 2), batch["tgt_out"])
            value = float(loss.detach())
            if not torch.isfinite(loss):
                raise Divergence(epoch, value)
            opt.zero_grad()
            loss.backward()
            opt.step()
            total += value * len(chunk)
            count += len(chunk)
        history.append(total / count)
        if log:
            log(epoch, history[-1])
    return {
        "config": config.to_dict(),
        "vocab": list(examples.vocab.terms),
        "kinds": list(examples.kinds.terms),
        "state": model.state_dict(),
        "loss_history": history,
    }


def save_checkpoint(ckpt: dict, path: str | Path) -> None:
    torch.save(ckpt, str(path))


def load_checkpoint(path: str | Path) -> dict:
    return torch.load(str(path), map_location="cpu",
                      weights_only=False)


def restore(ckpt: dict) -> tuple[Seq2Seq, Vocab, KindVocab, NeuralConfig]:
    """Builds the model and vocabularies a checkpoint describes."""
    config = NeuralConfig.from_dict(ckpt["config"])
    vocab = Vocab(terms=tuple(ckpt["vocab"]))
    kinds = KindVocab(terms=tuple(ckpt["kinds"]))
    model = Seq2Seq(config, len(vocab), len(kinds))
    model.load_state_dict(ckpt["state"])
    model.eval()
    return model, vocab, kinds, config
