"""Decoding: beam search with greedy as the width-1 special case."""

from __future__ import annotations

import torch

from .encode import (BOS, EOS, EncodedExample, detokenize,
                     example_from_source)
from .model import make_batch
from .train import restore


class DecodeOverflow(RuntimeError):
    """No hypothesis finished within the output length cap."""


def beam_decode(model, example: EncodedExample, width: int = 1,
                max_len: int | None = None) -> list:
    """Returns the best finished token-id sequence (BOS/EOS stripped).

    Hypotheses are ranked by total log probability. width=1 is exactly
    greedy decoding: each step keeps the single argmax continuation.
    """
    if width < 1:
        raise ValueError("beam width must be >= 1")
    config = model.config
    cap = max_len if max_len is not None else config.max_io_len
    model.eval()
    with torch.no_grad():
        batch = make_batch([example], config)
        memory, mem_pad = model.encode(batch["src"], batch["path_kinds"],
                                       batch["path_mask"],
                                       batch["adjacency"])
        beams = [([BOS], 0.0)]
        finished = []
        for _ in range(cap):
            grown = []
            for seq, score in beams:
                tgt = torch.tensor([seq], dtype=torch.long)
                logits = model.decode(tgt, memory, mem_pad)
                logprobs = torch.log_softmax(logits[0, -1], dim=-1)
                top = torch.topk(logprobs, k=min(width,
                                                 logprobs.shape[0]))
                for lp, tok in zip(top.values.tolist(),
                                   top.indices.tolist()):
                    grown.append((seq + [tok], score + lp))
            grown.sort(key=lambda pair: -pair[1])
            beams = []
            for seq, score in grown:
                if seq[-1] == EOS:
                    finished.append((seq, score))
                else:
                    beams.append((seq, score))
                if len(beams) >= width:
                    break
            if not beams:
                break
            if finished and len(finished) >= width:
                break
        if not finished:
            raise DecodeOverflow(
                f"no sequence finished within {cap} tokens")
        best = max(finished, key=lambda pair: pair[1])[0]
        return best[1:-1]


def greedy_decode(model, example: EncodedExample,
                  max_len: int | None = None) -> list:
    return beam_decode(model, example, width=1, max_len=max_len)


def transform(ckpt: dict, source: str, decode: str = "greedy",
              encode_cmd: list[str] | None = None) -> str:
    """Rewrites one program through a trained model.

    decode is "greedy" or "beam:K". The source is tokenized by the same
    subprocess encoder used at training time; unseen tokens map to the
    unknown id.
    """
    model, vocab, kinds, config = restore(ckpt)
    example = example_from_source(source, config, vocab, kinds,
                                  encode_cmd=encode_cmd)
    if decode == "greedy":
        width = 1
    elif decode.startswith("beam:"):
        width = int(decode.split(":", 1)[1])
    else:
        raise ValueError(f"unknown decode mode {decode!r}")
    ids = beam_decode(model, example, width=width)
    return detokenize([vocab.text_of(i) for i in ids])
