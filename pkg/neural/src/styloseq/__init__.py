"""Structure-aware sequence-to-sequence learner for style pairs.

Consumes the stylomorph toolkit strictly through its command line:
pair datasets come in as JSONL, and all tokenization happens in an
encode subprocess so both packages share one frontend.
"""

from .config import NeuralConfig
from .decode import DecodeOverflow, beam_decode, greedy_decode, transform
from .encode import (EncodedExample, ExampleSet, KindVocab, SchemaError,
                     Vocab, detokenize, encode_source, prepare_examples)
from .model import Seq2Seq, make_batch
from .train import (Divergence, load_checkpoint, restore,
                    save_checkpoint, train)

__all__ = [
    "NeuralConfig",
    "DecodeOverflow",
    "beam_decode",
    "greedy_decode",
    "transform",
    "EncodedExample",
    "ExampleSet",
    "KindVocab",
    "SchemaError",
    "Vocab",
    "detokenize",
    "encode_source",
    "prepare_examples",
    "Seq2Seq",
    "make_batch",
    "Divergence",
    "load_checkpoint",
    "restore",
    "save_checkpoint",
    "train",
]
