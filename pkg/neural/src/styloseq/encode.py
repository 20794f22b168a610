"""Pair-file reading and example preparation.

Tokenization never happens here: every program is encoded by the
stylomorph command-line tool in a subprocess, so both sides of the
project share one tokenizer, one leaf-path extractor, and one data-flow
graph builder. This module only shapes that JSON into padded id tensors.
"""

from __future__ import annotations

import json
import shutil
import subprocess
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .config import NeuralConfig

PAD, BOS, EOS, UNK = 0, 1, 2, 3
SPECIALS = ("<pad>", "<bos>", "<eos>", "<unk>")
KIND_PAD = 0


class SchemaError(ValueError):
    """The pairs file is empty or a row misses required fields."""


class EncoderUnavailable(RuntimeError):
    """The stylomorph encode subprocess could not run."""


def default_encode_cmd() -> list[str]:
    """Command prefix for the shared tokenizer subprocess."""
    exe = shutil.which("stylomorph")
    if exe:
        return [exe]
    return [sys.executable, "-m", "stylomorph.cli"]


def encode_pairs_file(pairs_path: str | Path,
                      encode_cmd: list[str] | None = None) -> list[dict]:
    """Runs the batch encoder once over a pairs JSONL file."""
    cmd = list(encode_cmd or default_encode_cmd())
    cmd += ["encode", "--pairs", str(pairs_path)]
    proc = subprocess.run(cmd, capture_output=True, text=True)
    if proc.returncode != 0:
        raise EncoderUnavailable(
            f"{' '.join(cmd)} failed: {proc.stderr.strip()}")
    return [json.loads(line) for line in proc.stdout.splitlines()
            if line.strip()]


def encode_source(source: str,
                  encode_cmd: list[str] | None = None) -> dict:
    """Encodes one program text through the subprocess boundary."""
    cmd = list(encode_cmd or default_encode_cmd()) + ["encode", "-"]
    proc = subprocess.run(cmd, input=source, capture_output=True, text=True)
    if proc.returncode != 0:
        raise EncoderUnavailable(
            f"encode failed: {proc.stderr.strip()}")
    return json.loads(proc.stdout)


@dataclass
class Vocab:
    """Token-text vocabulary with fixed special ids."""

    terms: tuple

    def __post_init__(self):
        self._index = {t: i for i, t in enumerate(self.terms)}

    @staticmethod
    def build(texts) -> "Vocab":
        seen = sorted(set(texts))
        return Vocab(terms=SPECIALS + tuple(seen))

    def __len__(self):
        return len(self.terms)

    def id_of(self, text: str) -> int:
        return self._index.get(text, UNK)

    def text_of(self, idx: int) -> str:
        return self.terms[idx]


@dataclass
class KindVocab:
    """Node-kind vocabulary for leaf paths; 0 is padding."""

    terms: tuple

    def __post_init__(self):
        self._index = {t: i for i, t in enumerate(self.terms)}

    @staticmethod
    def build(kinds) -> "KindVocab":
        return KindVocab(terms=("<pad>",) + tuple(sorted(set(kinds))))

    def __len__(self):
        return len(self.terms)

    def id_of(self, kind: str) -> int:
        return self._index.get(kind, KIND_PAD)


@dataclass
class EncodedExample:
    """One training pair in id space.

    path_kinds is aligned with src_ids: position i holds the kind-id
    sequence of the leaf path ending at source token i, empty when the
    token is not a leaf. dfg_edges are (i, j) positions into src_ids.
    """

    src_ids: list
    tgt_ids: list
    path_kinds: list
    dfg_edges: list
    overlong: bool
    author: str = ""
    style_from: str = ""
    style_to: str = ""


class ExampleSet(list):
    """A list of EncodedExample carrying its vocabularies."""

    def __init__(self, examples, vocab: Vocab, kinds: KindVocab,
                 overlong_count: int):
        super().__init__(examples)
        self.vocab = vocab
        self.kinds = kinds
        self.overlong_count = overlong_count


def _shape_side(enc: dict, config: NeuralConfig,
                with_structure: bool) -> tuple:
    """Applies the caps to one encoded program.

    Returns (texts, paths_by_position, edges, overlong).
    """
    texts = [text for _, text in enc["tokens"]]
    overlong = False
    if len(texts) > config.max_io_len:
        texts = texts[:config.max_io_len]
        overlong = True
    if not with_structure:
        return texts, {}, [], overlong

    paths = {}
    kept = 0
    for token_index, kinds in enc["paths"]:
        if token_index >= len(texts):
            overlong = True
            continue
        if kept >= config.max_ast:
            overlong = True
            continue
        if len(kinds) > config.max_ast_depth:
            # keep the leaf end of the path
            kinds = kinds[-config.max_ast_depth:]
            overlong = True
        paths[token_index] = list(kinds)
        kept += 1

    edges = []
    endpoints = set()
    for a, b in enc["dfg_edges"]:
        if a >= len(texts) or b >= len(texts):
            overlong = True
            continue
        grown = {a, b} - endpoints
        if len(endpoints) + len(grown) > config.max_dfg:
            overlong = True
            continue
        endpoints |= grown
        edges.append((a, b))
    return texts, paths, edges, overlong


def prepare_examples(jsonl_path: str | Path, config: NeuralConfig,
                     encode_cmd: list[str] | None = None) -> ExampleSet:
    """Reads a pairs JSONL file into capped, id-mapped examples.

    The vocabulary is built from the file itself; overlong sides are
    truncated at the caps and flagged, never dropped.
    """
    config.validate()
    path = Path(jsonl_path)
    lines = [line for line in
             path.read_text(encoding="utf-8").splitlines()
             if line.strip()]
    if not lines:
        raise SchemaError(f"{path}: no pairs")
    for lineno, line in enumerate(lines, start=1):
        try:
            row = json.loads(line)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"{path}:{lineno}: bad JSON: {exc}") \
                from exc
        missing = {"src", "tgt"} - set(row)
        if missing:
            raise SchemaError(
                f"{path}:{lineno}: missing fields {sorted(missing)}")
    rows = encode_pairs_file(path, encode_cmd=encode_cmd)
    for lineno, row in enumerate(rows, start=1):
        if "src_enc" not in row or "tgt_enc" not in row:
            raise SchemaError(
                f"{path}:{lineno}: encoder returned no structure")

    shaped = []
    all_texts = []
    all_kinds = []
    for row in rows:
        src_texts, paths, edges, over_src = _shape_side(
            row["src_enc"], config, with_structure=True)
        tgt_texts, _, _, over_tgt = _shape_side(
            row["tgt_enc"], config, with_structure=False)
        shaped.append((row, src_texts, paths, edges, tgt_texts,
                       over_src or over_tgt))
        all_texts.extend(src_texts)
        all_texts.extend(tgt_texts)
        for kinds in paths.values():
            all_kinds.extend(kinds)

    vocab = Vocab.build(all_texts)
    kind_vocab = KindVocab.build(all_kinds)
    examples = []
    overlong_count = 0
    for row, src_texts, paths, edges, tgt_texts, overlong in shaped:
        if overlong:
            overlong_count += 1
        examples.append(EncodedExample(
            src_ids=[vocab.id_of(t) for t in src_texts],
            tgt_ids=[vocab.id_of(t) for t in tgt_texts],
            path_kinds=[[kind_vocab.id_of(k) for k in paths.get(i, [])]
                        for i in range(len(src_texts))],
            dfg_edges=edges,
            overlong=overlong,
            author=row.get("author", ""),
            style_from=row.get("from", ""),
            style_to=row.get("to", ""),
        ))
    return ExampleSet(examples, vocab, kind_vocab, overlong_count)


def example_from_source(source: str, config: NeuralConfig, vocab: Vocab,
                        kinds: KindVocab,
                        encode_cmd: list[str] | None = None,
                        ) -> EncodedExample:
    """Shapes a single program for inference with a trained vocabulary."""
    enc = encode_source(source, encode_cmd=encode_cmd)
    texts, paths, edges, overlong = _shape_side(enc, config,
                                                with_structure=True)
    return EncodedExample(
        src_ids=[vocab.id_of(t) for t in texts],
        tgt_ids=[],
        path_kinds=[[kinds.id_of(k) for k in paths.get(i, [])]
                    for i in range(len(texts))],
        dfg_edges=edges,
        overlong=overlong,
    )


def detokenize(texts) -> str:
    """Token texts back to a program string.

    Space joining is lossless here: the subset lexer maps the joined
    text back to the identical token sequence.
    """
    return " ".join(texts)
