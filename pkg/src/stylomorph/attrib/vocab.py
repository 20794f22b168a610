"""TF-IDF vocabulary and featurization.

Weights follow weight(t) = count(t) * (ln((1+n_docs)/(1+doc_freq(t))) + 1),
L2-normalized per document. Vocabulary terms are ordered by document
frequency descending with ties broken by term text, then capped.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from ..frontend import tokenize


class EmptyCorpus(Exception):
    pass


@dataclass(frozen=True)
class Vocabulary:
    terms: tuple[str, ...]
    doc_freq: tuple[int, ...]
    n_docs: int
    unit: str = "word"
    ngram: int = 3

    @cached_property
    def index(self) -> dict[str, int]:
        return {term: i for i, term in enumerate(self.terms)}

    @cached_property
    def idf(self) -> tuple[float, ...]:
        return tuple(math.log((1 + self.n_docs) / (1 + df)) + 1
                     for df in self.doc_freq)

    def __len__(self) -> int:
        return len(self.terms)


@dataclass(frozen=True)
class FeatureVector:
    entries: tuple[tuple[int, float], ...]
    dim: int

    def dense(self) -> np.ndarray:
        out = np.zeros(self.dim)
        for idx, weight in self.entries:
            out[idx] = weight
        return out

    @staticmethod
    def from_dense(values: np.ndarray) -> "FeatureVector":
        entries = tuple((int(i), float(v)) for i, v in enumerate(values)
                        if v != 0.0)
        return FeatureVector(entries=entries, dim=len(values))


def word_terms(source: str) -> list[str]:
    """Code-token lexemes. Comments, whitespace, and bare punctuation
    (parens, braces, semicolons, commas) are excluded; keywords,
    identifiers, literals, and operators all count."""
    return [tok.text for tok in tokenize(source).tokens
            if tok.kind != "punctuation"]


def char_ngram_terms(source: str, n: int) -> list[str]:
    return [source[i:i + n] for i in range(len(source) - n + 1)]


def _terms_of(source: str, unit: str, ngram: int) -> list[str]:
    if unit == "word":
        return word_terms(source)
    if unit == "char-ngram":
        return char_ngram_terms(source, ngram)
    raise ValueError(f"unknown vocabulary unit {unit!r}")


def _documents(corpus) -> list[str]:
    if hasattr(corpus, "units"):
        return [u.code for u in corpus.units]
    return list(corpus)


def build_vocabulary(corpus, unit: str = "word", ngram: int = 3,
                     max_terms: int = 2500) -> Vocabulary:
    docs = _documents(corpus)
    if not docs:
        raise EmptyCorpus("vocabulary needs at least one document")
    df: Counter[str] = Counter()
    for doc in docs:
        df.update(set(_terms_of(doc, unit, ngram)))
    ranked = sorted(df.items(), key=lambda kv: (-kv[1], kv[0]))[:max_terms]
    return Vocabulary(terms=tuple(t for t, _ in ranked),
                      doc_freq=tuple(f for _, f in ranked),
                      n_docs=len(docs), unit=unit, ngram=ngram)


def featurize_tfidf(source: str, vocab: Vocabulary) -> FeatureVector:
    counts = Counter(_terms_of(source, vocab.unit, vocab.ngram))
    raw: list[tuple[int, float]] = []
    for term, count in counts.items():
        idx = vocab.index.get(term)
        if idx is not None:
            raw.append((idx, count * vocab.idf[idx]))
    norm = math.sqrt(sum(w * w for _, w in raw))
    if norm > 0:
        raw = [(i, w / norm) for i, w in raw]
    raw.sort()
    return FeatureVector(entries=tuple(raw), dim=len(vocab))
