"""Author attribution models: featurization + random forest, bundled
with the label list and saved as versioned JSON.

Two kinds: "tfidf-rf" works on raw source text through a TF-IDF
vocabulary; "ast-rf" works on parsed structure and layout ratios.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..corpus import Corpus
from ..frontend import parse_source
from .astfeatures import AST_FEATURE_DIM, featurize_ast
from .forest import ForestConfig, RandomForest, SingleClass
from .vocab import FeatureVector, Vocabulary, build_vocabulary, featurize_tfidf

KIND_TFIDF = "tfidf-rf"
KIND_AST = "ast-rf"

MODEL_FORMAT = "attrib-model-v1"


@dataclass
class AttributionModel:
    kind: str
    labels: list[str]
    forest: RandomForest
    vocabulary: Vocabulary | None = None

    # --- featurization ----------------------------------------------------

    def featurize(self, source: str) -> FeatureVector:
        if self.kind == KIND_TFIDF:
            return featurize_tfidf(source, self.vocabulary)
        return featurize_ast(parse_source(source), source)

    # --- prediction -------------------------------------------------------

    def predict(self, features: FeatureVector) -> tuple[str, dict[str, float]]:
        dist = self.forest.predict_dist(features.dense())
        author = self.labels[int(np.argmax(dist))]
        return author, {label: float(p)
                        for label, p in zip(self.labels, dist)}

    def predict_source(self, source: str) -> tuple[str, dict[str, float]]:
        return self.predict(self.featurize(source))

    def evaluate_accuracy(self, test: Corpus) -> float:
        if not test.units:
            raise ValueError("empty test corpus")
        hits = 0
        for unit in test.units:
            author, _ = self.predict_source(unit.code)
            hits += author == unit.author
        return hits / len(test.units)

    # --- persistence ------------------------------------------------------

    def save(self, path: str | Path) -> None:
        payload = {"format": MODEL_FORMAT, "kind": self.kind,
                   "labels": self.labels,
                   "forest": self.forest.to_dict()}
        if self.vocabulary is not None:
            payload["vocabulary"] = {
                "terms": list(self.vocabulary.terms),
                "doc_freq": list(self.vocabulary.doc_freq),
                "n_docs": self.vocabulary.n_docs,
                "unit": self.vocabulary.unit,
                "ngram": self.vocabulary.ngram,
            }
        Path(path).write_text(json.dumps(payload), encoding="utf-8")

    @staticmethod
    def load(path: str | Path) -> "AttributionModel":
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
        if payload.get("format") != MODEL_FORMAT:
            raise ValueError(f"unrecognized model file {path}")
        vocab = None
        if "vocabulary" in payload:
            raw = payload["vocabulary"]
            vocab = Vocabulary(terms=tuple(raw["terms"]),
                               doc_freq=tuple(raw["doc_freq"]),
                               n_docs=int(raw["n_docs"]),
                               unit=raw["unit"], ngram=int(raw["ngram"]))
        return AttributionModel(kind=payload["kind"],
                                labels=list(payload["labels"]),
                                forest=RandomForest.from_dict(
                                    payload["forest"]),
                                vocabulary=vocab)


def train_rf(features: list[FeatureVector], labels: list[str],
             config: ForestConfig | None = None,
             kind: str = KIND_TFIDF,
             vocabulary: Vocabulary | None = None) -> AttributionModel:
    """Trains a forest over already-featurized units."""
    if len(features) != len(labels):
        raise ValueError("features and labels differ in length")
    classes = sorted(set(labels))
    if len(classes) < 2:
        raise SingleClass("training needs at least two distinct authors")
    class_index = {c: i for i, c in enumerate(classes)}
    X = np.stack([fv.dense() for fv in features])
    y = np.array([class_index[label] for label in labels])
    forest = RandomForest.fit(X, y, len(classes), config)
    return AttributionModel(kind=kind, labels=classes, forest=forest,
                            vocabulary=vocabulary)


def train_attribution(corpus: Corpus, kind: str = KIND_TFIDF,
                      config: ForestConfig | None = None,
                      max_terms: int = 2500,
                      vocab_unit: str = "word",
                      ngram: int = 3) -> AttributionModel:
    """End-to-end training from a corpus."""
    if kind == KIND_TFIDF:
        vocab = build_vocabulary(corpus, unit=vocab_unit, ngram=ngram,
                                 max_terms=max_terms)
        features = [featurize_tfidf(u.code, vocab) for u in corpus.units]
    elif kind == KIND_AST:
        vocab = None
        features = [featurize_ast(parse_source(u.code), u.code)
                    for u in corpus.units]
    else:
        raise ValueError(f"unknown model kind {kind!r}")
    labels = [u.author for u in corpus.units]
    return train_rf(features, labels, config, kind=kind, vocabulary=vocab)


def predict(model: AttributionModel,
            features: FeatureVector) -> tuple[str, dict[str, float]]:
    return model.predict(features)


def evaluate_accuracy(model: AttributionModel, test: Corpus) -> float:
    return model.evaluate_accuracy(test)
