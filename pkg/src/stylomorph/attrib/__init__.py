"""Stylometric features and author classification."""

from .vocab import (EmptyCorpus, FeatureVector, Vocabulary, build_vocabulary,
                    char_ngram_terms, featurize_tfidf, word_terms)
from .astfeatures import AST_FEATURE_DIM, featurize_ast, layout_ratios
from .forest import (DecisionTree, DimensionMismatch, ForestConfig,
                     RandomForest, SingleClass)
from .model import (KIND_AST, KIND_TFIDF, AttributionModel, evaluate_accuracy,
                    predict, train_attribution, train_rf)

__all__ = [
    "EmptyCorpus", "FeatureVector", "Vocabulary", "build_vocabulary",
    "char_ngram_terms", "featurize_tfidf", "word_terms",
    "AST_FEATURE_DIM", "featurize_ast", "layout_ratios",
    "DecisionTree", "DimensionMismatch", "ForestConfig", "RandomForest",
    "SingleClass",
    "KIND_AST", "KIND_TFIDF", "AttributionModel", "evaluate_accuracy",
    "predict", "train_attribution", "train_rf",
]
