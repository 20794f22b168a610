"""Random forest on dense feature matrices.

CART trees with Gini impurity, bootstrap sampling, and a fresh
sqrt(dim)-sized feature subset at every split. Leaves store class
distributions; the ensemble prediction is the mean of the leaf
distributions across trees. Zero-gain splits are taken when no better
one exists so that a single unlimited-depth tree separates any
consistently labeled data.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


class SingleClass(Exception):
    pass


class DimensionMismatch(Exception):
    pass


@dataclass(frozen=True)
class ForestConfig:
    n_trees: int = 300
    max_depth: int | None = None
    min_leaf: int = 1
    seed: int = 0
    bootstrap: bool = True
    feature_subset: str = "sqrt"  # "sqrt" or "all"


class DecisionTree:
    """Flat-array tree. Node i is a leaf iff left[i] < 0."""

    def __init__(self):
        self.feature: list[int] = []
        self.threshold: list[float] = []
        self.left: list[int] = []
        self.right: list[int] = []
        self.dist: list[list[float]] = []

    def _add_node(self) -> int:
        self.feature.append(-1)
        self.threshold.append(0.0)
        self.left.append(-1)
        self.right.append(-1)
        self.dist.append([])
        return len(self.feature) - 1

    def predict_dist(self, x: np.ndarray) -> np.ndarray:
        node = 0
        while self.left[node] >= 0:
            if x[self.feature[node]] <= self.threshold[node]:
                node = self.left[node]
            else:
                node = self.right[node]
        return np.asarray(self.dist[node])

    def to_dict(self) -> dict:
        return {"feature": self.feature, "threshold": self.threshold,
                "left": self.left, "right": self.right, "dist": self.dist}

    @staticmethod
    def from_dict(data: dict) -> "DecisionTree":
        tree = DecisionTree()
        tree.feature = [int(v) for v in data["feature"]]
        tree.threshold = [float(v) for v in data["threshold"]]
        tree.left = [int(v) for v in data["left"]]
        tree.right = [int(v) for v in data["right"]]
        tree.dist = [[float(v) for v in row] for row in data["dist"]]
        return tree


def _best_split(X: np.ndarray, y: np.ndarray, idx: np.ndarray,
                features: np.ndarray, n_classes: int, min_leaf: int):
    """Returns (impurity, feature, threshold) of the best valid split,
    or None when no feature admits one."""
    n = len(idx)
    labels = y[idx]
    onehot = np.zeros((n, n_classes))
    onehot[np.arange(n), labels] = 1.0
    best = None
    for f in features:
        values = X[idx, f]
        order = np.argsort(values, kind="stable")
        sv = values[order]
        cum = np.cumsum(onehot[order], axis=0)
        total = cum[-1]
        nl = np.arange(1, n)
        nr = n - nl
        valid = (sv[:-1] < sv[1:]) & (nl >= min_leaf) & (nr >= min_leaf)
        if not valid.any():
            continue
        lc = cum[:-1]
        rc = total - lc
        gini_l = 1.0 - ((lc / nl[:, None]) ** 2).sum(axis=1)
        gini_r = 1.0 - ((rc / nr[:, None]) ** 2).sum(axis=1)
        weighted = (nl * gini_l + nr * gini_r) / n
        weighted[~valid] = np.inf
        pos = int(np.argmin(weighted))
        imp = float(weighted[pos])
        if best is None or imp < best[0]:
            thr = float((sv[pos] + sv[pos + 1]) / 2.0)
            best = (imp, int(f), thr)
    return best


def _grow(tree: DecisionTree, X: np.ndarray, y: np.ndarray,
          idx: np.ndarray, depth: int, config: ForestConfig,
          n_classes: int, rng: np.random.Generator) -> int:
    node = tree._add_node()
    labels = y[idx]
    counts = np.bincount(labels, minlength=n_classes).astype(float)
    tree.dist[node] = (counts / counts.sum()).tolist()
    pure = counts.max() == counts.sum()
    at_depth = config.max_depth is not None and depth >= config.max_depth
    if pure or at_depth or len(idx) < 2 * config.min_leaf:
        return node
    dim = X.shape[1]
    if config.feature_subset == "sqrt":
        k = max(1, int(math.sqrt(dim)))
        features = np.sort(rng.choice(dim, size=min(k, dim), replace=False))
    else:
        features = np.arange(dim)
    best = _best_split(X, y, idx, features, n_classes, config.min_leaf)
    if best is None:
        return node
    _, f, thr = best
    mask = X[idx, f] <= thr
    tree.feature[node] = f
    tree.threshold[node] = thr
    tree.left[node] = _grow(tree, X, y, idx[mask], depth + 1, config,
                            n_classes, rng)
    tree.right[node] = _grow(tree, X, y, idx[~mask], depth + 1, config,
                             n_classes, rng)
    return node


class RandomForest:
    def __init__(self, trees: list[DecisionTree], n_classes: int, dim: int):
        self.trees = trees
        self.n_classes = n_classes
        self.dim = dim

    @staticmethod
    def fit(X: np.ndarray, y: np.ndarray, n_classes: int,
            config: ForestConfig | None = None) -> "RandomForest":
        config = config or ForestConfig()
        n, dim = X.shape
        if len(np.unique(y)) < 2:
            raise SingleClass("training needs at least two classes")
        trees = []
        for t in range(config.n_trees):
            rng = np.random.default_rng((config.seed, t))
            if config.bootstrap:
                idx = rng.integers(0, n, size=n)
            else:
                idx = np.arange(n)
            tree = DecisionTree()
            _grow(tree, X, y, idx, 0, config, n_classes, rng)
            trees.append(tree)
        return RandomForest(trees, n_classes, dim)

    def predict_dist(self, x: np.ndarray) -> np.ndarray:
        if len(x) != self.dim:
            raise DimensionMismatch(f"expected dim {self.dim}, got {len(x)}")
        acc = np.zeros(self.n_classes)
        for tree in self.trees:
            acc += tree.predict_dist(x)
        return acc / len(self.trees)

    def to_dict(self) -> dict:
        return {"n_classes": self.n_classes, "dim": self.dim,
                "trees": [t.to_dict() for t in self.trees]}

    @staticmethod
    def from_dict(data: dict) -> "RandomForest":
        trees = [DecisionTree.from_dict(t) for t in data["trees"]]
        return RandomForest(trees, int(data["n_classes"]), int(data["dim"]))
