"""Structural stylometry features.

The vector concatenates normalized AST node-kind frequencies, mean and
max leaf-path depth, and three layout ratios read off the raw text:
tab share of indentation whitespace, fraction of opening braces that
start their own line, and blank-line fraction. L2-normalized.
"""

from __future__ import annotations

import math

from ..frontend import NODE_KINDS, extract_leaf_paths
from ..frontend.astnodes import KIND_INDEX, Program, walk
from .vocab import FeatureVector

AST_FEATURE_DIM = len(NODE_KINDS) + 2 + 3


def layout_ratios(source: str) -> tuple[float, float, float]:
    tabs = source.count("\t")
    spaces = source.count(" ")
    tab_share = tabs / (tabs + spaces) if tabs + spaces else 0.0

    lines = source.split("\n")
    open_braces = source.count("{")
    own_line = sum(1 for line in lines if line.lstrip().startswith("{"))
    brace_share = own_line / open_braces if open_braces else 0.0

    blank = sum(1 for line in lines if not line.strip())
    blank_share = blank / len(lines) if lines else 0.0
    return tab_share, brace_share, blank_share


def featurize_ast(ast: Program, layout: str = "") -> FeatureVector:
    counts = [0] * len(NODE_KINDS)
    total = 0
    for node in walk(ast):
        counts[KIND_INDEX[node.kind]] += 1
        total += 1
    freqs = [c / total for c in counts] if total else counts

    paths = extract_leaf_paths(ast)
    depths = [p.depth for p in paths]
    mean_depth = sum(depths) / len(depths) if depths else 0.0
    max_depth = float(max(depths)) if depths else 0.0

    values = freqs + [mean_depth, max_depth] + list(layout_ratios(layout))
    norm = math.sqrt(sum(v * v for v in values))
    if norm > 0:
        values = [v / norm for v in values]
    entries = tuple((i, v) for i, v in enumerate(values) if v != 0.0)
    return FeatureVector(entries=entries, dim=AST_FEATURE_DIM)
