"""Acceptance battery for the full pipeline.

Each criterion is one test; every test prints one [ACCEPTANCE] line with
its measured numbers so a pytest -s run doubles as the scorecard.  The
stated runtime ceilings are asserted alongside the quality thresholds.
"""

import math
import os
import statistics
import time

import pytest

from stylomorph.attrib import (build_vocabulary, evaluate_accuracy,
                               featurize_tfidf, train_attribution)
from stylomorph.corpus import split_dataset
from stylomorph.evalcli.metrics import transformation_verdicts
from stylomorph.frontend import (bind, parse_source, print_source,
                                 same_structure)
from stylomorph.interp import (SEMANTIC_CATEGORIES, SYNTAX_CATEGORIES,
                               check_equivalence, derive_tests)
from stylomorph.mcts import Objective, SearchConfig, evade, random_baseline
from stylomorph.pairgen import build_pairs, build_style_set
from stylomorph.synth import generate_corpus
from stylomorph.transforms import TRANSFORM_IDS, apply, enumerate_actions

from taxonomy_cases import BASE, BASE_INPUTS, CANDIDATES

SEEDS = (0, 1, 2, 3, 4)
TRAIN_FRACTION = 0.875


class _InertModel:
    """Stand-in scorer for structural checks: no target ever succeeds,
    so every style slot keeps its flagged best state."""

    def predict_source(self, source):
        return "__external__", {}


@pytest.fixture(scope="module")
def seeded_models(synth_corpus):
    """One stratified split and trained attributor per seed."""
    started = time.perf_counter()
    out = {}
    for seed in SEEDS:
        train, test = split_dataset(synth_corpus, seed=seed,
                                    train_fraction=TRAIN_FRACTION)
        out[seed] = (train_attribution(train), test)
    elapsed = time.perf_counter() - started
    return out, elapsed


def test_pair_count_law():
    """n styles must yield exactly n-2 pairs per source, never touching
    the own-style slot; checked exhaustively for n in 3..10."""
    started = time.perf_counter()
    model = _InertModel()
    config = SearchConfig(iterations=1, rollout_depth=0, max_depth=1)
    checked = 0
    for n in range(3, 11):
        corpus = generate_corpus(n, seed=0)
        roster = tuple(corpus.authors)
        for unit in corpus.units:
            style_set = build_style_set(unit, roster, model, config=config)
            assert style_set.variants[style_set.own_index] is None
            assert len(style_set.usable) == n - 1
            pairs = build_pairs(style_set)
            assert len(pairs) == n - 2, (n, unit.key)
            others = [a for a in roster if a != unit.author]
            expected = list(zip(others, others[1:]))
            got = [(p.style_from, p.style_to) for p in pairs]
            assert got == expected, (n, unit.key)
            for pair in pairs:
                assert unit.author not in (pair.style_from, pair.style_to)
            checked += 1
    elapsed = time.perf_counter() - started
    print(f"[ACCEPTANCE] pair-count-law: {checked} sources over "
          f"n=3..10, all n-2 with own slot excluded, {elapsed:.1f}s")
    assert elapsed < 60


def test_transform_soundness(synth_corpus):
    """Every applicable action of every transform must preserve behavior
    on >=50 programs with >=3 tests each."""
    started = time.perf_counter()
    units = synth_corpus.units[:60]
    assert len(units) >= 50
    outputs = []
    seen_ids = set()
    for unit in units:
        assert len(unit.tests) >= 3
        ast = parse_source(unit.code)
        bind(ast)
        for action in enumerate_actions(ast):
            seen_ids.add(action.transform)
            outputs.append((unit, print_source(apply(ast, action))))
    assert seen_ids == set(TRANSFORM_IDS)
    workers = min(8, os.cpu_count() or 1)
    verdicts = transformation_verdicts(outputs, workers=workers)
    failures = [(unit.key, category)
                for (unit, _), category in zip(outputs, verdicts)
                if category is not None]
    elapsed = time.perf_counter() - started
    print(f"[ACCEPTANCE] transform-soundness: {len(outputs)} candidates "
          f"from {len(units)} programs, {len(failures)} failures, "
          f"{elapsed:.1f}s")
    assert failures == []
    assert elapsed < 600


def test_parser_round_trip(synth_corpus):
    """parse -> print -> parse must reproduce the structure of every
    corpus program."""
    started = time.perf_counter()
    bad = []
    for unit in synth_corpus.units:
        first = parse_source(unit.code)
        second = parse_source(print_source(first))
        if not same_structure(first, second):
            bad.append(unit.key)
    elapsed = time.perf_counter() - started
    print(f"[ACCEPTANCE] parser-round-trip: {len(synth_corpus.units)} "
          f"programs, {len(bad)} mismatches, {elapsed:.1f}s")
    assert bad == []
    assert elapsed < 60


def test_attribution_accuracy(seeded_models):
    """Word TF-IDF + random forest must reach 0.80 held-out accuracy on
    the 20x8 synthetic corpus, averaged over 5 split seeds."""
    models, train_elapsed = seeded_models
    started = time.perf_counter()
    accuracies = []
    for seed in SEEDS:
        model, test = models[seed]
        accuracies.append(evaluate_accuracy(model, test))
    elapsed = time.perf_counter() - started + train_elapsed
    mean = statistics.mean(accuracies)
    variance = statistics.pvariance(accuracies)
    print(f"[ACCEPTANCE] attribution: per-seed {accuracies}, "
          f"mean {mean:.4f}, variance {variance:.6f}, {elapsed:.1f}s")
    assert mean >= 0.80
    assert min(accuracies) >= 0.80
    assert elapsed < 300


def test_untargeted_evasion_beats_random(seeded_models):
    """Guided search at budget 500 must evade >=70% of held-out units and
    strictly beat the random baseline at the same budget over 5 seeds."""
    models, train_elapsed = seeded_models
    started = time.perf_counter()
    guided_total = random_total = units_total = 0
    per_seed = []
    for seed in SEEDS:
        model, test = models[seed]
        guided = blind = 0
        for unit in test.units:
            ast = parse_source(unit.code)
            bind(ast)
            objective = Objective.evade_author(unit.author)
            search = evade(ast, model, objective,
                           SearchConfig(iterations=500, rollout_depth=6,
                                        seed=seed),
                           true_author=unit.author)
            if search.success:
                guided += 1
            baseline = random_baseline(ast, model, objective, budget=500,
                                       seed=seed, true_author=unit.author)
            if baseline.success:
                blind += 1
        per_seed.append((guided, blind, len(test.units)))
        guided_total += guided
        random_total += blind
        units_total += len(test.units)
    elapsed = time.perf_counter() - started + train_elapsed
    guided_rate = guided_total / units_total
    random_rate = random_total / units_total
    print(f"[ACCEPTANCE] evasion: guided {guided_total}/{units_total} "
          f"({guided_rate:.2f}) vs random {random_total}/{units_total} "
          f"({random_rate:.2f}), per-seed {per_seed}, {elapsed:.1f}s")
    assert guided_rate >= 0.70
    assert guided_total > random_total
    assert elapsed < 1800


def test_error_taxonomy_classification():
    """Eight hand-broken candidates, one per category, must each land in
    their intended bucket with the right failure family."""
    started = time.perf_counter()
    ast = parse_source(BASE)
    bind(ast)
    tests = derive_tests(ast, BASE_INPUTS)
    assert len(CANDIDATES) == 8
    assert set(CANDIDATES) == set(SYNTAX_CATEGORIES) | set(
        SEMANTIC_CATEGORIES)
    for category, candidate in CANDIDATES.items():
        verdict = check_equivalence(ast, candidate, tests)
        assert not verdict.equivalent, category
        assert verdict.failure.category == category
        if category in SYNTAX_CATEGORIES:
            assert verdict.failure.family == "syntax"
        else:
            assert verdict.failure.family == "semantic"
    elapsed = time.perf_counter() - started
    print(f"[ACCEPTANCE] taxonomy: 8/8 candidates in their intended "
          f"categories, {elapsed:.1f}s")
    assert elapsed < 60


def test_tfidf_matches_hand_computation():
    """Toy three-document corpus against the closed-form weights."""
    docs = ["int a; int b;", "int a; a = a + 1;", "int c;"]
    vocab = build_vocabulary(docs, unit="word")
    df = dict(zip(vocab.terms, vocab.doc_freq))

    def idf(term):
        return math.log((1 + 3) / (1 + df[term])) + 1

    counts = {"int": 1, "a": 3, ";": 2, "=": 1, "+": 1, "1": 1}
    expected = {term: count * idf(term) for term, count in counts.items()
                if term in df}
    norm = math.sqrt(sum(w * w for w in expected.values()))
    expected = {t: w / norm for t, w in expected.items()}

    fv = featurize_tfidf(docs[1], vocab)
    got = {vocab.terms[i]: w for i, w in fv.entries}
    assert set(got) == set(expected)
    worst = max(abs(got[t] - w) for t, w in expected.items())
    print(f"[ACCEPTANCE] tfidf-oracle: max deviation {worst:.2e}")
    assert worst <= 1e-9
