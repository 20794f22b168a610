"""Verification metrics: verdict batching, rates, report invariants."""

import pytest

from stylomorph.corpus import SourceUnit
from stylomorph.evalcli.metrics import (NO_TESTS_CATEGORY, WORKERS_ENV,
                                        EmptyOutputs, MetricsReport,
                                        evasion_success_rate,
                                        evasion_verdicts, render_report,
                                        resolve_workers,
                                        transformation_success_rate,
                                        transformation_verdicts)
from stylomorph.frontend import bind, parse_source
from stylomorph.interp import derive_tests

from taxonomy_cases import BASE, BASE_INPUTS, CANDIDATES


@pytest.fixture(scope="module")
def base_unit():
    ast = parse_source(BASE)
    bind(ast)
    tests = derive_tests(ast, BASE_INPUTS)
    return SourceUnit(author="alice", challenge="sum", code=BASE,
                      tests=tuple(tests))


def test_verdicts_align_with_inputs(base_unit):
    outputs = [
        (base_unit, BASE),                                   # equivalent
        (base_unit, CANDIDATES["undeclared-variable"]),
        (base_unit, CANDIDATES["misused-variable"]),
    ]
    verdicts = transformation_verdicts(outputs)
    assert verdicts == [None, "undeclared-variable", "misused-variable"]


def test_no_tests_bucket(base_unit):
    bare = SourceUnit(author="alice", challenge="bare", code=BASE, tests=())
    verdicts = transformation_verdicts([(bare, BASE), (base_unit, BASE)])
    assert verdicts == [NO_TESTS_CATEGORY, None]


def test_parallel_matches_serial(base_unit):
    outputs = [(base_unit, BASE),
               (base_unit, CANDIDATES["output-statement"]),
               (base_unit, CANDIDATES["return-statement"]),
               (base_unit, CANDIDATES["other"])]
    assert (transformation_verdicts(outputs, workers=2)
            == transformation_verdicts(outputs, workers=1))


def test_success_rate_and_table(base_unit):
    outputs = [(base_unit, BASE)] * 3 + [
        (base_unit, CANDIDATES["input-statement"]),
    ]
    rate, table = transformation_success_rate(outputs)
    assert rate == 0.75
    assert table == {"input-statement": 1}
    assert rate * len(outputs) + sum(table.values()) == len(outputs)


def test_empty_outputs_rejected():
    with pytest.raises(EmptyOutputs):
        transformation_success_rate([])
    with pytest.raises(EmptyOutputs):
        evasion_success_rate(None, [])


def test_resolve_workers_env_precedence(monkeypatch):
    monkeypatch.delenv(WORKERS_ENV, raising=False)
    assert resolve_workers(None) == 1
    assert resolve_workers(4) == 4
    monkeypatch.setenv(WORKERS_ENV, "2")
    assert resolve_workers(8) == 2
    monkeypatch.setenv(WORKERS_ENV, "0")
    with pytest.raises(ValueError):
        resolve_workers(None)
    monkeypatch.setenv(WORKERS_ENV, "many")
    with pytest.raises(ValueError):
        resolve_workers(None)
    monkeypatch.delenv(WORKERS_ENV)
    with pytest.raises(ValueError):
        resolve_workers(0)


class HalfModel:
    """Predicts bob when the source mentions while, alice otherwise."""

    def predict_source(self, source):
        if "while" in source:
            return "bob", {"bob": 0.9}
        return "alice", {"alice": 0.9}


def test_evasion_rate_counts_non_parsing_as_failure():
    model = HalfModel()
    evader = "int main() { int j = 0; while (j < 1) { j++; } return 0; }"
    stayer = "int main() { return 0; }"
    broken = "int main() { @ }"
    rows = evasion_verdicts(model, [("alice", evader), ("alice", stayer),
                                    ("alice", broken)])
    assert rows == [("alice", "bob"), ("alice", "alice"), ("alice", None)]
    rate = evasion_success_rate(model, [("alice", evader), ("alice", stayer),
                                        ("alice", broken)])
    assert rate == pytest.approx(1 / 3)


def make_report(**overrides):
    base = dict(
        transformation_success_rate=0.9,
        evasion_success_rate={"tfidf-rf": 0.7},
        error_table={"misused-variable": 1},
        timing={"verify": 1.25},
        config={"seed": 0},
        sample_count=10,
    )
    base.update(overrides)
    return MetricsReport(**base)


def test_report_validate_accepts_consistent_tables():
    make_report().validate()
    make_report(transformation_success_rate=None, error_table={},
                sample_count=0).validate()


def test_report_validate_rejects_inconsistencies():
    with pytest.raises(ValueError):
        make_report(error_table={"misused-variable": 3}).validate()
    with pytest.raises(ValueError):
        make_report(transformation_success_rate=1.5,
                    error_table={}, sample_count=0).validate()
    with pytest.raises(ValueError):
        make_report(evasion_success_rate={"tfidf-rf": -0.1}).validate()


def test_report_round_trip():
    report = make_report(neural={"pairs": 100})
    clone = MetricsReport.from_dict(report.to_dict())
    assert clone == report
    plain = make_report()
    assert "neural" not in plain.to_dict()
    assert MetricsReport.from_dict(plain.to_dict()).neural is None


def test_render_report_sections():
    text = render_report(make_report(
        error_table={"missing-semicolon-or-brace": 1, "misused-variable": 1,
                     NO_TESTS_CATEGORY: 1},
        transformation_success_rate=0.7, sample_count=10,
        neural={"verified": 0.5}))
    assert "transformation success rate  0.7000" in text
    assert "evasion success rate [tfidf-rf]  0.7000" in text
    assert "[syntax]" in text
    assert "[semantic]" in text
    assert "[other]" in text
    assert "missing-semicolon-or-brace" in text
    assert NO_TESTS_CATEGORY in text
    assert "neural stage" in text
    assert "verify" in text
