"""Aggregate metrics over transformed candidates.

Two rates drive every experiment summary: how often a rewritten program
still behaves like its original (transformation success), and how often
an attribution model misses the true author of a rewrite (evasion
success).  Failures are bucketed by the interpreter's error taxonomy so
reports can show where candidates break.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from ..attrib import AttributionModel
from ..corpus import SourceUnit, TestCase
from ..frontend import FrontendError, bind, parse_source
from ..interp import (NoTests, SEMANTIC_CATEGORIES, SYNTAX_CATEGORIES,
                      check_equivalence)

# synthetic bucket for originals that ship without test cases
NO_TESTS_CATEGORY = "no-tests"

WORKERS_ENV = "STYLOMORPH_WORKERS"


class EmptyOutputs(ValueError):
    """A rate was requested over an empty batch of outputs."""


def resolve_workers(requested: int | None = None) -> int:
    """Worker count for per-unit batch work.

    The environment variable wins over the requested value so operators
    can throttle a run without editing its config.
    """
    env = os.environ.get(WORKERS_ENV)
    if env is not None:
        try:
            value = int(env)
        except ValueError:
            raise ValueError(f"{WORKERS_ENV} must be an integer, got {env!r}")
        if value < 1:
            raise ValueError(f"{WORKERS_ENV} must be >= 1, got {value}")
        return value
    if requested is None:
        return 1
    if requested < 1:
        raise ValueError(f"worker count must be >= 1, got {requested}")
    return requested


def _check_one(job: tuple[str, str, tuple[TestCase, ...]]) -> str | None:
    """Returns None for an equivalent candidate, else a failure category."""
    original_code, candidate, tests = job
    try:
        ast = parse_source(original_code)
        bind(ast)
        verdict = check_equivalence(ast, candidate, list(tests))
    except NoTests:
        return NO_TESTS_CATEGORY
    if verdict.equivalent:
        return None
    return verdict.failure.category


def transformation_verdicts(outputs: list[tuple[SourceUnit, str]],
                            workers: int | None = None) -> list[str | None]:
    """Per-candidate verdict categories, aligned with the input order.

    None marks an equivalent candidate; any string is the taxonomy
    category of the failure.  Originals without tests land in the
    dedicated no-tests bucket instead of raising.
    """
    jobs = [(unit.code, candidate, tuple(unit.tests))
            for unit, candidate in outputs]
    count = resolve_workers(workers)
    if count > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=count) as pool:
            return list(pool.map(_check_one, jobs, chunksize=4))
    return [_check_one(job) for job in jobs]


def transformation_success_rate(outputs: list[tuple[SourceUnit, str]],
                                workers: int | None = None,
                                ) -> tuple[float, dict[str, int]]:
    """Fraction of candidates equivalent to their originals, plus an
    error table mapping taxonomy category to failure count.

    The table's counts always sum to the number of failed samples, so
    rate * len(outputs) + sum(table.values()) == len(outputs).
    """
    if not outputs:
        raise EmptyOutputs("transformation success rate needs outputs")
    verdicts = transformation_verdicts(outputs, workers=workers)
    table: dict[str, int] = {}
    successes = 0
    for category in verdicts:
        if category is None:
            successes += 1
        else:
            table[category] = table.get(category, 0) + 1
    return successes / len(outputs), table


def evasion_verdicts(model: AttributionModel,
                     outputs: list[tuple[str, str]],
                     ) -> list[tuple[str, str | None]]:
    """(true_author, predicted_author) per candidate.

    A candidate that fails to parse gets predicted_author None; callers
    must treat that as a failed evasion, never as a miss by the model.
    """
    rows: list[tuple[str, str | None]] = []
    for true_author, candidate in outputs:
        try:
            parse_source(candidate)
        except FrontendError:
            rows.append((true_author, None))
            continue
        predicted, _ = model.predict_source(candidate)
        rows.append((true_author, predicted))
    return rows


def evasion_success_rate(model: AttributionModel,
                         outputs: list[tuple[str, str]]) -> float:
    """Fraction of candidates the model attributes to anyone but the
    true author.  Non-parsing candidates count against the rate."""
    if not outputs:
        raise EmptyOutputs("evasion success rate needs outputs")
    rows = evasion_verdicts(model, outputs)
    hits = sum(1 for true_author, predicted in rows
               if predicted is not None and predicted != true_author)
    return hits / len(rows)


@dataclass
class MetricsReport:
    """Summary of one experiment run.

    evasion_success_rate is keyed by attribution model name so a run
    can score several attributors side by side.  sample_count is the
    number of candidates behind transformation_success_rate; it makes
    the error-table invariant checkable after deserialization.
    """
    transformation_success_rate: float | None
    evasion_success_rate: dict[str, float]
    error_table: dict[str, int]
    timing: dict[str, float]
    config: dict
    sample_count: int = 0
    neural: dict | None = None

    def validate(self) -> None:
        rates = list(self.evasion_success_rate.values())
        if self.transformation_success_rate is not None:
            rates.append(self.transformation_success_rate)
        for rate in rates:
            if not 0.0 <= rate <= 1.0:
                raise ValueError(f"rate out of range: {rate}")
        if self.transformation_success_rate is not None and self.sample_count:
            failures = sum(self.error_table.values())
            expected = (1.0 - self.transformation_success_rate) * self.sample_count
            if abs(failures - expected) > 1e-9:
                raise ValueError(
                    f"error table sums to {failures}, expected {expected}")

    def to_dict(self) -> dict:
        data = {
            "transformation_success_rate": self.transformation_success_rate,
            "evasion_success_rate": dict(self.evasion_success_rate),
            "error_table": dict(self.error_table),
            "timing": dict(self.timing),
            "config": dict(self.config),
            "sample_count": self.sample_count,
        }
        if self.neural is not None:
            data["neural"] = dict(self.neural)
        return data

    @staticmethod
    def from_dict(data: dict) -> "MetricsReport":
        return MetricsReport(
            transformation_success_rate=data["transformation_success_rate"],
            evasion_success_rate=dict(data["evasion_success_rate"]),
            error_table=dict(data["error_table"]),
            timing=dict(data["timing"]),
            config=dict(data["config"]),
            sample_count=int(data.get("sample_count", 0)),
            neural=dict(data["neural"]) if data.get("neural") else None,
        )


def render_report(report: MetricsReport) -> str:
    """Human-readable text rendering: rates first, then the error table
    split into syntax and semantic sections, then per-stage timing."""
    lines: list[str] = []
    lines.append("experiment report")
    lines.append("=" * 17)
    if report.transformation_success_rate is not None:
        lines.append(f"transformation success rate  "
                     f"{report.transformation_success_rate:.4f}"
                     f"  ({report.sample_count} samples)")
    for name in sorted(report.evasion_success_rate):
        rate = report.evasion_success_rate[name]
        lines.append(f"evasion success rate [{name}]  {rate:.4f}")
    if report.error_table:
        lines.append("")
        lines.append("error table")
        lines.append("-" * 11)
        width = max(len(c) for c in report.error_table)
        for title, categories in (("syntax", SYNTAX_CATEGORIES),
                                  ("semantic", SEMANTIC_CATEGORIES)):
            rows = [(c, report.error_table[c]) for c in categories
                    if c in report.error_table]
            if rows:
                lines.append(f"[{title}]")
                for category, count in rows:
                    lines.append(f"  {category:<{width}}  {count}")
        leftovers = [(c, n) for c, n in sorted(report.error_table.items())
                     if c not in SYNTAX_CATEGORIES
                     and c not in SEMANTIC_CATEGORIES]
        if leftovers:
            lines.append("[other]")
            for category, count in leftovers:
                lines.append(f"  {category:<{width}}  {count}")
    if report.neural:
        lines.append("")
        lines.append("neural stage")
        lines.append("-" * 12)
        for key in sorted(report.neural):
            lines.append(f"  {key}  {report.neural[key]}")
    if report.timing:
        lines.append("")
        lines.append("timing (seconds)")
        lines.append("-" * 16)
        width = max(len(s) for s in report.timing)
        for stage, seconds in report.timing.items():
            lines.append(f"  {stage:<{width}}  {seconds:8.2f}")
    return "\n".join(lines) + "\n"
