"""Equivalence checking and failure classification.

A candidate source is equivalent to an original program when it parses,
binds, and produces the expected output on every test case after
normalization (trailing whitespace per line and trailing newlines are
stripped; a test may instead declare an absolute tolerance for numeric
fields, compared token by token per line).

Non-equivalent candidates get exactly one error category:

  syntax family    undeclared-variable, redeclared-variable,
                   missing-semicolon-or-brace, return-statement, other
  semantic family  input-statement, output-statement, misused-variable

Semantic evidence comes from run counters on the first failing test:
a difference in values read means input-statement, a difference in
output statements executed means output-statement, and anything else
falls back to misused-variable. Where several apply the priority is
input-statement > output-statement > misused-variable.
"""

from __future__ import annotations

import shlex
import subprocess
import tempfile
from dataclasses import dataclass
from pathlib import Path

from ..corpus import TestCase
from ..frontend import FrontendError, LexError, SyntaxFailure, BindError
from ..frontend.astnodes import Program
from ..frontend.parser import SYNTAX_RETURN, parse_source
from ..frontend.binder import bind
from .machine import ExecutionResult, RunLimits, REASON_INPUT, execute

FAMILY_SYNTAX = "syntax"
FAMILY_SEMANTIC = "semantic"

SYNTAX_CATEGORIES = ("undeclared-variable", "redeclared-variable",
                     "missing-semicolon-or-brace", "return-statement",
                     "other")
SEMANTIC_CATEGORIES = ("input-statement", "output-statement",
                       "misused-variable")

VERDICT_EQUIVALENT = "equivalent"
VERDICT_SYNTAX = "syntax-fail"
VERDICT_SEMANTIC = "semantic-fail"


class NoTests(Exception):
    pass


@dataclass(frozen=True)
class ErrorClass:
    family: str
    category: str
    detail: str = ""


@dataclass
class Evidence:
    """What check_equivalence saw go wrong, for the classifier."""
    frontend_error: FrontendError | None = None
    original_run: ExecutionResult | None = None
    candidate_run: ExecutionResult | None = None


@dataclass
class EquivalenceVerdict:
    verdict: str
    failure: ErrorClass | None = None
    failed_case: int | None = None

    @property
    def equivalent(self) -> bool:
        return self.verdict == VERDICT_EQUIVALENT


def normalize_output(text: str) -> str:
    lines = [line.rstrip() for line in text.split("\n")]
    return "\n".join(lines).rstrip("\n")


def outputs_match(actual: str, expected: str,
                  tolerance: float | None = None) -> bool:
    actual = normalize_output(actual)
    expected = normalize_output(expected)
    if tolerance is None:
        return actual == expected
    a_lines = actual.split("\n")
    e_lines = expected.split("\n")
    if len(a_lines) != len(e_lines):
        return False
    for a_line, e_line in zip(a_lines, e_lines):
        a_toks = a_line.split()
        e_toks = e_line.split()
        if len(a_toks) != len(e_toks):
            return False
        for a_tok, e_tok in zip(a_toks, e_toks):
            try:
                if abs(float(a_tok) - float(e_tok)) <= tolerance:
                    continue
                return False
            except ValueError:
                if a_tok != e_tok:
                    return False
    return True


def classify_failure(original: Program, candidate_source: str,
                     evidence: Evidence) -> ErrorClass:
    exc = evidence.frontend_error
    if exc is not None:
        if isinstance(exc, SyntaxFailure):
            category = exc.category
            if category == SYNTAX_RETURN:
                category = "return-statement"
        elif isinstance(exc, BindError):
            category = exc.category
        else:
            category = "other"  # lex errors have no finer bucket
        if category not in SYNTAX_CATEGORIES:
            category = "other"
        return ErrorClass(FAMILY_SYNTAX, category, str(exc))
    orig = evidence.original_run
    cand = evidence.candidate_run
    if cand is not None:
        if cand.error_reason == REASON_INPUT:
            return ErrorClass(FAMILY_SEMANTIC, "input-statement",
                              "candidate ran out of input")
        if orig is not None:
            if cand.inputs_consumed != orig.inputs_consumed:
                return ErrorClass(
                    FAMILY_SEMANTIC, "input-statement",
                    f"read {cand.inputs_consumed} values, "
                    f"expected {orig.inputs_consumed}")
            if cand.outputs_emitted != orig.outputs_emitted:
                return ErrorClass(
                    FAMILY_SEMANTIC, "output-statement",
                    f"ran {cand.outputs_emitted} output statements, "
                    f"expected {orig.outputs_emitted}")
    return ErrorClass(FAMILY_SEMANTIC, "misused-variable",
                      "same input/output shape, diverging values")


class ProgramRunner:
    """Runs candidate sources under the interpreter."""

    def __init__(self, limits: RunLimits | None = None):
        self.limits = limits or RunLimits()

    def prepare(self, source: str) -> Program:
        program = parse_source(source)
        bind(program)
        return program

    def run(self, prepared: Program, stdin_text: str) -> ExecutionResult:
        return execute(prepared, stdin_text, self.limits)


class ExternalRunner:
    """Optional compile-and-run backend for real C++ toolchains.

    compile_cmd and run_cmd are command templates with {src} and {bin}
    placeholders, e.g. compile_cmd="g++ -O0 -o {bin} {src}". Outputs are
    compared exactly like interpreter outputs. Parse/bind classification
    still uses the subset frontend.
    """

    def __init__(self, compile_cmd: str, run_cmd: str,
                 timeout_secs: float = 10.0):
        self.compile_cmd = compile_cmd
        self.run_cmd = run_cmd
        self.timeout_secs = timeout_secs
        self._dir = tempfile.TemporaryDirectory(prefix="oracle-")

    def prepare(self, source: str) -> str:
        base = Path(self._dir.name)
        src = base / "candidate.cpp"
        binary = base / "candidate.bin"
        src.write_text(source, encoding="utf-8")
        cmd = [part.format(src=str(src), bin=str(binary))
               for part in shlex.split(self.compile_cmd)]
        proc = subprocess.run(cmd, capture_output=True, text=True,
                              timeout=self.timeout_secs)
        if proc.returncode != 0:
            raise LexError(f"external compile failed: {proc.stderr}", 1, 1)
        return str(binary)

    def run(self, prepared: str, stdin_text: str) -> ExecutionResult:
        cmd = [part.format(src="", bin=prepared)
               for part in shlex.split(self.run_cmd)]
        try:
            proc = subprocess.run(cmd, input=stdin_text, capture_output=True,
                                  text=True, timeout=self.timeout_secs)
        except subprocess.TimeoutExpired:
            return ExecutionResult(status="timeout", stdout="", steps=0)
        if proc.returncode != 0:
            return ExecutionResult(status="runtime-error",
                                   stdout=proc.stdout, steps=0,
                                   error_reason="unresolved",
                                   error_message=f"exit {proc.returncode}")
        return ExecutionResult(status="ok", stdout=proc.stdout, steps=0)


def check_equivalence(original: Program, candidate_source: str,
                      tests: list[TestCase],
                      runner: ProgramRunner | ExternalRunner | None = None,
                      ) -> EquivalenceVerdict:
    """Parses, binds, and runs the candidate over every test case."""
    if not tests:
        raise NoTests("equivalence needs at least one test case")
    runner = runner or ProgramRunner()
    try:
        prepared = runner.prepare(candidate_source)
    except FrontendError as exc:
        failure = classify_failure(original, candidate_source,
                                   Evidence(frontend_error=exc))
        return EquivalenceVerdict(VERDICT_SYNTAX, failure=failure)
    for index, test in enumerate(tests):
        result = runner.run(prepared, test.input)
        if result.ok and outputs_match(result.stdout, test.expected_output,
                                       test.tolerance):
            continue
        original_run = execute(original, test.input)
        evidence = Evidence(original_run=original_run, candidate_run=result)
        failure = classify_failure(original, candidate_source, evidence)
        return EquivalenceVerdict(VERDICT_SEMANTIC, failure=failure,
                                  failed_case=index)
    return EquivalenceVerdict(VERDICT_EQUIVALENT)


def self_check(program: Program, tests: list[TestCase]) -> bool:
    """True when the program itself passes all its tests."""
    for test in tests:
        result = execute(program, test.input)
        if not result.ok:
            return False
        if not outputs_match(result.stdout, test.expected_output,
                             test.tolerance):
            return False
    return True


def derive_tests(program: Program, inputs: list[str],
                 tolerance: float | None = None) -> list[TestCase]:
    """Builds test cases by running the program on the given inputs.
    Raises ValueError if any run fails; the program is its own oracle."""
    tests = []
    for stdin_text in inputs:
        result = execute(program, stdin_text)
        if not result.ok:
            raise ValueError(
                f"program failed on input {stdin_text!r}: {result.status} "
                f"{result.error_reason or ''}")
        tests.append(TestCase(input=stdin_text,
                              expected_output=result.stdout,
                              tolerance=tolerance))
    return tests
