"""Deterministic interpreter, equivalence oracle, failure taxonomy."""

from .machine import (ExecutionResult, RunLimits, execute, wrap64,
                      STATUS_OK, STATUS_RUNTIME, STATUS_TIMEOUT,
                      STATUS_RESOURCE, REASON_DIV_ZERO, REASON_INDEX,
                      REASON_INPUT, REASON_UNRESOLVED)
from .oracle import (EquivalenceVerdict, ErrorClass, Evidence, NoTests,
                     ProgramRunner, ExternalRunner, SYNTAX_CATEGORIES,
                     SEMANTIC_CATEGORIES, FAMILY_SYNTAX, FAMILY_SEMANTIC,
                     VERDICT_EQUIVALENT, VERDICT_SYNTAX, VERDICT_SEMANTIC,
                     check_equivalence, classify_failure, derive_tests,
                     normalize_output, outputs_match, self_check)

__all__ = [
    "ExecutionResult", "RunLimits", "execute", "wrap64",
    "STATUS_OK", "STATUS_RUNTIME", "STATUS_TIMEOUT", "STATUS_RESOURCE",
    "REASON_DIV_ZERO", "REASON_INDEX", "REASON_INPUT", "REASON_UNRESOLVED",
    "EquivalenceVerdict", "ErrorClass", "Evidence", "NoTests",
    "ProgramRunner", "ExternalRunner",
    "SYNTAX_CATEGORIES", "SEMANTIC_CATEGORIES",
    "FAMILY_SYNTAX", "FAMILY_SEMANTIC",
    "VERDICT_EQUIVALENT", "VERDICT_SYNTAX", "VERDICT_SEMANTIC",
    "check_equivalence", "classify_failure", "derive_tests",
    "normalize_output", "outputs_match", "self_check",
]
