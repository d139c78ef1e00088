"""Strict load-store machine workbench.

Thin Python surface over the C++ core: parse and solve guarded recursive
thread specifications, run threads against machines, synthesize and check
transformation witnesses, and evaluate the exact counting bounds.
"""

from ._core import (
    Error,
    apply_thread,
    bisimilar,
    canonical_form,
    classify,
    count_lemma1,
    exact_thread_count,
    induced_transformation,
    residual_count,
    synthesize,
    thread_count_bound,
    validate_strictness,
    verify_completeness,
)

__all__ = [
    "Error",
    "apply_thread",
    "bisimilar",
    "canonical_form",
    "classify",
    "count_lemma1",
    "exact_thread_count",
    "induced_transformation",
    "residual_count",
    "synthesize",
    "thread_count_bound",
    "validate_strictness",
    "verify_completeness",
]
