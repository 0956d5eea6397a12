"""Array restructuring and constant hiding for Java-like source."""

from ._core import (
    Error,
    count_f_calls,
    emit_runtime,
    eval_f,
    hide_constant,
    obfuscate,
    run,
    verify,
)

__all__ = [
    "Error",
    "count_f_calls",
    "emit_runtime",
    "eval_f",
    "hide_constant",
    "obfuscate",
    "run",
    "verify",
]
