"""Structured error types shared across modules.

Each error carries a stable ``code`` so the CLI and HTTP service can report
machine-readable diagnostics.
"""


class GonogoError(Exception):
    code = "ERROR"

    def __init__(self, message: str, *, code: str | None = None,
                 path: str | None = None):
        super().__init__(message)
        if code is not None:
            self.code = code
        self.path = path

    def __str__(self):
        base = super().__str__()
        if self.path:
            return f"{self.code} at {self.path}: {base}"
        return f"{self.code}: {base}"


class ValidationError(GonogoError, ValueError):
    code = "VALIDATION_ERROR"


class ParseError(GonogoError, ValueError):
    code = "PARSE_ERROR"


class DomainError(GonogoError, ValueError):
    code = "DOMAIN"


class MissingEvidenceError(GonogoError, KeyError):
    code = "MISSING_EVIDENCE"


class NonConvergenceError(GonogoError, ArithmeticError):
    code = "NON_CONVERGENCE"

    def __init__(self, message: str, last_iterate: float | None = None, **kw):
        super().__init__(message, **kw)
        self.last_iterate = last_iterate


class TooExpensiveError(GonogoError):
    code = "TOO_EXPENSIVE"

    def __init__(self, message: str, suggested_n_sims: int | None = None, **kw):
        super().__init__(message, **kw)
        self.suggested_n_sims = suggested_n_sims
