"""Error hierarchy with stable CLI exit codes.

Exit code map: 2 parse/semantic input errors, 3 consistency failures and
diagnostics that name a certified way out, 4 inputs outside the supported
class of the tool.
"""


class WildccError(Exception):
    exit_code = 3
    code = "error"


class ParseError(WildccError):
    exit_code = 2
    code = "parse-error"


class SemanticError(WildccError):
    exit_code = 2
    code = "semantic-error"


class ConsistencyError(WildccError):
    """An internal cross-check (a theorem used as an assertion) failed."""

    exit_code = 3
    code = "consistency"


class FiltrationViolation(WildccError):
    exit_code = 3
    code = "filtration-violation"


class UnreducedRepresentative(WildccError):
    """The reduction loop stalled; the input must be rewritten by hand."""

    exit_code = 3
    code = "unreduced-representative"


class ResolveFirst(WildccError):
    exit_code = 3
    code = "resolve-first"


class StepCapExceeded(WildccError):
    exit_code = 3
    code = "step-cap"


class UnsupportedClassError(WildccError):
    exit_code = 4
    code = "unsupported-class"
