"""Exception hierarchy.

Callers that want a single catch-all can use MinresistError.  The CLI maps
the three leaf categories to distinct exit codes, so library code should
raise the most specific one that applies.
"""


class MinresistError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(MinresistError):
    """Malformed input: bad config files, empty tables, unknown options."""


class DomainError(MinresistError):
    """Arguments outside the mathematical domain of an operation."""


class NumericsError(MinresistError):
    """Numerical failure: non-convergence, invariant violation, divergence."""
