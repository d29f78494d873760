"""Exception types shared across the package."""


class NegcircError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(NegcircError):
    """An argument lies outside the domain an operation is defined on."""


class RuleSyntaxError(NegcircError):
    """Malformed rule text.  Carries the 1-based line and column."""

    def __init__(self, message, line, column):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class RuleTypeError(NegcircError):
    """Ill-typed rule expression (e.g. a comparison of booleans)."""

    def __init__(self, message, line, column):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class RangeViolation(NegcircError):
    """A compiled rule produced a value outside its component interval."""

    def __init__(self, state, component, value, interval):
        lo, hi = interval
        super().__init__(
            f"rule for component {component + 1} produced {value} at state "
            f"{tuple(state)}, outside {lo}..{hi}"
        )
        self.state = tuple(state)
        self.component = component
        self.value = value
        self.interval = interval


class NetworkFileError(NegcircError):
    """Malformed network file.  Carries the 1-based line number."""

    def __init__(self, message, line=None):
        if line is not None:
            super().__init__(f"{message} (line {line})")
        else:
            super().__init__(message)
        self.line = line


class ContractError(NegcircError):
    """An internal invariant failed; indicates a bug, not bad input."""
