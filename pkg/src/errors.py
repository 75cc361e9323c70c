"""Exception hierarchy shared by every module of the toolkit."""


class ToolkitError(Exception):
    """Base class for all toolkit failures."""


class ConfigError(ToolkitError):
    """An analysis configuration failed validation."""


class ExprSyntaxError(ToolkitError):
    def __init__(self, message, offset):
        super().__init__(f"{message} (at byte offset {offset})")
        self.offset = offset


class UnknownIdentifierError(ExprSyntaxError):
    pass


class DimensionError(ToolkitError):
    pass


class ExprDomainError(ToolkitError):
    """Evaluation left the domain of a primitive (sqrt, log, division...)."""

    def __init__(self, message, span=None, snippet=None, node_index=None):
        where = ""
        if snippet is not None:
            where = f" in '{snippet}'"
        if span is not None:
            where += f" at bytes {span[0]}..{span[1]}"
        if node_index is not None:
            where += f" (lattice node {node_index})"
        super().__init__(message + where)
        self.message = message
        self.span = span
        self.snippet = snippet
        self.node_index = node_index


class EmptySetError(ToolkitError):
    pass


class BudgetExceededError(ToolkitError):
    def __init__(self, requested, allowed, what="evaluations"):
        super().__init__(
            f"refusing {requested:,} {what}; budget is {allowed:,}")
        self.requested = requested
        self.allowed = allowed


class InconclusiveError(ToolkitError):
    pass


class DivergenceError(ToolkitError):
    pass


class UnknownBuiltinError(ToolkitError):
    pass


class SeparationInputError(ToolkitError):
    """An endpoint lies outside the box or above the level."""
