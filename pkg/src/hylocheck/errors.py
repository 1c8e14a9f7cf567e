"""Exception hierarchy shared by every module."""


class HyloError(Exception):
    """Base class for all errors raised by hylocheck."""


class ParseError(HyloError):
    """The document is not well-formed (bad JSON, bad term syntax, wrong field types)."""

    def __init__(self, message, location=None):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)


class ValidationError(HyloError):
    """The document parsed but violates an invariant (totality, duplicates, sorts...)."""

    def __init__(self, message, location=None):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)


class UnknownElement(HyloError, KeyError):
    def __str__(self):
        return f"unknown element {self.args[0]!r}"


class UnknownStructure(HyloError, KeyError):
    def __str__(self):
        return f"unknown structure {self.args[0]!r}"


class ParamsTooLarge(HyloError):
    pass


class BudgetExceeded(HyloError):
    def __init__(self, message, cardinality=None, budget=None):
        self.cardinality = cardinality
        self.budget = budget
        super().__init__(message)


class DomainMismatch(HyloError):
    pass


class EngineInconsistency(HyloError):
    """Two independent constructions disagreed. Always a bug, never a user error."""


class StuckTerm(HyloError):
    """No rewrite rule applies to a closed term."""
