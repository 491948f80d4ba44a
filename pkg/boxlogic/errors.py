"""
Exception hierarchy of the box logic toolkit.
"""

from typing import Optional, Sequence


class BoxLogicError(Exception):
    """
    Base class of all errors raised by this package.
    """


class StructuralError(BoxLogicError):
    """
    Raised when a structure violates a representation invariant that must
    hold before any axiom can be checked (e.g. a complement that is not
    involutive).
    """


class DomainError(BoxLogicError):
    """
    Raised when an operation receives a proposition that is not an element of
    the structure (or lives over another phase space).
    """


class ResourceError(BoxLogicError):
    """
    Raised when a configurable cap (elements, cliques, support size) is
    exceeded.
    """

    def __init__(self, what: str, cap: int, count: int) -> None:
        super().__init__(f"{what} cap of {cap} exceeded ({count} so far)")
        self.what = what
        self.cap = cap
        self.count = count


class NormalizationError(BoxLogicError):
    """
    Raised when the outcome probabilities of a context do not sum to one or a
    probability lies outside of [0, 1].
    """


class NoSignalingViolation(BoxLogicError):
    """
    Raised when a PR-state violates the no-signaling equalities.
    """

    def __init__(self, box: int, inputs: tuple[int, int],
                 fixing: Sequence[object], marginals: tuple[object, object]) -> None:
        super().__init__(
            f"box {box}: marginal for input {inputs[0]} is {marginals[0]} but "
            f"{marginals[1]} for input {inputs[1]} (other boxes fixed to {list(fixing)})")
        self.box = box
        self.inputs = inputs
        self.fixing = tuple(fixing)
        self.marginals = marginals


class ConsistencyError(BoxLogicError):
    """
    Raised when two independent computations of the same quantity disagree.
    """


class LPError(BoxLogicError):
    """
    Raised for infeasible or unbounded linear programs.
    """

    def __init__(self, message: str, status: Optional[str] = None) -> None:
        super().__init__(message)
        self.status = status


class CacheError(BoxLogicError):
    """
    Raised when a structure cache entry is malformed or fails verification.
    """


class MissingInputError(BoxLogicError):
    """
    Raised when a required input file (spec, cache, state) does not exist.
    """
