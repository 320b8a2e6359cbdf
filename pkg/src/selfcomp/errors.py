"""Exception hierarchy shared by every selfcomp module.

Each exception's ``code`` is its class name; the BDL layer reuses it as the
diagnostic code, and ``span`` is filled in when the failure can be traced
back to a source location.
"""

from __future__ import annotations


class SelfCompError(Exception):
    def __init__(self, message: str = "", *, span=None) -> None:
        super().__init__(message)
        self.message = message
        self.span = span

    @property
    def code(self) -> str:
        return type(self).__name__


# behavior core
class MalformedName(SelfCompError):
    pass


class DuplicateStepName(SelfCompError):
    pass


class UnknownAnchor(SelfCompError):
    pass


class UnknownWrapper(SelfCompError):
    pass


class UnknownRefinement(SelfCompError):
    pass


class DuplicateRefinement(SelfCompError):
    pass


class InvariantViolation(SelfCompError):
    pass


class UnresolvedReference(SelfCompError):
    pass


class CycleDetected(SelfCompError):
    pass


# registries
class RegistryFrozen(SelfCompError):
    pass


class DuplicatePrimitive(SelfCompError):
    pass


class DuplicateWrapper(SelfCompError):
    pass


class UnknownPrimitive(SelfCompError):
    pass


class StepError(SelfCompError):
    """Raised by a primitive to abort the running pipeline."""


# BDL lowering
class UnknownParent(SelfCompError):
    pass


class UnknownTrait(SelfCompError):
    pass


# analysis
class InsufficientData(SelfCompError):
    pass


class NonPositiveY(SelfCompError):
    pass


class ZeroFeatures(SelfCompError):
    pass


class EmptyAdvice(SelfCompError):
    pass


class TraitWarning(UserWarning):
    """A trait removed a step the behavior does not have."""
