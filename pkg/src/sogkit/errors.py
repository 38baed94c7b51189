"""Exception hierarchy shared by every sogkit module."""


class SogkitError(Exception):
    """Base class for all sogkit errors."""


class DimensionMismatch(SogkitError, ValueError):
    pass


class AmbientMismatch(SogkitError, ValueError):
    pass


class NotContained(SogkitError, ValueError):
    """A subgroup relation that was required (A <= B) does not hold."""


class NotASummand(SogkitError):
    pass


class NoPreimage(SogkitError):
    pass


class ElementBoundExceeded(SogkitError):
    pass


class NotDistributive(SogkitError):
    pass


class FamilyInvalid(SogkitError):
    """A family (a_p) fails one of the characterization conditions."""

    def __init__(self, condition: str, detail: str = ""):
        self.condition = condition
        super().__init__(f"condition ({condition}) fails" + (f": {detail}" if detail else ""))


class PreconditionViolated(SogkitError, ValueError):
    pass


class PurityRequired(SogkitError):
    pass


class TorsionRequired(SogkitError):
    pass


class NotPure(SogkitError):
    pass


class InvalidElement(SogkitError, ValueError):
    pass


class NotRegular(SogkitError):
    def __init__(self, witness, message: str = ""):
        self.witness = witness
        super().__init__(message or f"element {witness!r} violates 2x <= x")


class BadSpec(SogkitError, ValueError):
    pass


class InvalidPresentation(SogkitError, ValueError):
    pass


class ElementNotInMonoid(SogkitError, ValueError):
    pass


class NotALattice(SogkitError):
    pass


class PurityFailure(SogkitError):
    pass


class BudgetExceeded(SogkitError):
    pass


class NotABlock(SogkitError, ValueError):
    pass


class StageNotInBbar(SogkitError):
    pass


class MapNotHomomorphism(SogkitError):
    pass


class MapNotNormalized(SogkitError):
    pass


class ParseError(SogkitError):
    pass


class ValidationError(SogkitError):
    pass


class WorkspaceReferenceError(SogkitError):
    pass


class UnknownVerb(SogkitError):
    pass
