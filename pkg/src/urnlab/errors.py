"""Exception hierarchy shared by every urnlab module."""


class UrnError(Exception):
    """Base class for all urnlab errors."""


class SpecError(UrnError, ValueError):
    """An urn specification violates one of its invariants."""


class DegenerateUrn(SpecError):
    pass


class NonPositiveCount(SpecError):
    pass


class BadParameter(SpecError):
    pass


class ModelMismatch(SpecError):
    pass


class UnsupportedModel(UrnError):
    """The requested operation is not defined for this model variant."""


class OutOfRangeState(UrnError, ValueError):
    pass


class MissingMoment(UrnError, KeyError):
    pass


class RequiresCEquals1(UrnError):
    pass


class SameColor(UrnError, ValueError):
    pass


class StateSpaceTooLarge(UrnError):
    def __init__(self, projected, cap):
        super().__init__(f"projected state count {projected} exceeds cap {cap}")
        self.projected = projected
        self.cap = cap


class RootFindingFailed(UrnError):
    pass


class NoConvergence(UrnError):
    pass


class NonRealResult(UrnError):
    pass
