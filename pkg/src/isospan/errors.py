"""Exception types raised by the construction."""


class IsospanError(Exception):
    """Base class for all package errors."""


class PreconditionError(IsospanError, ValueError):
    """An operation was called outside its documented domain."""


class NotFreeDirection(PreconditionError):
    pass


class DimensionMismatch(PreconditionError):
    pass


class NoLimitFound(IsospanError):
    pass


class AveragingFailed(IsospanError):
    """No sampled hyperplane offset met the averaging bound.

    The bound always holds for some offset, so this points at a
    discretization problem (too few offsets, degenerate input).
    """


class PreconditionP10(PreconditionError):
    pass


class NeedCurvedDisk(PreconditionError):
    pass


class IntegrationBlowup(IsospanError):
    pass


class FlowIncompatible(PreconditionError):
    pass
