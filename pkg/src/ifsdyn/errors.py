"""Exception hierarchy shared by all modules."""


class IFSError(Exception):
    """Base class for every error raised by ifsdyn."""


class DomainError(IFSError, ValueError):
    pass


class RangeError(IFSError, ValueError):
    pass


class SingularError(IFSError, ValueError):
    pass


class MaskRangeError(IFSError, ValueError):
    pass


class DepthError(IFSError, ValueError):
    pass


class InsufficientData(IFSError, ValueError):
    pass


class LengthMismatch(IFSError, ValueError):
    pass


class VariantMismatch(IFSError, ValueError):
    pass


class DimensionError(IFSError, ValueError):
    pass


class NotCertified(IFSError):
    pass


class NoRootFound(IFSError):
    """No certifiable sign change of the kneading series was found.

    ``evidence`` holds the scan summary (grid size, number of certified
    positive/negative/undecided points, truncation length).
    """

    def __init__(self, message, evidence=None):
        super().__init__(message)
        self.evidence = dict(evidence or {})
