"""Exception types.

``PropertyViolation`` subclasses mark a certified property that failed after
a construction; the CLI reports those with their own exit code.
"""


class CforgeError(Exception):
    """Base class for all errors raised by cforge."""


class InvalidInput(CforgeError, ValueError):
    pass


class InconsistentSystem(CforgeError):
    pass


class NotAdmissible(CforgeError):
    pass


class PrimeTooSmall(CforgeError):
    pass


class NotAComplex(InvalidInput):
    pass


class NotAChainMap(InvalidInput):
    pass


class HypothesisViolated(CforgeError):
    pass


class NotASection(CforgeError):
    pass


class PropertyViolation(CforgeError):
    pass


class ConeDecomposed(PropertyViolation):
    def __init__(self, msg, decomposition=None):
        super().__init__(msg)
        self.decomposition = decomposition


class InconsistentPattern(PropertyViolation):
    pass
