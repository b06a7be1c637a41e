"""Exception hierarchy.

Every error raised on purpose by the package derives from
:class:`UnfoldError`, which is itself a :class:`ValueError`.
"""


class UnfoldError(ValueError):
    pass


# mesh
class NonManifold(UnfoldError):
    pass


class NotThreeConnected(UnfoldError):
    pass


class EulerViolation(UnfoldError):
    pass


class FaceNotPlanar(UnfoldError):
    pass


class EdgeNotOnFace(UnfoldError):
    pass


class NotTight(UnfoldError):
    pass


# tours
class PatternMismatch(UnfoldError):
    pass


class InvalidRecombination(UnfoldError):
    pass


# flips
class NotInteriorToTriangles(UnfoldError):
    pass


class NotFlippable(UnfoldError):
    pass


class NotTriangulation(UnfoldError):
    pass


class PropagationOverrun(UnfoldError):
    """A recombination walk failed to close within its step budget."""


# tight pipeline
class NoValidDiagonal(UnfoldError):
    pass


class DesignationInvalid(UnfoldError):
    pass


class NoConnectedRewiring(UnfoldError):
    pass


# layout
class NotLongestPair(UnfoldError):
    pass


class DegenerateTriangle(UnfoldError):
    pass


class ArcMismatch(UnfoldError):
    pass


# oracle
class InstanceTooLarge(UnfoldError):
    pass


# io
class OffSyntaxError(UnfoldError):
    def __init__(self, lineno, message):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class IndexOutOfRange(UnfoldError):
    pass


class UnknownShape(UnfoldError):
    pass
