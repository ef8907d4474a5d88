"""Exception hierarchy for rpsurf.

All errors derive from :class:`RpsError`. Each module has an intermediate class
so callers can catch a whole family, e.g. ``except SurgeryError``.
"""


class RpsError(Exception):
    """Base class of every rpsurf error."""


##################################################################################
# surface_core
##################################################################################


class SurfaceError(RpsError):
    """Invalid combinatorial surface."""


class NonManifold(SurfaceError):
    pass


class NonOrientable(SurfaceError):
    pass


class OpenEdge(SurfaceError):
    pass


class OverusedEdge(SurfaceError):
    pass


class DegenerateVertex(SurfaceError):
    """Vertex of degree below three."""


class DisconnectedSurface(SurfaceError):
    pass


class OddEulerCharacteristic(SurfaceError):
    pass


##################################################################################
# geometry
##################################################################################


class GeometryError(RpsError):
    """Invalid geometric input."""


class DegreeTooSmall(GeometryError):
    pass


class DegenerateNormal(GeometryError):
    pass


class UnsupportedDegree(GeometryError):
    pass


class NoIsometry(GeometryError):
    pass


class DegenerateCorrespondence(GeometryError):
    pass


##################################################################################
# bands
##################################################################################


class BandError(RpsError):
    pass


class NotClosed(BandError):
    pass


class NonParallelTransport(BandError):
    pass


class NoBigon(BandError):
    pass


class SelfCrossingBand(BandError):
    pass


class MixedBigon(BandError):
    pass


class LemmaViolation(BandError):
    """A structural claim failed; ``witness`` names the offending faces or edges."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


##################################################################################
# surgery
##################################################################################


class SurgeryError(RpsError):
    pass


class NonSeparating(SurgeryError):
    pass


class BoundaryMismatch(SurgeryError):
    pass


class BandHasOctagon(SurgeryError):
    pass


class OverReduction(SurgeryError):
    pass


class NotPrismStructured(SurgeryError):
    pass


class WrongKind(SurgeryError):
    pass


class SingleBrick(SurgeryError):
    pass


class NoBridgingFace(SurgeryError):
    pass


class NotCubeCorner(SurgeryError):
    pass


class NotPrismHalf(SurgeryError):
    pass


class RetryLimitExceeded(SurgeryError):
    pass


##################################################################################
# decompose
##################################################################################


class DecompositionError(RpsError):
    pass


class NotPentagonal(DecompositionError):
    pass


class NotSquareOct(DecompositionError):
    pass


class GenusOutOfRange(DecompositionError):
    pass


class NoReducibleRegion(DecompositionError):
    pass


class FlipStuck(DecompositionError):
    pass


class VerificationFailed(DecompositionError):
    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report


class AuditError(RpsError):
    pass


class UnsupportedDegrees(AuditError):
    pass


##################################################################################
# generators
##################################################################################


class GeneratorError(RpsError):
    pass


class DegreeMismatch(GeneratorError):
    pass


class CollisionDetected(GeneratorError):
    pass


class AmbiguousFit(GeneratorError):
    pass


class RingDoesNotClose(GeneratorError):
    pass


class InvalidPairing(GeneratorError):
    pass


##################################################################################
# io
##################################################################################


class FormatError(RpsError):
    pass


class ParseError(FormatError):
    """Malformed input; ``line`` is the 1-based line number when known."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class IndexOutOfRange(ParseError):
    pass


class UnsupportedOffFeature(FormatError):
    pass
