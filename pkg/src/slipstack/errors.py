"""Exception hierarchy shared across the package."""


class SlipstackError(Exception):
    """Base class for all package errors."""


class NotInMe1(SlipstackError):
    """Matrix is not in the single-slip constraint set (det F = 1, |Fe1| = 1)."""


class InvalidInput(SlipstackError):
    """Input violates an operation precondition."""


class DomainMismatch(SlipstackError):
    """Two objects live on different intervals or rectangles."""


class InfiniteJumps(SlipstackError):
    """Operation requires finitely many jumps but a staircase part is present."""


class UnsupportedClass(SlipstackError):
    """Limit deformation is outside the class the operation supports."""


class WrongClass(SlipstackError):
    """Limit deformation has a weaker class tag than the operation requires."""


class IncompatibleComplex(SlipstackError):
    """Offset propagation met a cycle inconsistency in the cell complex."""


class NoRigidLayer(SlipstackError):
    """A period with no rigid cells where one is required."""


class BadAuxiliaryRotation(SlipstackError):
    """Auxiliary rotation violates the construction constraints."""


class BandOverflow(SlipstackError):
    """Transition band does not fit inside the domain at this epsilon."""


class RotationsNotGeneric(SlipstackError):
    """Construction needs R+ != +-R- but the rotations are (anti)parallel."""


class ParallelJump(SlipstackError):
    """Jump amplitude is parallel to Re1; use the single-band construction."""


class NonParallelJump(SlipstackError):
    """Jump amplitude is not parallel to Re1."""


class CellsCollide(SlipstackError):
    """Two jump gadgets landed in the same epsilon-cell; shrink epsilon."""


class ParseError(SlipstackError):
    """Scenario file is malformed."""


class PreconditionError(SlipstackError):
    """Scenario parameters violate the selected construction's preconditions."""


class BuildError(SlipstackError):
    """Construction failed while assembling the field."""
