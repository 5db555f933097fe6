"""Exception taxonomy shared across the package."""


class CrchanError(Exception):
    """Base class for all crchan-specific errors."""


class ShapeMismatch(CrchanError, ValueError):
    """Operands have incompatible shapes or dimensions."""


class NotHermitian(CrchanError, ValueError):
    """A matrix required to be Hermitian is not, beyond tolerance."""


class InconsistentSpan(CrchanError, ValueError):
    """An input vector has a component outside the stated ambient span."""


class BadDimension(CrchanError, ValueError):
    """A site dimension or count is out of the supported range."""


class DimensionBudgetExceeded(CrchanError):
    """The requested computation exceeds the configured dimension budget."""


class DegenerateAngle(CrchanError, ValueError):
    """A rotation angle is zero or large enough to alias the weight spectrum."""


class OutOfRange(CrchanError, ValueError):
    """A weight or label lies outside its admissible range."""


class RankMismatch(CrchanError, ArithmeticError):
    """A computed rank disagrees with the combinatorial prediction."""


class LiftCollapse(CrchanError, ArithmeticError):
    """A raised basis vector vanished before reaching its top weight."""


class UnknownBlock(CrchanError, KeyError):
    """No irreducible block with the requested label exists."""


class NotDensity(CrchanError, ValueError):
    """A matrix fails the density-operator requirements."""


class BlockLeakage(CrchanError):
    """A state lies predominantly outside the code block."""
