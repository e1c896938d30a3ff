"""Exception hierarchy shared by all qmeter modules."""


class QmeterError(Exception):
    """Base class for all qmeter errors."""


class ShapeMismatch(QmeterError):
    """Matrix shapes are incompatible with the requested operation."""


class DimensionMismatch(QmeterError):
    """A state vector and a device act on different Hilbert-space dimensions."""


class NotHermitian(QmeterError):
    """Input matrix violates the Hermitian symmetry tolerance."""


class NotUnitary(QmeterError):
    """Input matrix violates the unitarity tolerance."""


class NoConvergence(QmeterError):
    """An iterative decomposition hit its sweep cap before converging."""


class IncompleteDevice(QmeterError):
    """Kraus operators fail the completeness relation.

    Attributes:
        defect: Frobenius norm of (sum of effects - identity).
    """

    def __init__(self, defect, message=None):
        self.defect = float(defect)
        super().__init__(message or f"effects do not sum to identity (defect {self.defect:.6g})")


class OutcomeOutOfRange(QmeterError):
    """Outcome index lies outside 1..n."""


class ZeroProbabilityOutcome(QmeterError):
    """Conditioning on an outcome whose probability is below the floor."""


class OutOfDomain(QmeterError):
    """A parameter lies outside its mathematical domain."""


class InternalConsistencyError(QmeterError):
    """A quantity violated a bound that valid inputs guarantee (likely corrupted input)."""


class DeviceSpecError(QmeterError):
    """A device or state specification file is malformed."""
