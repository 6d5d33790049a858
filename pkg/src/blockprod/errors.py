"""Exception types shared across the package."""


class BlockprodError(Exception):
    """Base class for all package errors."""


class ShapeError(BlockprodError, ValueError):
    """Operands have incompatible or invalid dimensions."""


class SingularMatrixError(BlockprodError):
    """A linear solve hit a pivot that is zero to working precision."""

    def __init__(self, pivot: float):
        super().__init__(f"matrix singular to working precision (min pivot {pivot:.3e})")
        self.pivot = pivot


class NoContractingNormError(BlockprodError):
    """No scaled norm making the matrix a contraction could be constructed
    (the spectral radius is >= 1, or the construction failed numerically)."""


class InvalidCertificateError(BlockprodError):
    """A contraction certificate with rate >= 1 was supplied."""


class CertificateViolationError(BlockprodError):
    """A matrix fed to the product engine exceeds the declared contraction rate."""

    def __init__(self, step: int, value: float, rate: float):
        super().__init__(
            f"step {step}: ||C|| = {value:.6g} exceeds declared rate {rate:.6g}"
        )
        self.step = step
        self.value = value
        self.rate = rate


class AnalysisRefusedError(BlockprodError):
    """No contraction certificate is obtainable, so the convergence test
    hypothesis cannot be verified."""


class ParseError(BlockprodError, ValueError):
    """A sequence file is malformed."""
