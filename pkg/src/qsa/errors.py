"""Exception types raised across the package."""


class QSAError(Exception):
    """Base class for all package errors."""


class InversionUnsupported(QSAError):
    pass


class KindMismatch(QSAError):
    pass


class InvalidCutoff(QSAError):
    pass


class RegisterOverlap(QSAError):
    pass


class InvalidDivisor(QSAError):
    pass


class QuotientOverflow(QSAError):
    pass


class NoInverse(QSAError):
    """Raised when a modular inverse does not exist.

    ``factor`` carries gcd(a, N), which the Shor driver uses directly.
    """

    def __init__(self, a: int, modulus: int, factor: int):
        super().__init__(f"{a} has no inverse modulo {modulus} (gcd={factor})")
        self.a = a
        self.modulus = modulus
        self.factor = factor


class InvalidConstant(QSAError):
    pass


class TooWide(QSAError):
    pass


class EntanglementViolation(QSAError):
    """The structured engine met a gate that would leave the product-state family."""


class CircuitFormatError(QSAError):
    pass
