"""Exception hierarchy.

Everything mathematical derives from AlgebraError so the CLI/service can map
"the computation is impossible or undetermined at this precision" to exit
code 1 / HTTP 422, while genuine I/O and parse problems stay ordinary
exceptions (exit code 2 / HTTP 400).
"""


class AlgebraError(Exception):
    """Base class for all mathematically meaningful failures."""


class NonUnit(AlgebraError):
    """Inversion or unit decomposition of an element of positive valuation."""


class PrecisionExhausted(AlgebraError):
    """The tracked precision window is too small to represent the answer."""


class DomainError(AlgebraError):
    """Argument outside the convergence/definition domain of an operator."""


class ContextMismatch(AlgebraError):
    """Operands belong to different p-adic contexts or coefficient rings."""


class Indeterminate(AlgebraError):
    """The queried invariant is not visible at the current precision."""


class NotDivisible(AlgebraError):
    """A pseudo-measure denominator does not divide its numerator."""

    def __init__(self, message, chi=None):
        super().__init__(message)
        self.chi = chi


class DegenerateDenominator(AlgebraError):
    """A denominator term that is identically zero."""


class NotAHomomorphism(AlgebraError):
    """A supplied map of finite abelian groups is not a surjective hom."""


class NotSquarefree(AlgebraError):
    """An auxiliary-prime product with a repeated prime."""


class UnknownPrime(AlgebraError):
    """Reference to an auxiliary prime that was never declared."""


class ZeroDivisor(AlgebraError):
    """Elementary module constructor fed a zero series."""


class NotTorsion(AlgebraError):
    """A presentation whose determinant vanishes to working precision."""


class DimensionMismatch(AlgebraError):
    """Block composition with inconsistent sizes."""


class NonIntegral(AlgebraError):
    """Coleman operator output with non-integral coefficients."""


class UndefinedDatum(AlgebraError):
    """Use of local valuation data for a prime without a declared datum."""
