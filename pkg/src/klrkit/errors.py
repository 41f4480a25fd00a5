"""Exception hierarchy.

Every error carries a ``code`` of the form ``<module>.<Name>`` so the command
line layer can report module-qualified failures.
"""


class KLRKitError(Exception):
    module = "klrkit"

    @property
    def code(self):
        return f"{self.module}.{type(self).__name__}"


# exact arithmetic
class ArithmeticFailure(KLRKitError):
    module = "arith"


class ZeroFunction(ArithmeticFailure):
    pass


class NotInvertible(ArithmeticFailure):
    pass


class InexactDivision(ArithmeticFailure):
    pass


# cartan data
class CartanError(KLRKitError):
    module = "cartan"


class NotGCM(CartanError):
    pass


class NotSymmetrizable(CartanError):
    pass


class NotFiniteType(CartanError):
    pass


class IndexOutOfRange(CartanError):
    pass


# klr core
class KLRError(KLRKitError):
    module = "klr"


class InconsistentQFamily(KLRError):
    pass


class AmbientMismatch(KLRError):
    pass


class ContentMixing(KLRError):
    pass


# cyclotomic
class CyclotomicError(KLRKitError):
    module = "cyclotomic"


class NonDominantWeight(CyclotomicError):
    pass


class TruncationInconclusive(CyclotomicError):
    pass


class ContentMismatch(CyclotomicError):
    pass


class SplitFailure(CyclotomicError):
    """The idempotent splitter could not decompose a degree-zero endomorphism algebra over Q."""


class IdentityViolation(KLRKitError):
    """A verified identity failed; ``details`` holds both sides."""

    module = "verify"

    def __init__(self, message, details=None):
        super().__init__(message)
        self.details = details or {}


# affine / r-matrices
class AffineError(KLRKitError):
    module = "rmatrix"


class RelationFailure(AffineError):
    pass


class NonUniqueSolution(AffineError):
    pass


class NoSolution(AffineError):
    pass


class SpecializationSingular(AffineError):
    pass


# duality datum / quiver
class QuiverError(KLRKitError):
    module = "quiver"


class NegativeOrder(QuiverError):
    pass


class NotRealizable(QuiverError):
    pass


# dynkin combinatorics
class DynkinError(KLRKitError):
    module = "dynkin"


class InvalidHeightFunction(DynkinError):
    pass


class NoAdaptedOrder(DynkinError):
    pass


class InductionConflict(DynkinError):
    pass


class HypothesisViolated(DynkinError):
    pass


# cli
class ConfigError(KLRKitError):
    module = "cli"
