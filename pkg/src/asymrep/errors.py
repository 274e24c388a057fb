"""Exception hierarchy shared by every module of the package."""


class AsymRepError(Exception):
    """Base class for all errors raised by asymrep."""


# exact algebra
class NonInvertibleDenominator(AsymRepError, ValueError):
    pass


class UnsupportedDegree(AsymRepError, ValueError):
    pass


class NotInvertibleMod(AsymRepError, ValueError):
    pass


class NoOrderFound(AsymRepError, RuntimeError):
    pass


class NotInvertible(AsymRepError, ValueError):
    pass


# groups
class CoprimalityViolation(AsymRepError, ValueError):
    pass


class BadPeriod(AsymRepError, ValueError):
    pass


class InfiniteGroup(AsymRepError, ValueError):
    pass


# homology
class NotARelator(AsymRepError, ValueError):
    pass


# numerics
class TooFarFromIdentity(AsymRepError, ValueError):
    pass


class NonNormal(AsymRepError, ValueError):
    pass


# asymptotic representations
class InadmissibleN(AsymRepError, ValueError):
    pass


class WellDefinednessFailure(AsymRepError, RuntimeError):
    pass


class ReductionInvalid(AsymRepError, ValueError):
    pass


class NotAlmostMultiplicative(AsymRepError, ValueError):
    pass


# induced representations
class NonPrimitiveRoot(AsymRepError, ValueError):
    pass


class DimensionMismatch(AsymRepError, ValueError):
    pass
