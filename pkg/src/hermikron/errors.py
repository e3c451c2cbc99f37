"""Exception types raised across the package."""


class HermikronError(Exception):
    """Base class for all errors raised by hermikron."""


class NotHermitian(HermikronError, ValueError):
    pass


class NotSkewHermitian(HermikronError, ValueError):
    pass


class SingularTransform(HermikronError, ValueError):
    pass


class TooLarge(HermikronError, ValueError):
    pass


class InvalidBlock(HermikronError, ValueError):
    pass


class InvalidParams(HermikronError, ValueError):
    pass


class EigenvalueCollision(HermikronError, ValueError):
    pass


class SamplingFailed(HermikronError, RuntimeError):
    pass


class AmbiguousRank(HermikronError, ArithmeticError):
    """Floating nullity decision has too small a singular-value gap."""


class RankAmbiguity(HermikronError, ArithmeticError):
    """A rank decision inside structure inference is not certified."""


class NotRegular(HermikronError, ValueError):
    pass


class InferenceUnstable(HermikronError, RuntimeError):
    pass


class UnpairedComplex(HermikronError, ValueError):
    pass


class AmbiguousSign(HermikronError, ArithmeticError):
    pass
