"""Domain exceptions shared across the package.

Every domain error carries a short machine-readable ``code`` so the CLI can
map failures to a single diagnostic line and exit status 2.  Usage errors
(bad flags, unparseable arguments) are not represented here; those are the
CLI's own concern and exit with status 1.
"""


class WeilforgeError(Exception):
    """Base class for all domain errors."""

    code = "DomainError"

    def __init__(self, message, **payload):
        super().__init__(message)
        self.payload = dict(payload)


class NonFundamentalDiscriminant(WeilforgeError):
    """Discriminant is not fundamental; payload carries the fundamental one."""

    code = "NonFundamentalDiscriminant"

    def __init__(self, disc, fundamental):
        super().__init__(
            f"{disc} is not a fundamental discriminant "
            f"(the field it generates has discriminant {fundamental})",
            disc=disc,
            fundamental=fundamental,
        )
        self.fundamental = fundamental


class RamifiedPrime(WeilforgeError):
    code = "RamifiedPrime"


class NotPrincipal(WeilforgeError):
    code = "NotPrincipal"


class NotWeil(WeilforgeError):
    code = "NotWeil"


class RamifiedBase(WeilforgeError):
    code = "RamifiedBase"


class RationalPi(WeilforgeError):
    code = "RationalPi"


class NotSplit(WeilforgeError):
    code = "NotSplit"


class DegenerateD(WeilforgeError):
    """d = 2: the requested algebra is never an endomorphism algebra."""

    code = "DegenerateD"


class OrdinaryD(WeilforgeError):
    """d = 1: the commutative (ordinary elliptic) case, outside the forge."""

    code = "OrdinaryD"


class NotCoprime(WeilforgeError):
    code = "NotCoprime"


class BadPrime(WeilforgeError):
    code = "BadPrime"


class ZeroImage(WeilforgeError):
    code = "ZeroImage"


class NotFound(WeilforgeError):
    def __init__(self, message, tested):
        super().__init__(message, tested=tested)
        self.tested = tested

    code = "NotFound"


class NonCommuting(WeilforgeError):
    code = "NonCommuting"


class BadSplit(WeilforgeError):
    code = "BadSplit"
