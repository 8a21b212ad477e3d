"""Exception types raised across the package."""


class GroupError(Exception):
    """Base class for every error raised by isoclin."""


class ValidationError(GroupError, ValueError):
    """A Cayley table failed validation."""


class NotLatinSquare(ValidationError):
    pass


class NoIdentityAtZero(ValidationError):
    pass


class NotAssociative(ValidationError):
    pass


class NoInverse(ValidationError):
    pass


class ParseError(GroupError, ValueError):
    pass


class OrderLimitExceeded(GroupError):
    pass


class NotNormal(GroupError, ValueError):
    pass


class NotAbelian(GroupError, ValueError):
    pass


class NotCentral(GroupError, ValueError):
    pass


class NotMember(GroupError, ValueError):
    pass


class NotHomomorphism(GroupError, ValueError):
    pass


class HypothesisFails(GroupError, ValueError):
    pass


class ExponentHypothesisFails(HypothesisFails):
    pass


class MixedPrimes(HypothesisFails):
    pass


class WrongArity(GroupError, ValueError):
    pass


class ListTooShort(WrongArity):
    pass


class WrongDomains(GroupError, ValueError):
    pass


class ParameterOutOfRange(GroupError, ValueError):
    pass
