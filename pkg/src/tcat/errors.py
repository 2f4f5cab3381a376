"""Exception types shared across the package."""


class TcatError(Exception):
    """Base class for all package errors."""


class SpecMismatchError(TcatError):
    """A scalar does not belong to the quantale it is used with, or two
    values from different quantales were combined."""


class CarrierMismatchError(TcatError):
    """Relation/functor endpoints do not line up."""


class CapabilityError(TcatError):
    """The requested computation needs an enumerable carrier (finite
    quantale, finite functor image) that this instance does not provide."""


class BoundOverflowError(TcatError):
    """A word-theory computation needs a word longer than the configured
    bound."""


class NotAFunctorError(TcatError):
    """A map that was required to be structure-preserving is not."""


class ParseError(TcatError):
    """Instance file rejected; carries the JSON path of the offending node."""

    def __init__(self, path, message):
        self.path = path
        self.message = message
        super().__init__(f"{path}: {message}")
