"""Exception hierarchy shared by every module."""


class TypforgeError(Exception):
    """Base class; the CLI maps any subclass to exit code 2."""


class DuplicateId(TypforgeError):
    pass


class DanglingEndpoint(TypforgeError):
    pass


class UnknownVertex(TypforgeError):
    pass


class BadParameter(TypforgeError):
    pass


class InvalidPath(TypforgeError):
    pass


class DimensionMismatch(TypforgeError):
    pass


class ZeroElement(TypforgeError):
    pass


class SpecViolation(TypforgeError):
    pass


class NonInvertibleState(TypforgeError):
    pass


class NonComputableOrbits(TypforgeError):
    pass


class NotBipartite(TypforgeError):
    pass


class SizeCapExceeded(TypforgeError):
    pass


class WellDefinednessUnproved(TypforgeError):
    def __init__(self, message, failing_pair=None):
        super().__init__(message)
        self.failing_pair = failing_pair


class LevelOutOfRange(TypforgeError):
    pass


class WordNotInConfiguration(TypforgeError):
    pass


class OutOfDomain(TypforgeError):
    pass


class ParseError(TypforgeError):
    pass


class SchemaError(TypforgeError):
    pass


class UnsupportedFormat(TypforgeError):
    pass


class CertificateError(TypforgeError):
    """Raised when a certificate fails verification."""
