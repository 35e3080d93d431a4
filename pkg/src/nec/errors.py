"""Exception hierarchy shared by all modules."""


class NecError(Exception):
    """Base class for every error raised by this package."""


# finite fields

class CompositeModulus(NecError, ValueError):
    """Field modulus is not prime."""


class DivisionByZero(NecError, ZeroDivisionError):
    pass


# networks

class NetworkError(NecError, ValueError):
    """A network document failed validation."""


class CyclicGraph(NetworkError):
    pass


class DanglingEndpoint(NetworkError):
    pass


class SourceHasInputs(NetworkError):
    pass


class SinkHasOutputs(NetworkError):
    pass


class DuplicateChannelId(NetworkError):
    pass


class UnknownChannel(NecError, KeyError):
    pass


class InsufficientFlow(NecError):
    """No channel-disjoint path family of the requested size exists."""


# kernels / construction

class IncompleteKernels(NecError, ValueError):
    pass


class Exhausted(NecError):
    """Every vector of the ambient space lies in a forbidden subspace."""


class FieldTooSmall(Exhausted):
    """The construction ran out of admissible kernels over the chosen field."""


class RateTooHigh(NecError, ValueError):
    pass


class EnumerationTooLarge(NecError):
    pass


class BadParams(NecError, ValueError):
    pass


# analysis / decoding

class NotRegular(NecError):
    """The message space at a sink has dimension below the rate."""


class SingletonBoundViolation(NecError, AssertionError):
    pass


class DimensionMismatch(NecError, ValueError):
    pass


class Ambiguous(NecError):
    """Minimal-radius solutions of the decoding equation disagree on the message."""

    def __init__(self, msg, result=None):
        super().__init__(msg)
        self.result = result


class Undecodable(NecError):
    pass


class CodeFormatError(NecError, ValueError):
    pass
