"""Exception hierarchy.

Every error carries a short machine-readable ``code`` which the CLI prints as
``error: <code>: <detail>``.
"""


class CantorError(Exception):
    code = "error"


class ParamsMismatch(CantorError):
    code = "params-mismatch"


class KindMismatch(CantorError):
    code = "kind-mismatch"


class InvalidWord(CantorError):
    code = "invalid-word"


class NotAPrefix(CantorError):
    code = "not-a-prefix"


class NotAntichain(CantorError):
    code = "not-antichain"


class Incomplete(CantorError):
    code = "incomplete"


class IsIdentity(CantorError):
    code = "is-identity"


class EmptyTarget(CantorError):
    code = "empty-target"


class E1NotProper(CantorError):
    code = "e1-not-proper"


class PointOutsideU(CantorError):
    code = "point-outside-u"


class VNotInsideU(CantorError):
    code = "v-not-inside-u"


class NotCircularlyOrdered(CantorError):
    code = "not-circularly-ordered"


class NotNAdic(CantorError):
    code = "not-n-adic"


class SegmentMismatch(CantorError):
    """Arc lengths disagree modulo n-1, so no prefix map in T can match them."""

    code = "segment-mismatch"


class AvoidContainsX(CantorError):
    code = "avoid-contains-x"


class NotInvertible(CantorError):
    code = "not-invertible"

    def __init__(self, message, state=None):
        super().__init__(message)
        self.state = state


class NotSynchronizingError(CantorError):
    code = "not-synchronizing"

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class CoreNotSynchronous(CantorError):
    code = "core-not-synchronous"


class CoreNotInvertible(CantorError):
    code = "core-not-invertible"


class InvalidOutput(CantorError):
    code = "invalid-output"


class NotBijective(CantorError):
    code = "not-bijective"

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class WordTooShortForCell(CantorError):
    """The input word is a strict prefix of every matching cell.

    ``prefix`` holds the output prefix shared by all extensions of the word.
    """

    code = "word-too-short"

    def __init__(self, message, prefix=()):
        super().__init__(message)
        self.prefix = prefix


class NotCircleMap(CantorError):
    code = "not-circle-map"


class DoesNotFixPoint(CantorError):
    code = "does-not-fix-point"


class NotOrientationPreserving(CantorError):
    code = "not-orientation-preserving"


class VariantMismatch(CantorError):
    code = "variant-mismatch"


class DepthBoundExceeded(CantorError):
    code = "depth-bound-exceeded"


class UnknownHeader(CantorError):
    code = "unknown-header"


class ParseError(CantorError):
    code = "syntax-error"

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class InvariantViolation(ParseError):
    code = "invariant-violation"
