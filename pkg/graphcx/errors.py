"""Exceptions raised by graphcx, and the CLI exit code attached to each family."""

EXIT_OK = 0
EXIT_IDENTITY_VIOLATED = 1
EXIT_INPUT_ERROR = 2
EXIT_INTERNAL_ERROR = 3
EXIT_VALENCY_ERROR = 4
EXIT_ARITY_ERROR = 5


class GraphCxError(Exception):
    exit_code = EXIT_INTERNAL_ERROR


class GraphInputError(GraphCxError, ValueError):
    '''
    malformed graph text, invalid labels, bad half-edge references; ValencyError for valency violations.
    '''
    exit_code = EXIT_INPUT_ERROR


class ValencyError(GraphInputError):
    exit_code = EXIT_VALENCY_ERROR


class ArityError(GraphCxError, ValueError):
    exit_code = EXIT_ARITY_ERROR


class IdentityViolation(GraphCxError):
    '''
    an identity that should vanish did not.

    :param message: str, human readable description
    :param witness: the offending datum (a TensorVector, an FElement, ...), kept for reporting
    '''
    exit_code = EXIT_IDENTITY_VIOLATED

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class ConsistencyError(GraphCxError):
    exit_code = EXIT_INTERNAL_ERROR
