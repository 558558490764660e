"""
Exceptions raised by chebyrank.
The command line maps them to exit codes: input and validation problems
exit with 1, numeric failures with 2.
"""


class ChebyrankError(Exception):
    """Root of every error raised on purpose by the package"""


class GraphFormatError(ChebyrankError, ValueError):
    """
    An input file could not be parsed.

    Arguments
    ---------
    message : str
        what went wrong.
    lineno : optional int
        1-based line number of the offending line.
    """

    def __init__(self, message, lineno=None):
        if lineno is not None:
            message = "line %d: %s" % (lineno, message)
        super().__init__(message)
        self.lineno = lineno


class GraphValidationError(ChebyrankError, ValueError):
    """A graph violates one of the undirected graph invariants"""


class DomainError(ChebyrankError, ValueError):
    """A parameter lies outside the domain of the requested computation"""


class CapacityError(ChebyrankError, ValueError):
    """A dense computation was requested on a graph that is too large"""


class NumericError(ChebyrankError, ArithmeticError):
    """
    Non-finite values, zero total mass or a failed quadrature.

    Arguments
    ---------
    message : str
        what went wrong.
    round : optional int
        iteration round at which the failure was detected.
    """

    def __init__(self, message, round=None):
        if round is not None:
            message = "round %d: %s" % (round, message)
        super().__init__(message)
        self.round = round
