""" Exceptions raised by qcrypt. """

class QcryptError(Exception):
    """ Base class for every error raised by the toolkit. """

class ValidationError(QcryptError, ValueError):
    """
    Bad input: mismatched dimensions, invalid distributions, out of range parameters or
    matrices that fail their invariants. The CLI maps this to exit code 2.
    """

class ConvergenceError(QcryptError, RuntimeError):
    """ A numerical routine ran out of iterations. The CLI maps this to exit code 3. """

class InfeasibleError(ConvergenceError):
    """ SDP residuals stalled or blew up, so the problem looks infeasible or unbounded. """

class DecodingError(QcryptError):
    """ A syndrome pattern outside the decoding radius of a code. """
