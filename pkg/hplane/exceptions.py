"""
Custom exceptions for the hplane library.

This module defines the exception hierarchy for the symbolic engine and the
verification surface. All exceptions inherit from HPlaneError for easy
exception handling.

Example:
    try:
        element = algebra.word([("y", -1), ("x", 1)])
    except AlgebraError as e:
        print(f"Normalization failed: {e}")
    except HPlaneError as e:
        print(f"General hplane error: {e}")
"""


class HPlaneError(Exception):
    """
    Base exception for all hplane errors.

    All other hplane exceptions inherit from this class, allowing
    catch-all exception handling with a single except clause.
    """
    pass


class ScalarError(HPlaneError):
    """
    Exception raised by coefficient arithmetic.

    Common causes:
    - Division by a scalar that is not a single term ("non-invertible scalar")
    - Taking h -> 0 of a term with a negative power ("singular limit")
    - Converting a symbolic expression that is not a Laurent polynomial
    """
    pass


class AlgebraError(HPlaneError):
    """
    Exception raised when normalizing or combining algebra elements.

    Common causes:
    - Negative exponent on a generator without an inverse ("not invertible")
    - Mixing elements of different presentations ("algebra mismatch")
    - Exponents outside the supported machine range
    """
    pass


class CalculusError(HPlaneError):
    """
    Exception raised by differential calculi.

    Common causes:
    - Forms of degree 3 or more ("unsupported degree")
    - Swap rules and wedge relations that disagree with d
    - Interior product of an algebra element
    - Evaluating a 1-form on a derivation the calculus cannot express
    """
    pass


class GeometryError(HPlaneError):
    """
    Exception raised by connections, braid maps and the commutative limit.

    Common causes:
    - Braid slot outside the tensor rank
    - Connection family parameter out of range ("invalid n")
    - Frame-only operations on a calculus without a frame
    - Maps that cannot be inverted on the chart
    """
    pass


class ExprParseError(HPlaneError):
    """
    Exception raised when an expression cannot be parsed or evaluated.

    The offending character offset is kept in ``position`` (or None when
    the error is not tied to one place in the input).
    """

    def __init__(self, message: str, position=None):
        if position is not None:
            message = f"{message} at position {position}"
        super().__init__(message)
        self.position = position


class SuiteError(HPlaneError):
    """
    Exception raised by the verification runner.

    Used for unknown suite names and malformed configuration files.
    """
    pass
