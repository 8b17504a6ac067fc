"""Exception types shared across the package.

The CLI maps these onto its exit-code contract: parse problems exit 2,
the zero form exits 3, numeric failures exit 4, verification failures 5.
"""


class WaringFormsError(Exception):
    """Base class for all package-specific errors."""


class ParseError(WaringFormsError):
    """Syntax or homogeneity error in a textual form/operator/decomposition.

    `position` is the 0-based character offset the scanner was looking at.
    """

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class ZeroFormError(WaringFormsError):
    """An operation that requires a nonzero form received the zero form."""


class NumericError(WaringFormsError):
    """A float computation failed its accuracy contract (root residuals,
    repeated-root clustering, vanishing weights)."""


class OracleSearchError(WaringFormsError):
    """The annihilator-based rank oracle exhausted its search without an
    answer; the result would be unreliable, so none is returned."""


class VerificationError(WaringFormsError):
    """A decomposition failed re-expansion verification."""
