class NotADiscriminantError(ValueError):
    """Raised for D >= 0 or D = 2, 3 (mod 4)."""

    def __init__(self, value):
        self.value = value
        super().__init__(f"{value} is not a discriminant (need D < 0 and D = 0 or 1 mod 4).")


class PrecisionError(ArithmeticError):
    """A value could not be certified to the requested number of digits."""


class ResourceLimitError(RuntimeError):
    """The request exceeds a memory or time bound."""
