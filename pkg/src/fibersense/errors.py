"""Exception types shared across the package.

The CLI maps these onto exit codes: ValidationError -> 2, FormatError -> 3,
anything else -> 1.
"""


class ValidationError(ValueError):
    """A config, argument or input record violates a documented invariant."""


class FormatError(RuntimeError):
    """An on-disk artifact does not conform to its file format."""
