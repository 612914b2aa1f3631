"""Exception types shared across the package.

The CLI maps these onto distinct exit codes, so keep the hierarchy flat:
ValidationError for bad arguments/configs, DataFormatError for malformed
input files, NumericError for non-finite results of a computation.
"""


class ValidationError(ValueError):
    """A configuration value or argument violates its documented contract."""


class DataFormatError(ValueError):
    """An input file is malformed (ragged CSV row, bad IDX magic, ...)."""


class NumericError(ArithmeticError):
    """A computation produced NaN/Inf where a finite value is required."""
