"""Exception hierarchy.

Two branches matter for the CLI exit-code contract: input/config problems
(``DataValidationError``, exit code 2) and degenerate numeric conditions
discovered during computation (``NumericError``, exit code 3).
"""


class AssayQCError(Exception):
    """Base class for all errors raised by this package."""


class DataValidationError(AssayQCError):
    """Invalid input data or configuration (CLI exit code 2)."""


class NumericError(AssayQCError):
    """A metric's precondition failed on otherwise valid data (CLI exit code 3)."""


# --- sample / metric errors -------------------------------------------------

class EmptySampleSet(DataValidationError):
    """A sample group contained no values."""


class DegenerateVariance(NumericError):
    """A variance required to be positive was zero."""


class DivisionByZeroMean(NumericError):
    """Signal-to-background is undefined for a zero negative-control mean."""


class DegenerateMeanDifference(NumericError):
    """Z'-factor is undefined when the two group means coincide."""


# --- simulation errors ------------------------------------------------------

class ZeroPowerSignal(NumericError):
    """AWGN cannot be scaled against a signal with zero mean-square power."""


class InvalidSubsampleSize(DataValidationError):
    """Requested subsample size exceeds a group size (or is < 1)."""


# --- plate ingestion errors -------------------------------------------------

class MalformedRow(DataValidationError):
    """A CSV row did not match the documented plate schema."""


class UnknownRole(DataValidationError):
    """A well role outside {pos, neg, sample, empty}."""


class DuplicateWell(DataValidationError):
    """Two rows addressed the same (plate, row, col)."""


class NonFiniteValue(DataValidationError):
    """A well value parsed to NaN or infinity."""


# --- hit-selection errors ---------------------------------------------------

class InsufficientControls(DataValidationError):
    """A plate lacks the minimum number of control wells."""


class ZeroSign(NumericError):
    """No hit direction can be derived when control means are exactly equal."""


class SingleClassInput(NumericError):
    """Logistic fitting needs at least one sample of each label."""


# --- CLI / config errors ----------------------------------------------------

class ConfigError(DataValidationError):
    """A scenario/config file failed validation."""


class UnknownScenario(DataValidationError):
    """Scenario name outside the supported set."""
