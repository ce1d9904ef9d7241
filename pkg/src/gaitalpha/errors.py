"""Exception hierarchy for gaitalpha.

Every error raised on purpose by this package derives from GaitAlphaError so
callers (and the HTTP service layer) can map failures to exit codes / status
codes without string matching.
"""


class GaitAlphaError(Exception):
    """Base class for all gaitalpha errors."""


class InvalidArgumentError(GaitAlphaError):
    """A call violated an operation's precondition."""


class ConfigError(GaitAlphaError):
    """Inconsistent configuration, e.g. mismatched parameter shapes."""


class DataIntegrityError(GaitAlphaError):
    """Input data is physically impossible or numerically unusable
    (non-finite samples, negative forces, broken time base)."""


class OutOfRangeError(InvalidArgumentError):
    """An index fell outside the valid window range of a trial."""


class InvalidStateError(GaitAlphaError):
    """An operation was called with stale or mismatched intermediate state."""


class TrialParseError(GaitAlphaError):
    """A trial CSV file could not be parsed.

    ``line`` is the 1-based line number of the offending row (0 for
    file-level problems such as a bad header).
    """

    def __init__(self, message: str, line: int = 0):
        super().__init__(message)
        self.line = line


class DivergedTrainingError(GaitAlphaError):
    """Training produced a non-finite loss."""


class InsufficientDataError(GaitAlphaError):
    """Not enough data to compute the requested statistic."""


class UndefinedMetricError(GaitAlphaError):
    """The requested metric is undefined on this input (e.g. R^2 of a
    constant target series)."""


class ModelFileError(GaitAlphaError):
    """Base class for model persistence failures."""


class ModelFormatError(ModelFileError):
    """The file does not look like a model file at all (bad magic)."""


class ModelVersionError(ModelFileError):
    """The file uses an unsupported format version."""


class ModelChecksumError(ModelFileError):
    """The file's checksum does not match its content."""


class ModelTruncatedError(ModelFileError):
    """The file is shorter than its header demands."""
