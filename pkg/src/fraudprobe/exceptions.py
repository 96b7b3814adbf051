"""Package-wide exception types, each mapped to a CLI error category."""


class FraudprobeError(Exception):
    """Base class; `category` is the machine-parsable CLI error tag."""

    category = "error"


class ConfigError(FraudprobeError):
    """Invalid configuration value or combination."""

    category = "bad-config"


class DataFormatError(FraudprobeError):
    """Malformed dataset row; carries the 1-based line number when known."""

    category = "parse-error"

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class MissingArtifactError(FraudprobeError):
    """An upstream model/dataset file this command depends on is absent."""

    category = "missing-artifact"


class NotCalibratedError(FraudprobeError):
    """Detector used for classification before a threshold was calibrated."""

    category = "not-calibrated"
