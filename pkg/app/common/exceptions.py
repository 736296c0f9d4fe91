class FineGrainError(Exception):
    """Base exception for all finegrain errors"""


class InvalidInputError(FineGrainError):
    """Raised when numeric inputs are malformed (non-finite, empty, wrong shape)"""


class ConfigurationError(FineGrainError):
    """Raised when a configuration value or file is invalid"""


class InvalidDatasetError(FineGrainError):
    """Raised when a dataset violates a pipeline precondition"""


class UndefinedMetricError(FineGrainError):
    """Raised when a ranking metric has an empty group"""


class UnsupportedError(FineGrainError):
    """Raised when an operation is not available for the given model"""


class CheckpointError(FineGrainError):
    """Raised when a checkpoint file cannot be decoded or does not match"""


class DatasetParseError(FineGrainError):
    """Raised when a line-oriented file fails to parse."""

    def __init__(self, line_no: int, reason: str):
        self.line_no = line_no
        self.reason = reason
        super().__init__(f"line {line_no}: {reason}")


class ExperimentError(FineGrainError):
    """Raised when a single (method, seed) run fails inside an experiment."""

    def __init__(self, method: str, seed: int, cause: Exception):
        self.method = method
        self.seed = seed
        self.cause = cause
        super().__init__(f"method '{method}' seed {seed}: {cause}")
