"""Exception types raised across the pipeline."""


class TumorDetectError(Exception):
    """Base class for all package errors."""


class ImageFormatError(TumorDetectError, ValueError):
    """File exists but cannot be decoded as a raster image."""


class EmptyDatasetError(TumorDetectError, ValueError):
    pass


class DatasetParseError(TumorDetectError, ValueError):
    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class DegenerateDataError(TumorDetectError, ValueError):
    pass


class ConvergenceError(TumorDetectError, RuntimeError):
    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (KKT residual {residual:.3e})")
        self.residual = residual


class UndefinedMetricError(TumorDetectError, ValueError):
    pass


class EvaluationError(TumorDetectError, RuntimeError):
    def __init__(self, run: int, cause: Exception):
        super().__init__(f"run {run}: {cause}")
        self.run = run
        self.cause = cause
