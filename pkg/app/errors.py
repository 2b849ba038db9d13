"""Exception hierarchy shared by every module."""
from __future__ import annotations


class VolTargetError(ValueError):
    """Base class for domain failures reported to the user."""


class IngestionError(VolTargetError):
    def __init__(self, path: str, row: int | None, message: str):
        self.path = path
        self.row = row
        where = f"{path}, row {row}" if row is not None else path
        super().__init__(f"{where}: {message}")


class SeriesError(VolTargetError):
    pass


class DegenerateEstimateError(VolTargetError):
    pass


class InsufficientSamplesError(VolTargetError):
    pass


class GridCellError(VolTargetError):
    def __init__(self, gain: float, theta: float, cause: Exception):
        self.gain = gain
        self.theta = theta
        self.cause = cause
        super().__init__(f"grid cell (g={gain:g}, theta={theta:g}) failed: {cause}")


class CohortAssetError(VolTargetError):
    def __init__(self, label: str, cause: Exception):
        self.label = label
        self.cause = cause
        super().__init__(f"cohort asset {label!r} failed: {cause}")
