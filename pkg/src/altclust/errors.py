"""Exception types shared across the package."""


class AltclustError(Exception):
    """Base class for all altclust errors."""


class ShapeError(AltclustError):
    """Operands have inconsistent dimensions."""


class DataFormatError(AltclustError):
    """An on-disk dataset artifact cannot be parsed."""


class InvariantError(AltclustError):
    """A value violates a structural invariant (e.g. non-finite entries)."""


class MaskInvariantError(InvariantError):
    """A presence mask is not binary or leaves an instance with no view."""


class InfeasibleError(AltclustError):
    """The request cannot be satisfied (e.g. erasure target too high)."""


class DegenerateInputError(AltclustError):
    """Input is too degenerate for the operation (empty view, N < 2, ...)."""


class ConfigError(AltclustError):
    """Invalid training or run configuration."""


class MetricUndefinedError(AltclustError):
    """A validity metric is undefined for the given clustering."""


class DivergenceError(AltclustError):
    """Optimization produced a non-finite loss or parameter."""

    def __init__(self, epoch: int, message: str | None = None):
        self.epoch = epoch
        super().__init__(message or f"non-finite loss at epoch {epoch}")
