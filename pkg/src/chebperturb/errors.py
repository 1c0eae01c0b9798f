"""Exception types shared across the package."""


class PerturbationError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(PerturbationError):
    """Invalid configuration, parameter value, or dataset shape."""


class CsvFormatError(ValidationError):
    """Malformed CSV input: ragged rows, non-numeric cells, or an empty file."""


class DegenerateWindowError(PerturbationError):
    """The normal system built for a window is singular or too ill-conditioned."""


class PrivacyFloorError(PerturbationError):
    """Too few rows to fit the four-coefficient model; refusing to release them."""
