"""Exception types shared across the package.

Everything raised on purpose derives from BiphotonError so callers (and the
CLI) can distinguish modelling errors from programming mistakes.
"""


class BiphotonError(Exception):
    """Base class for all errors raised by this package."""


class WavelengthRangeError(BiphotonError, ValueError):
    """Wavelength outside the validity range of a Sellmeier coefficient set."""


class PhaseMatchingError(BiphotonError, ValueError):
    """No poling period can zero the collinear phase mismatch."""


class GridCoverageError(BiphotonError, ValueError):
    """Detuning grid too small to contain the assembled joint spectrum."""


class DegenerateWidthError(BiphotonError, ValueError):
    """A closed-form width or visibility is undefined for these parameters."""


class ScanSpanError(BiphotonError, ValueError):
    """Delay scan too narrow to bracket the half-extremum crossings."""


class DecompositionError(BiphotonError, ValueError):
    """Schmidt decomposition cannot proceed (e.g. numerically zero input)."""


class ConfigError(BiphotonError, ValueError):
    """Invalid configuration file, field value, or data file schema."""
