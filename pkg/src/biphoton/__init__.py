"""Type-II downconversion pair simulation: dispersion, joint spectra,
Schmidt analysis, and local/nonlocal coincidence measurements."""

from .coincidence import (
    ClosedFormContext,
    CoincidenceCurve,
    DelayScan,
    MeasurementKind,
    fwhm_from_curve,
    fwhm_local_closed,
    fwhm_local_cw_limit,
    fwhm_nonlocal_closed,
    hom_curve,
    hom_rate_closed,
    hom_rate_numeric,
    nonlocal_curve,
    nonlocal_rate_closed,
    nonlocal_rate_numeric,
    visibility_closed,
    visibility_from_curve,
)
from .crystal import (
    C_LIGHT,
    CrystalSpec,
    PolarizationAxis,
    SellmeierSet,
    WalkoffPair,
    bulk_mismatch,
    builtin_sellmeier_path,
    central_mismatch,
    group_velocity,
    load_sellmeier_file,
    make_crystal,
    qpm_period_for,
    refractive_index,
    tuned,
    walkoffs,
)
from .errors import (
    BiphotonError,
    ConfigError,
    DecompositionError,
    DegenerateWidthError,
    GridCoverageError,
    PhaseMatchingError,
    ScanSpanError,
    WavelengthRangeError,
)
from .experiments import (
    Arm,
    ArmComparison,
    RunConfig,
    SweepRow,
    SweepSpec,
    SweepVariable,
    load_config,
    reproduce_figure,
    run_bandwidth_sweep,
    run_nonlocal_arm_comparison,
    run_sweep,
    run_verification,
    run_wavelength_sweep,
)
from .jsa import (
    GAMMA_PM,
    BandwidthConvention,
    DetuningGrid,
    JointSpectralAmplitude,
    PumpSpec,
    assemble_from_walkoffs,
    assemble_jsa,
    phase_matching_amplitude,
    pmf_angle,
    pump_envelope,
    sigma_from_bandwidth,
)
from .schmidt import (
    SchmidtSpectrum,
    gaussian_schmidt_number,
    schmidt_decompose,
    schmidt_number,
    schmidt_number_of,
)

__all__ = [
    "ArmComparison",
    "Arm",
    "BandwidthConvention",
    "BiphotonError",
    "C_LIGHT",
    "ClosedFormContext",
    "CoincidenceCurve",
    "ConfigError",
    "CrystalSpec",
    "DecompositionError",
    "DegenerateWidthError",
    "DelayScan",
    "DetuningGrid",
    "GAMMA_PM",
    "GridCoverageError",
    "JointSpectralAmplitude",
    "MeasurementKind",
    "PhaseMatchingError",
    "PolarizationAxis",
    "PumpSpec",
    "RunConfig",
    "ScanSpanError",
    "SchmidtSpectrum",
    "SellmeierSet",
    "SweepRow",
    "SweepSpec",
    "SweepVariable",
    "WalkoffPair",
    "WavelengthRangeError",
    "assemble_from_walkoffs",
    "assemble_jsa",
    "builtin_sellmeier_path",
    "bulk_mismatch",
    "central_mismatch",
    "fwhm_from_curve",
    "fwhm_local_closed",
    "fwhm_local_cw_limit",
    "fwhm_nonlocal_closed",
    "gaussian_schmidt_number",
    "group_velocity",
    "hom_curve",
    "hom_rate_closed",
    "hom_rate_numeric",
    "load_config",
    "load_sellmeier_file",
    "make_crystal",
    "nonlocal_curve",
    "nonlocal_rate_closed",
    "nonlocal_rate_numeric",
    "phase_matching_amplitude",
    "pmf_angle",
    "pump_envelope",
    "qpm_period_for",
    "refractive_index",
    "reproduce_figure",
    "run_bandwidth_sweep",
    "run_nonlocal_arm_comparison",
    "run_sweep",
    "run_verification",
    "run_wavelength_sweep",
    "schmidt_decompose",
    "schmidt_number",
    "schmidt_number_of",
    "sigma_from_bandwidth",
    "tuned",
    "visibility_closed",
    "visibility_from_curve",
    "walkoffs",
]
