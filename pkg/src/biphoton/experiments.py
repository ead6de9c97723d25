"""Parameter sweeps, preset figure outputs, verification, and run configs.

The sweep engine evaluates the closed-form widths per point (they are
cross-checked against the quadrature integrators elsewhere), so even fine
wavelength grids run in milliseconds.  Output files are deterministic:
9 significant digits, fixed column order, sorted JSON keys, no timestamps.

Pump bandwidth handling deserves a note.  A sweep can hold the pump spectrum
fixed in two physically distinct ways:

* constant wavelength bandwidth: the nm-FWHM stays fixed and sigma_p is
  recomputed at every pump wavelength (sigma grows as the pump tunes blue);
* constant sigma: the angular-frequency width is converted once, at a stated
  reference wavelength, and reused across the sweep.

Both are supported because the two conventions move the broadening maximum
by tens of nm; ``SweepSpec.lock_reference_nm`` selects the second.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path

import numpy as np

from .coincidence import (
    ClosedFormContext,
    DelayScan,
    MeasurementKind,
    fwhm_local_closed,
    fwhm_nonlocal_closed,
    hom_curve,
    nonlocal_curve,
    visibility_closed,
)
from .crystal import (
    CrystalSpec,
    make_crystal,
    qpm_period_for,
    tuned,
    walkoffs,
)
from .errors import BiphotonError, ConfigError
from .jsa import (
    BandwidthConvention,
    DetuningGrid,
    PumpSpec,
    assemble_jsa,
    pmf_angle,
    sigma_from_bandwidth,
)
from .schmidt import gaussian_schmidt_number, schmidt_number_of, schmidt_decompose

BETA_REFERENCE = 100e-27  # s^2, a ~20 m fiber's worth of group-delay dispersion
DEFAULT_SWEEP_START_NM = 590.0
DEFAULT_SWEEP_STOP_NM = 810.0
DEFAULT_SWEEP_STEP_NM = 1.0


class SweepVariable(Enum):
    PUMP_WAVELENGTH = "pump_wavelength"
    PUMP_FWHM = "pump_fwhm"


class Arm(Enum):
    SIGNAL = "signal"
    IDLER = "idler"


@dataclass(frozen=True)
class SweepSpec:
    """One sweep: what varies, over what range, with everything else fixed.

    Exactly one of ``bandwidth_nm`` and ``sigma_rad_s`` must be given for a
    wavelength sweep.  ``lock_reference_nm`` freezes the nm-to-sigma
    conversion at that pump wavelength; leaving it unset recomputes sigma_p
    at every point.  For a bandwidth sweep the range itself is in nm and
    ``pump_nm`` fixes the operating point.
    """

    crystal: CrystalSpec
    variable: SweepVariable = SweepVariable.PUMP_WAVELENGTH
    start_nm: float = DEFAULT_SWEEP_START_NM
    stop_nm: float = DEFAULT_SWEEP_STOP_NM
    step_nm: float = DEFAULT_SWEEP_STEP_NM
    bandwidth_nm: float | None = None
    sigma_rad_s: float | None = None
    lock_reference_nm: float | None = None
    convention: BandwidthConvention = BandwidthConvention.INTENSITY_FWHM
    pump_nm: float | None = None
    beta_ref: float = BETA_REFERENCE
    arm: Arm = Arm.SIGNAL
    kind: MeasurementKind = MeasurementKind.LOCAL
    grid_n: int = 256

    def __post_init__(self) -> None:
        if self.step_nm <= 0.0:
            raise ConfigError(f"sweep step must be positive, got {self.step_nm}")
        if self.stop_nm < self.start_nm:
            raise ConfigError(
                f"sweep range is empty: start {self.start_nm} nm > stop {self.stop_nm} nm"
            )
        if self.variable is SweepVariable.PUMP_WAVELENGTH:
            if (self.bandwidth_nm is None) == (self.sigma_rad_s is None):
                raise ConfigError(
                    "give exactly one of bandwidth_nm and sigma_rad_s for a "
                    "wavelength sweep"
                )
            if self.sigma_rad_s is not None and self.lock_reference_nm is not None:
                raise ConfigError("lock_reference_nm is meaningless with sigma_rad_s")
        else:
            if self.pump_nm is None:
                raise ConfigError("a bandwidth sweep needs pump_nm")
            if self.bandwidth_nm is not None or self.sigma_rad_s is not None:
                raise ConfigError(
                    "bandwidth sweeps take their bandwidths from the range; "
                    "leave bandwidth_nm and sigma_rad_s unset"
                )
        for name in ("bandwidth_nm", "sigma_rad_s", "lock_reference_nm", "pump_nm"):
            value = getattr(self, name)
            if value is not None and value <= 0.0:
                raise ConfigError(f"{name} must be positive, got {value}")
        if self.grid_n < 8:
            raise ConfigError(f"grid_n too small: {self.grid_n}")

    def points(self) -> np.ndarray:
        count = int(math.floor((self.stop_nm - self.start_nm) / self.step_nm + 1e-9)) + 1
        return self.start_nm + self.step_nm * np.arange(count)

    def betas(self) -> tuple[float, float]:
        """(beta_s, beta_i) with the reference dispersion placed in one arm."""
        if self.arm is Arm.SIGNAL:
            return self.beta_ref, 0.0
        return 0.0, self.beta_ref


@dataclass(frozen=True)
class SweepRow:
    """One sweep point; ``error`` is empty on success, else the NaN'd reason."""

    lambda_p_nm: float
    bandwidth_nm: float
    sigma_p_rad_s: float
    tau_s_s: float
    tau_i_s: float
    schmidt_k: float
    fwhm_ref_s: float
    fwhm_zero_s: float
    delta_fwhm_s: float
    pmf_angle_rad: float
    visibility: float
    error: str = ""


SWEEP_COLUMNS = (
    "lambda_p_nm",
    "bandwidth_nm",
    "sigma_p_rad_s",
    "tau_s_s",
    "tau_i_s",
    "schmidt_k",
    "fwhm_ref_s",
    "fwhm_zero_s",
    "delta_fwhm_s",
    "pmf_angle_rad",
    "visibility",
    "error",
)


def _sigma_at(spec: SweepSpec, lambda_nm: float, bandwidth_nm: float) -> float:
    if spec.sigma_rad_s is not None:
        return spec.sigma_rad_s
    reference_nm = spec.lock_reference_nm if spec.lock_reference_nm is not None else lambda_nm
    return sigma_from_bandwidth(reference_nm * 1e-9, bandwidth_nm * 1e-9, spec.convention)


def _fwhm_with(spec: SweepSpec, ctx: ClosedFormContext) -> float:
    if spec.kind is MeasurementKind.LOCAL:
        return fwhm_local_closed(ctx)
    return fwhm_nonlocal_closed(ctx, form="full")


def _failed_row(lambda_nm: float, bandwidth_nm: float, exc: BiphotonError) -> SweepRow:
    nan = float("nan")
    return SweepRow(
        lambda_p_nm=lambda_nm,
        bandwidth_nm=bandwidth_nm,
        sigma_p_rad_s=nan,
        tau_s_s=nan,
        tau_i_s=nan,
        schmidt_k=nan,
        fwhm_ref_s=nan,
        fwhm_zero_s=nan,
        delta_fwhm_s=nan,
        pmf_angle_rad=nan,
        visibility=nan,
        error=f"{type(exc).__name__}: {exc}",
    )


def _evaluate_point(spec: SweepSpec, lambda_nm: float, bandwidth_nm: float) -> SweepRow:
    lambda_m = lambda_nm * 1e-9
    try:
        # re-pole the crystal so phase matching stays central at this pump
        crystal = tuned(spec.crystal, lambda_m)
        pair = walkoffs(crystal, lambda_m)
        sigma_p = _sigma_at(spec, lambda_nm, bandwidth_nm)
        beta_s, beta_i = spec.betas()
        ctx_ref = ClosedFormContext(sigma_p, pair.tau_s, pair.tau_i, beta_s, beta_i)
        ctx_zero = replace(ctx_ref, beta_s=0.0, beta_i=0.0)
        fwhm_ref = _fwhm_with(spec, ctx_ref)
        fwhm_zero = _fwhm_with(spec, ctx_zero)
        return SweepRow(
            lambda_p_nm=lambda_nm,
            bandwidth_nm=bandwidth_nm,
            sigma_p_rad_s=sigma_p,
            tau_s_s=pair.tau_s,
            tau_i_s=pair.tau_i,
            schmidt_k=gaussian_schmidt_number(pair, sigma_p),
            fwhm_ref_s=fwhm_ref,
            fwhm_zero_s=fwhm_zero,
            delta_fwhm_s=fwhm_ref - fwhm_zero,
            pmf_angle_rad=pmf_angle(pair),
            visibility=visibility_closed(ctx_ref),
            error="",
        )
    except BiphotonError as exc:
        return _failed_row(lambda_nm, bandwidth_nm, exc)


def _spot_check(spec: SweepSpec, rows: list[SweepRow]) -> None:
    """Re-derive three rows straight from the width functions.

    Guards the table assembly against drift relative to the module the
    numbers come from; seeded so every run checks the same rows.
    """
    good = [r for r in rows if not r.error]
    if not good:
        return
    rng = np.random.default_rng(0xB1F0)
    for idx in rng.choice(len(good), size=min(3, len(good)), replace=False):
        row = good[int(idx)]
        beta_s, beta_i = spec.betas()
        ctx = ClosedFormContext(row.sigma_p_rad_s, row.tau_s_s, row.tau_i_s, beta_s, beta_i)
        again = _fwhm_with(spec, ctx)
        if again != row.fwhm_ref_s:
            raise RuntimeError(
                f"sweep row at {row.lambda_p_nm} nm disagrees with a direct "
                f"width call: {row.fwhm_ref_s!r} vs {again!r}"
            )


def run_wavelength_sweep(spec: SweepSpec) -> list[SweepRow]:
    """One row per pump wavelength, ascending; failures land in ``error``."""
    if spec.variable is not SweepVariable.PUMP_WAVELENGTH:
        raise ConfigError("run_wavelength_sweep needs variable=PUMP_WAVELENGTH")
    assert spec.bandwidth_nm is not None or spec.sigma_rad_s is not None
    bandwidth = spec.bandwidth_nm if spec.bandwidth_nm is not None else float("nan")
    rows = [_evaluate_point(spec, float(nm), bandwidth) for nm in spec.points()]
    _spot_check(spec, rows)
    return rows


def run_bandwidth_sweep(spec: SweepSpec) -> list[SweepRow]:
    """One row per pump bandwidth (nm) at a fixed pump wavelength."""
    if spec.variable is not SweepVariable.PUMP_FWHM:
        raise ConfigError("run_bandwidth_sweep needs variable=PUMP_FWHM")
    assert spec.pump_nm is not None
    rows = [_evaluate_point(spec, spec.pump_nm, float(bw)) for bw in spec.points()]
    _spot_check(spec, rows)
    return rows


def run_sweep(spec: SweepSpec) -> list[SweepRow]:
    if spec.variable is SweepVariable.PUMP_WAVELENGTH:
        return run_wavelength_sweep(spec)
    return run_bandwidth_sweep(spec)


@dataclass(frozen=True)
class ArmComparison:
    """The same nonlocal sweep with the dispersive element in either arm."""

    signal_rows: list[SweepRow]
    idler_rows: list[SweepRow]

    @property
    def broadening_difference_s(self) -> list[float]:
        """Per-row signal-arm minus idler-arm broadening."""
        return [
            s.delta_fwhm_s - i.delta_fwhm_s
            for s, i in zip(self.signal_rows, self.idler_rows)
        ]


def run_nonlocal_arm_comparison(spec: SweepSpec) -> ArmComparison:
    if spec.kind is not MeasurementKind.NONLOCAL:
        raise ConfigError("arm comparison is defined for the nonlocal measurement")
    signal_rows = run_sweep(replace(spec, arm=Arm.SIGNAL))
    idler_rows = run_sweep(replace(spec, arm=Arm.IDLER))
    return ArmComparison(signal_rows, idler_rows)


# ---------------------------------------------------------------------------
# deterministic file emission


def _fmt(value: float) -> str:
    return "%.9g" % value


def _write_csv(path: Path, header: tuple[str, ...], rows: list[tuple]) -> None:
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _write_json(path: Path, payload: dict) -> None:
    with open(path, "w") as handle:
        json.dump(payload, handle, indent=2, sort_keys=True)
        handle.write("\n")


def _row_cells(row: SweepRow) -> tuple:
    return tuple(
        _fmt(getattr(row, name)) if name != "error" else row.error
        for name in SWEEP_COLUMNS
    )


def write_sweep_csv(path: Path, rows: list[SweepRow]) -> None:
    _write_csv(path, SWEEP_COLUMNS, [_row_cells(r) for r in rows])


def write_curve_csv(path: Path, delays: np.ndarray, columns: dict[str, np.ndarray]) -> None:
    header = ("tau_s",) + tuple(columns)
    body = [
        tuple(_fmt(v) for v in (delays[j], *(col[j] for col in columns.values())))
        for j in range(len(delays))
    ]
    _write_csv(path, header, body)


def write_jsa_csv(path: Path, magnitude_path: Path, state) -> None:
    grid: DetuningGrid = state.grid
    header = ("nu_s_rad_s", "nu_i_rad_s", "re_f", "im_f")
    body = []
    for j, nu_s in enumerate(grid.nu_s):
        for k, nu_i in enumerate(grid.nu_i):
            value = state.values[j, k]
            body.append((_fmt(nu_s), _fmt(nu_i), _fmt(value.real), _fmt(value.imag)))
    _write_csv(path, header, body)
    magnitude = state.magnitude()
    grid_rows = [("nu_s_rad_s \\ nu_i_rad_s",) + tuple(_fmt(v) for v in grid.nu_i)]
    for j, nu_s in enumerate(grid.nu_s):
        grid_rows.append((_fmt(nu_s),) + tuple(_fmt(v) for v in magnitude[j]))
    _write_csv(magnitude_path, grid_rows[0], grid_rows[1:])


# ---------------------------------------------------------------------------
# named figure presets

FIGURE_TAGS = (
    "fig2",
    "fig3",
    "fig5",
    "fig6a",
    "fig6b",
    "fig6c",
    "fig6d",
    "fig7a",
    "fig7b",
)

_FIG6_BANDWIDTHS = {"fig6a": 2.0, "fig6b": 1.0, "fig6c": 0.4, "fig6d": 0.1}
_FIG7_FAMILY = (4.0, 2.0, 1.0, 0.4, 0.1)
_BASE_PUMP_NM = 810.0
_BASE_FWHM_NM = 4.0


def _bw_label(bw: float) -> str:
    return ("%g" % bw).replace(".", "p") + "nm"


def _sweep_payload(spec: SweepSpec) -> dict:
    payload = {
        "variable": spec.variable.value,
        "start_nm": spec.start_nm,
        "stop_nm": spec.stop_nm,
        "step_nm": spec.step_nm,
        "bandwidth_nm": spec.bandwidth_nm,
        "sigma_rad_s": spec.sigma_rad_s,
        "lock_reference_nm": spec.lock_reference_nm,
        "bandwidth_convention": spec.convention.value,
        "pump_nm": spec.pump_nm,
        "beta_ref_s2": spec.beta_ref,
        "arm": spec.arm.value,
        "measurement": spec.kind.value,
        "crystal_length_m": spec.crystal.length_m,
    }
    return payload


def reproduce_figure(tag: str, out_dir: str | Path, crystal: CrystalSpec | None = None) -> list[Path]:
    """Write the preset CSV + JSON for a named output; returns the paths."""
    if tag not in FIGURE_TAGS:
        raise ValueError(f"unknown figure tag {tag!r}; expected one of {', '.join(FIGURE_TAGS)}")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    crystal = crystal if crystal is not None else make_crystal(10e-3)
    if tag == "fig2":
        return _figure_hom_pair(out, crystal)
    if tag == "fig3":
        return _figure_jsa(out, crystal)
    if tag == "fig5":
        return _figure_locked_sweep(out, crystal)
    if tag in _FIG6_BANDWIDTHS:
        return _figure_tracked_sweep(tag, out, crystal, _FIG6_BANDWIDTHS[tag])
    return _figure_arm_family(tag, out, crystal)


def _base_pump(sigma_reference_nm: float | None = None) -> PumpSpec:
    reference = sigma_reference_nm if sigma_reference_nm is not None else _BASE_PUMP_NM
    sigma = sigma_from_bandwidth(
        reference * 1e-9, _BASE_FWHM_NM * 1e-9, BandwidthConvention.INTENSITY_FWHM
    )
    return PumpSpec(wavelength_m=_BASE_PUMP_NM * 1e-9, sigma_rad_s=sigma)


def _figure_hom_pair(out: Path, crystal: CrystalSpec) -> list[Path]:
    pump = _base_pump()
    crystal = tuned(crystal, pump.wavelength_m)
    plain = assemble_jsa(crystal, pump, grid_n=512)
    dispersed = assemble_jsa(crystal, pump, beta_s=BETA_REFERENCE, grid_n=512)
    scan = DelayScan.around_width(
        fwhm_local_closed(ClosedFormContext.from_state(dispersed)), n=241, span_factor=6.0
    )
    curve_plain = hom_curve(plain, scan)
    curve_disp = hom_curve(dispersed, scan)
    csv_path = out / "fig2_curves.csv"
    write_curve_csv(
        csv_path,
        scan.delays,
        {"rate_no_dispersion": curve_plain.rates, "rate_dispersed": curve_disp.rates},
    )
    summary = {
        "pump_nm": _BASE_PUMP_NM,
        "pump_fwhm_nm": _BASE_FWHM_NM,
        "crystal_length_m": crystal.length_m,
        "beta_s_s2": [0.0, BETA_REFERENCE],
        "beta_i_s2": 0.0,
        "grid_n": 512,
        "fwhm_no_dispersion_s": curve_plain.fwhm_s,
        "fwhm_dispersed_s": curve_disp.fwhm_s,
        "broadening_ratio": curve_disp.fwhm_s / curve_plain.fwhm_s,
        "visibility_no_dispersion": curve_plain.visibility,
        "visibility_dispersed": curve_disp.visibility,
    }
    json_path = out / "fig2_summary.json"
    _write_json(json_path, summary)
    return [csv_path, json_path]


def _figure_jsa(out: Path, crystal: CrystalSpec) -> list[Path]:
    pump = _base_pump()
    crystal = tuned(crystal, pump.wavelength_m)
    state = assemble_jsa(crystal, pump, grid_n=128)
    csv_path = out / "fig3_jsa.csv"
    magnitude_path = out / "fig3_magnitude.csv"
    write_jsa_csv(csv_path, magnitude_path, state)
    spectrum = schmidt_decompose(state)
    summary = {
        "pump_nm": _BASE_PUMP_NM,
        "pump_fwhm_nm": _BASE_FWHM_NM,
        "crystal_length_m": crystal.length_m,
        "grid_n": 128,
        "schmidt_number": schmidt_number_of(state),
        "leading_coefficients": [float(k) for k in spectrum.coefficients[:8]],
    }
    json_path = out / "fig3_summary.json"
    _write_json(json_path, summary)
    return [csv_path, magnitude_path, json_path]


def _figure_locked_sweep(out: Path, crystal: CrystalSpec) -> list[Path]:
    spec = SweepSpec(
        crystal=crystal,
        bandwidth_nm=_BASE_FWHM_NM,
        lock_reference_nm=_BASE_PUMP_NM,
    )
    rows = run_wavelength_sweep(spec)
    csv_path = out / "fig5_sweep.csv"
    write_sweep_csv(csv_path, rows)
    json_path = out / "fig5_summary.json"
    _write_json(json_path, _sweep_payload(spec))
    return [csv_path, json_path]


def _figure_tracked_sweep(tag: str, out: Path, crystal: CrystalSpec, bw: float) -> list[Path]:
    spec = SweepSpec(crystal=crystal, bandwidth_nm=bw)
    rows = run_wavelength_sweep(spec)
    csv_path = out / f"{tag}_sweep.csv"
    write_sweep_csv(csv_path, rows)
    json_path = out / f"{tag}_summary.json"
    _write_json(json_path, _sweep_payload(spec))
    return [csv_path, json_path]


def _figure_arm_family(tag: str, out: Path, crystal: CrystalSpec) -> list[Path]:
    arm = Arm.SIGNAL if tag == "fig7a" else Arm.IDLER
    tables = {}
    for bw in _FIG7_FAMILY:
        spec = SweepSpec(
            crystal=crystal,
            bandwidth_nm=bw,
            arm=arm,
            kind=MeasurementKind.NONLOCAL,
        )
        tables[bw] = run_wavelength_sweep(spec)
    lambdas = [row.lambda_p_nm for row in next(iter(tables.values()))]
    header = ("lambda_p_nm",) + tuple(
        f"delta_fwhm_{_bw_label(bw)}_s" for bw in _FIG7_FAMILY
    )
    body = []
    for j, lam in enumerate(lambdas):
        cells = [_fmt(lam)]
        cells += [_fmt(tables[bw][j].delta_fwhm_s) for bw in _FIG7_FAMILY]
        body.append(tuple(cells))
    csv_path = out / f"{tag}_sweep.csv"
    _write_csv(csv_path, header, body)
    summary = {
        "arm": arm.value,
        "measurement": "nonlocal",
        "bandwidths_nm": list(_FIG7_FAMILY),
        "start_nm": DEFAULT_SWEEP_START_NM,
        "stop_nm": DEFAULT_SWEEP_STOP_NM,
        "step_nm": DEFAULT_SWEEP_STEP_NM,
        "beta_ref_s2": BETA_REFERENCE,
        "crystal_length_m": crystal.length_m,
    }
    json_path = out / f"{tag}_summary.json"
    _write_json(json_path, summary)
    return [csv_path, json_path]


# ---------------------------------------------------------------------------
# closed-form-vs-quadrature verification


def _verify_local_grid(crystal: CrystalSpec) -> list[dict]:
    results = []
    for pump_nm in (650.0, 700.0, 750.0, 810.0):
        for fwhm_nm in (0.4, 4.0):
            for beta_s in (0.0, BETA_REFERENCE):
                sigma = sigma_from_bandwidth(
                    pump_nm * 1e-9, fwhm_nm * 1e-9, BandwidthConvention.INTENSITY_FWHM
                )
                pump = PumpSpec(pump_nm * 1e-9, sigma)
                tuned_crystal = tuned(crystal, pump.wavelength_m)
                state = assemble_jsa(tuned_crystal, pump, beta_s=beta_s, grid_n=512)
                ctx = ClosedFormContext.from_state(state)
                closed = fwhm_local_closed(ctx)
                curve = hom_curve(state)
                relative = abs(curve.fwhm_s - closed) / closed
                results.append(
                    {
                        "pump_nm": pump_nm,
                        "pump_fwhm_nm": fwhm_nm,
                        "beta_s_s2": beta_s,
                        "fwhm_closed_s": closed,
                        "fwhm_numeric_s": curve.fwhm_s,
                        "relative_error": relative,
                    }
                )
    return results


def _verify_nonlocal(crystal: CrystalSpec) -> list[dict]:
    """Closed widths vs quadrature in the narrowband regime, both variants."""
    pump_nm = _BASE_PUMP_NM
    sigma = sigma_from_bandwidth(
        pump_nm * 1e-9, _BASE_FWHM_NM * 1e-9, BandwidthConvention.INTENSITY_FWHM
    ) * 1e-2
    pump = PumpSpec(pump_nm * 1e-9, sigma)
    tuned_crystal = tuned(crystal, pump.wavelength_m)
    beta = BETA_REFERENCE
    combos = [
        (0.0, 0.0),
        (beta, 0.0),
        (0.0, beta),
        (beta, -beta),
        (beta, beta),
    ]
    results = []
    for beta_s, beta_i in combos:
        state = assemble_jsa(
            tuned_crystal, pump, beta_s=beta_s, beta_i=beta_i, grid_n=1024
        )
        ctx = ClosedFormContext.from_state(state)
        full = fwhm_nonlocal_closed(ctx, form="full")
        partial = fwhm_nonlocal_closed(ctx, form="no-cross-term")
        curve = nonlocal_curve(state)
        numeric = curve.fwhm_s
        results.append(
            {
                "beta_s_s2": beta_s,
                "beta_i_s2": beta_i,
                "fwhm_numeric_s": numeric,
                "fwhm_full_s": full,
                "fwhm_no_cross_term_s": partial,
                "full_relative_error": abs(full - numeric) / numeric,
                "no_cross_term_relative_error": abs(partial - numeric) / numeric,
                "cross_term_discrepancy": abs(partial - full) / full > 1e-2,
            }
        )
    return results


def _verify_schmidt(crystal: CrystalSpec) -> list[dict]:
    results = []
    for pump_nm in (612.0, 620.0, 810.0):
        sigma = sigma_from_bandwidth(
            pump_nm * 1e-9, _BASE_FWHM_NM * 1e-9, BandwidthConvention.INTENSITY_FWHM
        )
        pump = PumpSpec(pump_nm * 1e-9, sigma)
        tuned_crystal = tuned(crystal, pump.wavelength_m)
        state = assemble_jsa(tuned_crystal, pump, grid_n=512)
        numeric = schmidt_number_of(state)
        analytic = gaussian_schmidt_number(walkoffs(tuned_crystal, pump.wavelength_m), sigma)
        results.append(
            {
                "pump_nm": pump_nm,
                "schmidt_numeric": numeric,
                "schmidt_analytic": analytic,
                "relative_error": abs(numeric - analytic) / analytic,
            }
        )
    return results


def run_verification(crystal: CrystalSpec | None = None, out_dir: str | Path | None = None) -> dict:
    """Compare every closed form against its quadrature oracle; report all rows.

    The nonlocal section evaluates both width variants side by side and flags
    the parameter sets where the cross-term matters.
    """
    crystal = crystal if crystal is not None else make_crystal(10e-3)
    report = {
        "local": _verify_local_grid(crystal),
        "nonlocal": _verify_nonlocal(crystal),
        "schmidt": _verify_schmidt(crystal),
    }
    worst_local = max(r["relative_error"] for r in report["local"])
    worst_nonlocal = max(r["full_relative_error"] for r in report["nonlocal"])
    worst_schmidt = max(r["relative_error"] for r in report["schmidt"])
    report["summary"] = {
        "worst_local_relative_error": worst_local,
        "worst_nonlocal_full_relative_error": worst_nonlocal,
        "worst_schmidt_relative_error": worst_schmidt,
        "all_within_tolerance": bool(
            worst_local < 5e-3 and worst_nonlocal < 5e-3 and worst_schmidt < 5e-3
        ),
    }
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        _write_json(out / "verify_report.json", report)
    return report


# ---------------------------------------------------------------------------
# run configuration


@dataclass(frozen=True)
class RunConfig:
    """Validated run parameters shared by the CLI subcommands."""

    pump_nm: float = 810.0
    pump_fwhm_nm: float = 4.0
    bandwidth_convention: BandwidthConvention = BandwidthConvention.INTENSITY_FWHM
    crystal_path: str | None = None
    length_mm: float = 10.0
    beta_s: float = 0.0
    beta_i: float = 0.0
    grid_n: int = 512
    out: str = "."
    format: str = "csv"

    def __post_init__(self) -> None:
        if self.pump_nm <= 0.0:
            raise ConfigError(f"pump_nm must be positive, got {self.pump_nm}")
        if self.pump_fwhm_nm <= 0.0:
            raise ConfigError(f"pump_fwhm_nm must be positive, got {self.pump_fwhm_nm}")
        if self.length_mm <= 0.0:
            raise ConfigError(f"length_mm must be positive, got {self.length_mm}")
        if self.grid_n < 8:
            raise ConfigError(f"grid_n too small: {self.grid_n}")
        if self.format not in ("csv", "json"):
            raise ConfigError(f"format must be csv or json, got {self.format!r}")

    def crystal(self) -> CrystalSpec:
        base = make_crystal(self.length_mm * 1e-3, self.crystal_path)
        return tuned(base, self.pump_nm * 1e-9)

    def pump(self) -> PumpSpec:
        return PumpSpec.from_bandwidth(
            self.pump_nm * 1e-9,
            self.pump_fwhm_nm * 1e-9,
            self.bandwidth_convention,
        )

    def si_echo(self) -> dict:
        """Every physical value in SI, for the run log."""
        pump = self.pump()
        return {
            "pump_wavelength_m": self.pump_nm * 1e-9,
            "pump_bandwidth_m": self.pump_fwhm_nm * 1e-9,
            "pump_sigma_rad_s": pump.sigma_rad_s,
            "crystal_length_m": self.length_mm * 1e-3,
            "beta_s_s2": self.beta_s,
            "beta_i_s2": self.beta_i,
        }


_CONFIG_FIELDS = {
    "pump_nm": float,
    "pump_fwhm_nm": float,
    "bandwidth_convention": str,
    "crystal": str,
    "length_mm": float,
    "beta_s": float,
    "beta_i": float,
    "grid_n": int,
    "out": str,
    "format": str,
}


def load_config(path: str | Path, overrides: dict | None = None) -> RunConfig:
    """Read a JSON config mirroring the CLI flags; overrides win field-wise."""
    try:
        with open(path) as handle:
            raw = json.load(handle)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from None
    if not isinstance(raw, dict):
        raise ConfigError(f"config file {path} must hold a JSON object")
    merged = dict(raw)
    if overrides:
        merged.update({k: v for k, v in overrides.items() if v is not None})
    return config_from_mapping(merged, source=str(path))


def config_from_mapping(mapping: dict, source: str = "<flags>") -> RunConfig:
    kwargs: dict = {}
    for key, value in mapping.items():
        if key not in _CONFIG_FIELDS:
            raise ConfigError(f"{source}: unknown config key {key!r}")
        if value is None:
            continue
        expected = _CONFIG_FIELDS[key]
        if expected is float and isinstance(value, (int, float)) and not isinstance(value, bool):
            value = float(value)
        elif expected is int and isinstance(value, int) and not isinstance(value, bool):
            value = int(value)
        elif expected is str and isinstance(value, str):
            pass
        else:
            raise ConfigError(
                f"{source}: field {key!r} expects {expected.__name__}, got {value!r}"
            )
        kwargs[key] = value
    if "bandwidth_convention" in kwargs:
        try:
            kwargs["bandwidth_convention"] = BandwidthConvention(kwargs["bandwidth_convention"])
        except ValueError:
            choices = ", ".join(c.value for c in BandwidthConvention)
            raise ConfigError(
                f"{source}: field 'bandwidth_convention' must be one of {choices}"
            ) from None
    if "crystal" in kwargs:
        kwargs["crystal_path"] = kwargs.pop("crystal")
    return RunConfig(**kwargs)
