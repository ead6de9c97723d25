"""Local (two-photon interference) and nonlocal coincidence rates.

Two independent routes are provided and cross-checked in the test suite:

* direct numerical quadrature of the assembled joint amplitude, which is the
  ground truth, and
* closed-form Gaussian-integral results for dip/peak width and visibility.

Delay conventions.  The crystal walk-off gives the two photons a relative
group delay of tau_i - tau_s at the crystal exit, so the interferometric
features are centred on the externally balanced point rather than on zero
applied delay.  All curve functions here measure the delay FROM that
balanced point: the local dip and the nonlocal peak sit at tau = 0 for every
dispersion setting (the offset is dispersion-independent).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import DegenerateWidthError, ScanSpanError
from .jsa import GAMMA_PM, JointSpectralAmplitude, trapezoid_weights

FOUR_LN2 = 4.0 * math.log(2.0)


class MeasurementKind(Enum):
    LOCAL = "local"
    NONLOCAL = "nonlocal"


@dataclass(frozen=True, eq=False)
class DelayScan:
    """Uniform, zero-centred delay samples (s)."""

    delays: np.ndarray

    def __post_init__(self) -> None:
        d = np.asarray(self.delays, dtype=float)
        if d.ndim != 1 or d.size < 5:
            raise ScanSpanError("delay scan needs at least 5 samples")
        steps = np.diff(d)
        if not np.allclose(steps, steps[0], rtol=1e-9, atol=0.0):
            raise ScanSpanError("delay samples must be uniform")
        if not np.allclose(d + d[::-1], 0.0, atol=1e-6 * abs(steps[0])):
            raise ScanSpanError("delay scan must be symmetric about zero")
        d.setflags(write=False)
        object.__setattr__(self, "delays", d)

    @property
    def span(self) -> float:
        return float(self.delays[-1] - self.delays[0])

    @classmethod
    def around_width(
        cls, width_estimate: float, n: int = 201, span_factor: float = 8.0
    ) -> "DelayScan":
        """Scan spanning ``span_factor`` times an expected feature width.

        The factor must be at least 4 so the half-extremum crossings and the
        baseline both fall inside the scan.
        """
        if width_estimate <= 0.0:
            raise ScanSpanError(f"width estimate must be positive, got {width_estimate!r}")
        if span_factor < 4.0:
            raise ScanSpanError(f"span factor below 4 cannot bracket the feature: {span_factor}")
        half = span_factor * width_estimate / 2.0
        # integer ramp rather than linspace so an odd count puts a sample at
        # exactly zero delay
        step = 2.0 * half / (n - 1)
        return cls((np.arange(n) - (n - 1) / 2.0) * step)


@dataclass(frozen=True, eq=False)
class CoincidenceCurve:
    """Sampled normalized rate R(tau) with extracted summary numbers.

    Local curves are normalized to a unit large-delay baseline; nonlocal
    curves are normalized to a unit peak and decay to zero far from it.
    """

    delays: np.ndarray
    rates: np.ndarray
    kind: MeasurementKind
    fwhm_s: float | None = None
    visibility: float | None = None

    @property
    def baseline(self) -> float:
        return 1.0 if self.kind is MeasurementKind.LOCAL else 0.0


# ---------------------------------------------------------------------------
# numeric integration


def _require_square(state: JointSpectralAmplitude) -> None:
    if not state.grid.is_square:
        raise ValueError(
            "this measurement exchanges the two photons and needs a square "
            "grid with identical nu_s and nu_i axes"
        )


def _local_rates(state: JointSpectralAmplitude, delays: np.ndarray) -> np.ndarray:
    """Normalized local rates, vectorized over the delay samples."""
    _require_square(state)
    nu = state.grid.nu_s
    w = trapezoid_weights(nu)
    f = state.values
    weighted = (f * np.conj(f.T)) * np.outer(w, w)
    norm = float(np.real(np.sum((np.abs(f) ** 2) * np.outer(w, w))))
    # dip centred on the balanced point
    eff = np.asarray(delays, dtype=float) + (state.walkoff.tau_i - state.walkoff.tau_s) / 2.0
    phases = np.exp(1j * np.outer(nu, eff))  # (N, T)
    overlap = np.sum(phases * (weighted @ np.conj(phases)), axis=0)
    return 1.0 - np.real(overlap) / norm


def hom_rate_numeric(state: JointSpectralAmplitude, tau: float) -> float:
    """Local coincidence rate at one delay; 1 is the uncorrelated baseline."""
    return float(_local_rates(state, np.array([tau, -tau]))[0])


def _nonlocal_raw(state: JointSpectralAmplitude, delays: np.ndarray) -> np.ndarray:
    """Unnormalized nonlocal rates via the frequency-sum reduction.

    The detector-time integral of the two-detector correlation collapses to a
    sum over anti-diagonals (fixed nu_s + nu_i) of the amplitude matrix; each
    delay only re-phases the idler axis.  This equals the literal
    time-integral definition up to a constant factor (checked in tests).
    """
    _require_square(state)
    nu = state.grid.nu_s
    n = nu.size
    w = trapezoid_weights(nu)
    weighted = state.values * np.outer(w, w)
    stacked = np.zeros((2 * n - 1, n), dtype=complex)
    rows = np.arange(n)[:, None] + np.arange(n)[None, :]
    stacked[rows, np.arange(n)[None, :]] = weighted
    eff = np.asarray(delays, dtype=float) + (state.walkoff.tau_s - state.walkoff.tau_i) / 2.0
    phases = np.exp(1j * np.outer(nu, eff))  # (N, T)
    amp = stacked @ phases
    return np.sum(np.abs(amp) ** 2, axis=0)


def nonlocal_rate_numeric(state: JointSpectralAmplitude, tau: float) -> float:
    """Nonlocal rate at one delay, normalized to the peak (which sits at 0)."""
    raw = _nonlocal_raw(state, np.array([tau, -tau]))
    peak = _nonlocal_raw(state, np.array([0.0, 0.0]))[0]
    return float(raw[0] / peak)


def hom_curve(
    state: JointSpectralAmplitude, scan: DelayScan | None = None
) -> CoincidenceCurve:
    """Local curve over a scan (auto-sized from the closed-form width)."""
    if scan is None:
        ctx = ClosedFormContext.from_state(state)
        scan = DelayScan.around_width(fwhm_local_closed(ctx))
    rates = _local_rates(state, scan.delays)
    curve = CoincidenceCurve(scan.delays, rates, MeasurementKind.LOCAL)
    return CoincidenceCurve(
        scan.delays,
        rates,
        MeasurementKind.LOCAL,
        fwhm_s=fwhm_from_curve(curve),
        visibility=visibility_from_curve(curve),
    )


def nonlocal_curve(
    state: JointSpectralAmplitude, scan: DelayScan | None = None
) -> CoincidenceCurve:
    """Nonlocal curve over a scan, peak-normalized."""
    if scan is None:
        ctx = ClosedFormContext.from_state(state)
        scan = DelayScan.around_width(fwhm_nonlocal_closed(ctx))
    raw = _nonlocal_raw(state, scan.delays)
    peak = _nonlocal_raw(state, np.array([0.0, 0.0]))[0]
    rates = raw / peak
    curve = CoincidenceCurve(scan.delays, rates, MeasurementKind.NONLOCAL)
    return CoincidenceCurve(
        scan.delays,
        rates,
        MeasurementKind.NONLOCAL,
        fwhm_s=fwhm_from_curve(curve),
        visibility=visibility_from_curve(curve),
    )


# ---------------------------------------------------------------------------
# closed forms


@dataclass(frozen=True)
class ClosedFormContext:
    """Parameters feeding the closed-form widths, with the shared shorthands.

    q has units of s^2; g, g_s, g_i, g_cross are dimensionless:

        q       = gamma (tau_i - tau_s)^2
        g       = 8 + gamma sigma_p^2 (tau_i + tau_s)^2
        g_mu    = 2 + gamma sigma_p^2 tau_mu^2
        g_cross = 2 + gamma sigma_p^2 tau_s tau_i
    """

    sigma_p: float
    tau_s: float
    tau_i: float
    beta_s: float = 0.0
    beta_i: float = 0.0

    @classmethod
    def from_state(cls, state: JointSpectralAmplitude) -> "ClosedFormContext":
        return cls(
            sigma_p=state.sigma_p,
            tau_s=state.walkoff.tau_s,
            tau_i=state.walkoff.tau_i,
            beta_s=state.beta_s,
            beta_i=state.beta_i,
        )

    @property
    def q(self) -> float:
        return GAMMA_PM * (self.tau_i - self.tau_s) ** 2

    @property
    def g(self) -> float:
        return 8.0 + GAMMA_PM * self.sigma_p**2 * (self.tau_i + self.tau_s) ** 2

    @property
    def g_s(self) -> float:
        return 2.0 + GAMMA_PM * self.sigma_p**2 * self.tau_s**2

    @property
    def g_i(self) -> float:
        return 2.0 + GAMMA_PM * self.sigma_p**2 * self.tau_i**2

    @property
    def g_cross(self) -> float:
        return 2.0 + GAMMA_PM * self.sigma_p**2 * self.tau_s * self.tau_i

    @property
    def _local_denominator(self) -> float:
        return self.q * self.g + 16.0 * self.sigma_p**2 * (self.beta_i - self.beta_s) ** 2


def visibility_closed(ctx: ClosedFormContext) -> float:
    """Dip visibility sqrt(8 q / (q g + 16 sigma_p^2 (beta_i - beta_s)^2)).

    Obtained from the ratio of the exchanged-argument overlap to the norm of
    the Gaussian model state; equals 1 exactly when tau_s = -tau_i and the
    two arm dispersions are equal.
    """
    denom = ctx._local_denominator
    if denom == 0.0:
        raise DegenerateWidthError(
            "tau_s = tau_i with equal arm dispersion: the model state is "
            "unnormalizable and the dip is undefined"
        )
    return math.sqrt(8.0 * ctx.q / denom)


def hom_rate_closed(ctx: ClosedFormContext, tau: float) -> float:
    """Closed-form local rate 1 - P exp(-2 g tau^2 / (q g + 16 sigma^2 dbeta^2))."""
    denom = ctx._local_denominator
    if denom == 0.0:
        raise DegenerateWidthError("degenerate dip width for tau_s = tau_i, beta_s = beta_i")
    vis = visibility_closed(ctx)
    return 1.0 - vis * math.exp(-2.0 * ctx.g * tau * tau / denom)


def fwhm_local_closed(ctx: ClosedFormContext) -> float:
    """Closed-form dip width sqrt(4 ln2 (q g + 16 sigma^2 dbeta^2) / (2 g))."""
    denom = ctx._local_denominator
    if denom == 0.0:
        raise DegenerateWidthError("degenerate dip width for tau_s = tau_i, beta_s = beta_i")
    return math.sqrt(FOUR_LN2 * denom / (2.0 * ctx.g))


def fwhm_local_cw_limit(ctx: ClosedFormContext) -> float:
    """Monochromatic-pump limit sqrt(4 ln2 q / 2); independent of both betas."""
    return math.sqrt(FOUR_LN2 * ctx.q / 2.0)


NONLOCAL_FORMS = ("full", "no-cross-term")


def fwhm_nonlocal_closed(ctx: ClosedFormContext, form: str = "full") -> float:
    """Closed-form nonlocal peak width.

    ``form="full"`` evaluates the complete Gaussian-integral result

        sqrt(4 ln2 (q^2 + 8 beta_s^2 g_i + 8 beta_i^2 g_s
                    + 16 beta_s beta_i g_cross) / (2 q)),

    which the numeric integrator confirms.  ``form="no-cross-term"`` omits
    the 16 beta_s beta_i g_cross term; this variant is retained for
    comparison (the two coincide whenever either beta vanishes) and the
    `verify` report tabulates where they part company.
    """
    if form not in NONLOCAL_FORMS:
        raise ValueError(f"unknown nonlocal form {form!r}; expected one of {NONLOCAL_FORMS}")
    if ctx.q == 0.0:
        raise DegenerateWidthError("tau_s = tau_i: nonlocal peak width undefined")
    bracket = (
        ctx.q**2
        + 8.0 * ctx.beta_s**2 * ctx.g_i
        + 8.0 * ctx.beta_i**2 * ctx.g_s
    )
    if form == "full":
        bracket += 16.0 * ctx.beta_s * ctx.beta_i * ctx.g_cross
    if bracket < 0.0:
        raise DegenerateWidthError(
            f"nonlocal width bracket negative ({bracket:.3e} s^4) for these betas"
        )
    return math.sqrt(FOUR_LN2 * bracket / (2.0 * ctx.q))


def nonlocal_rate_closed(ctx: ClosedFormContext, tau: float, form: str = "full") -> float:
    """Closed-form nonlocal peak, unit height: exp(-4 ln2 tau^2 / width^2)."""
    width = fwhm_nonlocal_closed(ctx, form)
    return math.exp(-FOUR_LN2 * tau * tau / (width * width))


# ---------------------------------------------------------------------------
# curve post-processing


def _cross_toward_edge(
    delays: np.ndarray, rates: np.ndarray, start: int, stop: int, step: int, level: float, rising: bool
) -> float:
    """Delay where the rate crosses ``level`` walking from start toward stop."""
    prev = start
    for j in range(start + step, stop, step):
        a, b = rates[prev], rates[j]
        crossed = (a < level <= b) if rising else (a > level >= b)
        if crossed:
            frac = (level - a) / (b - a)
            return float(delays[prev] + frac * (delays[j] - delays[prev]))
        prev = j
    raise ScanSpanError(
        "half-extremum crossing not bracketed by the delay scan; "
        "re-run with a wider DelayScan span"
    )


def fwhm_from_curve(curve: CoincidenceCurve) -> float:
    """Width of the dip (local) or peak (nonlocal) at half depth/height.

    Finds the extremum, then the half-level crossing on each side by linear
    interpolation between the bracketing samples.
    """
    delays = np.asarray(curve.delays, dtype=float)
    rates = np.asarray(curve.rates, dtype=float)
    if curve.kind is MeasurementKind.LOCAL:
        centre = int(np.argmin(rates))
        depth = curve.baseline - rates[centre]
        if depth <= 0.0:
            raise ScanSpanError("curve has no dip below the baseline")
        level = curve.baseline - depth / 2.0
        rising = True
    else:
        centre = int(np.argmax(rates))
        height = rates[centre] - curve.baseline
        if height <= 0.0:
            raise ScanSpanError("curve has no peak above the baseline")
        level = curve.baseline + height / 2.0
        rising = False
    if centre in (0, rates.size - 1):
        raise ScanSpanError(
            "extremum sits on the scan edge; re-run with a wider DelayScan span"
        )
    left = _cross_toward_edge(delays, rates, centre, -1, -1, level, rising)
    right = _cross_toward_edge(delays, rates, centre, rates.size, 1, level, rising)
    return right - left


def visibility_from_curve(curve: CoincidenceCurve) -> float:
    """Dip depth below baseline (local) or peak contrast (nonlocal)."""
    rates = np.asarray(curve.rates, dtype=float)
    if curve.kind is MeasurementKind.LOCAL:
        return float(curve.baseline - rates.min())
    peak = float(rates.max())
    tail = float(min(rates[0], rates[-1]))
    return (peak - tail) / peak
