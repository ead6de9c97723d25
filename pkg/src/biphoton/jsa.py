"""Joint spectral amplitude of the photon pair on a detuning grid.

The state is assembled as the pointwise product of three factors on a grid of
angular-frequency detunings (nu_s, nu_i) from the degenerate central
frequencies:

* a Gaussian pump envelope in nu_s + nu_i,
* a Gaussian stand-in for the sinc phase-matching profile, carrying the
  walk-off phase, and
* an optional quadratic spectral phase exp(i(beta_s nu_s^2 + beta_i nu_i^2))
  describing dispersive elements in the two output arms.

Internally everything is SI (rad/s, s, m); nm and ps appear only at the I/O
boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .crystal import C_LIGHT, CrystalSpec, WalkoffPair, walkoffs
from .errors import ConfigError, DegenerateWidthError, GridCoverageError

# Width parameter of the Gaussian approximation to the sinc phase-matching
# profile.  With gamma = ln2 / x0^2 and sinc(x0) = 1/2 (x0 ~ 1.8955) the
# Gaussian and sinc amplitudes share their half-maximum points; 0.193 is that
# value rounded to three figures.
GAMMA_PM = 0.193


def trapezoid_weights(axis: np.ndarray) -> np.ndarray:
    """Trapezoidal quadrature weights for a uniform 1-D axis."""
    d = float(axis[1] - axis[0])
    w = np.full(axis.size, d)
    w[0] = w[-1] = d / 2.0
    return w


class BandwidthConvention(Enum):
    """How a pump bandwidth quoted in wavelength maps onto sigma_p.

    INTENSITY_FWHM (default): the quoted width is a full width at half
    maximum; sigma_p = (2 pi c / lambda^2) * fwhm / (2 sqrt(2 ln 2)).
    AMPLITUDE_SIGMA: the quoted width is already a Gaussian standard
    deviation in wavelength; sigma_p = (2 pi c / lambda^2) * width.
    """

    INTENSITY_FWHM = "intensity-fwhm"
    AMPLITUDE_SIGMA = "amplitude-sigma"


_FWHM_TO_SIGMA = 1.0 / (2.0 * math.sqrt(2.0 * math.log(2.0)))


def sigma_from_bandwidth(
    wavelength_m: float,
    bandwidth_m: float,
    convention: BandwidthConvention = BandwidthConvention.INTENSITY_FWHM,
) -> float:
    """Convert a wavelength-domain pump bandwidth to sigma_p in rad/s."""
    if bandwidth_m <= 0.0:
        raise ConfigError(f"pump bandwidth must be positive, got {bandwidth_m!r} m")
    scale = 2.0 * math.pi * C_LIGHT / wavelength_m**2
    if convention is BandwidthConvention.INTENSITY_FWHM:
        return scale * bandwidth_m * _FWHM_TO_SIGMA
    return scale * bandwidth_m


@dataclass(frozen=True)
class PumpSpec:
    """Pump laser: central wavelength plus spectral width.

    ``sigma_rad_s`` is the standard deviation of the Gaussian amplitude
    envelope exp(-(nu_s + nu_i)^2 / (2 sigma^2)).  ``bandwidth_m`` records the
    wavelength-domain width it was derived from, if any.
    """

    wavelength_m: float
    sigma_rad_s: float
    bandwidth_m: float | None = None
    convention: BandwidthConvention = BandwidthConvention.INTENSITY_FWHM

    def __post_init__(self) -> None:
        if self.wavelength_m <= 0.0:
            raise ConfigError(f"pump wavelength must be positive, got {self.wavelength_m!r}")
        if self.sigma_rad_s <= 0.0:
            raise ConfigError(f"sigma_p must be positive, got {self.sigma_rad_s!r}")

    @classmethod
    def from_bandwidth(
        cls,
        wavelength_m: float,
        bandwidth_m: float,
        convention: BandwidthConvention = BandwidthConvention.INTENSITY_FWHM,
    ) -> "PumpSpec":
        sigma = sigma_from_bandwidth(wavelength_m, bandwidth_m, convention)
        return cls(wavelength_m, sigma, bandwidth_m, convention)

    @classmethod
    def from_sigma(cls, wavelength_m: float, sigma_rad_s: float) -> "PumpSpec":
        return cls(wavelength_m, sigma_rad_s, None)


@dataclass(frozen=True, eq=False)
class DetuningGrid:
    """Uniform detuning axes (rad/s), each symmetric about zero."""

    nu_s: np.ndarray
    nu_i: np.ndarray

    def __post_init__(self) -> None:
        for name, axis in (("nu_s", self.nu_s), ("nu_i", self.nu_i)):
            axis = np.asarray(axis, dtype=float)
            if axis.ndim != 1 or axis.size < 2:
                raise ConfigError(f"{name} axis must be 1-D with at least 2 samples")
            steps = np.diff(axis)
            if not np.allclose(steps, steps[0], rtol=1e-9, atol=0.0):
                raise ConfigError(f"{name} axis must be uniformly spaced")
            if not np.allclose(axis + axis[::-1], 0.0, atol=1e-6 * abs(steps[0])):
                raise ConfigError(f"{name} axis must be symmetric about zero")
            axis.setflags(write=False)
            object.__setattr__(self, name, axis)

    @property
    def n_s(self) -> int:
        return self.nu_s.size

    @property
    def n_i(self) -> int:
        return self.nu_i.size

    @property
    def d_nu_s(self) -> float:
        return float(self.nu_s[1] - self.nu_s[0])

    @property
    def d_nu_i(self) -> float:
        return float(self.nu_i[1] - self.nu_i[0])

    @property
    def is_square(self) -> bool:
        return self.n_s == self.n_i and np.array_equal(self.nu_s, self.nu_i)

    @classmethod
    def symmetric(cls, n: int, half_span: float) -> "DetuningGrid":
        axis = np.linspace(-half_span, half_span, n)
        return cls(axis, axis.copy())

    @classmethod
    def for_state(
        cls,
        sigma_p: float,
        walkoff: WalkoffPair,
        n: int = 512,
        cover: float = 8.0,
    ) -> "DetuningGrid":
        """Axes sized to contain the state: ``cover`` times the larger of the
        pump width and the phase-matching width 1/(sqrt(gamma) max|tau|)."""
        tau_max = max(abs(walkoff.tau_s), abs(walkoff.tau_i))
        if tau_max == 0.0:
            half = cover * sigma_p
        else:
            half = cover * max(sigma_p, 1.0 / (math.sqrt(GAMMA_PM) * tau_max))
        return cls.symmetric(n, half)


def pump_envelope(nu_sum: np.ndarray | float, sigma_p: float) -> np.ndarray | float:
    """Gaussian pump amplitude exp(-nu_sum^2 / (2 sigma_p^2)); even in nu_sum."""
    if sigma_p <= 0.0:
        raise ConfigError(f"sigma_p must be positive, got {sigma_p!r}")
    x = np.asarray(nu_sum, dtype=float)
    out = np.exp(-(x * x) / (2.0 * sigma_p * sigma_p))
    return float(out) if np.isscalar(nu_sum) else out


def phase_mismatch(
    walkoff: WalkoffPair, nu_s: np.ndarray | float, nu_i: np.ndarray | float
) -> np.ndarray | float:
    """First-order accumulated mismatch L*dk = tau_s nu_s + tau_i nu_i.

    The central (zeroth-order) term is zero by construction once the poling
    period is tuned, and quadratic terms inside the crystal are neglected.
    """
    return walkoff.tau_s * np.asarray(nu_s) + walkoff.tau_i * np.asarray(nu_i)


def phase_matching_amplitude(l_delta_k: np.ndarray | float) -> np.ndarray | complex:
    """Gaussian phase-matching amplitude exp(-gamma (x/2)^2) exp(i x/2)."""
    half = np.asarray(l_delta_k) / 2.0
    return np.exp(-GAMMA_PM * half * half) * np.exp(1j * half)


def dispersion_phase(
    nu_s: np.ndarray | float,
    nu_i: np.ndarray | float,
    beta_s: float,
    beta_i: float,
) -> np.ndarray | complex:
    """Unit-modulus factor exp(i(beta_s nu_s^2 + beta_i nu_i^2))."""
    ns = np.asarray(nu_s)
    ni = np.asarray(nu_i)
    return np.exp(1j * (beta_s * ns * ns + beta_i * ni * ni))


def pmf_angle(walkoff: WalkoffPair) -> float:
    """Orientation angle of the phase-matching ridge in the (nu_s, nu_i) plane.

    Returns -arctan(tau_s / tau_i) folded into (-pi/2, pi/2]; exactly pi/2
    when tau_i = 0.  Both walk-offs zero leaves the ridge undefined.
    """
    if walkoff.tau_s == 0.0 and walkoff.tau_i == 0.0:
        raise DegenerateWidthError("both walk-offs zero: ridge orientation undefined")
    angle = -math.atan2(walkoff.tau_s, walkoff.tau_i)
    while angle <= -math.pi / 2.0:
        angle += math.pi
    while angle > math.pi / 2.0:
        angle -= math.pi
    return angle


@dataclass(frozen=True, eq=False)
class JointSpectralAmplitude:
    """Assembled complex amplitude f[j, k] with its grid and parameters.

    Row index j runs over nu_s, column index k over nu_i.  The continuum
    amplitude peaks at exactly 1 on the origin (the sampled maximum can sit
    slightly below when no grid point lands there); the matrix is read-only
    after assembly.  ``factors`` records which of the three factors were
    non-trivial.
    """

    values: np.ndarray
    grid: DetuningGrid
    walkoff: WalkoffPair
    sigma_p: float
    beta_s: float = 0.0
    beta_i: float = 0.0
    factors: tuple[str, ...] = field(default=("pump", "phase-matching"))

    def __post_init__(self) -> None:
        v = np.asarray(self.values)
        if v.shape != (self.grid.n_s, self.grid.n_i):
            raise ConfigError(
                f"values shape {v.shape} does not match grid "
                f"({self.grid.n_s}, {self.grid.n_i})"
            )
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def magnitude(self) -> np.ndarray:
        return np.abs(self.values)

    def norm_squared(self) -> float:
        """Quadrature of |f|^2 over the grid (trapezoidal in both axes)."""
        w_s = trapezoid_weights(self.grid.nu_s)
        w_i = trapezoid_weights(self.grid.nu_i)
        return float(w_s @ (np.abs(self.values) ** 2) @ w_i)

    def marginal_std(self, axis: int) -> float:
        """Standard deviation of the |f|^2 marginal along nu_s (0) or nu_i (1)."""
        weights = np.abs(self.values) ** 2
        marg = weights.sum(axis=1 - axis)
        coord = self.grid.nu_s if axis == 0 else self.grid.nu_i
        total = marg.sum()
        if total == 0.0:
            return 0.0
        mean = float((coord * marg).sum() / total)
        var = float(((coord - mean) ** 2 * marg).sum() / total)
        return math.sqrt(var)


def assemble_from_walkoffs(
    walkoff: WalkoffPair,
    sigma_p: float,
    grid: DetuningGrid,
    beta_s: float = 0.0,
    beta_i: float = 0.0,
    check_coverage: bool = True,
) -> JointSpectralAmplitude:
    """Build the joint amplitude directly from walk-offs and pump width.

    Raises GridCoverageError when the grid span does not contain six marginal
    standard deviations of |f|^2 per axis (the state would be clipped).
    """
    nu_s = grid.nu_s[:, None]
    nu_i = grid.nu_i[None, :]
    values = (
        pump_envelope(nu_s + nu_i, sigma_p)
        * phase_matching_amplitude(phase_mismatch(walkoff, nu_s, nu_i))
        * dispersion_phase(nu_s, nu_i, beta_s, beta_i)
    )
    # each factor peaks at 1 on the origin, so the continuum amplitude is
    # already peak-normalized; dividing by the sampled maximum would only
    # introduce a grid-parity artifact
    peak = np.abs(values).max()
    if peak == 0.0 or not np.isfinite(peak):
        raise GridCoverageError("assembled amplitude vanished or overflowed on this grid")
    factors = ["pump", "phase-matching"]
    if beta_s != 0.0 or beta_i != 0.0:
        factors.append("dispersion")
    state = JointSpectralAmplitude(
        values=values,
        grid=grid,
        walkoff=walkoff,
        sigma_p=sigma_p,
        beta_s=beta_s,
        beta_i=beta_i,
        factors=tuple(factors),
    )
    if check_coverage:
        for axis, half in ((0, grid.nu_s[-1]), (1, grid.nu_i[-1])):
            need = 3.0 * state.marginal_std(axis)
            if need > half:
                raise GridCoverageError(
                    f"grid half-span {half:.3e} rad/s covers less than six marginal "
                    f"standard deviations (need {need:.3e}) on axis {axis}; "
                    "widen the grid span"
                )
    return state


def assemble_jsa(
    crystal: CrystalSpec,
    pump: PumpSpec,
    grid: DetuningGrid | None = None,
    beta_s: float = 0.0,
    beta_i: float = 0.0,
    grid_n: int = 512,
) -> JointSpectralAmplitude:
    """Assemble the state for a crystal and pump; grid auto-sized when omitted."""
    w = walkoffs(crystal, pump.wavelength_m)
    if grid is None:
        grid = DetuningGrid.for_state(pump.sigma_rad_s, w, n=grid_n)
    return assemble_from_walkoffs(w, pump.sigma_rad_s, grid, beta_s, beta_i)
