"""Material dispersion of the nonlinear crystal.

Sellmeier evaluation, group velocities, the temporal walk-offs between the
down-converted photons and the pump, and the poling period that zeroes the
collinear phase mismatch for degenerate type-II operation (TE pump and
signal, TM idler, signal/idler at twice the pump wavelength).

The bundled coefficient set for flux-grown KTP is from K. Kato and
E. Takaoka, Appl. Opt. 41, 5040 (2002); see ``data/ktp_kato2002.json``.
All quantities are SI unless a unit suffix says otherwise.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from enum import Enum
from importlib import resources
from pathlib import Path

from .errors import ConfigError, PhaseMatchingError, WavelengthRangeError

C_LIGHT = 299792458.0  # m/s

BUILTIN_SELLMEIER = "ktp_kato2002"


class PolarizationAxis(Enum):
    """Polarization labels for propagation along the crystal x axis.

    TE is the crystallographic y axis and carries the pump and the signal;
    TM is the z axis and carries the idler.
    """

    TE = "TE"
    TM = "TM"


@dataclass(frozen=True)
class SellmeierSet:
    """One axis' dispersion formula with its provenance.

    The formula is ``n^2 = constant + sum_j b_j/(L^2 - c_j) - quadratic_um2 * L^2``
    with ``L`` the wavelength in micrometres.  ``poles`` holds the ``(b_j, c_j)``
    pairs.  The common single-resonance form ``B/(1 - C/L^2)`` can be expressed
    here as an extra constant ``B`` plus a pole ``(B*C, C)``.
    """

    axis: PolarizationAxis
    constant: float
    poles: tuple[tuple[float, float], ...]
    quadratic_um2: float
    valid_range_m: tuple[float, float]
    citation: str

    def _check_range(self, wavelength_m: float) -> None:
        lo, hi = self.valid_range_m
        if not (lo <= wavelength_m <= hi):
            raise WavelengthRangeError(
                f"wavelength {wavelength_m * 1e9:.1f} nm outside the "
                f"{self.axis.value} Sellmeier validity range "
                f"[{lo * 1e9:.0f}, {hi * 1e9:.0f}] nm"
            )

    def index_squared(self, wavelength_um: float) -> float:
        l2 = wavelength_um * wavelength_um
        n2 = self.constant - self.quadratic_um2 * l2
        for b, c in self.poles:
            n2 += b / (l2 - c)
        return n2

    def index(self, wavelength_m: float) -> float:
        """Refractive index n(lambda); raises WavelengthRangeError outside validity."""
        self._check_range(wavelength_m)
        n2 = self.index_squared(wavelength_m * 1e6)
        if n2 <= 1.0 or not math.isfinite(n2):
            raise WavelengthRangeError(
                f"Sellmeier formula gives unphysical n^2 = {n2:.4g} at "
                f"{wavelength_m * 1e9:.1f} nm ({self.axis.value} axis)"
            )
        return math.sqrt(n2)

    def dn_dlambda(self, wavelength_m: float) -> float:
        """Analytic dn/dlambda in 1/m, from differentiating the formula."""
        self._check_range(wavelength_m)
        lam_um = wavelength_m * 1e6
        l2 = lam_um * lam_um
        # d(n^2)/dL with L in um
        dn2 = -2.0 * self.quadratic_um2 * lam_um
        for b, c in self.poles:
            dn2 -= 2.0 * lam_um * b / (l2 - c) ** 2
        n = math.sqrt(self.index_squared(lam_um))
        return dn2 / (2.0 * n) * 1e6  # per um -> per m

    def group_index(self, wavelength_m: float, fd_step_m: float | None = None) -> float:
        """Group index n_g = n - lambda * dn/dlambda.

        Args:
            wavelength_m: vacuum wavelength in metres.
            fd_step_m: if given, use a central finite difference with this
                step instead of the analytic derivative (both paths are
                tested against each other; 1e-11 m is a good step).
        """
        n = self.index(wavelength_m)
        if fd_step_m is None:
            dndl = self.dn_dlambda(wavelength_m)
        else:
            h = fd_step_m
            dndl = (self.index(wavelength_m + h) - self.index(wavelength_m - h)) / (2.0 * h)
        return n - wavelength_m * dndl


@dataclass(frozen=True)
class WalkoffPair:
    """Temporal walk-offs tau_s, tau_i (s) of signal and idler against the pump.

    tau = L * (1/u_photon - 1/u_pump) over the crystal length; either sign
    can occur.
    """

    tau_s: float
    tau_i: float


@dataclass(frozen=True)
class CrystalSpec:
    """A periodically poled crystal operated in collinear degenerate type II.

    The pump and signal are TE, the idler is TM, and the signal/idler central
    wavelength is exactly twice the pump's.  ``poling_period_m`` is optional
    until the crystal is tuned for a specific pump (see qpm_period_for).
    """

    length_m: float
    te: SellmeierSet
    tm: SellmeierSet
    poling_period_m: float | None = None

    def __post_init__(self) -> None:
        if not (self.length_m > 0.0 and math.isfinite(self.length_m)):
            raise ConfigError(f"crystal length must be positive, got {self.length_m!r} m")
        if self.te.axis is not PolarizationAxis.TE or self.tm.axis is not PolarizationAxis.TM:
            raise ConfigError("CrystalSpec axes mislabelled: expected (TE, TM) coefficient sets")

    def sellmeier(self, axis: PolarizationAxis) -> SellmeierSet:
        return self.te if axis is PolarizationAxis.TE else self.tm


def refractive_index(sellmeier: SellmeierSet, wavelength_m: float) -> float:
    """Index from one coefficient set; thin wrapper kept for API symmetry."""
    return sellmeier.index(wavelength_m)


def group_velocity(
    crystal: CrystalSpec, axis: PolarizationAxis, wavelength_m: float
) -> float:
    """Group velocity u = c / (n - lambda dn/dlambda) on the given axis."""
    return C_LIGHT / crystal.sellmeier(axis).group_index(wavelength_m)


def walkoffs(crystal: CrystalSpec, pump_wavelength_m: float) -> WalkoffPair:
    """Walk-offs of the degenerate daughter photons relative to the pump.

    The signal shares the pump's TE axis, the idler is TM, and both are taken
    at twice the pump wavelength.  tau_mu = L/c * (n_g,mu - n_g,pump).
    """
    lam_d = 2.0 * pump_wavelength_m
    ng_p = crystal.te.group_index(pump_wavelength_m)
    ng_s = crystal.te.group_index(lam_d)
    ng_i = crystal.tm.group_index(lam_d)
    scale = crystal.length_m / C_LIGHT
    return WalkoffPair(tau_s=scale * (ng_s - ng_p), tau_i=scale * (ng_i - ng_p))


def bulk_mismatch(crystal: CrystalSpec, pump_wavelength_m: float) -> float:
    """Collinear phase mismatch k_p - k_s - k_i (rad/m) without the grating."""
    lam_d = 2.0 * pump_wavelength_m
    k_p = 2.0 * math.pi * crystal.te.index(pump_wavelength_m) / pump_wavelength_m
    k_s = 2.0 * math.pi * crystal.te.index(lam_d) / lam_d
    k_i = 2.0 * math.pi * crystal.tm.index(lam_d) / lam_d
    return k_p - k_s - k_i


def qpm_period_for(crystal: CrystalSpec, pump_wavelength_m: float) -> float:
    """First-order poling period (m) that zeroes the central phase mismatch.

    The grating order carries the sign of the bulk mismatch, so the returned
    period is always positive.  A crystal that is already perfectly matched
    has no finite poling period and raises PhaseMatchingError.
    """
    dk = bulk_mismatch(crystal, pump_wavelength_m)
    if dk == 0.0:
        raise PhaseMatchingError(
            f"bulk mismatch already zero at {pump_wavelength_m * 1e9:.1f} nm; "
            "no finite first-order poling period exists"
        )
    period = 2.0 * math.pi / abs(dk)
    if not math.isfinite(period) or period <= 0.0:
        raise PhaseMatchingError(
            f"no positive poling period at {pump_wavelength_m * 1e9:.1f} nm "
            f"(bulk mismatch {dk:.4g} rad/m)"
        )
    return period


def central_mismatch(
    crystal: CrystalSpec, pump_wavelength_m: float, period_m: float
) -> float:
    """Residual central mismatch (rad/m) with a first-order grating of given period."""
    dk = bulk_mismatch(crystal, pump_wavelength_m)
    order = 1.0 if dk >= 0.0 else -1.0
    return dk - order * 2.0 * math.pi / period_m


def tuned(crystal: CrystalSpec, pump_wavelength_m: float) -> CrystalSpec:
    """Copy of the crystal with the poling period set for this pump."""
    return replace(crystal, poling_period_m=qpm_period_for(crystal, pump_wavelength_m))


def _parse_entry(entry: dict, where: str) -> SellmeierSet:
    for key in ("axis", "coefficients", "valid_range_nm", "citation"):
        if key not in entry:
            raise ConfigError(f"{where}: missing required field '{key}'")
    try:
        axis = PolarizationAxis(entry["axis"])
    except ValueError:
        raise ConfigError(
            f"{where}.axis: expected 'TE' or 'TM', got {entry['axis']!r}"
        ) from None
    coeffs = entry["coefficients"]
    if not isinstance(coeffs, dict) or "constant" not in coeffs or "poles" not in coeffs:
        raise ConfigError(
            f"{where}.coefficients: expected an object with 'constant' and 'poles'"
        )
    try:
        constant = float(coeffs["constant"])
        quadratic = float(coeffs.get("quadratic_um2", 0.0))
        poles = tuple((float(b), float(c)) for b, c in coeffs["poles"])
    except (TypeError, ValueError):
        raise ConfigError(
            f"{where}.coefficients: poles must be [b, c] number pairs"
        ) from None
    rng = entry["valid_range_nm"]
    if not (isinstance(rng, (list, tuple)) and len(rng) == 2 and rng[0] < rng[1]):
        raise ConfigError(
            f"{where}.valid_range_nm: expected [low, high] with low < high, got {rng!r}"
        )
    citation = entry["citation"]
    if not isinstance(citation, str) or not citation.strip():
        raise ConfigError(f"{where}.citation: must be a non-empty string")
    return SellmeierSet(
        axis=axis,
        constant=constant,
        poles=poles,
        quadratic_um2=quadratic,
        valid_range_m=(rng[0] * 1e-9, rng[1] * 1e-9),
        citation=citation,
    )


def load_sellmeier_file(path: str | Path) -> dict[PolarizationAxis, SellmeierSet]:
    """Load and schema-check a Sellmeier data file (TE and TM entries required)."""
    path = Path(path)
    try:
        raw = json.loads(path.read_text())
    except FileNotFoundError:
        raise ConfigError(f"Sellmeier file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: not valid JSON ({exc})") from None
    if not isinstance(raw, dict) or "entries" not in raw:
        raise ConfigError(f"{path}: expected a top-level object with an 'entries' list")
    sets: dict[PolarizationAxis, SellmeierSet] = {}
    for i, entry in enumerate(raw["entries"]):
        parsed = _parse_entry(entry, f"{path}: entries[{i}]")
        if parsed.axis in sets:
            raise ConfigError(f"{path}: duplicate entry for axis {parsed.axis.value}")
        sets[parsed.axis] = parsed
    missing = [a.value for a in PolarizationAxis if a not in sets]
    if missing:
        raise ConfigError(f"{path}: missing entries for axes {missing}")
    return sets


def builtin_sellmeier_path() -> Path:
    """Filesystem path of the bundled KTP coefficient file."""
    return Path(str(resources.files("biphoton").joinpath(f"data/{BUILTIN_SELLMEIER}.json")))


def make_crystal(length_m: float, sellmeier_path: str | Path | None = None) -> CrystalSpec:
    """Crystal of the given length; bundled KTP data unless a file is given."""
    sets = load_sellmeier_file(sellmeier_path or builtin_sellmeier_path())
    return CrystalSpec(
        length_m=length_m, te=sets[PolarizationAxis.TE], tm=sets[PolarizationAxis.TM]
    )
