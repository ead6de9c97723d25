"""Schmidt decomposition of a discretized joint spectral amplitude.

The sampled matrix is weighted by the square root of the quadrature cell so
its singular values approximate the continuum Schmidt coefficients; the mode
count K = 1 / sum(k_j^2) then measures the effective number of populated
frequency-mode pairs (K = 1 for a separable state).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .crystal import WalkoffPair
from .errors import DecompositionError
from .jsa import GAMMA_PM, DetuningGrid, JointSpectralAmplitude


@dataclass(frozen=True, eq=False)
class SchmidtSpectrum:
    """Result of a decomposition.

    ``coefficients`` are the k_j in descending order with sum 1 over the full
    (untruncated) spectrum.  ``signal_modes``/``idler_modes`` hold the
    retained mode functions sampled on the grid axes, one column per mode,
    normalized so the trapezoidal quadrature inner product is orthonormal.
    """

    coefficients: np.ndarray
    signal_modes: np.ndarray
    idler_modes: np.ndarray
    rank: int
    grid: DetuningGrid


def schmidt_decompose(
    state: JointSpectralAmplitude, truncation: float = 1e-12
) -> SchmidtSpectrum:
    """SVD of the quadrature-weighted amplitude matrix.

    Args:
        state: assembled joint amplitude (any rectangular grid).
        truncation: modes with singular value below ``truncation`` times the
            largest are dropped from the returned mode matrices.  K is a sum
            of squared, normalized coefficients and is insensitive to this
            floor; the coefficient vector itself keeps every retained mode.
    """
    f = state.values
    if not np.all(np.isfinite(f)):
        raise DecompositionError("amplitude matrix contains non-finite entries")
    scale = math.sqrt(state.grid.d_nu_s * state.grid.d_nu_i)
    u, s, vh = np.linalg.svd(f * scale, full_matrices=False)
    if s[0] == 0.0:
        raise DecompositionError("amplitude matrix is numerically zero")
    keep = int(np.count_nonzero(s >= truncation * s[0]))
    k = s**2 / float(np.sum(s**2))
    # mode columns back on the continuum normalization
    signal = u[:, :keep] / math.sqrt(state.grid.d_nu_s)
    idler = vh[:keep, :].conj().T / math.sqrt(state.grid.d_nu_i)
    return SchmidtSpectrum(
        coefficients=k[:keep],
        signal_modes=signal,
        idler_modes=idler,
        rank=keep,
        grid=state.grid,
    )


def schmidt_number(spectrum: SchmidtSpectrum) -> float:
    """Effective mode count K = 1 / sum(k_j^2); requires normalized k."""
    k = spectrum.coefficients
    total = float(np.sum(k))
    if not math.isclose(total, 1.0, rel_tol=0.0, abs_tol=1e-8):
        raise ValueError(f"coefficients not normalized (sum = {total!r})")
    return float(1.0 / np.sum(k**2))


def schmidt_number_of(state: JointSpectralAmplitude) -> float:
    """Convenience: decompose and return K in one call."""
    return schmidt_number(schmidt_decompose(state))


def gaussian_schmidt_number(walkoff: WalkoffPair, sigma_p: float) -> float:
    """Closed-form K for the all-Gaussian model state.

    With a Gaussian pump of width sigma_p and the Gaussian phase-matching
    profile, |f|^2 is a correlated two-dimensional Gaussian whose inverse
    covariance has diagonal entries A, B and cross entry C below; the mode
    count of such a state is K = sqrt(AB / (AB - C^2)).  Separable phase
    factors do not enter.  Useful as an independent cross-check on the SVD
    path.
    """
    a = 1.0 / sigma_p**2 + GAMMA_PM * walkoff.tau_s**2 / 2.0
    b = 1.0 / sigma_p**2 + GAMMA_PM * walkoff.tau_i**2 / 2.0
    c = 1.0 / sigma_p**2 + GAMMA_PM * walkoff.tau_s * walkoff.tau_i / 2.0
    det = a * b - c * c
    if det <= 0.0:
        raise DecompositionError(
            "Gaussian model covariance not positive definite; state unnormalizable"
        )
    return math.sqrt(a * b / det)
