"""Pump conversion, factor functions, grids, and assembled amplitudes."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from biphoton.crystal import WalkoffPair
from biphoton.errors import ConfigError, DegenerateWidthError, GridCoverageError
from biphoton.jsa import (
    GAMMA_PM,
    BandwidthConvention,
    DetuningGrid,
    JointSpectralAmplitude,
    PumpSpec,
    assemble_from_walkoffs,
    assemble_jsa,
    dispersion_phase,
    phase_matching_amplitude,
    phase_mismatch,
    pmf_angle,
    pump_envelope,
    sigma_from_bandwidth,
)

# half-maximum point of sinc(x), solved independently to 13 digits
SINC_HALF_X0 = 1.8954942670340


def test_sigma_conversion_810_4nm():
    # 2 pi c / lambda^2 * fwhm / (2 sqrt(2 ln 2)), checked by hand
    sigma = sigma_from_bandwidth(810e-9, 4e-9)
    assert sigma == pytest.approx(4.876775919104e12, rel=1e-9)


def test_sigma_conversion_650_04nm():
    sigma = sigma_from_bandwidth(650e-9, 0.4e-9)
    assert sigma == pytest.approx(7.573142439e11, rel=1e-9)


def test_amplitude_sigma_convention_skips_fwhm_factor():
    fwhm = sigma_from_bandwidth(810e-9, 4e-9, BandwidthConvention.INTENSITY_FWHM)
    plain = sigma_from_bandwidth(810e-9, 4e-9, BandwidthConvention.AMPLITUDE_SIGMA)
    assert plain / fwhm == pytest.approx(2.0 * math.sqrt(2.0 * math.log(2.0)), rel=1e-12)


def test_nonpositive_bandwidth_rejected():
    with pytest.raises(ConfigError):
        sigma_from_bandwidth(810e-9, 0.0)


def test_pump_spec_from_bandwidth_records_origin():
    pump = PumpSpec.from_bandwidth(810e-9, 4e-9)
    assert pump.bandwidth_m == 4e-9
    assert pump.sigma_rad_s == sigma_from_bandwidth(810e-9, 4e-9)
    with pytest.raises(ConfigError):
        PumpSpec(810e-9, -1.0)


def test_pump_envelope_peak_and_width():
    assert pump_envelope(0.0, 1e12) == 1.0
    # down to 1/sqrt(e) at one sigma
    assert pump_envelope(1e12, 1e12) == pytest.approx(math.exp(-0.5), rel=1e-12)


@given(x=st.floats(min_value=-1e14, max_value=1e14))
def test_pump_envelope_even(x):
    sigma = 5e12
    assert pump_envelope(x, sigma) == pump_envelope(-x, sigma)


@given(
    nu_s=st.floats(min_value=-1e13, max_value=1e13),
    nu_i=st.floats(min_value=-1e13, max_value=1e13),
    scale=st.floats(min_value=-3.0, max_value=3.0),
)
def test_phase_mismatch_is_linear(nu_s, nu_i, scale):
    pair = WalkoffPair(-1.4e-12, 1.6e-12)
    single = phase_mismatch(pair, nu_s, nu_i)
    assert phase_mismatch(pair, scale * nu_s, scale * nu_i) == pytest.approx(
        scale * single, rel=1e-12, abs=1e-18
    )
    assert phase_mismatch(pair, nu_s, 0.0) + phase_mismatch(pair, 0.0, nu_i) == pytest.approx(
        single, rel=1e-12, abs=1e-18
    )


def test_phase_matching_amplitude_half_point():
    # the Gaussian stand-in is calibrated to share the sinc profile's
    # half-maximum point 2*x0
    value = abs(phase_matching_amplitude(2.0 * SINC_HALF_X0))
    assert value == pytest.approx(0.5, abs=5e-4)
    assert value == pytest.approx(0.499859, rel=1e-5)


def test_phase_matching_amplitude_carries_half_phase():
    x = 1.234
    assert np.angle(phase_matching_amplitude(x)) == pytest.approx(x / 2.0, rel=1e-12)
    assert abs(phase_matching_amplitude(0.0)) == 1.0


@given(
    nu_s=st.floats(min_value=-2e13, max_value=2e13),
    nu_i=st.floats(min_value=-2e13, max_value=2e13),
    beta_s=st.floats(min_value=-2e-25, max_value=2e-25),
    beta_i=st.floats(min_value=-2e-25, max_value=2e-25),
)
def test_dispersion_phase_unit_modulus(nu_s, nu_i, beta_s, beta_i):
    value = dispersion_phase(nu_s, nu_i, beta_s, beta_i)
    assert abs(value) == pytest.approx(1.0, rel=1e-12)


def test_dispersion_phase_value():
    # beta nu^2 = 0.1 rad
    value = dispersion_phase(1e12, 0.0, 1e-25, 0.0)
    assert np.angle(value) == pytest.approx(0.1, rel=1e-12)


# --- ridge orientation ----------------------------------------------------


def test_pmf_angle_identities():
    assert pmf_angle(WalkoffPair(0.0, 1.0e-12)) == pytest.approx(0.0, abs=1e-15)
    assert pmf_angle(WalkoffPair(1.0e-12, 0.0)) == pytest.approx(math.pi / 2.0)
    assert pmf_angle(WalkoffPair(1e-12, 1e-12)) == pytest.approx(-math.pi / 4.0)
    assert pmf_angle(WalkoffPair(-1e-12, 1e-12)) == pytest.approx(math.pi / 4.0)


@given(
    tau_s=st.floats(min_value=-5e-12, max_value=5e-12),
    tau_i=st.floats(min_value=-5e-12, max_value=5e-12),
)
def test_pmf_angle_range_and_tangent(tau_s, tau_i):
    if tau_s == 0.0 and tau_i == 0.0:
        with pytest.raises(DegenerateWidthError):
            pmf_angle(WalkoffPair(tau_s, tau_i))
        return
    angle = pmf_angle(WalkoffPair(tau_s, tau_i))
    assert -math.pi / 2.0 < angle <= math.pi / 2.0
    if tau_i != 0.0 and abs(angle) < math.pi / 2.0 - 1e-9:
        assert math.tan(angle) == pytest.approx(-tau_s / tau_i, rel=1e-9, abs=1e-12)


def test_pmf_angle_matches_ridge_principal_axis(pair_810):
    # the |phase-matching|^2 stripe's covariance principal axis should point
    # along the analytic ridge angle
    grid = DetuningGrid.for_state(1e10, pair_810, n=256)
    nu_s = grid.nu_s[:, None]
    nu_i = grid.nu_i[None, :]
    weight = np.abs(phase_matching_amplitude(phase_mismatch(pair_810, nu_s, nu_i))) ** 2
    total = weight.sum()
    cov_ss = (weight * nu_s**2).sum() / total
    cov_ii = (weight * nu_i**2).sum() / total
    cov_si = (weight * nu_s * nu_i).sum() / total
    _, vecs = np.linalg.eigh(np.array([[cov_ss, cov_si], [cov_si, cov_ii]]))
    principal = vecs[:, -1]  # eigenvector of the largest eigenvalue
    angle = math.atan2(principal[1], principal[0])
    while angle <= -math.pi / 2.0:
        angle += math.pi
    while angle > math.pi / 2.0:
        angle -= math.pi
    assert angle == pytest.approx(pmf_angle(pair_810), abs=math.radians(1.0))


# --- grids ----------------------------------------------------------------


def test_symmetric_grid_endpoints():
    grid = DetuningGrid.symmetric(65, 3e12)
    assert grid.nu_s[0] == -3e12 and grid.nu_s[-1] == 3e12
    assert grid.is_square


def test_grid_rejects_nonuniform_axis():
    with pytest.raises(ConfigError, match="uniform"):
        DetuningGrid(np.array([-1.0, 0.5, 1.0]), np.linspace(-1, 1, 3))


def test_grid_rejects_asymmetric_axis():
    with pytest.raises(ConfigError, match="symmetric"):
        DetuningGrid(np.linspace(0, 1, 5), np.linspace(-1, 1, 5))


def test_for_state_covers_both_scales(pair_810):
    wide_pump = DetuningGrid.for_state(1e14, pair_810, n=64)
    assert wide_pump.nu_s[-1] >= 8.0 * 1e14
    narrow_pump = DetuningGrid.for_state(1e9, pair_810, n=64)
    pm_width = 1.0 / (math.sqrt(GAMMA_PM) * abs(pair_810.tau_i))
    assert narrow_pump.nu_s[-1] >= 8.0 * pm_width


# --- assembly -------------------------------------------------------------


def test_assembled_state_has_unit_continuum_peak(state_810):
    # the sampled maximum sits at the grid point nearest the origin, a hair
    # below the continuum peak of exactly 1
    sampled_max = state_810.magnitude().max()
    assert 0.999 < sampled_max <= 1.0
    assert state_810.norm_squared() > 0.0


def test_odd_grid_contains_exact_peak(ktp_tuned, pump_810):
    state = assemble_jsa(ktp_tuned, pump_810, grid_n=257)
    assert state.magnitude().max() == 1.0


def test_factor_bookkeeping(state_810, state_810_dispersed):
    assert state_810.factors == ("pump", "phase-matching")
    assert state_810_dispersed.factors == ("pump", "phase-matching", "dispersion")


def test_values_read_only(state_810):
    with pytest.raises(ValueError):
        state_810.values[0, 0] = 0.0


def test_shape_mismatch_rejected(state_810):
    grid = DetuningGrid.symmetric(8, 1e12)
    with pytest.raises(ConfigError, match="shape"):
        JointSpectralAmplitude(
            values=np.ones((4, 8), dtype=complex),
            grid=grid,
            walkoff=state_810.walkoff,
            sigma_p=1e12,
        )


def test_equal_walkoffs_give_exchange_symmetric_amplitude():
    pair = WalkoffPair(1.1e-12, 1.1e-12)
    grid = DetuningGrid.symmetric(129, 6e12)
    state = assemble_from_walkoffs(pair, 2e12, grid, check_coverage=False)
    assert np.allclose(state.values, state.values.T, rtol=0.0, atol=1e-12)


def test_norm_converges_under_refinement(ktp_tuned, pump_810):
    coarse = assemble_jsa(ktp_tuned, pump_810, grid_n=128)
    fine = assemble_jsa(ktp_tuned, pump_810, grid_n=255)
    assert fine.norm_squared() == pytest.approx(coarse.norm_squared(), rel=1e-6)


def test_undersized_grid_raises_coverage_error():
    pair = WalkoffPair(0.0, 0.0)
    grid = DetuningGrid.symmetric(64, 0.5)
    with pytest.raises(GridCoverageError, match="half-span"):
        assemble_from_walkoffs(pair, 1.0, grid)
    # the escape hatch still assembles
    state = assemble_from_walkoffs(pair, 1.0, grid, check_coverage=False)
    assert state.magnitude().max() == 1.0


def test_marginal_std_matches_gaussian_model(state_810, pair_810, pump_810):
    # |f|^2 is a correlated 2-D Gaussian; its exact marginal widths follow
    # from inverting the precision matrix
    sigma = pump_810.sigma_rad_s
    a = 1.0 / sigma**2 + GAMMA_PM * pair_810.tau_s**2 / 2.0
    b = 1.0 / sigma**2 + GAMMA_PM * pair_810.tau_i**2 / 2.0
    c = 1.0 / sigma**2 + GAMMA_PM * pair_810.tau_s * pair_810.tau_i / 2.0
    det = a * b - c * c
    expected_s = math.sqrt(b / (2.0 * det))
    expected_i = math.sqrt(a / (2.0 * det))
    assert state_810.marginal_std(0) == pytest.approx(expected_s, rel=5e-3)
    assert state_810.marginal_std(1) == pytest.approx(expected_i, rel=5e-3)


def test_dispersion_factor_leaves_magnitude_unchanged(state_810, state_810_dispersed):
    assert np.allclose(
        state_810.magnitude(), state_810_dispersed.magnitude(), rtol=0.0, atol=1e-12
    )
