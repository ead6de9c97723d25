"""Sellmeier evaluation, walk-offs, and quasi-phase-matching."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import brentq

from biphoton.crystal import (
    C_LIGHT,
    CrystalSpec,
    PolarizationAxis,
    SellmeierSet,
    builtin_sellmeier_path,
    bulk_mismatch,
    central_mismatch,
    group_velocity,
    load_sellmeier_file,
    make_crystal,
    qpm_period_for,
    tuned,
    walkoffs,
)
from biphoton.errors import ConfigError, PhaseMatchingError, WavelengthRangeError

_KTP = make_crystal(10e-3)

# Reference indices evaluated independently (mpmath, 50 digits) from the
# published flux-grown KTP coefficients of Kato and Takaoka, Appl. Opt. 41,
# 5040 (2002).
INDEX_ORACLE = {
    (PolarizationAxis.TE, 532e-9): 1.788695241,
    (PolarizationAxis.TE, 632.8e-9): 1.771290166,
    (PolarizationAxis.TE, 810e-9): 1.755927908,
    (PolarizationAxis.TE, 1064e-9): 1.745468002,
    (PolarizationAxis.TE, 1620e-9): 1.733651930,
    (PolarizationAxis.TM, 532e-9): 1.888650710,
    (PolarizationAxis.TM, 632.8e-9): 1.864804130,
    (PolarizationAxis.TM, 810e-9): 1.843832154,
    (PolarizationAxis.TM, 1064e-9): 1.829668972,
    (PolarizationAxis.TM, 1620e-9): 1.814178899,
}

GROUP_INDEX_ORACLE = {
    (PolarizationAxis.TE, 810e-9): 1.803720401,
    (PolarizationAxis.TE, 1620e-9): 1.762512073,
    (PolarizationAxis.TM, 1620e-9): 1.850691645,
}


@pytest.mark.parametrize("axis,wavelength", sorted(INDEX_ORACLE, key=str))
def test_index_against_independent_evaluation(axis, wavelength):
    n = _KTP.sellmeier(axis).index(wavelength)
    assert n == pytest.approx(INDEX_ORACLE[(axis, wavelength)], rel=1e-9)


@pytest.mark.parametrize("axis,wavelength", sorted(GROUP_INDEX_ORACLE, key=str))
def test_group_index_against_independent_evaluation(axis, wavelength):
    ng = _KTP.sellmeier(axis).group_index(wavelength)
    assert ng == pytest.approx(GROUP_INDEX_ORACLE[(axis, wavelength)], rel=1e-9)


@pytest.mark.parametrize("bad_nm", [100.0, 420.0, 3600.0, 1e6])
def test_wavelength_outside_validity_rejected(bad_nm):
    with pytest.raises(WavelengthRangeError, match="nm"):
        _KTP.te.index(bad_nm * 1e-9)


@given(wavelength=st.floats(min_value=435e-9, max_value=3.4e-6))
def test_index_physically_bounded(wavelength):
    for axis in PolarizationAxis:
        n = _KTP.sellmeier(axis).index(wavelength)
        assert 1.5 < n < 2.2


@given(wavelength=st.floats(min_value=450e-9, max_value=3.3e-6))
def test_group_index_exceeds_phase_index(wavelength):
    # normal dispersion throughout the transparency window
    for axis in PolarizationAxis:
        s = _KTP.sellmeier(axis)
        assert s.group_index(wavelength) > s.index(wavelength)


@given(wavelength=st.floats(min_value=450e-9, max_value=3.3e-6))
@settings(max_examples=50)
def test_analytic_derivative_matches_finite_difference(wavelength):
    s = _KTP.tm
    analytic = s.group_index(wavelength)
    numeric = s.group_index(wavelength, fd_step_m=1e-11)
    assert numeric == pytest.approx(analytic, rel=1e-7)


def test_group_velocity_below_c(ktp):
    for axis in PolarizationAxis:
        assert 0.0 < group_velocity(ktp, axis, 810e-9) < C_LIGHT


# --- walk-offs ------------------------------------------------------------


def test_walkoff_oracle_810(pair_810):
    assert pair_810.tau_s == pytest.approx(-1.374562e-12, rel=1e-6)
    assert pair_810.tau_i == pytest.approx(+1.566792e-12, rel=1e-6)


def test_walkoff_signs_810(pair_810):
    # at 810 nm the signal leads the pump, the idler trails it
    assert pair_810.tau_s < 0.0 < pair_810.tau_i


def test_walkoff_scales_with_length(pair_810):
    double = walkoffs(make_crystal(20e-3), 810e-9)
    assert double.tau_s == pytest.approx(2.0 * pair_810.tau_s, rel=1e-12)
    assert double.tau_i == pytest.approx(2.0 * pair_810.tau_i, rel=1e-12)


def test_signal_always_faster_than_idler():
    # tau_s < tau_i across the whole sweep window, so the dip width never
    # collapses to zero
    for nm in range(590, 811, 10):
        pair = walkoffs(_KTP, nm * 1e-9)
        assert pair.tau_s < pair.tau_i


def test_idler_pump_group_matching_wavelength():
    # tau_i changes sign where the idler's group index at the doubled
    # wavelength equals the pump's
    def tau_i_of(nm):
        return walkoffs(_KTP, nm * 1e-9).tau_i

    root = brentq(tau_i_of, 600.0, 640.0, xtol=1e-6)
    assert root == pytest.approx(612.60, abs=0.05)
    assert abs(tau_i_of(root)) < 1e-18


def test_walkoff_sum_root():
    def tau_sum(nm):
        pair = walkoffs(_KTP, nm * 1e-9)
        return pair.tau_s + pair.tau_i

    root = brentq(tau_sum, 780.0, 810.0, xtol=1e-6)
    assert root == pytest.approx(792.29, abs=0.05)


# --- quasi-phase matching -------------------------------------------------


def test_poling_period_810(ktp):
    period = qpm_period_for(ktp, 810e-9)
    assert period == pytest.approx(45.0313e-6, rel=1e-5)
    assert qpm_period_for(ktp, 810e-9) == period  # deterministic


def test_bulk_mismatch_sign_810(ktp):
    # type-II KTP at 810 nm is backward-mismatched; the grating order flips
    # to keep the period positive
    assert bulk_mismatch(ktp, 810e-9) < 0.0


@pytest.mark.parametrize("nm", [590.0, 650.0, 700.0, 810.0])
def test_tuned_crystal_has_zero_central_mismatch(nm):
    crystal = tuned(_KTP, nm * 1e-9)
    assert crystal.poling_period_m > 0.0
    residual = central_mismatch(_KTP, nm * 1e-9, crystal.poling_period_m)
    assert abs(residual) < 1e-6  # rad/m, vs a bulk mismatch of order 1e5


def _dispersionless(axis, n0=1.5):
    return SellmeierSet(
        axis=axis,
        constant=n0 * n0,
        poles=(),
        quadratic_um2=0.0,
        valid_range_m=(100e-9, 10e-6),
        citation="synthetic dispersionless test medium",
    )


def test_already_matched_crystal_has_no_period():
    crystal = CrystalSpec(
        length_m=10e-3,
        te=_dispersionless(PolarizationAxis.TE),
        tm=_dispersionless(PolarizationAxis.TM),
    )
    with pytest.raises(PhaseMatchingError):
        qpm_period_for(crystal, 810e-9)


def test_dispersionless_crystal_has_zero_walkoff():
    crystal = CrystalSpec(
        length_m=10e-3,
        te=_dispersionless(PolarizationAxis.TE),
        tm=_dispersionless(PolarizationAxis.TM),
    )
    pair = walkoffs(crystal, 810e-9)
    assert pair.tau_s == 0.0
    assert pair.tau_i == 0.0


# --- data files -----------------------------------------------------------


def test_builtin_file_loads_with_provenance():
    sets = load_sellmeier_file(builtin_sellmeier_path())
    assert set(sets) == {PolarizationAxis.TE, PolarizationAxis.TM}
    for s in sets.values():
        assert "10.1364/AO.41.005040" in s.citation


def test_missing_file_rejected(tmp_path):
    with pytest.raises(ConfigError, match="not found"):
        load_sellmeier_file(tmp_path / "nope.json")


def test_invalid_json_rejected(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    with pytest.raises(ConfigError, match="JSON"):
        load_sellmeier_file(path)


def _write_entries(tmp_path, entries):
    import json

    path = tmp_path / "sellmeier.json"
    path.write_text(json.dumps({"entries": entries}))
    return path


def _entry(axis="TE", **overrides):
    entry = {
        "axis": axis,
        "coefficients": {"constant": 3.0, "poles": [[0.04, 0.05]], "quadratic_um2": 0.01},
        "valid_range_nm": [430, 3540],
        "citation": "test",
    }
    entry.update(overrides)
    return entry


def test_missing_axis_rejected(tmp_path):
    path = _write_entries(tmp_path, [_entry("TE")])
    with pytest.raises(ConfigError, match="TM"):
        load_sellmeier_file(path)


def test_duplicate_axis_rejected(tmp_path):
    path = _write_entries(tmp_path, [_entry("TE"), _entry("TE")])
    with pytest.raises(ConfigError, match="duplicate"):
        load_sellmeier_file(path)


def test_unknown_axis_label_rejected(tmp_path):
    path = _write_entries(tmp_path, [_entry("TX")])
    with pytest.raises(ConfigError, match=r"entries\[0\].axis"):
        load_sellmeier_file(path)


def test_missing_field_reported_by_name(tmp_path):
    entry = _entry("TE")
    del entry["citation"]
    path = _write_entries(tmp_path, [entry, _entry("TM")])
    with pytest.raises(ConfigError, match="citation"):
        load_sellmeier_file(path)


def test_reversed_valid_range_rejected(tmp_path):
    path = _write_entries(tmp_path, [_entry("TE", valid_range_nm=[3540, 430]), _entry("TM")])
    with pytest.raises(ConfigError, match="valid_range_nm"):
        load_sellmeier_file(path)


def test_negative_length_rejected(ktp):
    with pytest.raises(ConfigError, match="length"):
        CrystalSpec(length_m=-1e-3, te=ktp.te, tm=ktp.tm)


def test_swapped_axes_rejected(ktp):
    with pytest.raises(ConfigError, match="mislabel"):
        CrystalSpec(length_m=10e-3, te=ktp.tm, tm=ktp.te)


def test_loader_accepts_custom_file_roundtrip(tmp_path, ktp):
    # a user-supplied file with the same schema behaves like the bundled one
    import json

    src = json.loads(builtin_sellmeier_path().read_text())
    path = tmp_path / "copy.json"
    path.write_text(json.dumps(src))
    crystal = make_crystal(10e-3, path)
    assert crystal.te.index(810e-9) == ktp.te.index(810e-9)
