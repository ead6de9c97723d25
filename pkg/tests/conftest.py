import pytest

from biphoton.crystal import make_crystal, tuned, walkoffs
from biphoton.jsa import PumpSpec, assemble_jsa

PUMP_NM = 810.0
PUMP_FWHM_NM = 4.0
LENGTH_M = 10e-3
BETA_REF = 100e-27  # s^2


@pytest.fixture(scope="session")
def ktp():
    return make_crystal(LENGTH_M)


@pytest.fixture(scope="session")
def ktp_tuned(ktp):
    return tuned(ktp, PUMP_NM * 1e-9)


@pytest.fixture(scope="session")
def pump_810():
    return PumpSpec.from_bandwidth(PUMP_NM * 1e-9, PUMP_FWHM_NM * 1e-9)


@pytest.fixture(scope="session")
def pair_810(ktp):
    return walkoffs(ktp, PUMP_NM * 1e-9)


@pytest.fixture(scope="session")
def state_810(ktp_tuned, pump_810):
    return assemble_jsa(ktp_tuned, pump_810, grid_n=512)


@pytest.fixture(scope="session")
def state_810_dispersed(ktp_tuned, pump_810):
    return assemble_jsa(ktp_tuned, pump_810, beta_s=BETA_REF, grid_n=512)
