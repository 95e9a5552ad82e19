import math

from scipy import constants as codata

# CODATA 2018, as shipped by scipy.constants
HBAR = codata.hbar
ELECTRON_MASS = codata.m_e
ATOMIC_MASS = codata.atomic_mass
ELECTRON_VOLT = codata.electron_volt
# e^2 / (4 pi eps0): the Gaussian-units "e^2" of the hydrogen spectrum, in J*m
COULOMB_COUPLING = codata.e ** 2 / (4 * math.pi * codata.epsilon_0)

LN2 = math.log(2.0)
JOULE_M2_TO_EV_NM2 = 1e18 / ELECTRON_VOLT


def constants_record() -> dict:
    return {
        "hbar_J_s": HBAR,
        "source": "CODATA 2018 (scipy.constants)",
    }


def to_nats(value: float, units: str) -> float:
    if units == "nats":
        return value
    elif units == "bits":
        return value * LN2
    raise NotImplementedError(f"Entropy units {units} not implemented")


def from_nats(value: float, units: str) -> float:
    if units == "nats":
        return value
    elif units == "bits":
        return value / LN2
    raise NotImplementedError(f"Entropy units {units} not implemented")
