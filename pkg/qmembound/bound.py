"""The energy x surface bound P >= (hbar^2 / 2m) d^2 (e^{S/d} - 1)^2, its kappa step and its inverse."""
import dataclasses
import logging
import math
from typing import NamedTuple, Optional

import jax.numpy as jnp

from .config import DEFAULTS, EntropyUnits
from .constants import ATOMIC_MASS, ELECTRON_MASS, ELECTRON_VOLT, HBAR, JOULE_M2_TO_EV_NM2, LN2, constants_record, to_nats

logger = logging.getLogger(__name__)

# reference values printed beside the 1 kg / 1 litre estimate
QUOTED_BITS_PER_ATOM = 20.0
QUOTED_TOTAL_BITS = 1e31


def _check_positive(name: str, value: float, allow_zero: bool = False):
    if not math.isfinite(value) or value < 0 or (value == 0 and not allow_zero):
        raise ValueError(f"{name} must be {'non-negative' if allow_zero else 'positive'} and finite, got {value!r}")


def _check_dof(d) -> int:
    # the bound itself holds for any d >= 1; one-dimensional devices use d = 1
    if isinstance(d, bool) or not float(d).is_integer() or d < 1:
        raise ValueError(f"degrees of freedom must be an integer >= 1, got {d!r}")
    return int(d)


class KappaGridError(RuntimeError):
    pass


@dataclasses.dataclass(frozen=True)
class BoundQuery:
    s_total: float  # nats
    d: int
    mass: float  # kg

    def __post_init__(self):
        _check_positive("entropy", self.s_total, allow_zero=True)
        _check_positive("mass", self.mass)
        object.__setattr__(self, "d", _check_dof(self.d))

    @classmethod
    def from_units(cls, s_total: float, d: int, mass: float, units: EntropyUnits = "nats") -> "BoundQuery":
        return cls(to_nats(s_total, units), d, mass)


@dataclasses.dataclass(frozen=True)
class PhysicalBound:
    query: BoundQuery
    product_bound: float  # J m^2
    kappa_star: Optional[float] = None  # J / m^2
    constants_used: dict = dataclasses.field(default_factory=constants_record)

    @property
    def product_bound_ev_nm2(self) -> float:
        return self.product_bound * JOULE_M2_TO_EV_NM2


class KappaOptimum(NamedTuple):
    kappa_star: float
    bound: float
    objective_at_star: float
    grid_max: float


class Capacity(NamedTuple):
    nats: float
    bits: float


def lemma_coefficient(query: BoundQuery) -> float:
    """A = hbar d (e^{S/d} - 1) / sqrt(m), so that the sum cost is A sqrt(kappa)."""
    return HBAR * query.d * math.expm1(query.s_total / query.d) / math.sqrt(query.mass)


def kappa_objective(kappa, coefficient: float, r_squared: float):
    """sqrt(kappa) (A - sqrt(kappa) <r^2> / 2) <r^2>, a quadratic in sqrt(kappa)."""
    root = jnp.sqrt(jnp.asarray(kappa, jnp.float64))
    return root * (coefficient - root / 2 * r_squared) * r_squared


def kappa_optimize(coefficient: float, r_squared: float, *,
                   grid_points: int = DEFAULTS.kappa_grid_points) -> KappaOptimum:
    """Critical kappa* = A^2 / <r^2>^2 and the kappa-free bound A^2 / 2.

    The maximum is checked against a log grid spanning four decades around kappa*.
    """
    _check_positive("lemma coefficient", coefficient)
    _check_positive("<r^2>", r_squared)
    kappa_star = coefficient ** 2 / r_squared ** 2
    at_star = float(kappa_objective(kappa_star, coefficient, r_squared))
    grid = kappa_star * jnp.logspace(-2, 2, grid_points)
    grid_max = float(jnp.max(kappa_objective(grid, coefficient, r_squared)))
    if grid_max > at_star * (1 + 1e-12):
        raise KappaGridError(f"grid maximum {grid_max!r} exceeds the value {at_star!r} at kappa* = {kappa_star!r}")
    return KappaOptimum(kappa_star, coefficient ** 2 / 2, at_star, grid_max)


def product_bound(query: BoundQuery, r_squared: Optional[float] = None) -> PhysicalBound:
    """(hbar^2 / 2m) d^2 (e^{S/d} - 1)^2; with ``r_squared`` also reports kappa*."""
    value = HBAR ** 2 / (2 * query.mass) * (query.d * math.expm1(query.s_total / query.d)) ** 2
    kappa_star = None
    if r_squared is not None and query.s_total > 0:
        kappa_star = kappa_optimize(lemma_coefficient(query), r_squared).kappa_star
    return PhysicalBound(query, value, kappa_star)


def invert_bound(energy: float, r_squared: float, mass: float, d: int) -> Capacity:
    """Largest S with product_bound(S) <= energy * r_squared."""
    _check_positive("energy", energy, allow_zero=True)
    _check_positive("<r^2>", r_squared)
    _check_positive("mass", mass)
    d = _check_dof(d)
    nats = d * math.log1p(math.sqrt(2 * mass * energy * r_squared) / (HBAR * d))
    return Capacity(nats, nats / LN2)


def sphere_r_squared(volume: float) -> float:
    """<r^2> = 3 R^2 / 5 of a uniformly filled ball of the given volume."""
    _check_positive("volume", volume)
    radius = (3 * volume / (4 * math.pi)) ** (1 / 3)
    return 3 / 5 * radius ** 2


@dataclasses.dataclass(frozen=True)
class Scenario:
    mass_kg: float
    volume_m3: float
    energy_per_atom_eV: float
    atom_mass_amu: float
    dof_per_atom: int
    # the particle whose mass enters the bound; electrons carry the stored state by default
    carrier_mass_kg: float = ELECTRON_MASS

    def __post_init__(self):
        _check_positive("mass_kg", self.mass_kg)
        _check_positive("volume_m3", self.volume_m3)
        _check_positive("energy_per_atom_eV", self.energy_per_atom_eV, allow_zero=True)
        _check_positive("atom_mass_amu", self.atom_mass_amu)
        _check_positive("carrier_mass_kg", self.carrier_mass_kg)
        object.__setattr__(self, "dof_per_atom", _check_dof(self.dof_per_atom))

    @property
    def atoms(self) -> float:
        return self.mass_kg / (self.atom_mass_amu * ATOMIC_MASS)


class Estimate(NamedTuple):
    scenario: Scenario
    r_squared: float
    per_atom: Capacity
    bits_per_dof: float
    total_bits: float
    quoted_bits_per_atom: float
    quoted_total_bits: float

    @property
    def quoted_total_ratio(self) -> float:
        return self.quoted_total_bits / self.total_bits if self.total_bits > 0 else math.inf


def capacity_estimate(scenario: Scenario) -> Estimate:
    """Per-atom and whole-body capacity of a uniform sphere where every atom is a storage cell."""
    r_squared = sphere_r_squared(scenario.volume_m3)
    per_atom = invert_bound(scenario.energy_per_atom_eV * ELECTRON_VOLT, r_squared,
                            scenario.carrier_mass_kg, scenario.dof_per_atom)
    total = per_atom.bits * scenario.atoms
    logger.info("<r^2>=%.6g m^2, %.6g atoms, %.6g bits per atom", r_squared, scenario.atoms, per_atom.bits)
    return Estimate(
        scenario=scenario,
        r_squared=r_squared,
        per_atom=per_atom,
        bits_per_dof=per_atom.bits / scenario.dof_per_atom,
        total_bits=total,
        quoted_bits_per_atom=QUOTED_BITS_PER_ATOM,
        quoted_total_bits=QUOTED_TOTAL_BITS,
    )
