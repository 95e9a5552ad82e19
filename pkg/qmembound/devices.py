"""Order-of-magnitude costs of three textbook storage devices.

Each device is prepared in its n-th stationary state with the minimum-energy
distribution of the requested entropy; energy and surface area are the
displayed expressions

    box         hbar^2 pi^2 <n^2> / (m L^2)      L^2
    oscillator  hbar w <n>                       hbar <n> / (m w)
    hydrogen    (e^4 m / hbar^2)(1 - <1/n^2>)    hbar^4 <n^4> / (m^2 e^4)

Hydrogen energies are counted from the ground state so that an empty memory is free.
"""
import dataclasses
import logging
import math
from typing import Dict, List, Optional, Sequence

import numpy as np
from tqdm.auto import tqdm

from .bound import BoundQuery, product_bound
from .config import DeviceKind
from .constants import COULOMB_COUPLING, ELECTRON_MASS, HBAR
from .lemma import FiniteSpectrum, min_energy_at_entropy

logger = logging.getLogger(__name__)

DEFAULT_SCALES: Dict[str, float] = {
    "box": 1e-9,  # m
    "oscillator": 1e15,  # 1/s
    "hydrogen": COULOMB_COUPLING,  # J m
}
DEGREES_OF_FREEDOM: Dict[str, int] = {"box": 1, "oscillator": 1, "hydrogen": 3}


@dataclasses.dataclass(frozen=True)
class DeviceSpec:
    kind: DeviceKind
    mass: float = ELECTRON_MASS
    scale: Optional[float] = None
    level_cap: int = 200

    def __post_init__(self):
        if self.kind not in DEFAULT_SCALES:
            raise NotImplementedError(f"Device {self.kind} not implemented")
        if self.scale is None:
            object.__setattr__(self, "scale", DEFAULT_SCALES[self.kind])
        if not self.mass > 0 or not self.scale > 0 or not math.isfinite(self.mass * self.scale):
            raise ValueError(f"mass and scale must be positive, got {self.mass!r}, {self.scale!r}")
        if self.level_cap < 2:
            raise ValueError(f"level_cap must be >= 2, got {self.level_cap!r}")

    @property
    def dof(self) -> int:
        return DEGREES_OF_FREEDOM[self.kind]

    def quantum_numbers(self) -> np.ndarray:
        first = 0 if self.kind == "oscillator" else 1
        return np.arange(first, first + self.level_cap, dtype=np.float64)

    def spectrum(self) -> FiniteSpectrum:
        """Dimensionless level shape with the ground level at 0."""
        n = self.quantum_numbers()
        if self.kind == "box":
            energies = n ** 2 - 1
        elif self.kind == "oscillator":
            energies = n
        else:
            energies = 1 - 1 / n ** 2
        return FiniteSpectrum.from_energies(energies)


@dataclasses.dataclass(frozen=True)
class DeviceCost:
    spec: DeviceSpec
    entropy: float  # nats
    mean_energy: float  # J
    mean_surface: float  # m^2
    product: float  # J m^2
    moments: Dict[str, float]
    bound: float  # J m^2, for the device's own dof count

    @property
    def bound_ratio(self) -> float:
        return self.product / self.bound if self.bound > 0 else math.inf


def moments(spec: DeviceSpec, level_probabilities) -> Dict[str, float]:
    n = spec.quantum_numbers()
    p = np.asarray(level_probabilities)
    inv_n2 = np.divide(1.0, n ** 2, out=np.zeros_like(n), where=n > 0)
    return {
        "n": float(p @ n),
        "n2": float(p @ n ** 2),
        "n4": float(p @ n ** 4),
        "inv_n2": float(p @ inv_n2),
    }


def device_cost(spec: DeviceSpec, s_target: float) -> DeviceCost:
    max_entropy = math.log(spec.level_cap)
    if not 0 < s_target <= max_entropy:
        raise ValueError(f"entropy {s_target!r} unreachable with {spec.level_cap} levels (max ln N = {max_entropy:.6g})")
    match = min_energy_at_entropy(spec.spectrum(), s_target)
    m = moments(spec, match.distribution.level_probabilities)
    hbar, mass, scale = HBAR, spec.mass, spec.scale
    if spec.kind == "box":
        energy = hbar ** 2 * math.pi ** 2 / (mass * scale ** 2) * m["n2"]
        surface = scale ** 2
    elif spec.kind == "oscillator":
        energy = hbar * scale * m["n"]
        surface = hbar / (mass * scale) * m["n"]
    else:
        energy = scale ** 2 * mass / hbar ** 2 * (1 - m["inv_n2"])
        surface = hbar ** 4 / (mass ** 2 * scale ** 2) * m["n4"]
    bound = product_bound(BoundQuery(s_target, spec.dof, mass)).product_bound
    logger.debug("%s at S=%r: moments %s", spec.kind, s_target, m)
    return DeviceCost(spec, s_target, energy, surface, energy * surface, m, bound)


def growth_scan(spec: DeviceSpec, s_values: Sequence[float], progress: bool = False) -> List[DeviceCost]:
    if any(b <= a for a, b in zip(s_values, s_values[1:])):
        raise ValueError(f"entropies must be strictly ascending, got {list(s_values)}")
    costs = [device_cost(spec, s) for s in tqdm(s_values, desc=spec.kind, disable=not progress)]
    for before, after in zip(costs, costs[1:]):
        if not after.product > before.product:
            logger.warning("%s product does not grow from S=%r to S=%r", spec.kind, before.entropy, after.entropy)
    return costs
