"""Eigenlevels of the dimensionless optimal Hamiltonian at critical coupling.

H = 1/2 sum(-d^2/dq_i^2) - W/q^2 + q^2 with W = (1 - d/2)^2 has levels

    E(n, l) = 2n + sqrt(l (l + d - 2)),   n, l = 0, 1, 2, ...

with degeneracy g(l) = (d + 2l - 2)(d + l - 3)! / (l! (d - 2)!). Degeneracies
are only ever handled as logarithms.
"""
import dataclasses
import logging
import math
from typing import List, NamedTuple, Tuple

import jax.numpy as jnp
import numpy as np
from jax.scipy.special import gammaln, logsumexp

from .config import DEFAULTS

logger = logging.getLogger(__name__)


class SpectrumTooLargeError(RuntimeError):
    pass


def check_dimension(d) -> int:
    if isinstance(d, bool) or not float(d).is_integer() or d < 3:
        raise ValueError(f"dimension must be an integer >= 3, got {d!r}")
    return int(d)


class QuantumNumbers(NamedTuple):
    n: int
    l: int

    def check(self) -> "QuantumNumbers":
        if self.n < 0 or self.l < 0:
            raise ValueError(f"quantum numbers must be non-negative, got {self}")
        return self


@dataclasses.dataclass(frozen=True)
class EnergyLevel:
    qn: QuantumNumbers
    energy: float
    log_degeneracy: float

    @classmethod
    def from_quantum_numbers(cls, qn: QuantumNumbers, d: int) -> "EnergyLevel":
        qn = QuantumNumbers(*qn).check()
        return cls(qn, float(energy(qn.n, qn.l, d)), float(log_degeneracy(qn.l, d)))


def _energy(n, l, d):
    return 2 * n + jnp.sqrt(l * (l + d - 2))


def _log_g(l, d):
    log_g = jnp.log(d + 2 * l - 2) + gammaln(d + l - 2) - gammaln(l + 1) - gammaln(d - 1)
    return jnp.where(l == 0, 0.0, log_g)


def energy(n, l, d: int) -> jnp.ndarray:
    d = check_dimension(d)
    n, l = jnp.asarray(n, jnp.float64), jnp.asarray(l, jnp.float64)
    if jnp.any(n < 0) or jnp.any(l < 0):
        raise ValueError("quantum numbers must be non-negative")
    return _energy(n, l, d)


def log_degeneracy(l, d: int) -> jnp.ndarray:
    """ln g(l) via log-gamma; finite for d, l up to 1e6 and beyond."""
    d = check_dimension(d)
    l = jnp.asarray(l, jnp.float64)
    if jnp.any(l < 0):
        raise ValueError("l must be non-negative")
    return _log_g(l, d)


def _below_cap(n: int, l: int, d: int, cap: float) -> bool:
    # same floating expression as _energy, so the inclusive boundary agrees with energy()
    return 2 * n + math.sqrt(l * (l + d - 2)) <= cap


def _max_l(n: int, d: int, cap: float) -> int:
    r = cap - 2 * n
    l = max(0, int((-(d - 2) + math.sqrt((d - 2) ** 2 + 4 * r * r)) / 2))
    while _below_cap(n, l + 1, d, cap):
        l += 1
    while l > 0 and not _below_cap(n, l, d, cap):
        l -= 1
    return l


def level_arrays(d: int, energy_cap: float,
                 max_levels: int = DEFAULTS.max_levels) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """All (n, l) with E(n, l) <= energy_cap as sorted arrays ``(n, l, energy, log_g)``."""
    d = check_dimension(d)
    if not energy_cap > 0:
        raise ValueError(f"energy cap must be positive, got {energy_cap!r}")
    counts = [_max_l(n, d, energy_cap) + 1 for n in range(int(energy_cap // 2) + 1)]
    total = sum(counts)
    if total > max_levels:
        raise SpectrumTooLargeError(f"{total} levels below cap {energy_cap} exceed the limit of {max_levels}")
    n = np.repeat(np.arange(len(counts)), counts)
    l = np.concatenate([np.arange(c) for c in counts])
    energies = np.asarray(_energy(n.astype(np.float64), l.astype(np.float64), d))
    order = np.lexsort((l, n, energies))
    n, l, energies = n[order], l[order], energies[order]
    logger.debug("d=%d cap=%r: %d levels", d, energy_cap, total)
    return n, l, energies, np.asarray(_log_g(l.astype(np.float64), d))


def enumerate_levels(d: int, energy_cap: float, max_levels: int = DEFAULTS.max_levels) -> List[EnergyLevel]:
    n, l, energies, log_g = level_arrays(d, energy_cap, max_levels)
    return [EnergyLevel(QuantumNumbers(int(a), int(b)), float(e), float(g))
            for a, b, e, g in zip(n, l, energies, log_g)]


def log_state_count(d: int, energy_cap: float, max_levels: int = DEFAULTS.max_levels) -> float:
    """ln of the number of states (degeneracy included) with E <= energy_cap."""
    _, _, _, log_g = level_arrays(d, energy_cap, max_levels)
    return float(logsumexp(log_g))
