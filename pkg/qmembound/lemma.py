"""Brute-force checks that, at fixed Shannon entropy, the Boltzmann distribution over
a sorted spectrum has the smallest mean energy.

Spectra are stored per level with a log-multiplicity, and a distribution assigns
each level a total probability spread uniformly over its states. Small spectra
can be expanded into individual states; large ones (truncated H_opt spectra hold
billions of states) are only ever handled level by level.
"""
import dataclasses
import itertools
import logging
import math
from functools import partial
from typing import Iterable, NamedTuple, Optional, Tuple

import jax
import jax.numpy as jnp
import numpy as np
from jax.scipy.special import logsumexp, xlogy
from tqdm.auto import tqdm

from .config import DEFAULTS
from .spectrum import level_arrays
from .utils.roots import grow_bracket, solve_decreasing, step_below

logger = logging.getLogger(__name__)

# entropies within this of ln N are treated as the uniform endpoint
_ENDPOINT_SLACK = 1e-12
# challengers per jitted batch are capped at this many (trial x level) entries
_BATCH_ENTRIES = 1 << 22


class StateSpaceTooLargeError(RuntimeError):
    pass


@dataclasses.dataclass(frozen=True, eq=False)
class FiniteSpectrum:
    energies: np.ndarray
    log_degeneracy: np.ndarray

    def __post_init__(self):
        energies = np.asarray(self.energies, dtype=np.float64)
        log_degeneracy = np.asarray(self.log_degeneracy, dtype=np.float64)
        if energies.ndim != 1 or energies.shape != log_degeneracy.shape:
            raise ValueError("energies and degeneracies must be 1-d and of equal length")
        if len(energies) < 2:
            raise ValueError("a spectrum needs at least two levels")
        if not np.all(np.isfinite(energies)) or not np.all(np.isfinite(log_degeneracy)):
            raise ValueError("energies and degeneracies must be finite")
        if np.any(np.diff(energies) < 0):
            raise ValueError("energies must be sorted ascending")
        if energies[0] != 0:
            raise ValueError(f"the ground level must sit at energy 0, got {energies[0]!r}")
        if np.any(log_degeneracy < 0):
            raise ValueError("degeneracies must be >= 1")
        object.__setattr__(self, "energies", energies)
        object.__setattr__(self, "log_degeneracy", log_degeneracy)

    @classmethod
    def from_levels(cls, levels: Iterable[Tuple[float, int]]) -> "FiniteSpectrum":
        energies, degeneracies = zip(*levels)
        if any(int(g) != g or g < 1 for g in degeneracies):
            raise ValueError(f"degeneracies must be positive integers, got {degeneracies}")
        return cls(np.array(energies), np.log(np.array(degeneracies, dtype=np.float64)))

    @classmethod
    def from_energies(cls, energies) -> "FiniteSpectrum":
        energies = np.asarray(energies, dtype=np.float64)
        return cls(energies, np.zeros_like(energies))

    @classmethod
    def from_hopt(cls, d: int, energy_cap: float, max_levels: int = DEFAULTS.max_levels) -> "FiniteSpectrum":
        """H_opt levels with E(n, l) <= energy_cap, each carrying g(l)."""
        _, _, energies, log_g = level_arrays(d, energy_cap, max_levels)
        return cls(energies, log_g)

    @property
    def levels(self) -> int:
        return len(self.energies)

    @property
    def log_state_count(self) -> float:
        return float(logsumexp(self.log_degeneracy))

    @property
    def ground(self) -> np.ndarray:
        return self.energies == 0

    @property
    def log_ground_count(self) -> float:
        return float(logsumexp(self.log_degeneracy[self.ground]))

    def expand(self, max_states: int = DEFAULTS.max_states) -> "FiniteSpectrum":
        """One entry per state, degenerate levels repeated."""
        if self.log_state_count > math.log(max_states) + 1e-9:
            raise StateSpaceTooLargeError(
                f"about {math.exp(self.log_state_count):.4g} states exceed the limit of {max_states}")
        counts = np.rint(np.exp(self.log_degeneracy)).astype(np.int64)
        energies = np.repeat(self.energies, counts)
        return FiniteSpectrum(energies, np.zeros_like(energies))


@jax.jit
def _entropy(level_probs, log_degeneracy):
    return jnp.sum(level_probs * log_degeneracy) - jnp.sum(xlogy(level_probs, level_probs))


@jax.jit
def _boltzmann_probs(beta, energies, log_degeneracy):
    log_w = log_degeneracy - beta * energies
    return jnp.exp(log_w - logsumexp(log_w))


@dataclasses.dataclass(frozen=True, eq=False)
class Distribution:
    # total probability of each level; states inside a level share it evenly
    level_probabilities: np.ndarray
    spectrum: FiniteSpectrum

    @property
    def entropy(self) -> float:
        return float(_entropy(self.level_probabilities, self.spectrum.log_degeneracy))

    @property
    def mean_energy(self) -> float:
        return float(jnp.dot(self.level_probabilities, self.spectrum.energies))

    def state_probabilities(self, max_states: int = DEFAULTS.max_states) -> np.ndarray:
        self.spectrum.expand(max_states)
        counts = np.rint(np.exp(self.spectrum.log_degeneracy)).astype(np.int64)
        return np.repeat(self.level_probabilities / counts, counts)


def boltzmann(spectrum: FiniteSpectrum, beta: float) -> Distribution:
    """p ~ exp(-beta E) per state; beta = 0 is uniform, beta = inf the ground state."""
    if math.isnan(beta) or beta < 0:
        raise ValueError(f"beta must be >= 0, got {beta!r}")
    if math.isinf(beta):
        # every ground state equally
        probs = np.where(spectrum.ground, np.exp(spectrum.log_degeneracy - spectrum.log_ground_count), 0.0)
    else:
        probs = np.asarray(_boltzmann_probs(beta, spectrum.energies, spectrum.log_degeneracy))
    return Distribution(probs, spectrum)


class EntropyMatch(NamedTuple):
    distribution: Distribution
    mean_energy: float
    beta: float


def _ground_mixture(spectrum: FiniteSpectrum, s_target: float, max_states: int) -> Distribution:
    """A zero-energy distribution with entropy ``s_target`` < ln g0.

    The ground block is split into single states and the distribution slides
    from uniform over them toward the first one.
    """
    count = int(np.rint(math.exp(spectrum.log_ground_count)))
    if count > max_states:
        raise StateSpaceTooLargeError(f"{count} ground states exceed the limit of {max_states}")
    excited = ~spectrum.ground
    split = FiniteSpectrum(np.concatenate([np.zeros(count), spectrum.energies[excited]]),
                           np.concatenate([np.zeros(count), spectrum.log_degeneracy[excited]]))
    uniform = np.zeros(split.levels)
    uniform[:count] = 1 / count
    first = np.zeros(split.levels)
    first[0] = 1.0

    def f(mu):
        return float(_entropy(_mix(uniform, first, mu), split.log_degeneracy))

    root = solve_decreasing(f, s_target, 0.0, 1.0)
    mu = step_below(f, s_target, root.x, hi=1.0)
    return Distribution(_mix(uniform, first, mu), split)


def min_energy_at_entropy(spectrum: FiniteSpectrum, s_target: float, *,
                          tol: float = DEFAULTS.entropy_tol, max_states: int = DEFAULTS.max_states) -> EntropyMatch:
    """The least-energy distribution with entropy ``s_target`` and its mean energy.

    Above ln g0 (the ground-state count) this is the Boltzmann distribution:
    beta is solved with Brent's method and then stepped up until the entropy
    no longer exceeds ``s_target``. At or below ln g0 it is any distribution
    over the ground states with that entropy, at energy 0 and beta = inf.
    """
    log_n, log_ground = spectrum.log_state_count, spectrum.log_ground_count
    if not 0 <= s_target <= log_n + _ENDPOINT_SLACK:
        raise ValueError(f"entropy {s_target!r} outside [0, ln N = {log_n!r}]")
    if s_target <= log_ground + _ENDPOINT_SLACK:
        beta = math.inf
        if s_target >= log_ground - _ENDPOINT_SLACK:
            distribution = boltzmann(spectrum, beta)
        else:
            distribution = _ground_mixture(spectrum, s_target, max_states)
    else:
        if s_target >= log_n - _ENDPOINT_SLACK:
            beta = 0.0
        else:
            def f(beta):
                return boltzmann(spectrum, beta).entropy

            lo, hi = grow_bracket(f, s_target, 0.0, 1.0, growth=DEFAULTS.bracket_growth,
                                  max_steps=DEFAULTS.max_bracket_steps, grow_lo=False)
            beta = step_below(f, s_target, solve_decreasing(f, s_target, lo, hi).x)
        distribution = boltzmann(spectrum, beta)
    if abs(distribution.entropy - s_target) > tol:
        logger.warning("entropy %r misses target %r by more than %g", distribution.entropy, s_target, tol)
    return EntropyMatch(distribution, distribution.mean_energy, beta)


def _mix(p, toward, lam):
    return (1 - lam) * p + lam * toward


@partial(jax.jit, static_argnums=(4,))
def _challengers(keys, energies, log_degeneracy, s_target, mixing_steps):
    uniform = jnp.exp(log_degeneracy - logsumexp(log_degeneracy))
    ground = jnp.zeros_like(energies).at[0].set(1.0)

    def one(key):
        p = jax.random.dirichlet(key, jnp.ones_like(energies))
        up = _entropy(p, log_degeneracy) < s_target
        toward = jnp.where(up, uniform, ground)

        def body(_, bracket):
            lo, hi = bracket
            mid = (lo + hi) / 2
            above = _entropy(_mix(p, toward, mid), log_degeneracy) >= s_target
            move_hi = jnp.where(up, above, ~above)
            return jnp.where(move_hi, lo, mid), jnp.where(move_hi, mid, hi)

        lo, hi = jax.lax.fori_loop(0, mixing_steps, body, (jnp.zeros(()), jnp.ones(())))
        # keep the end whose entropy is >= s_target
        candidate = _mix(p, toward, jnp.where(up, hi, lo))
        return jnp.dot(candidate, energies), _entropy(candidate, log_degeneracy)

    return jax.vmap(one)(keys)


def _batches(keys, width: int, progress: bool):
    size = max(1, _BATCH_ENTRIES // width)
    starts = range(0, len(keys), size)
    for start in tqdm(starts, desc="challengers", disable=not progress):
        yield keys[start:start + size]


def challenge(spectrum: FiniteSpectrum, s_target: float, trials: int, seed: int, *,
              mixing_steps: int = DEFAULTS.mixing_steps, max_states: int = DEFAULTS.max_states,
              progress: bool = False) -> float:
    """Most negative (challenger mean energy - Boltzmann mean energy) over ``trials`` random challengers.

    Each challenger is a uniform random point of the simplex mixed with the
    uniform distribution (to raise its entropy) or the ground state (to lower
    it) until it sits at ``s_target``. Spectra with more than ``max_states``
    states are challenged level-symmetrically.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials!r}")
    reference = min_energy_at_entropy(spectrum, s_target).mean_energy
    if spectrum.log_state_count <= math.log(max_states) + 1e-9:
        spectrum = spectrum.expand(max_states)
    else:
        logger.info("%d levels, ~%.3g states: level-symmetric challengers",
                    spectrum.levels, math.exp(spectrum.log_state_count))
    keys = jax.random.split(jax.random.key(seed), trials)
    worst, worst_entropy = math.inf, math.nan
    for batch in _batches(keys, spectrum.levels, progress):
        energies, entropies = _challengers(batch, spectrum.energies, spectrum.log_degeneracy, s_target, mixing_steps)
        i = int(jnp.argmin(energies))
        if float(energies[i]) - reference < worst:
            worst, worst_entropy = float(energies[i]) - reference, float(entropies[i])
    logger.info("worst violation %.3g (challenger entropy %r, target %r)", worst, worst_entropy, s_target)
    return worst


@jax.jit
def _shuffled_energies(keys, p, energies):
    return jax.vmap(lambda key: jnp.dot(jax.random.permutation(key, p), energies))(keys)


def sorted_assignment_check(spectrum: FiniteSpectrum, probabilities, *,
                            samples: int = DEFAULTS.permutation_samples, seed: int = 0,
                            max_states: int = DEFAULTS.max_states) -> bool:
    """Whether pairing descending probabilities with ascending energies gives the least mean energy.

    Exhaustive over all orderings up to 8 states, ``samples`` random orderings beyond.
    """
    energies = spectrum.expand(max_states).energies
    p = np.asarray(probabilities, dtype=np.float64)
    if p.shape != energies.shape:
        raise ValueError(f"need {len(energies)} probabilities, got {p.shape}")
    if np.any(p < 0) or abs(p.sum() - 1) > 1e-12:
        raise ValueError("probabilities must be non-negative and sum to 1")
    sorted_energy = float(np.dot(np.sort(p)[::-1], energies))
    if len(p) <= 8:
        orders = np.array(list(itertools.permutations(range(len(p)))))
        others = p[orders] @ energies
    else:
        keys = jax.random.split(jax.random.key(seed), samples)
        others = np.concatenate([np.asarray(_shuffled_energies(batch, p, energies))
                                 for batch in _batches(keys, len(p), progress=False)])
    slack = 1e-12 * max(1.0, float(energies[-1]))
    return bool(sorted_energy <= others.min() + slack)


def random_spectrum(key, levels: int, max_energy: float = 5.0) -> FiniteSpectrum:
    """Ground level at 0 plus ``levels - 1`` sorted uniform energies in (0, max_energy)."""
    if levels < 2:
        raise ValueError(f"levels must be >= 2, got {levels!r}")
    excited = jnp.sort(jax.random.uniform(key, (levels - 1,), minval=jnp.finfo(jnp.float64).tiny,
                                          maxval=max_energy))
    return FiniteSpectrum.from_energies(np.concatenate([[0.0], np.asarray(excited)]))
