"""Partition functions of the two uncoupled subsystems.

Z = Z_n * Z_l with Z_n = sum_n exp(-2 beta n) (geometric, closed form) and
Z_l = sum_l g(l) exp(-beta sqrt(l (l + d - 2))), evaluated either by direct
log-space summation or by the steepest-descent estimate Z_l ~ 2 beta^(1 - d).
All entropies are in nats.
"""
import dataclasses
import logging
import math
import warnings
from functools import partial
from typing import NamedTuple, Optional

import jax
import jax.numpy as jnp
import numpy as np

from .config import DEFAULTS, Method
from .spectrum import _log_g, check_dimension

logger = logging.getLogger(__name__)


class ConvergenceError(RuntimeError):
    pass


class DirectSum(NamedTuple):
    log_z: float
    terms: int
    converged: bool
    still_growing: bool


@dataclasses.dataclass(frozen=True)
class ThermoState:
    beta: float
    d: int
    log_z_n: float
    log_z_l: float
    u_n: float
    u_l: float
    s_n: float
    s_l: float
    method: Method

    @property
    def total_energy(self) -> float:
        return self.u_n + self.u_l

    @property
    def total_entropy(self) -> float:
        return self.s_n + self.s_l


def check_beta(beta):
    beta_array = np.asarray(beta, dtype=np.float64)
    if not np.all(np.isfinite(beta_array)) or not np.all(beta_array > 0):
        raise ValueError(f"beta must be positive and finite, got {beta!r}")
    return beta


def _log1mexp(x):
    # log(1 - exp(-x)) for x > 0, accurate at both ends
    return jnp.where(x > math.log(2.0),
                     jnp.log1p(-jnp.exp(-x)),
                     jnp.log(-jnp.expm1(-jnp.minimum(x, math.log(2.0)))))


def z_n_log(beta) -> jnp.ndarray:
    """ln Z_n = -ln(1 - exp(-2 beta)), closed geometric form."""
    beta = jnp.asarray(check_beta(beta), jnp.float64)
    return -_log1mexp(2 * beta)


def u_n_exact(beta) -> jnp.ndarray:
    """U_n = 2 / (exp(2 beta) - 1), the inverse of beta = log(1 + 2/U_n) / 2."""
    beta = jnp.asarray(check_beta(beta), jnp.float64)
    return 2 / jnp.expm1(2 * beta)


def s_n_exact(u_n) -> jnp.ndarray:
    """S_n = log(1 + U_n/2) + (U_n/2) log(1 + 2/U_n), zero at U_n = 0."""
    u_n = jnp.asarray(u_n, jnp.float64)
    if jnp.any(u_n < 0) or not jnp.all(jnp.isfinite(u_n)):
        raise ValueError(f"U_n must be finite and non-negative, got {u_n!r}")
    half = u_n / 2
    safe = jnp.where(half > 0, half, 1.0)
    return jnp.where(half > 0, jnp.log1p(safe) + safe * jnp.log1p(1 / safe), 0.0)


def z_l_log_steepest(beta, d: int) -> jnp.ndarray:
    """Steepest-descent estimate ln Z_l ~ ln 2 + (d - 1) ln(1 / beta)."""
    d = check_dimension(d)
    beta = jnp.asarray(check_beta(beta), jnp.float64)
    return math.log(2.0) - (d - 1) * jnp.log(beta)


@partial(jax.jit, static_argnums=(3,))
def _z_l_terms(beta, d, start, size):
    l = start + jnp.arange(size, dtype=jnp.float64)
    return _log_g(l, d) - beta * jnp.sqrt(l * (l + d - 2))


def direct_term_budget(beta: float, d: int, floor: int = DEFAULTS.max_terms) -> int:
    """A term count at which the 1e-15 tail criterion is reachable.

    The summand peaks near l* = (d - 2)/beta and has fallen by e^-35 at
    l ~ (2(d - 2) + 60)/beta for every d >= 3.
    """
    return max(floor, int(math.ceil((2 * (d - 2) + 60) / beta)) + 1)


def z_l_sum(beta: float, d: int, max_terms: int = DEFAULTS.max_terms, tail_tol: float = DEFAULTS.tail_tol,
            chunk_size: int = DEFAULTS.chunk_size) -> DirectSum:
    """Log-sum-exp accumulation of ln g(l) - beta sqrt(l(l + d - 2)) over l = 0, 1, ...

    Stops at the first term that lies past the running peak and below
    ``tail_tol`` times the running sum, or after ``max_terms`` terms. Never
    raises on the term cap; see ``z_l_log_direct`` for the strict version.
    """
    beta = float(check_beta(beta))
    d = check_dimension(d)
    if max_terms < 1:
        raise ValueError(f"max_terms must be >= 1, got {max_terms!r}")
    if not 0 < tail_tol < 1:
        raise ValueError(f"tail_tol must lie in (0, 1), got {tail_tol!r}")
    log_tol = math.log(tail_tol)
    running, peak, start = -np.inf, -np.inf, 0
    while start < max_terms:
        size = min(chunk_size, max_terms - start)
        terms = np.asarray(_z_l_terms(beta, d, start, chunk_size))[:size]
        # strictly left-to-right, so the result does not depend on chunk_size
        sums = np.logaddexp.accumulate(np.concatenate(([running], terms)))[1:]
        peak_before = np.maximum(peak, np.concatenate(([-np.inf], np.maximum.accumulate(terms)[:-1])))
        done = (terms < peak_before) & (terms - sums < log_tol)
        if done.any():
            i = int(np.argmax(done))
            return DirectSum(float(sums[i]), start + i + 1, True, False)
        running, peak, start = sums[-1], max(peak, float(terms.max())), start + size
    # a lone term gives no trend
    still_growing = start > 1 and bool(terms[-1] >= peak_before[-1])
    return DirectSum(float(running), start, False, still_growing)


def z_l_log_direct(beta: float, d: int, max_terms: int = DEFAULTS.max_terms,
                   tail_tol: float = DEFAULTS.tail_tol) -> DirectSum:
    result = z_l_sum(beta, d, max_terms, tail_tol)
    if result.still_growing:
        raise ConvergenceError(
            f"Z_l terms still growing after {result.terms} terms (beta={beta!r}, d={d}); "
            f"need about {direct_term_budget(beta, d)}")
    if not result.converged:
        logger.warning("Z_l sum stopped at the %d-term cap before the tail criterion (beta=%r, d=%d)",
                       result.terms, beta, d)
    return result


def _asymptotic_l(beta: float, d: int):
    u_l = (d - 1) / beta
    # the steepest-descent entropy goes negative once beta > e, where it no longer applies
    s_l = max(0.0, (d - 1) * (math.log(u_l / (d - 1)) + 1))
    return float(z_l_log_steepest(beta, d)), u_l, s_l


def _direct_l(beta: float, d: int, max_terms: Optional[int], tail_tol: float, fd_step: float):
    h = fd_step * beta
    if max_terms is None:
        max_terms = direct_term_budget(beta - h, d)
    log_z = z_l_log_direct(beta, d, max_terms, tail_tol).log_z
    log_z_plus = z_l_log_direct(beta + h, d, max_terms, tail_tol).log_z
    log_z_minus = z_l_log_direct(beta - h, d, max_terms, tail_tol).log_z
    u_l = max(0.0, -(log_z_plus - log_z_minus) / (2 * h))
    # canonical relation instead of a second derivative
    s_l = max(0.0, beta * u_l + log_z)
    return log_z, u_l, s_l


def thermo_state(beta: float, d: int, method: Method = "direct", *,
                 max_terms: Optional[int] = None, tail_tol: float = DEFAULTS.tail_tol,
                 fd_step: float = DEFAULTS.fd_step, warn_regime: bool = True) -> ThermoState:
    """Internal energies and entropies of both subsystems at ``beta``.

    ``max_terms=None`` sizes the direct sum with ``direct_term_budget``.
    """
    beta = float(check_beta(beta))
    d = check_dimension(d)
    if method == "asymptotic":
        if warn_regime and beta > DEFAULTS.asymptotic_max_beta:
            warnings.warn(f"asymptotic Z_l used at beta={beta:g}, outside beta << 1", RuntimeWarning, stacklevel=2)
        log_z_l, u_l, s_l = _asymptotic_l(beta, d)
    elif method == "direct":
        log_z_l, u_l, s_l = _direct_l(beta, d, max_terms, tail_tol, fd_step)
    else:
        raise NotImplementedError(f"Method {method} not implemented")
    u_n = float(u_n_exact(beta))
    return ThermoState(
        beta=beta,
        d=d,
        log_z_n=float(z_n_log(beta)),
        log_z_l=log_z_l,
        u_n=u_n,
        u_l=u_l,
        s_n=float(s_n_exact(u_n)),
        s_l=s_l,
        method=method,
    )


def total_entropy(beta: float, d: int, method: Method = "direct", **kwargs) -> float:
    return thermo_state(beta, d, method, **kwargs).total_entropy
