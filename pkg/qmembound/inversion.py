"""Entropy -> beta inversion and the sum-form cost C = U_n + U_l.

C is in units of hbar * sqrt(kappa / m); callers supply that factor.
"""
import dataclasses
import logging
import math
from typing import Optional

from .config import DEFAULTS, Method
from .constants import LN2
from .spectrum import check_dimension
from .thermo import ThermoState, thermo_state
from .utils.roots import grow_bracket, solve_decreasing

logger = logging.getLogger(__name__)


@dataclasses.dataclass(frozen=True)
class EntropyTarget:
    s_total: float
    d: int

    def __post_init__(self):
        if not math.isfinite(self.s_total) or self.s_total < 0:
            raise ValueError(f"entropy must be finite and non-negative, got {self.s_total!r}")
        object.__setattr__(self, "d", check_dimension(self.d))

    @classmethod
    def per_dof(cls, s_per_dof: float, d: int) -> "EntropyTarget":
        return cls(s_per_dof * d, d)


@dataclasses.dataclass(frozen=True)
class SumCost:
    beta_solution: float
    c_tilde_dimensionless: float
    # d (e^{S/d} - 1)
    lemma_value: float
    # d e^{(S + ln 2)/d - 1} - 1, the same quantity from the leading-order thermodynamics
    asymptotic_cost: float
    method: Method
    state: ThermoState


def default_method(d: int) -> Method:
    return "asymptotic" if d >= DEFAULTS.asymptotic_min_d else "direct"


def lemma_value(s_total: float, d: int) -> float:
    return d * math.expm1(s_total / d)


def asymptotic_cost(s_total: float, d: int) -> float:
    """Leading-order C at entropy S.

    S_n + S_l ~ d (1 - ln beta) - ln 2 and U_n + U_l ~ d / beta - 1 for
    beta << 1, which puts C near d e^{S/d - 1}, a factor e under the lemma value.
    """
    return d * math.exp((s_total + LN2) / d - 1) - 1


def _entropy_fn(d: int, method: Method, **kwargs):
    def f(beta: float) -> float:
        return thermo_state(beta, d, method, warn_regime=False, **kwargs).total_entropy
    return f


def beta_for_entropy(target: EntropyTarget, method: Optional[Method] = None, *,
                     tol: float = DEFAULTS.entropy_tol, max_terms: Optional[int] = None) -> float:
    """beta at which S_n + S_l equals ``target.s_total``.

    The asymptotic method brackets from ``DEFAULTS.beta_bracket``; the direct
    method starts from a bracket around the asymptotic answer, which keeps the
    number of expensive direct evaluations small.
    """
    if target.s_total == 0:
        raise ValueError("zero entropy has no finite beta")
    method = method or default_method(target.d)
    if method not in ("direct", "asymptotic"):
        raise NotImplementedError(f"Method {method} not implemented")
    f_asymptotic = _entropy_fn(target.d, "asymptotic")
    lo, hi = grow_bracket(f_asymptotic, target.s_total, *DEFAULTS.beta_bracket,
                          growth=DEFAULTS.bracket_growth, max_steps=DEFAULTS.max_bracket_steps)
    root = solve_decreasing(f_asymptotic, target.s_total, lo, hi, log_scale=True)
    if method == "direct":
        f_direct = _entropy_fn(target.d, "direct", max_terms=max_terms)
        lo, hi = grow_bracket(f_direct, target.s_total, root.x / 2, root.x * 2,
                              growth=2.0, max_steps=DEFAULTS.max_bracket_steps)
        root = solve_decreasing(f_direct, target.s_total, lo, hi, log_scale=True)
    logger.info("S=%r d=%d (%s): beta=%r after %d steps, residual %.3g",
                target.s_total, target.d, method, root.x, root.steps, root.value - target.s_total)
    # direct entropies carry finite-difference noise near 1e-9, so only the closed form is held to tol
    if method == "asymptotic" and abs(root.value - target.s_total) > tol:
        logger.warning("entropy at beta=%r misses %r by %.3g", root.x, target.s_total, root.value - target.s_total)
    if method == "asymptotic" and root.x > DEFAULTS.asymptotic_max_beta:
        logger.warning("asymptotic solution beta=%r lies outside beta << 1", root.x)
    return root.x


def sum_cost(target: EntropyTarget, method: Optional[Method] = None, **kwargs) -> SumCost:
    method = method or default_method(target.d)
    beta = beta_for_entropy(target, method, **kwargs)
    state = thermo_state(beta, target.d, method, warn_regime=False, max_terms=kwargs.get("max_terms"))
    return SumCost(
        beta_solution=beta,
        c_tilde_dimensionless=state.total_energy,
        lemma_value=lemma_value(target.s_total, target.d),
        asymptotic_cost=asymptotic_cost(target.s_total, target.d),
        method=method,
        state=state,
    )
