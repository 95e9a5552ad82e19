"""Bracketed root finding for monotone-decreasing scalar functions (entropy against beta)."""
import logging
import math
from typing import Callable, NamedTuple, Tuple

from scipy import optimize

from ..config import DEFAULTS

logger = logging.getLogger(__name__)


class BracketError(RuntimeError):
    pass


class Root(NamedTuple):
    x: float
    value: float
    lo: float
    hi: float
    steps: int


def grow_bracket(f: Callable[[float], float], target: float, lo: float, hi: float,
                 *, growth: float, max_steps: int, grow_lo: bool = True) -> Tuple[float, float]:
    """Widens ``[lo, hi]`` geometrically until a decreasing ``f`` straddles ``target``.

    Returns a bracket with ``f(lo) >= target >= f(hi)``. With ``grow_lo=False``
    the lower end is taken as given (used when ``lo`` is a hard boundary such as
    ``beta = 0``).
    """
    for step in range(max_steps + 1):
        if f(lo) >= target:
            break
        if not grow_lo:
            raise BracketError(f"target {target!r} is above f({lo!r}) = {f(lo)!r}")
        lo /= growth
    else:
        raise BracketError(f"no lower bracket for target {target!r} after {max_steps} steps (lo={lo!r})")
    for step in range(max_steps + 1):
        if f(hi) <= target:
            break
        hi *= growth
    else:
        raise BracketError(f"no upper bracket for target {target!r} after {max_steps} steps (hi={hi!r})")
    logger.debug("bracket for target %r: [%r, %r]", target, lo, hi)
    return lo, hi


def solve_decreasing(f: Callable[[float], float], target: float, lo: float, hi: float, *,
                     max_steps: int = DEFAULTS.max_root_steps, xtol: float = DEFAULTS.root_xtol,
                     log_scale: bool = False) -> Root:
    """``f(x) = target`` by Brent's method on ``[lo, hi]``, ``f`` non-increasing.

    With ``log_scale`` the solve runs in ln x, so ``xtol`` is relative.
    """
    if log_scale and not lo > 0:
        raise ValueError(f"log-scale solve needs lo > 0, got {lo!r}")
    f_lo, f_hi = f(lo), f(hi)
    if not f_lo >= target >= f_hi:
        raise BracketError(f"[{lo!r}, {hi!r}] does not bracket {target!r}: f = {f_lo!r}, {f_hi!r}")
    if log_scale:
        x, result = optimize.brentq(lambda t: f(math.exp(t)) - target, math.log(lo), math.log(hi),
                                    xtol=xtol, maxiter=max_steps, full_output=True, disp=False)
        x = min(max(math.exp(x), lo), hi)
    else:
        x, result = optimize.brentq(lambda t: f(t) - target, lo, hi,
                                    xtol=xtol, maxiter=max_steps, full_output=True, disp=False)
    if not result.converged:
        logger.warning("brentq stopped after %d iterations: %s", result.iterations, result.flag)
    value = f(x)
    logger.debug("brentq: %d iterations, x=%r, residual=%r", result.iterations, x, value - target)
    return Root(x, value, lo, hi, result.iterations)


def step_below(f: Callable[[float], float], target: float, x: float, *,
               hi: float = math.inf, max_steps: int = DEFAULTS.max_root_steps) -> float:
    """The first ``x' >= x`` on a doubling ladder from one ulp with ``f(x') <= target``."""
    step = math.ulp(max(abs(x), 1e-300))
    for _ in range(max_steps):
        if f(x) <= target:
            return x
        x = min(x + step, hi)
        step *= 2
    raise BracketError(f"f stays above {target!r} up to x={x!r}")
