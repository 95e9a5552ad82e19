import dataclasses
from typing import Literal, Tuple

Method = Literal["direct", "asymptotic"]
DeviceKind = Literal["box", "oscillator", "hydrogen"]
EntropyUnits = Literal["nats", "bits"]


@dataclasses.dataclass(frozen=True)
class NumericsConfig:
    # Z_l summation
    max_terms: int = 1600
    tail_tol: float = 1e-15
    chunk_size: int = 4096
    fd_step: float = 1e-5

    entropy_tol: float = 1e-10
    beta_bracket: Tuple[float, float] = (1e-6, 1e2)
    bracket_growth: float = 10.0
    max_bracket_steps: int = 60
    max_root_steps: int = 200
    root_xtol: float = 1e-15

    # regime of the steepest-descent formulas, "d >> 1 and beta << 1"
    asymptotic_min_d: int = 50
    asymptotic_max_beta: float = 0.2

    max_levels: int = 1_000_000
    max_states: int = 10_000
    mixing_steps: int = 64
    permutation_samples: int = 10_000
    kappa_grid_points: int = 401
    violation_tol: float = 1e-9


DEFAULTS = NumericsConfig()
