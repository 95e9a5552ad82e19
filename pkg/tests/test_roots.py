import math

import pytest

from qmembound.utils.roots import BracketError, grow_bracket, solve_decreasing, step_below


def inverse(x):
    return 1 / x


@pytest.mark.parametrize("log_scale", [False, True])
def test_solve_decreasing_inverse(log_scale):
    root = solve_decreasing(inverse, 4.0, 0.01, 10.0, log_scale=log_scale)
    assert root.x == pytest.approx(0.25, rel=1e-12)
    assert root.value == pytest.approx(4.0, rel=1e-12)
    assert (root.lo, root.hi) == (0.01, 10.0)
    assert root.steps > 0


def test_solve_decreasing_log_scale_spans_decades():
    root = solve_decreasing(lambda x: -math.log(x), 30.0, 1e-20, 1e5, log_scale=True)
    assert root.x == pytest.approx(math.exp(-30), rel=1e-12)


def test_solve_decreasing_rejects_bad_bracket():
    with pytest.raises(BracketError):
        solve_decreasing(inverse, 4.0, 1.0, 10.0)
    with pytest.raises(ValueError):
        solve_decreasing(lambda x: 1 - x, 0.5, 0.0, 1.0, log_scale=True)


def test_step_below_lands_on_target_side():
    x = step_below(inverse, 3.0, 1 / 3 - 1e-12)
    assert inverse(x) <= 3.0
    assert x == pytest.approx(1 / 3, rel=1e-10)
    assert step_below(inverse, 3.0, 0.5) == 0.5


def test_step_below_respects_upper_end():
    with pytest.raises(BracketError):
        step_below(lambda x: 1.0, 0.5, 0.0, hi=1.0)


def test_grow_bracket():
    lo, hi = grow_bracket(inverse, 1e-3, 1.0, 2.0, growth=10.0, max_steps=10)
    assert inverse(lo) >= 1e-3 >= inverse(hi)
    assert hi == pytest.approx(2000.0)
    lo, hi = grow_bracket(inverse, 5e3, 1.0, 2.0, growth=10.0, max_steps=10)
    assert lo == pytest.approx(1e-4)
    with pytest.raises(BracketError):
        grow_bracket(inverse, 5e3, 1.0, 2.0, growth=10.0, max_steps=10, grow_lo=False)
    with pytest.raises(BracketError):
        grow_bracket(lambda x: 1.0, 0.5, 1.0, 2.0, growth=10.0, max_steps=5)
