import numpy as np
import pytest
from hypothesis import given, strategies as st

from shortpulse.roots import bracketed_newton


@given(st.lists(st.floats(-8, 8), min_size=1, max_size=10))
def test_cubic_inverse(targets):
    f = lambda y: y**3 + y
    y = bracketed_newton(f, lambda y: 3 * y**2 + 1, targets, -3.0, 3.0)
    assert np.allclose(f(y), targets, atol=1e-10)


def test_exact_root_at_midpoint_is_kept():
    y = bracketed_newton(lambda y: y, lambda y: np.ones_like(y), [0.0], -1.0, 1.0)
    assert y[0] == 0.0


def test_unbracketed_target():
    with pytest.raises(ValueError):
        bracketed_newton(lambda y: y, lambda y: np.ones_like(y), [5.0], -1.0, 1.0)
