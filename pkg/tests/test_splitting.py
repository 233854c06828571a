import numpy as np
import pytest
from scipy.linalg import expm

from hhg1d.splitting import DRIFT_COEFFS, KICK_COEFFS, KICK_TIMES


def test_consistency_sums():
    assert np.sum(DRIFT_COEFFS) == pytest.approx(1.0, abs=1e-15)
    assert np.sum(KICK_COEFFS) == pytest.approx(1.0, abs=1e-15)


def test_palindromic():
    np.testing.assert_array_equal(DRIFT_COEFFS, DRIFT_COEFFS[::-1])
    np.testing.assert_array_equal(KICK_COEFFS, KICK_COEFFS[::-1])


def test_kick_times_symmetric():
    np.testing.assert_allclose(KICK_TIMES + KICK_TIMES[::-1],
                               np.ones(6), rtol=1e-14)


def test_defining_order_conditions():
    """Local error of the composition on non-commuting generators is O(h⁵)."""
    rng = np.random.default_rng(0)
    a = rng.normal(size=(4, 4))
    b = rng.normal(size=(4, 4))
    a, b = a + a.T, b + b.T

    def composed(h):
        m = expm(DRIFT_COEFFS[0] * h * a)
        for i in range(6):
            m = expm(DRIFT_COEFFS[i + 1] * h * a) \
                @ expm(KICK_COEFFS[i] * h * b) @ m
        return m

    errs = [np.linalg.norm(composed(h) - expm((a + b) * h))
            for h in (0.2, 0.1, 0.05)]
    orders = np.log2(np.array(errs[:-1]) / np.array(errs[1:]))
    assert np.all(orders > 4.7), orders
