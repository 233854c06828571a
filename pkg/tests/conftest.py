import numpy as np
import pytest

from hhg1d.model import AtomParams, LaserParams, potential_atom
from hhg1d.tdse import Grid, ground_state


@pytest.fixture(scope="session")
def atom():
    return AtomParams()


@pytest.fixture(scope="session")
def reduced_laser():
    """800 nm, weak-field test pulse with a 2-4-2 trapezoid."""
    return LaserParams(F_L=0.075, omega_L=0.057, n_up=2, n_plateau=4, n_down=2)


@pytest.fixture(scope="session")
def fine_grid():
    """Grid resolving the soft-core well for eigenstate work."""
    return Grid(-60.0, 60.0, 2048)


@pytest.fixture(scope="session")
def soft_ground(fine_grid, atom):
    """Ground state of the soft-core atom on the fine grid, with energy."""
    return ground_state(fine_grid, lambda x: potential_atom(x, atom))


def riemann_norm(psi, dx):
    return np.sum(np.abs(psi) ** 2) * dx
