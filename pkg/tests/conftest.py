import numpy as np
import pytest

from freepacket import Grid, GaussianFamily, PhysicsParams, quadrature_norm2


@pytest.fixture(scope="session")
def params():
    return PhysicsParams(hbar=1.0, mass=1.0)


@pytest.fixture(scope="session")
def gauss_fam(params):
    return GaussianFamily(params=params, tau=1.0)


@pytest.fixture(scope="session")
def grid():
    """Workhorse grid: [-40, 40), n = 2048."""
    return Grid.centered(40.0, 2048)


@pytest.fixture(scope="session")
def wide_grid():
    """For long propagations and moment sweeps: [-64, 64), n = 4096."""
    return Grid.centered(64.0, 4096)


def rel_l2(field_a, field_b):
    """Relative L2 distance between two fields on the same grid."""
    step = field_a.lattice_step
    diff = np.sqrt(np.trapezoid(np.abs(field_a.values - field_b.values) ** 2, dx=step))
    scale = np.sqrt(quadrature_norm2(field_b))
    return diff / scale


def rel_l2_values(values_a, values_b, step):
    diff = np.sqrt(np.trapezoid(np.abs(values_a - values_b) ** 2, dx=step))
    scale = np.sqrt(np.trapezoid(np.abs(values_b) ** 2, dx=step))
    return diff / scale
