import numpy as np
import pytest

from nematicflow.fields import (
    DirectorField,
    Grid,
    ScalarField,
    VectorField,
    make_grid,
    stream_function_velocity,
)


@pytest.fixture
def grid64():
    return make_grid(64, 64, 1.0, 1.0)


@pytest.fixture
def grid32():
    return make_grid(32, 32, 1.0, 1.0)


def scalar_from(grid, func, bc="neumann", bc_value=0.0):
    x, y = grid.cell_centers()
    return ScalarField(grid, func(x, y), bc=bc, bc_value=bc_value)


def director_from_angle(grid, theta_func, swap=False):
    """Unit director (cos t, sin t), or (sin t, cos t) when swap is set."""
    x, y = grid.cell_centers()
    t = theta_func(x, y)
    if swap:
        comps = np.stack([np.sin(t), np.cos(t)], axis=-1)
    else:
        comps = np.stack([np.cos(t), np.sin(t)], axis=-1)
    return DirectorField(grid, comps)


def stream_velocity_from(grid, psi_func, bc="noslip"):
    x, y = grid.corners()
    return stream_function_velocity(grid, psi_func(x, y), bc=bc)


def bump_stream(amplitude=1.0):
    """psi = A sin^2(pi x / lx) sin^2(pi y / ly): no-slip, grad psi = 0 on walls."""

    def psi(x, y):
        lx = x.max()
        ly = y.max()
        return amplitude * np.sin(np.pi * x / lx) ** 2 * np.sin(np.pi * y / ly) ** 2

    return psi


def random_stream_velocity(grid, rng, amplitude=1.0, modes=3):
    """Random smooth no-slip solenoidal field from a sine-mode stream function."""
    x, y = grid.corners()
    psi = np.zeros_like(x)
    for k in range(1, modes + 1):
        for l in range(1, modes + 1):
            a = rng.normal() / (k * k + l * l)
            psi += a * np.sin(k * np.pi * x / grid.lx) * np.sin(l * np.pi * y / grid.ly)
    psi *= amplitude
    return stream_function_velocity(grid, psi)


def random_smooth_scalar(grid, rng, modes=4, bc="neumann"):
    """Random band-limited scalar built from Neumann cosine modes."""
    x, y = grid.cell_centers()
    vals = np.zeros_like(x)
    for k in range(modes + 1):
        for l in range(modes + 1):
            a = rng.normal() / (1.0 + k * k + l * l)
            vals += a * np.cos(k * np.pi * x / grid.lx) * np.cos(l * np.pi * y / grid.ly)
    return ScalarField(grid, vals, bc=bc)


def interior(arr, margin=2):
    """Strip `margin` cells from every side of the leading two axes."""
    return arr[margin:-margin, margin:-margin]
