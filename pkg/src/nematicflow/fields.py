"""Grids, field containers and discrete differential operators.

Layout conventions
------------------
All arrays are indexed ``[i, j]`` with ``i`` the x index and ``j`` the y
index.  Scalars (density, pressure, viscosity, director components) live at
cell centers ``((i+1/2)h, (j+1/2)h)``.  Velocity is staggered (MAC): the x
component sits on vertical faces ``(i*h, (j+1/2)h)`` with shape
``(nx+1, ny)``, the y component on horizontal faces with shape
``(nx, ny+1)``.  On this layout the discrete divergence of a velocity built
from a corner stream function vanishes to rounding, which the whole energy
bookkeeping relies on.

Boundary conditions are realized through one ghost layer:

* ``neumann``      ghost mirrors the adjacent interior cell (zero flux),
* ``dirichlet``    ghost reflects through the prescribed wall value,
* ``extrapolate``  linear extrapolation from the two nearest cells.

All operators are pure: input fields are never mutated.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

NEUMANN = "neumann"
DIRICHLET = "dirichlet"
EXTRAPOLATE = "extrapolate"

NO_SLIP = "noslip"
PRESCRIBED = "prescribed"


@dataclass(frozen=True)
class Grid:
    """Uniform rectangular grid with square cells of side h."""

    nx: int
    ny: int
    h: float

    def __post_init__(self):
        if self.nx < 4 or self.ny < 4:
            raise ValueError(f"grid must be at least 4x4, got {self.nx}x{self.ny}")
        if self.h <= 0:
            raise ValueError("cell size h must be positive")

    @property
    def lx(self) -> float:
        return self.nx * self.h

    @property
    def ly(self) -> float:
        return self.ny * self.h

    @property
    def cell_area(self) -> float:
        return self.h * self.h

    def cell_centers(self):
        """Meshgrid (X, Y) of cell-center coordinates, shape (nx, ny)."""
        x = (np.arange(self.nx) + 0.5) * self.h
        y = (np.arange(self.ny) + 0.5) * self.h
        return np.meshgrid(x, y, indexing="ij")

    def corners(self):
        """Meshgrid (X, Y) of cell-corner coordinates, shape (nx+1, ny+1)."""
        x = np.arange(self.nx + 1) * self.h
        y = np.arange(self.ny + 1) * self.h
        return np.meshgrid(x, y, indexing="ij")

    def xface_coords(self):
        """Coordinates of vertical (x-normal) faces, shape (nx+1, ny)."""
        x = np.arange(self.nx + 1) * self.h
        y = (np.arange(self.ny) + 0.5) * self.h
        return np.meshgrid(x, y, indexing="ij")

    def yface_coords(self):
        """Coordinates of horizontal (y-normal) faces, shape (nx, ny+1)."""
        x = (np.arange(self.nx) + 0.5) * self.h
        y = np.arange(self.ny + 1) * self.h
        return np.meshgrid(x, y, indexing="ij")


def make_grid(nx: int, ny: int, lx: float = 1.0, ly: float | None = None) -> Grid:
    """Grid for the domain [0,lx]x[0,ly]; cells must come out square."""
    if ly is None:
        ly = lx * ny / nx
    hx = lx / nx
    hy = ly / ny
    if abs(hx - hy) > 1e-12 * max(hx, hy):
        raise ValueError(f"cells must be square: lx/nx={hx} != ly/ny={hy}")
    return Grid(nx, ny, hx)


@dataclass
class ScalarField:
    grid: Grid
    values: np.ndarray
    bc: str = NEUMANN
    bc_value: float = 0.0

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (self.grid.nx, self.grid.ny):
            raise ValueError(
                f"scalar shape {self.values.shape} does not match grid "
                f"({self.grid.nx}, {self.grid.ny})"
            )
        if self.bc not in (NEUMANN, DIRICHLET, EXTRAPOLATE):
            raise ValueError(f"unknown scalar bc {self.bc!r}")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("scalar field contains non-finite samples")

    def copy(self) -> "ScalarField":
        return replace(self, values=self.values.copy())


@dataclass
class VectorField:
    """MAC velocity: ux on vertical faces, uy on horizontal faces."""

    grid: Grid
    ux: np.ndarray
    uy: np.ndarray
    bc: str = NO_SLIP

    def __post_init__(self):
        self.ux = np.asarray(self.ux, dtype=float)
        self.uy = np.asarray(self.uy, dtype=float)
        nx, ny = self.grid.nx, self.grid.ny
        if self.ux.shape != (nx + 1, ny) or self.uy.shape != (nx, ny + 1):
            raise ValueError("MAC component shapes do not match grid")
        if self.bc not in (NO_SLIP, PRESCRIBED):
            raise ValueError(f"unknown velocity bc {self.bc!r}")
        if not (np.all(np.isfinite(self.ux)) and np.all(np.isfinite(self.uy))):
            raise ValueError("velocity field contains non-finite samples")
        if self.bc == NO_SLIP:
            edges = (self.ux[0, :], self.ux[-1, :], self.uy[:, 0], self.uy[:, -1])
            if any(np.any(e != 0.0) for e in edges):
                raise ValueError("no-slip velocity must have zero boundary faces")

    def copy(self) -> "VectorField":
        return replace(self, ux=self.ux.copy(), uy=self.uy.copy())

    def at_centers(self) -> np.ndarray:
        """Both components averaged to cell centers, shape (nx, ny, 2)."""
        cx = 0.5 * (self.ux[1:, :] + self.ux[:-1, :])
        cy = 0.5 * (self.uy[:, 1:] + self.uy[:, :-1])
        return np.stack([cx, cy], axis=-1)

    def max_speed(self) -> float:
        return max(np.max(np.abs(self.ux)), np.max(np.abs(self.uy)))


@dataclass
class DirectorField:
    """Cell-centered m-component orientation field, homogeneous Neumann bc."""

    grid: Grid
    values: np.ndarray  # (nx, ny, m)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim != 3 or self.values.shape[:2] != (self.grid.nx, self.grid.ny):
            raise ValueError("director shape must be (nx, ny, m)")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("director field contains non-finite samples")

    @property
    def m(self) -> int:
        return self.values.shape[2]

    def copy(self) -> "DirectorField":
        return replace(self, values=self.values.copy())

    def magnitude(self) -> np.ndarray:
        return np.sqrt(np.sum(self.values**2, axis=-1))

    def unit_deviation(self) -> float:
        """max over cells of | |d| - 1 |."""
        return float(np.max(np.abs(self.magnitude() - 1.0)))


@dataclass
class TensorField:
    grid: Grid
    values: np.ndarray  # (nx, ny, m, m)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim != 4 or self.values.shape[:2] != (self.grid.nx, self.grid.ny):
            raise ValueError("tensor shape must be (nx, ny, m, m)")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("tensor field contains non-finite samples")


# ---------------------------------------------------------------------------
# ghost padding
# ---------------------------------------------------------------------------

def pad_with_ghosts(values: np.ndarray, bc: str, bc_value: float = 0.0) -> np.ndarray:
    """Return an (nx+2, ny+2) array with one ghost layer filled per bc."""
    nx, ny = values.shape
    p = np.empty((nx + 2, ny + 2), dtype=float)
    p[1:-1, 1:-1] = values
    if bc == NEUMANN:
        p[1:-1, 0] = values[:, 0]
        p[1:-1, -1] = values[:, -1]
        p[0, :] = p[1, :]
        p[-1, :] = p[-2, :]
    elif bc == DIRICHLET:
        p[1:-1, 0] = 2.0 * bc_value - values[:, 0]
        p[1:-1, -1] = 2.0 * bc_value - values[:, -1]
        p[0, :] = 2.0 * bc_value - p[1, :]
        p[-1, :] = 2.0 * bc_value - p[-2, :]
    elif bc == EXTRAPOLATE:
        p[1:-1, 0] = 2.0 * values[:, 0] - values[:, 1]
        p[1:-1, -1] = 2.0 * values[:, -1] - values[:, -2]
        p[0, :] = 2.0 * p[1, :] - p[2, :]
        p[-1, :] = 2.0 * p[-2, :] - p[-3, :]
    else:
        raise ValueError(f"unknown bc {bc!r}")
    return p


def _padded(f: ScalarField) -> np.ndarray:
    return pad_with_ghosts(f.values, f.bc, f.bc_value)


# ---------------------------------------------------------------------------
# first-order operators
# ---------------------------------------------------------------------------

def gradient(f: ScalarField) -> np.ndarray:
    """Cell-centered central-difference gradient, shape (nx, ny, 2)."""
    p = _padded(f)
    inv2h = 0.5 / f.grid.h
    gx = (p[2:, 1:-1] - p[:-2, 1:-1]) * inv2h
    gy = (p[1:-1, 2:] - p[1:-1, :-2]) * inv2h
    return np.stack([gx, gy], axis=-1)


def gradient_values(values: np.ndarray, h: float, bc: str = EXTRAPOLATE,
                    bc_value: float = 0.0) -> np.ndarray:
    """Gradient of a raw (nx, ny) array with the given ghost rule."""
    p = pad_with_ghosts(values, bc, bc_value)
    inv2h = 0.5 / h
    gx = (p[2:, 1:-1] - p[:-2, 1:-1]) * inv2h
    gy = (p[1:-1, 2:] - p[1:-1, :-2]) * inv2h
    return np.stack([gx, gy], axis=-1)


def divergence(u: VectorField) -> ScalarField:
    """MAC divergence per cell; exact telescoping for stream-function data."""
    h = u.grid.h
    div = (u.ux[1:, :] - u.ux[:-1, :] + u.uy[:, 1:] - u.uy[:, :-1]) / h
    return ScalarField(u.grid, div, bc=EXTRAPOLATE)


def laplacian(f):
    """5-point Laplacian of a ScalarField or DirectorField (same kind back)."""
    if isinstance(f, DirectorField):
        out = np.empty_like(f.values)
        for k in range(f.m):
            out[:, :, k] = laplacian_values(f.values[:, :, k], f.grid.h, NEUMANN)
        return DirectorField(f.grid, out)
    if isinstance(f, ScalarField):
        vals = laplacian_values(f.values, f.grid.h, f.bc, f.bc_value)
        return ScalarField(f.grid, vals, bc=f.bc, bc_value=f.bc_value)
    raise TypeError(f"laplacian does not accept {type(f).__name__}")


def laplacian_values(values: np.ndarray, h: float, bc: str,
                     bc_value: float = 0.0) -> np.ndarray:
    p = pad_with_ghosts(values, bc, bc_value)
    return (
        p[2:, 1:-1] + p[:-2, 1:-1] + p[1:-1, 2:] + p[1:-1, :-2] - 4.0 * values
    ) / (h * h)


# ---------------------------------------------------------------------------
# velocity derivatives
# ---------------------------------------------------------------------------

def _tangential_ghost_rows(comp: np.ndarray, bc: str, axis: int) -> np.ndarray:
    """Pad a MAC component with one ghost row on each side along `axis`.

    For no-slip walls the tangential component reflects through zero at the
    wall line; prescribed fields extrapolate linearly.
    """
    if axis == 1:
        comp = comp.T
    n0, n1 = comp.shape
    p = np.empty((n0, n1 + 2), dtype=float)
    p[:, 1:-1] = comp
    if bc == NO_SLIP:
        p[:, 0] = -comp[:, 0]
        p[:, -1] = -comp[:, -1]
    else:
        p[:, 0] = 2.0 * comp[:, 0] - comp[:, 1]
        p[:, -1] = 2.0 * comp[:, -1] - comp[:, -2]
    if axis == 1:
        p = p.T
    return p


def velocity_gradient_corners(u: VectorField):
    """(d ux / dy, d uy / dx) at cell corners, shape (nx+1, ny+1) each."""
    h = u.grid.h
    px = _tangential_ghost_rows(u.ux, u.bc, axis=0)  # (nx+1, ny+2)
    duxdy = (px[:, 1:] - px[:, :-1]) / h
    py = _tangential_ghost_rows(u.uy, u.bc, axis=1)  # (nx+2, ny+1)
    duydx = (py[1:, :] - py[:-1, :]) / h
    return duxdy, duydx


def _corners_to_centers(c: np.ndarray) -> np.ndarray:
    return 0.25 * (c[1:, 1:] + c[:-1, 1:] + c[1:, :-1] + c[:-1, :-1])


def velocity_gradient_centers(u: VectorField) -> np.ndarray:
    """Full velocity gradient at cell centers, G[i,j,a,b] = d u_a / d x_b."""
    h = u.grid.h
    duxdx = (u.ux[1:, :] - u.ux[:-1, :]) / h
    duydy = (u.uy[:, 1:] - u.uy[:, :-1]) / h
    duxdy_c, duydx_c = velocity_gradient_corners(u)
    duxdy = _corners_to_centers(duxdy_c)
    duydx = _corners_to_centers(duydx_c)
    g = np.empty((u.grid.nx, u.grid.ny, 2, 2), dtype=float)
    g[:, :, 0, 0] = duxdx
    g[:, :, 0, 1] = duxdy
    g[:, :, 1, 0] = duydx
    g[:, :, 1, 1] = duydy
    return g


def deformation_tensor(u: VectorField) -> TensorField:
    """Symmetric part of the velocity gradient at cell centers."""
    g = velocity_gradient_centers(u)
    d = 0.5 * (g + np.swapaxes(g, 2, 3))
    return TensorField(u.grid, d)


# ---------------------------------------------------------------------------
# director derivatives and elastic stress
# ---------------------------------------------------------------------------

def director_gradient(d: DirectorField) -> np.ndarray:
    """Per-component centered gradient, shape (nx, ny, 2, m)."""
    out = np.empty((d.grid.nx, d.grid.ny, 2, d.m), dtype=float)
    for k in range(d.m):
        out[:, :, :, k] = gradient_values(d.values[:, :, k], d.grid.h, NEUMANN)
    return out


def director_grad_sq(d: DirectorField) -> np.ndarray:
    """|grad d|^2 per cell: sum over components and directions."""
    g = director_gradient(d)
    return np.sum(g * g, axis=(2, 3))


def elastic_stress(d: DirectorField) -> TensorField:
    """Orientation stress S_ab = sum_k (d_a d_k)(d_b d_k) at cell centers."""
    g = director_gradient(d)  # (nx, ny, 2, m)
    s = np.einsum("ijak,ijbk->ijab", g, g)
    return TensorField(d.grid, s)


def stress_divergence(s: TensorField):
    """Divergence of a cell-centered tensor as face samples (fx, fy).

    fx has shape (nx+1, ny) with zero boundary faces, fy likewise; interior
    faces get the conservative difference of the normal component plus the
    averaged centered derivative of the shear component.
    """
    grid = s.grid
    h = grid.h
    nx, ny = grid.nx, grid.ny
    s11 = s.values[:, :, 0, 0]
    s12 = s.values[:, :, 0, 1]
    s21 = s.values[:, :, 1, 0]
    s22 = s.values[:, :, 1, 1]

    fx = np.zeros((nx + 1, ny))
    fy = np.zeros((nx, ny + 1))

    # x faces: d/dx S11 + d/dy S12
    fx[1:-1, :] = (s11[1:, :] - s11[:-1, :]) / h
    t = gradient_values(s12, h, EXTRAPOLATE)[:, :, 1]  # d/dy S12 at centers
    fx[1:-1, :] += 0.5 * (t[1:, :] + t[:-1, :])

    # y faces: d/dx S21 + d/dy S22
    fy[:, 1:-1] = (s22[:, 1:] - s22[:, :-1]) / h
    t = gradient_values(s21, h, EXTRAPOLATE)[:, :, 0]  # d/dx S21 at centers
    fy[:, 1:-1] += 0.5 * (t[:, 1:] + t[:, :-1])
    return fx, fy


def elastic_force(d: DirectorField):
    """Face-sampled force -div(grad d ⊙ grad d) driving the momentum balance."""
    fx, fy = stress_divergence(elastic_stress(d))
    return -fx, -fy


# ---------------------------------------------------------------------------
# stream functions
# ---------------------------------------------------------------------------

def stream_function_velocity(grid: Grid, psi: np.ndarray, bc: str = NO_SLIP) -> VectorField:
    """Velocity from a corner stream function, exactly divergence free.

    psi has shape (nx+1, ny+1); ux = d psi / dy, uy = -d psi / dx on the MAC
    lattice.  A psi vanishing on the boundary ring yields a no-slip field.
    """
    psi = np.asarray(psi, dtype=float)
    if psi.shape != (grid.nx + 1, grid.ny + 1):
        raise ValueError("stream function must live on cell corners")
    h = grid.h
    ux = (psi[:, 1:] - psi[:, :-1]) / h
    uy = -(psi[1:, :] - psi[:-1, :]) / h
    if bc == NO_SLIP:
        # a no-slip stream function is constant along the boundary ring; snap
        # the boundary faces so rounding dust cannot violate the invariant
        ux[0, :] = 0.0
        ux[-1, :] = 0.0
        uy[:, 0] = 0.0
        uy[:, -1] = 0.0
    return VectorField(grid, ux, uy, bc=bc)
