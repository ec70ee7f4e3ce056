import numpy as np
import pytest

from nematicflow.fields import ScalarField, VectorField, make_grid
from nematicflow.norms import lp_norm
from nematicflow.transport import CflError, advect_density, lm_conservation_report

from conftest import random_stream_velocity, scalar_from


def uniform_velocity(grid, vx, vy):
    ux = np.full((grid.nx + 1, grid.ny), vx, dtype=float)
    uy = np.full((grid.nx, grid.ny + 1), vy, dtype=float)
    return VectorField(grid, ux, uy, bc="prescribed")


def gaussian(grid, cx, cy, width):
    x, y = grid.cell_centers()
    return np.exp(-((x - cx) ** 2 + (y - cy) ** 2) / width**2)


class TestAdvectDensity:
    def test_constant_density_is_exact(self, grid64):
        rho = scalar_from(grid64, lambda x, y: 1.0 + 0.0 * x)
        rng = np.random.default_rng(2)
        v = random_stream_velocity(grid64, rng)
        out = advect_density(rho, v, dt=1e-2)
        assert np.max(np.abs(out.values - 1.0)) <= 1e-14

    def test_zero_velocity_is_identity(self, grid64):
        rho = ScalarField(grid64, gaussian(grid64, 0.4, 0.6, 0.1))
        v = uniform_velocity(grid64, 0.0, 0.0)
        out = advect_density(rho, v, dt=1e-2)
        assert np.array_equal(out.values, rho.values)

    def test_uniform_translation_oracle(self):
        errs = []
        for n in (64, 128):
            grid = make_grid(n, n)
            dt = 0.01
            rho = ScalarField(grid, gaussian(grid, 0.5, 0.5, 0.12))
            v = uniform_velocity(grid, 1.0, 0.0)
            out = advect_density(rho, v, dt)
            shifted = gaussian(grid, 0.5 + dt, 0.5, 0.12)
            errs.append(lp_norm(out.values - shifted, 2, grid))
        assert errs[0] <= 1e-3
        assert errs[1] <= errs[0] / 3.0  # second-order interpolation error

    def test_cfl_rejection(self, grid32):
        rho = scalar_from(grid32, lambda x, y: 1.0 + 0.0 * x)
        v = uniform_velocity(grid32, 10.0, 0.0)
        with pytest.raises(CflError):
            advect_density(rho, v, dt=1.0)

    def test_monotonicity_bounds(self, grid64):
        rng = np.random.default_rng(7)
        rho = ScalarField(grid64, gaussian(grid64, 0.5, 0.5, 0.15))
        v = random_stream_velocity(grid64, rng, amplitude=0.5)
        cur = rho
        for _ in range(50):
            cur = advect_density(cur, v, dt=2e-3)
            assert cur.values.min() >= rho.values.min() - 1e-12
            assert cur.values.max() <= rho.values.max() + 1e-12

    def test_vacuum_stays_nonnegative(self, grid64):
        x, y = grid64.cell_centers()
        vals = np.where((x - 0.5) ** 2 + (y - 0.5) ** 2 < 0.04, 0.0, 1.0)
        rho = ScalarField(grid64, vals)
        rng = np.random.default_rng(4)
        v = random_stream_velocity(grid64, rng, amplitude=0.5)
        cur = rho
        for _ in range(20):
            cur = advect_density(cur, v, dt=2e-3)
        assert cur.values.min() >= 0.0

    def test_nonsolenoidal_velocity_warns(self, grid32):
        rho = scalar_from(grid32, lambda x, y: 1.0 + 0.0 * x)
        x, _ = grid32.xface_coords()
        v = VectorField(grid32, x.copy(), np.zeros((32, 33)), bc="prescribed")
        with pytest.warns(UserWarning):
            advect_density(rho, v, dt=1e-3)


class TestConservationReport:
    def test_constant_density_no_drift(self, grid32):
        rho = scalar_from(grid32, lambda x, y: 2.0 + 0.0 * x)
        drifts = lm_conservation_report([rho, rho, rho], m=2.0)
        assert np.max(drifts) == 0.0

    def test_bump_run_drift_budget(self):
        # sup attained on the flat background: interpolation keeps it exact,
        # while the dip smooths and shows up only in the L1/L2 drift
        grid = make_grid(128, 128)
        rng = np.random.default_rng(11)
        rho = ScalarField(grid, 1.0 - 0.5 * gaussian(grid, 0.45, 0.55, 0.15))
        v = random_stream_velocity(grid, rng, amplitude=1.0)
        series = [rho]
        cur = rho
        for _ in range(100):
            cur = advect_density(cur, v, dt=1e-3)
            series.append(cur)
        assert np.max(lm_conservation_report(series, np.inf)) <= 1e-12
        assert np.max(lm_conservation_report(series, 1.0)) <= 0.02

    def test_needs_two_snapshots(self, grid32):
        rho = scalar_from(grid32, lambda x, y: x)
        with pytest.raises(ValueError):
            lm_conservation_report([rho], m=1.0)
