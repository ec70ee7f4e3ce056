"""Norms, functional-inequality checks and constant estimators.

Spatial integrals use the midpoint rule on cell centers (weight h^2 per
cell).  The weak-Lp norm is evaluated exactly on the discrete measure: with
sample magnitudes sorted as a_1 >= a_2 >= ..., the supremum over thresholds
is attained at the sample values, giving max_k a_k (k h^2)^{1/p}.

Inequality checks never assert universal constants; they report the fitted
constant lhs/rhs so sweeps can study its stability.  The randomized constant
estimators (elliptic and Gagliardo-Nirenberg) maximize a Rayleigh-type ratio
over band-limited Neumann fields by random search plus perturbation ascent;
they are deterministic given a seed, with per-trial streams split as
seed * 2**32 + trial.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .fields import (
    DIRICHLET,
    EXTRAPOLATE,
    NEUMANN,
    NO_SLIP,
    DirectorField,
    Grid,
    ScalarField,
    VectorField,
    deformation_tensor,
    divergence,
    laplacian_values,
    pad_with_ghosts,
    velocity_gradient_centers,
)

INF = math.inf


# ---------------------------------------------------------------------------
# sample extraction
# ---------------------------------------------------------------------------

def _magnitudes_and_grid(f, grid: Grid | None):
    """Per-cell sample magnitudes (2d array) and the owning grid."""
    if isinstance(f, ScalarField):
        return np.abs(f.values), f.grid
    if isinstance(f, DirectorField):
        return f.magnitude(), f.grid
    if isinstance(f, VectorField):
        c = f.at_centers()
        return np.sqrt(np.sum(c * c, axis=-1)), f.grid
    arr = np.asarray(f, dtype=float)
    if grid is None:
        raise ValueError("raw arrays need an explicit grid")
    if arr.ndim == 2:
        return np.abs(arr), grid
    if arr.ndim >= 3:
        flat = arr.reshape(arr.shape[0], arr.shape[1], -1)
        return np.sqrt(np.sum(flat * flat, axis=-1)), grid
    raise ValueError(f"cannot take norms of array with shape {arr.shape}")


def lp_norm(f, p: float, grid: Grid | None = None) -> float:
    """Lebesgue norm (sum |f|^p h^2)^(1/p); p = inf gives max |f|."""
    if p < 1:
        raise ValueError(f"lp_norm requires p >= 1, got {p}")
    mags, g = _magnitudes_and_grid(f, grid)
    if math.isinf(p):
        return float(np.max(mags))
    return float((np.sum(mags**p) * g.cell_area) ** (1.0 / p))


def weak_lp_norm(f, p: float, grid: Grid | None = None) -> float:
    """Weak-Lp norm sup_t t |{|f| > t}|^(1/p) on the discrete measure."""
    if p <= 1:
        raise ValueError(f"weak_lp_norm requires p > 1, got {p}")
    mags, g = _magnitudes_and_grid(f, grid)
    if math.isinf(p):
        return float(np.max(mags))
    a = np.sort(mags, axis=None)[::-1]
    measures = (np.arange(1, a.size + 1) * g.cell_area) ** (1.0 / p)
    return float(np.max(a * measures))


# ---------------------------------------------------------------------------
# difference quotients and Sobolev (semi)norms
# ---------------------------------------------------------------------------

def _component_planes(f, grid: Grid | None):
    """List of (nx, ny) planes plus (grid, bc, bc_value) for differencing."""
    if isinstance(f, ScalarField):
        return [f.values], f.grid, f.bc, f.bc_value
    if isinstance(f, DirectorField):
        return [f.values[:, :, k] for k in range(f.m)], f.grid, NEUMANN, 0.0
    if isinstance(f, VectorField):
        c = f.at_centers()
        bc = DIRICHLET if f.bc == NO_SLIP else EXTRAPOLATE
        return [c[:, :, 0], c[:, :, 1]], f.grid, bc, 0.0
    arr = np.asarray(f, dtype=float)
    if grid is None:
        raise ValueError("raw arrays need an explicit grid")
    if arr.ndim == 2:
        return [arr], grid, EXTRAPOLATE, 0.0
    flat = arr.reshape(arr.shape[0], arr.shape[1], -1)
    return [flat[:, :, k] for k in range(flat.shape[2])], grid, EXTRAPOLATE, 0.0


def _diff_pair(plane: np.ndarray, h: float, bc: str, bc_value: float):
    p = pad_with_ghosts(plane, bc, bc_value)
    inv2h = 0.5 / h
    return (
        (p[2:, 1:-1] - p[:-2, 1:-1]) * inv2h,
        (p[1:-1, 2:] - p[1:-1, :-2]) * inv2h,
    )


def derivative_block(f, k: int, grid: Grid | None = None) -> np.ndarray:
    """All order-k centered difference quotients, shape (nx, ny, ncomp*2^k).

    The first differentiation honors the field's own boundary rule; further
    levels extrapolate, so accuracy drops one order per level near walls.
    """
    planes, g, bc, bc_value = _component_planes(f, grid)
    level_bc, level_val = bc, bc_value
    for _ in range(k):
        new_planes = []
        for plane in planes:
            dx, dy = _diff_pair(plane, g.h, level_bc, level_val)
            new_planes.extend([dx, dy])
        planes = new_planes
        level_bc, level_val = EXTRAPOLATE, 0.0
    return np.stack(planes, axis=-1)


def sobolev_seminorm(f, k: int, p: float, grid: Grid | None = None) -> float:
    """|f|_{W^{k,p}}: Lp norm of the full order-k derivative block."""
    if k < 0 or k > 3:
        raise ValueError(f"sobolev_seminorm supports k in 0..3, got {k}")
    if k == 0:
        return lp_norm(f, p, grid)
    block = derivative_block(f, k, grid)
    g = grid
    for candidate in (ScalarField, DirectorField, VectorField):
        if isinstance(f, candidate):
            g = f.grid
    return lp_norm(block, p, g)


def sobolev_norm(f, k: int, p: float, grid: Grid | None = None) -> float:
    """Full W^{k,p} norm combining seminorms of orders 0..k."""
    semis = [sobolev_seminorm(f, j, p, grid) for j in range(k + 1)]
    if math.isinf(p):
        return max(semis)
    return float(sum(s**p for s in semis) ** (1.0 / p))


def h1_norm(f, grid: Grid | None = None) -> float:
    return sobolev_norm(f, 1, 2, grid)


# ---------------------------------------------------------------------------
# time-integrated norms
# ---------------------------------------------------------------------------

@dataclass
class NormSeries:
    """Samples of one spatial norm along a run."""

    times: np.ndarray
    values: np.ndarray
    label: str = ""

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.times.ndim != 1 or self.times.shape != self.values.shape:
            raise ValueError("times and values must be matching 1d arrays")
        if self.times.size and np.any(np.diff(self.times) <= 0):
            raise ValueError("times must be strictly increasing")
        if np.any(~np.isfinite(self.values)) or np.any(self.values < 0):
            raise ValueError("norm samples must be finite and nonnegative")


def bochner_norm(series: NormSeries, s: float) -> float:
    """Time-integrated norm (trapezoid of values^s)^(1/s); s = inf gives max."""
    if series.times.size < 2:
        raise ValueError("bochner_norm needs at least two samples")
    if s < 1:
        raise ValueError(f"bochner_norm requires s >= 1, got {s}")
    if math.isinf(s):
        return float(np.max(series.values))
    integral = float(np.trapezoid(series.values**s, series.times))
    return integral ** (1.0 / s)


# ---------------------------------------------------------------------------
# Serrin exponents
# ---------------------------------------------------------------------------

class SerrinCheck(NamedTuple):
    ok: bool
    slack: float


def serrin_check(s: float, r: float, n: int) -> SerrinCheck:
    """Validate 2/s + n/r <= 1 with r > n; slack is 1 - (2/s + n/r)."""
    if s <= 0 or r <= 0:
        raise ValueError("exponents must be positive")
    inv_s = 0.0 if math.isinf(s) else 2.0 / s
    inv_r = 0.0 if math.isinf(r) else n / r
    slack = 1.0 - (inv_s + inv_r)
    ok = r > n and slack >= 0.0
    return SerrinCheck(ok, slack)


@dataclass(frozen=True)
class SerrinExponents:
    s: float
    r: float
    n: int = 2

    def __post_init__(self):
        if self.n not in (2, 3):
            raise ValueError("dimension must be 2 or 3")
        chk = serrin_check(self.s, self.r, self.n)
        if not chk.ok:
            raise ValueError(
                f"(s, r) = ({self.s}, {self.r}) fails 2/s + {self.n}/r <= 1 "
                f"with r > {self.n} (slack {chk.slack:.3g})"
            )


# ---------------------------------------------------------------------------
# inequality reports
# ---------------------------------------------------------------------------

@dataclass
class InequalityReport:
    """Uniform container for fitted-constant inequality checks."""

    name: str
    lhs: float
    rhs_without_constant: float
    fitted_constant: float
    context: dict = field(default_factory=dict)

    def __post_init__(self):
        for v in (self.lhs, self.rhs_without_constant, self.fitted_constant):
            if not math.isfinite(v):
                raise ValueError("inequality report entries must be finite")
        if self.fitted_constant < 0:
            raise ValueError("fitted constant must be nonnegative")

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "lhs": self.lhs,
            "rhs_without_constant": self.rhs_without_constant,
            "fitted_constant": self.fitted_constant,
            "context": self.context,
        }


def _pointwise_product(f, g, grid: Grid | None):
    fm, gr = _magnitudes_and_grid(f, grid)
    gm, _ = _magnitudes_and_grid(g, grid if grid is not None else gr)
    if fm.shape != gm.shape:
        raise ValueError("product factors must share a grid")
    return fm * gm, gr


def holder_lorentz_check(f, g, p1: float, p2: float,
                         grid: Grid | None = None) -> InequalityReport:
    """Product bound in weak-Lp: |fg|_{p,w} vs |f|_{p1,w} |g|_{p2,w}."""
    if p1 <= 1 or p2 <= 1:
        raise ValueError("factor exponents must exceed 1")
    inv = (0.0 if math.isinf(p1) else 1.0 / p1) + (0.0 if math.isinf(p2) else 1.0 / p2)
    if inv >= 1.0:
        raise ValueError(f"1/p1 + 1/p2 = {inv} must be < 1 for a product exponent > 1")
    p = INF if inv == 0.0 else 1.0 / inv
    prod, gr = _pointwise_product(f, g, grid)
    lhs = weak_lp_norm(prod, p, gr)
    rhs = weak_lp_norm(f, p1, grid) * weak_lp_norm(g, p2, grid)
    fitted = lhs / rhs if rhs > 0 else 0.0
    return InequalityReport(
        "holder_lorentz", lhs, rhs, fitted, {"p1": p1, "p2": p2, "p": p}
    )


def product_split_check(f, g, r: float, eps: float, n: int = 2,
                        grid: Grid | None = None) -> InequalityReport:
    """Split |fg|_{L2}^2 into eps |g|_{H1}^2 plus a weak-Lr weighted L2 term.

    Returns the smallest constant that closes the bound for this pair; a
    family fit takes the max over pairs (see product_split_fit).
    """
    if r <= n:
        raise ValueError(f"requires r > n = {n}, got r = {r}")
    if eps <= 0:
        raise ValueError("eps must be positive")
    prod, gr = _pointwise_product(f, g, grid)
    lhs = lp_norm(prod, 2, gr) ** 2
    g_h1 = h1_norm(g, grid) ** 2
    g_l2 = lp_norm(g, 2, grid) ** 2
    expo = 2.0 if math.isinf(r) else 2.0 * r / (r - n)
    weight = weak_lp_norm(f, r, grid) ** expo
    rhs = weight * g_l2
    deficit = lhs - eps * g_h1
    fitted = max(0.0, deficit / rhs) if rhs > 0 else 0.0
    return InequalityReport(
        "product_split", lhs, rhs, fitted,
        {"r": r, "eps": eps, "n": n, "g_h1_sq": g_h1},
    )


def product_split_fit(pairs: Sequence[tuple], r: float, eps: float, n: int = 2,
                      grid: Grid | None = None) -> float:
    """Minimal constant closing the split bound over a family of (f, g)."""
    best = 0.0
    for f, g in pairs:
        best = max(best, product_split_check(f, g, r, eps, n, grid).fitted_constant)
    return best


def log_sobolev_check(fields: Sequence, times: Sequence[float], q: float,
                      grid: Grid | None = None) -> InequalityReport:
    """Time-L2 sup-norm bound with logarithmic higher-norm correction.

    lhs = int |f|_Linf^2 dt; bracket = 1 + (int |f|_H1^2 dt) ln(e + B) with
    B = (int |f|_{W^{1,q}}^2 dt)^{1/2}; fitted constant is lhs / bracket.
    """
    if q <= 2:
        raise ValueError(f"requires q > 2, got {q}")
    times = np.asarray(times, dtype=float)
    if times.size < 2:
        raise ValueError("need at least two time slices")
    sup2 = np.array([lp_norm(f, INF, grid) ** 2 for f in fields])
    h12 = np.array([h1_norm(f, grid) ** 2 for f in fields])
    w1q2 = np.array([sobolev_norm(f, 1, q, grid) ** 2 for f in fields])
    lhs = float(np.trapezoid(sup2, times))
    a = float(np.trapezoid(h12, times))
    b = math.sqrt(float(np.trapezoid(w1q2, times)))
    bracket = 1.0 + a * math.log(math.e + b)
    fitted = lhs / bracket
    return InequalityReport(
        "log_sobolev", lhs, bracket, fitted, {"q": q, "h1_time_sq": a, "w1q_time": b}
    )


# ---------------------------------------------------------------------------
# randomized constant estimators
# ---------------------------------------------------------------------------

def _band_limited_neumann(grid: Grid, coeffs: np.ndarray) -> np.ndarray:
    """Field sum a_kl cos(k pi x / lx) cos(l pi y / ly) at cell centers."""
    x, y = grid.cell_centers()
    kmax = coeffs.shape[0]
    vals = np.zeros_like(x)
    for k in range(kmax):
        cx = np.cos(k * np.pi * x / grid.lx)
        for l in range(kmax):
            if k == 0 and l == 0:
                continue
            vals += coeffs[k, l] * cx * np.cos(l * np.pi * y / grid.ly)
    return vals


def elliptic_ratio(f: ScalarField) -> float:
    """|grad^2 f|^2 / (|lap f|^2 + |f|_{H1}^2) with Neumann operators."""
    num = sobolev_seminorm(f, 2, 2) ** 2
    lap = laplacian_values(f.values, f.grid.h, NEUMANN)
    den = lp_norm(lap, 2, f.grid) ** 2 + h1_norm(f) ** 2
    return num / den if den > 0 else 0.0


def gn_ratio(f: ScalarField) -> float:
    """|grad f|_{L4}^4 / (|grad^2 f|^2 |f|_inf^2 + |f|_inf^4)."""
    num = sobolev_seminorm(f, 1, 4) ** 4
    sup = lp_norm(f, INF)
    den = sobolev_seminorm(f, 2, 2) ** 2 * sup**2 + sup**4
    return num / den if den > 0 else 0.0


def _maximize_ratio(grid: Grid, ratio_fn, trials: int, seed: int,
                    modes: int, ascent_steps: int) -> float:
    if trials < 1:
        raise ValueError("need at least one trial")
    best = 0.0
    for trial in range(trials):
        rng = np.random.default_rng(seed * 2**32 + trial)
        decay = 1.0 / (1.0 + np.add.outer(np.arange(modes + 1) ** 2,
                                          np.arange(modes + 1) ** 2))
        coeffs = rng.normal(size=(modes + 1, modes + 1)) * decay
        f = ScalarField(grid, _band_limited_neumann(grid, coeffs), bc=NEUMANN)
        value = ratio_fn(f)
        step = 0.3
        for _ in range(ascent_steps):
            cand = coeffs + step * rng.normal(size=coeffs.shape) * decay
            fc = ScalarField(grid, _band_limited_neumann(grid, cand), bc=NEUMANN)
            v = ratio_fn(fc)
            if v > value:
                coeffs, value = cand, v
            else:
                step *= 0.7
        best = max(best, value)
    return best


def estimate_elliptic_c1(grid: Grid, trials: int = 24, seed: int = 0,
                         modes: int = 4, ascent_steps: int = 10) -> float:
    """Lower bound on the discrete second-derivative elliptic constant."""
    return _maximize_ratio(grid, elliptic_ratio, trials, seed, modes, ascent_steps)


def estimate_gn_c2(grid: Grid, trials: int = 24, seed: int = 0,
                   modes: int = 4, ascent_steps: int = 10) -> float:
    """Lower bound on the discrete Gagliardo-Nirenberg constant."""
    return _maximize_ratio(grid, gn_ratio, trials, seed, modes, ascent_steps)


# ---------------------------------------------------------------------------
# Korn-type identity
# ---------------------------------------------------------------------------

def korn_identity_check(u: VectorField, div_tol: float = 1e-10):
    """For a no-slip solenoidal field return (int |D(u)|^2, 0.5 int |grad u|^2)."""
    if u.bc != NO_SLIP:
        raise ValueError("korn identity requires a no-slip field")
    div_l2 = lp_norm(divergence(u), 2)
    if div_l2 > div_tol:
        raise ValueError(
            f"korn identity needs a discretely divergence-free field "
            f"(|div u|_L2 = {div_l2:.3e} > {div_tol:.0e})"
        )
    d = deformation_tensor(u).values
    d_sq = np.sum(d * d, axis=(2, 3))
    lhs = float(np.sum(d_sq) * u.grid.cell_area)
    g = velocity_gradient_centers(u)
    g_sq = np.sum(g * g, axis=(2, 3))
    rhs = 0.5 * float(np.sum(g_sq) * u.grid.cell_area)
    return lhs, rhs
