"""Two-dimensional simulation: five-point Laplacian, forward-Euler stepping.

The mesh is uniform and cell-centered; zero-flux boundaries are realized
by mirror ghost cells (the ghost duplicates the adjacent edge value),
which makes the discrete sum of the Laplacian vanish identically, so the
mesh mean is conserved exactly under pure diffusion.  The time step is
validated against the explicit-diffusion stability bound

    max(d1, d2, d3) * dt * (1/dx^2 + 1/dy^2) <= 1/2

at construction; reaction terms are advanced with the same forward-Euler
update.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, SolverError
from .model import Params, StatePoint, reaction


@dataclass(frozen=True)
class Grid2D:
    nx: int
    ny: int
    dx: float
    dy: float
    dt: float
    stability_limit: float = 0.5

    def __post_init__(self):
        if self.nx < 4 or self.ny < 4:
            raise ConfigError("Grid2D requires nx, ny >= 4")
        if min(self.dx, self.dy, self.dt) <= 0:
            raise ConfigError("Grid2D spacings and dt must be positive")

    def cfl_number(self, dmax: float) -> float:
        return dmax * self.dt * (1.0 / self.dx ** 2 + 1.0 / self.dy ** 2)

    def validate_for(self, p: Params) -> None:
        dmax = max(p.d1, p.d2, p.d3)
        cfl = self.cfl_number(dmax)
        if cfl > self.stability_limit:
            bound = self.stability_limit / (dmax * (1.0 / self.dx ** 2 + 1.0 / self.dy ** 2))
            raise ConfigError(
                f"unstable time step: max(d)*dt*(1/dx^2 + 1/dy^2) = {cfl:.6g} "
                f"> {self.stability_limit}; require dt <= {bound:.6g}"
            )


def make_grid2d(p: Params, nx=200, ny=200, dx=0.1, dy=0.1, dt=0.1) -> Grid2D:
    g = Grid2D(nx, ny, dx, dy, dt)
    g.validate_for(p)
    return g


@dataclass
class FieldState2D:
    u: np.ndarray
    v: np.ndarray
    r: np.ndarray
    t: float

    def fields(self):
        return (self.u, self.v, self.r)

    def min_value(self) -> float:
        return min(self.u.min(), self.v.min(), self.r.min())


def laplacian_5pt(f: np.ndarray, grid: Grid2D) -> np.ndarray:
    """Five-point Laplacian with mirror (zero-flux) ghost cells."""
    g = np.pad(f, 1, mode="edge")
    return (g[:-2, 1:-1] - 2.0 * f + g[2:, 1:-1]) / grid.dx ** 2 + (
        g[1:-1, :-2] - 2.0 * f + g[1:-1, 2:]
    ) / grid.dy ** 2


def init_random(eq: StatePoint, grid: Grid2D, amplitude: float = 0.05, seed: int = 0) -> FieldState2D:
    """Equilibrium plus uniform noise in [-amplitude, amplitude], seeded."""
    rng = np.random.default_rng(seed)
    shape = (grid.nx, grid.ny)
    return FieldState2D(
        eq.u + amplitude * rng.uniform(-1.0, 1.0, shape),
        eq.v + amplitude * rng.uniform(-1.0, 1.0, shape),
        eq.r + amplitude * rng.uniform(-1.0, 1.0, shape),
        0.0,
    )


def init_cos2(eq: StatePoint, grid: Grid2D, eps, n: int) -> FieldState2D:
    """Equilibrium plus separable eps_i cos^2(n x) cos^2(n y) perturbation."""
    x = (np.arange(grid.nx) + 0.5) * grid.dx
    y = (np.arange(grid.ny) + 0.5) * grid.dy
    bump = np.outer(np.cos(n * x) ** 2, np.cos(n * y) ** 2)
    e1, e2, e3 = eps
    return FieldState2D(eq.u + e1 * bump, eq.v + e2 * bump, eq.r + e3 * bump, 0.0)


def step2d(state: FieldState2D, p: Params, grid: Grid2D) -> FieldState2D:
    """One forward-Euler update of all three fields."""
    u, v, r = state.fields()
    # silence overflow chatter on diverging runs; the finiteness check below
    # is the error path
    with np.errstate(over="ignore", invalid="ignore"):
        fu, fv, fr = reaction(u, v, r, p)
        un = u + grid.dt * (p.d1 * laplacian_5pt(u, grid) + fu)
        vn = v + grid.dt * (p.d2 * laplacian_5pt(v, grid) + fv)
        rn = r + grid.dt * (p.d3 * laplacian_5pt(r, grid) + fr)
    if not (np.isfinite(un).all() and np.isfinite(vn).all() and np.isfinite(rn).all()):
        raise SolverError(f"nonfinite field at t = {state.t + grid.dt:.6g}")
    return FieldState2D(un, vn, rn, state.t + grid.dt)


@dataclass
class Run2DResult:
    grid: Grid2D
    params: Params
    snapshots: list  # of FieldState2D, the initial state first
    negativity_flagged: bool = False
    min_value: float = 0.0
    steps: int = 0
    notes: str = ""

    def final(self) -> FieldState2D:
        return self.snapshots[-1]


def run2d(
    p: Params,
    init: FieldState2D,
    grid: Grid2D,
    t_end: float,
    snapshot_every: float,
) -> Run2DResult:
    """March to t_end, collecting snapshots every snapshot_every time units."""
    grid.validate_for(p)
    if t_end <= 0 or snapshot_every <= 0:
        raise ConfigError("t_end and snapshot_every must be positive")
    n_steps = int(round(t_end / grid.dt))
    every = max(1, int(round(snapshot_every / grid.dt)))
    state = init
    snaps = [init]
    min_val = state.min_value()
    for k in range(n_steps):
        state = step2d(state, p, grid)
        if (k + 1) % every == 0 or k == n_steps - 1:
            snaps.append(state)
            min_val = min(min_val, state.min_value())
    flagged = min_val < -1e-12
    return Run2DResult(
        grid,
        p,
        snaps,
        negativity_flagged=flagged,
        min_value=float(min_val),
        steps=n_steps,
        notes="negativity beyond tolerance" if flagged else "",
    )
