"""One-dimensional simulation on (0, pi): Chebyshev collocation in space,
zero-flux boundaries, adaptive explicit Runge-Kutta in time.

Space is discretized on Chebyshev-Gauss-Lobatto nodes mapped to [0, pi].
Zero-flux boundaries are imposed by boundary bordering: the two endpoint
values of each field are eliminated through the first-derivative rows,
leaving an effective second-derivative operator on the interior nodes.
A homogeneous field is an exact fixed point of the discrete diffusion
operator, and the Clenshaw-Curtis mean is conserved under pure diffusion.

Time stepping uses an embedded explicit Runge-Kutta 3(2) pair with a
PI step controller on a mixed absolute/relative error norm.  Several
independent runs that share a grid can be integrated as one batch (the
step size is then controlled by the worst error across the batch, which
keeps every run on an identical, deterministic time grid).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, SolverError
from .model import Params, StatePoint, reaction

NEG_TOL = -1e-12


def cheb_matrix(n: int):
    """Chebyshev differentiation matrix and nodes, n+1 points on [-1, 1]."""
    if n == 0:
        return np.zeros((1, 1)), np.array([1.0])
    x = np.cos(np.pi * np.arange(n + 1) / n)
    c = np.hstack([2.0, np.ones(n - 1), 2.0]) * (-1.0) ** np.arange(n + 1)
    X = np.tile(x, (n + 1, 1)).T
    dX = X - X.T
    D = np.outer(c, 1.0 / c) / (dX + np.eye(n + 1))
    D -= np.diag(D.sum(axis=1))
    return D, x


def clenshaw_curtis_weights(n: int) -> np.ndarray:
    """Quadrature weights for the n+1 Chebyshev-Gauss-Lobatto points on [-1, 1]."""
    if n == 0:
        return np.array([2.0])
    theta = np.pi * np.arange(n + 1) / n
    w = np.zeros(n + 1)
    ii = np.arange(1, n)
    v = np.ones(n - 1)
    if n % 2 == 0:
        w[0] = w[n] = 1.0 / (n ** 2 - 1)
        for k in range(1, n // 2):
            v -= 2.0 * np.cos(2.0 * k * theta[ii]) / (4.0 * k ** 2 - 1)
        v -= np.cos(n * theta[ii]) / (n ** 2 - 1)
    else:
        w[0] = w[n] = 1.0 / n ** 2
        for k in range(1, (n - 1) // 2 + 1):
            v -= 2.0 * np.cos(2.0 * k * theta[ii]) / (4.0 * k ** 2 - 1)
    w[ii] = 2.0 * v / n
    return w


@dataclass(frozen=True)
class Grid1D:
    """Collocation grid on [0, pi] with differentiation and quadrature.

    nodes are ascending; D1/D2 act on fields sampled at the nodes;
    weights integrate over [0, pi]; neumann_lift reconstructs endpoint
    values from interior values so that D1*f vanishes at both ends;
    lap_interior is the zero-flux second-derivative operator acting on
    interior values alone.
    """

    N: int
    nodes: np.ndarray
    D1: np.ndarray
    D2: np.ndarray
    weights: np.ndarray
    neumann_lift: np.ndarray
    lap_interior: np.ndarray

    def interior(self):
        return self.nodes[1:-1]


def build_grid(N: int) -> Grid1D:
    """Grid with N collocation points mapped to [0, pi]."""
    if N < 8:
        raise ConfigError(f"build_grid requires N >= 8, got {N}")
    D, x = cheb_matrix(N - 1)
    # map x in [-1, 1] (descending) to y in [0, pi] (ascending)
    y = (1.0 - x) * np.pi / 2.0
    D1 = -(2.0 / np.pi) * D
    D2 = D1 @ D1
    w = clenshaw_curtis_weights(N - 1)[::-1] * (np.pi / 2.0)
    b = np.array([0, N - 1])
    inner = np.arange(1, N - 1)
    B = D1[np.ix_(b, b)]
    C = D1[np.ix_(b, inner)]
    lift = -np.linalg.solve(B, C)  # f_boundary = lift @ f_interior
    lap = D2[np.ix_(inner, inner)] + D2[np.ix_(inner, b)] @ lift
    return Grid1D(N, y, D1, D2, w, lift, lap)


@dataclass
class FieldState1D:
    u: np.ndarray
    v: np.ndarray
    r: np.ndarray
    t: float

    def fields(self):
        return (self.u, self.v, self.r)

    def min_value(self) -> float:
        return min(self.u.min(), self.v.min(), self.r.min())


def init_perturbation(eq: StatePoint, eps, n: int, grid: Grid1D) -> FieldState1D:
    """Homogeneous state plus eps_i * cos^2(n x) on every node."""
    e1, e2, e3 = eps
    bump = np.cos(n * grid.nodes) ** 2
    return FieldState1D(eq.u + e1 * bump, eq.v + e2 * bump, eq.r + e3 * bump, 0.0)


def enforce_neumann(state: FieldState1D, grid: Grid1D) -> FieldState1D:
    """Overwrite endpoint values so the discrete normal derivative vanishes."""
    out = []
    for f in state.fields():
        g = f.copy()
        g[[0, -1]] = grid.neumann_lift @ f[1:-1]
        out.append(g)
    return FieldState1D(out[0], out[1], out[2], state.t)


@dataclass
class StepControl:
    """Adaptive step-size settings for the embedded RK pair."""

    atol: float = 1e-8
    rtol: float = 1e-6
    dt_init: float = 1e-4
    dt_min: float = 1e-12
    dt_max: float = np.inf
    safety: float = 0.9
    max_steps: int = 200_000_000


@dataclass
class Snapshot1D:
    t: float
    fields: np.ndarray  # shape (3, N) or (3, N, B) for batches


@dataclass
class Run1DResult:
    grid: Grid1D
    params: list
    snapshots: list
    negativity_flagged: bool = False
    min_value: float = 0.0
    steps: int = 0
    notes: str = ""

    def final(self) -> Snapshot1D:
        return self.snapshots[-1]


class _BatchRHS:
    """Method-of-lines right-hand side for a batch of runs on one grid.

    State layout: Y has shape (n_interior, 3*B); columns [0:B] hold u for
    each run, [B:2B] v, [2B:3B] r.  One operator application per stage.
    """

    def __init__(self, grid: Grid1D, params: list[Params]):
        self.grid = grid
        self.B = len(params)
        p0 = params[0]
        for q in params:
            if (q.w1, q.w2, q.w3, q.w4, q.a2, q.c, q.D3) != (
                p0.w1, p0.w2, p0.w3, p0.w4, p0.a2, p0.c, p0.D3,
            ):
                raise ConfigError("batched runs must share all kinetic parameters except m")
            if q.diffusion() != p0.diffusion():
                raise ConfigError("batched runs must share diffusivities")
        self.p = p0
        self.m_row = np.array([q.m for q in params])[None, :]
        d1, d2, d3 = p0.diffusion()
        self.d_col = np.repeat([d1, d2, d3], self.B)[None, :]

    def __call__(self, Y: np.ndarray) -> np.ndarray:
        B, p = self.B, self.p
        u = Y[:, 0 * B : 1 * B]
        v = Y[:, 1 * B : 2 * B]
        r = Y[:, 2 * B : 3 * B]
        uv = u + v
        vr = v + r
        q_uv = np.divide(u * v, uv, out=np.zeros_like(uv), where=uv != 0)
        q_vr = np.divide(v * r, vr, out=np.zeros_like(vr), where=vr != 0)
        F = np.empty_like(Y)
        F[:, 0 * B : 1 * B] = u - u * u - p.w1 * q_uv
        F[:, 1 * B : 2 * B] = -p.a2 * v + p.w2 * q_uv - p.w3 * q_vr
        F[:, 2 * B : 3 * B] = r * (r - self.m_row) * (p.c - p.w4 * r / (v + p.D3))
        return self.d_col * (self.grid.lap_interior @ Y) + F


def _rk23_adaptive(rhs, Y0, t_end, snapshot_times, ctrl: StepControl):
    """Bogacki-Shampine 3(2) with FSAL and a PI controller.

    Returns (snapshots dict t -> Y, steps taken).  Snapshot times are
    hit exactly by capping the step.
    """
    Y = Y0.copy()
    t = 0.0
    dt = ctrl.dt_init
    snaps = {}
    pending = sorted(float(s) for s in snapshot_times if 0.0 < s <= t_end)
    if not pending or pending[-1] < t_end:
        pending.append(t_end)
    k1 = rhs(Y)
    err_prev = 1.0
    steps = 0
    while t < t_end - 1e-12 * t_end:
        if steps >= ctrl.max_steps:
            raise SolverError(f"step budget exhausted at t = {t:.6g}")
        target = pending[0]
        dt = min(dt, ctrl.dt_max, target - t)
        k2 = rhs(Y + 0.5 * dt * k1)
        k3 = rhs(Y + 0.75 * dt * k2)
        Y_new = Y + dt * ((2.0 / 9.0) * k1 + (1.0 / 3.0) * k2 + (4.0 / 9.0) * k3)
        k4 = rhs(Y_new)
        err_vec = dt * (
            (-5.0 / 72.0) * k1 + (1.0 / 12.0) * k2 + (1.0 / 9.0) * k3 + (-1.0 / 8.0) * k4
        )
        scale = ctrl.atol + ctrl.rtol * np.maximum(np.abs(Y), np.abs(Y_new))
        err = float(np.sqrt(np.mean((err_vec / scale) ** 2)))
        if not np.isfinite(err):
            dt *= 0.25
            if dt < ctrl.dt_min:
                raise SolverError(f"nonfinite state at t = {t:.6g}; integration aborted")
            k1 = rhs(Y)  # k1 may be polluted by a previous rejected FSAL
            continue
        if err <= 1.0:
            t = target if abs((t + dt) - target) < 1e-12 * max(1.0, target) else t + dt
            Y = Y_new
            k1 = k4  # FSAL
            if abs(t - target) < 1e-12 * max(1.0, target):
                snaps[target] = Y.copy()
                pending.pop(0)
                if not pending:
                    break
            fac = ctrl.safety * max(err, 1e-16) ** (-0.7 / 3.0) * err_prev ** (0.4 / 3.0)
            err_prev = max(err, 1e-10)
        else:
            fac = ctrl.safety * err ** (-1.0 / 3.0)
        dt *= min(5.0, max(0.2, fac))
        if dt < ctrl.dt_min:
            raise SolverError(f"step size underflow at t = {t:.6g}")
        steps += 1
    return snaps, steps


def run1d_batch(
    params: list[Params],
    init: FieldState1D,
    grid: Grid1D,
    t_end: float,
    snapshot_every: float,
    ctrl: StepControl | None = None,
) -> Run1DResult:
    """Integrate several runs (same kinetics, different m) as one batch."""
    if t_end <= 0 or snapshot_every <= 0:
        raise ConfigError("t_end and snapshot_every must be positive")
    ctrl = ctrl or StepControl()
    B = len(params)
    rhs = _BatchRHS(grid, params)
    ni = grid.N - 2
    Y0 = np.empty((ni, 3 * B))
    for f_idx, f in enumerate(init.fields()):
        Y0[:, f_idx * B : (f_idx + 1) * B] = f[1:-1, None]
    n_snaps = int(np.floor(t_end / snapshot_every + 1e-9))
    times = [snapshot_every * (i + 1) for i in range(n_snaps)]
    snaps_raw, steps = _rk23_adaptive(rhs, Y0, t_end, times, ctrl)

    lift = grid.neumann_lift
    full0 = np.empty((3, grid.N, B))
    for f_idx, f in enumerate(init.fields()):
        full0[f_idx] = f[:, None]
    snapshots = [Snapshot1D(0.0, full0)]
    min_val = full0.min()
    for t in sorted(snaps_raw):
        Y = snaps_raw[t]
        full = np.empty((3, grid.N, B))
        for f_idx in range(3):
            block = Y[:, f_idx * B : (f_idx + 1) * B]
            full[f_idx, 1:-1, :] = block
            full[f_idx, [0, -1], :] = lift @ block
        snapshots.append(Snapshot1D(t, full))
        min_val = min(min_val, full.min())
    flagged = min_val < NEG_TOL
    return Run1DResult(
        grid,
        list(params),
        snapshots,
        negativity_flagged=flagged,
        min_value=float(min_val),
        steps=steps,
        notes="negativity beyond tolerance" if flagged else "",
    )


def run1d(
    p: Params,
    init: FieldState1D,
    grid: Grid1D,
    t_end: float,
    snapshot_every: float,
    ctrl: StepControl | None = None,
) -> Run1DResult:
    """Single-run front end; snapshots carry fields of shape (3, N)."""
    res = run1d_batch([p], init, grid, t_end, snapshot_every, ctrl)
    res.snapshots = [Snapshot1D(s.t, s.fields[:, :, 0]) for s in res.snapshots]
    return res


def diffusion_only_rhs(grid: Grid1D, d: tuple[float, float, float]):
    """RHS with the reaction switched off (heat-equation limit, test hook)."""

    class _Diff:
        B = 1

        def __call__(self, Y):
            out = grid.lap_interior @ Y
            for i, di in enumerate(d):
                out[:, i] *= di
            return out

    return _Diff()
