"""Discrete norms, pattern classification, regression, and the two
headline experiments (pattern decay rate in m, and overexploitation).

All L2-type norms carry a 1/|domain| normalization, so the norm of a
constant field equals its absolute value; the H1 norm adds the same
normalized gradient energy, differentiated with each scheme's own
operator (collocation matrix in 1D, ghost-padded central differences in
2D).  The decay experiment integrates a batch of runs that differ only
in the Allee threshold m, measures H1 differences against the m = 0 run
at the final time, and fits both the raw and the log-log error-vs-m
relations with 95% confidence intervals from the t-distribution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy import stats

from .equilibria import interior_equilibrium
from .errors import ConfigError
from .model import Params, StatePoint
from .solver1d import (
    FieldState1D,
    Grid1D,
    Run1DResult,
    StepControl,
    build_grid,
    init_perturbation,
    run1d_batch,
)
from .solver2d import FieldState2D, Grid2D

HOMOGENEOUS_STD_TOL = 1e-6
STEADY_REL_TOL = 1e-6
EXTINCT_TOL = 1e-6
LIMIT_TOL = 1e-3


@dataclass(frozen=True)
class FieldNorms:
    l2: float
    sup: float
    h1: float


@dataclass(frozen=True)
class NormReport:
    u: FieldNorms
    v: FieldNorms
    r: FieldNorms

    def per_field(self):
        return {"u": self.u, "v": self.v, "r": self.r}


def _norms_1d(f: np.ndarray, grid: Grid1D) -> FieldNorms:
    w = grid.weights
    omega = np.pi
    l2sq = float(w @ (f * f)) / omega
    grad = grid.D1 @ f
    h1sq = l2sq + float(w @ (grad * grad)) / omega
    return FieldNorms(math.sqrt(max(l2sq, 0.0)), float(np.abs(f).max()), math.sqrt(max(h1sq, 0.0)))


def _norms_2d(f: np.ndarray, grid: Grid2D) -> FieldNorms:
    # cell-centered uniform mesh: the midpoint rule makes the normalized
    # integral a plain mean
    l2sq = float(np.mean(f * f))
    g = np.pad(f, 1, mode="edge")
    fx = (g[2:, 1:-1] - g[:-2, 1:-1]) / (2.0 * grid.dx)
    fy = (g[1:-1, 2:] - g[1:-1, :-2]) / (2.0 * grid.dy)
    h1sq = l2sq + float(np.mean(fx * fx + fy * fy))
    return FieldNorms(math.sqrt(l2sq), float(np.abs(f).max()), math.sqrt(h1sq))


def field_norms(f: np.ndarray, grid) -> FieldNorms:
    if isinstance(grid, Grid1D):
        return _norms_1d(np.asarray(f, dtype=float), grid)
    if isinstance(grid, Grid2D):
        return _norms_2d(np.asarray(f, dtype=float), grid)
    raise TypeError(f"unsupported grid type {type(grid)!r}")


def norms(state, grid) -> NormReport:
    """Per-field l2 / sup / h1 report for a 1D or 2D field state."""
    u, v, r = state.fields()
    return NormReport(field_norms(u, grid), field_norms(v, grid), field_norms(r, grid))


def h1_error(a, b, grid) -> dict:
    """H1 norm of the difference per field; states must share the grid."""
    ua, va, ra = a.fields()
    ub, vb, rb = b.fields()
    if ua.shape != ub.shape:
        raise ValueError(f"grid mismatch: {ua.shape} vs {ub.shape}")
    return {
        "u": field_norms(ua - ub, grid).h1,
        "v": field_norms(va - vb, grid).h1,
        "r": field_norms(ra - rb, grid).h1,
    }


HOMOGENEOUS = "homogeneous"
FIXED = "fixed-pattern"
SPATIOTEMPORAL = "spatio-temporal"


def classify_pattern(snapshots, std_tol=HOMOGENEOUS_STD_TOL, steady_tol=STEADY_REL_TOL) -> str:
    """Late-time regime from the last two snapshots.

    snapshots: sequence of field states, solver snapshots, or raw arrays
    of shape (3, ...).  homogeneous: the final snapshot is
    spatially constant to std_tol relative to the field scale;
    fixed-pattern: spatially structured but the relative L2 change
    between the last two snapshots is below steady_tol; otherwise
    spatio-temporal.  Fields negligible against the overall state
    scale are treated as uniform zero.
    """
    if len(snapshots) < 2:
        raise ValueError("classify_pattern needs at least 2 late-time snapshots")

    def as_fields(s):
        f = getattr(s, "fields", None)
        if f is None:
            return np.asarray(s)
        return np.asarray(f() if callable(f) else f)

    last = as_fields(snapshots[-1])
    prev = as_fields(snapshots[-2])
    flat_last = last.reshape(3, -1)
    flat_prev = prev.reshape(3, -1)
    # fields that are negligible against the overall state scale (e.g. a
    # species decayed to ~1e-100) cannot drive the verdict, even though
    # their relative scatter is pure floating-point noise
    global_sup = max(float(np.abs(flat_last).max()), 1e-300)
    homogeneous = True
    for f in flat_last:
        scale = max(abs(float(f.mean())), 1e-12 * global_sup, 1e-300)
        if f.std() >= std_tol * scale:
            homogeneous = False
            break
    if homogeneous:
        return HOMOGENEOUS
    global_l2 = max(max(float(np.linalg.norm(f)) for f in flat_last), 1e-300)
    rel = 0.0
    for fl, fp in zip(flat_last, flat_prev):
        denom = max(float(np.linalg.norm(fl)), 1e-12 * global_l2)
        rel = max(rel, float(np.linalg.norm(fl - fp)) / denom)
    return FIXED if rel < steady_tol else SPATIOTEMPORAL


@dataclass(frozen=True)
class FitResult:
    slope: float
    intercept: float
    correlation: float
    ci95_slope: tuple
    ci95_intercept: tuple
    n_used: int
    excluded: int = 0
    notes: str = ""


def linear_fit(x, y) -> FitResult:
    """Ordinary least squares with 95% CIs from the t-distribution (n-2 dof)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    n = len(x)
    if n < 3:
        raise ValueError("need at least 3 points to fit with confidence intervals")
    xb, yb = x.mean(), y.mean()
    sxx = float(((x - xb) ** 2).sum())
    if sxx == 0.0:
        raise ValueError("degenerate fit: all x identical")
    sxy = float(((x - xb) * (y - yb)).sum())
    slope = sxy / sxx
    intercept = yb - slope * xb
    resid = y - (intercept + slope * x)
    sse = float((resid ** 2).sum())
    syy = float(((y - yb) ** 2).sum())
    corr = 0.0 if syy == 0.0 else sxy / math.sqrt(sxx * syy)
    sigma2 = sse / (n - 2)
    se_slope = math.sqrt(sigma2 / sxx)
    se_inter = math.sqrt(sigma2 * (1.0 / n + xb * xb / sxx))
    tcrit = float(stats.t.ppf(0.975, n - 2))
    return FitResult(
        slope,
        intercept,
        corr,
        (slope - tcrit * se_slope, slope + tcrit * se_slope),
        (intercept - tcrit * se_inter, intercept + tcrit * se_inter),
        n,
    )


def loglog_fit(points) -> FitResult:
    """OLS fit of log y against log x; nonpositive coordinates are
    excluded (reported in the result) rather than raised."""
    pts = [(float(a), float(b)) for a, b in points]
    usable = [(a, b) for a, b in pts if a > 0.0 and b > 0.0]
    dropped = len(pts) - len(usable)
    if len(usable) < 3:
        raise ValueError("need at least 3 strictly positive points for the log-log fit")
    x = np.log([a for a, _ in usable])
    y = np.log([b for _, b in usable])
    base = linear_fit(x, y)
    note = f"{dropped} nonpositive point(s) excluded" if dropped else ""
    return FitResult(
        base.slope,
        base.intercept,
        base.correlation,
        base.ci95_slope,
        base.ci95_intercept,
        base.n_used,
        dropped,
        note,
    )


@dataclass(frozen=True)
class DecayRecord:
    m: float
    h1_error_u: float
    h1_error_v: float
    h1_error_r: float
    steady: bool
    note: str = ""

    @property
    def combined(self) -> float:
        return math.sqrt(self.h1_error_u ** 2 + self.h1_error_v ** 2 + self.h1_error_r ** 2)


@dataclass
class DecayConfig:
    N: int = 128
    t_end: float = 2000.0
    snapshot_every: float = 100.0
    eps: tuple = (0.05, 0.05, 0.05)
    wavenumber: int = 8
    atol: float = 1e-8
    rtol: float = 1e-6


def decay_experiment(p_base: Params, m_values, t_end: float | None = None, config: DecayConfig | None = None):
    """Pattern distance to the m = 0 run as a function of m.

    Integrates one batched simulation per m value (identical grid,
    identical adaptive time steps), computes per-field H1 errors against
    the m = 0 run at the final time, and fits raw error vs m and
    log(error) vs log(m).  Returns (records, fit_raw, fit_loglog); fits
    act on the combined per-field error of every run.  Because all runs
    share one time integration, any residual slow drift of the patterns
    is common-mode and cancels in the differences; each record still
    carries the late-time classification so callers can judge how frozen
    the patterns were.
    """
    cfg = config or DecayConfig()
    if t_end is not None:
        cfg = replace(cfg, t_end=t_end)
    m_values = [float(m) for m in m_values]
    if 0.0 not in m_values:
        raise ConfigError("decay_experiment requires m = 0 among m_values (the baseline run)")
    eq = interior_equilibrium(p_base)
    if not eq.exists:
        raise ConfigError(f"no interior equilibrium for the base parameters: {eq.existence_notes}")
    grid = build_grid(cfg.N)
    init = init_perturbation(eq.point, cfg.eps, cfg.wavenumber, grid)
    params = [p_base.with_m(m) for m in m_values]
    ctrl = StepControl(atol=cfg.atol, rtol=cfg.rtol)
    res = run1d_batch(params, init, grid, cfg.t_end, cfg.snapshot_every, ctrl)

    last = res.snapshots[-1].fields  # (3, N, B)
    prev = res.snapshots[-2].fields
    i0 = m_values.index(0.0)
    base_state = FieldState1D(last[0, :, i0], last[1, :, i0], last[2, :, i0], cfg.t_end)
    records = []
    for j, m in enumerate(m_values):
        label = classify_pattern(
            [prev[:, :, j], last[:, :, j]]
        )
        state_j = FieldState1D(last[0, :, j], last[1, :, j], last[2, :, j], cfg.t_end)
        errs = h1_error(state_j, base_state, grid)
        records.append(
            DecayRecord(
                m,
                errs["u"],
                errs["v"],
                errs["r"],
                steady=(label == FIXED),
                note="" if label == FIXED else f"run classified {label} at t = {cfg.t_end:g}",
            )
        )
    fit_pts = [(rec.m, rec.combined) for rec in records]
    raw = linear_fit([m for m, _ in fit_pts], [e for _, e in fit_pts])
    loglog = loglog_fit([(m, e) for m, e in fit_pts if m > 0.0])
    return records, raw, loglog


@dataclass(frozen=True)
class ScenarioOutcome:
    kind: str
    limits: tuple  # final sup norms (u, v, r)
    time_to_threshold: float | None
    reached: bool
    hypotheses_satisfied: bool
    precondition_report: tuple
    target: float | None = None
    notes: str = ""


TOTAL_EXTINCTION = "total-extinction"
PREY_RECOVERY = "prey-recovery"
PERSISTENCE = "persistence"


def _sup(f) -> float:
    return float(np.abs(np.asarray(f, dtype=float)).max())


def overexploitation_scenario(
    kind: str,
    p: Params,
    init,
    t_end: float,
    N: int = 64,
    snapshot_every: float | None = None,
    ctrl: StepControl | None = None,
) -> ScenarioOutcome:
    """Integrate one of the three long-time scenarios and classify the outcome.

    init may be a StatePoint (homogeneous data) or a FieldState1D on the
    scenario grid.  Preconditions are checked in the sup norm and
    reported; a violated hypothesis marks the outcome but the run still
    executes (the classifier reports what actually happened).
    """
    grid = build_grid(N)
    if isinstance(init, StatePoint):
        ones = np.ones(grid.N)
        state0 = FieldState1D(init.u * ones, init.v * ones, init.r * ones, 0.0)
    elif isinstance(init, FieldState1D):
        if init.u.shape != (grid.N,):
            raise ConfigError(f"initial data has {init.u.shape[0]} nodes, scenario grid has {grid.N}")
        state0 = init
    else:
        raise TypeError("init must be a StatePoint or FieldState1D")

    u0, v0, r0 = (_sup(f) for f in state0.fields())
    floor = p.c * p.D3 / p.w4
    checks = []
    if kind == TOTAL_EXTINCTION:
        gap = p.w1 - (p.a2 + 1.0 + p.w3)
        checks.append(("w1 > a2 + 1 + w3", gap > 0.0, f"w1 - (a2+1+w3) = {gap:.6g}"))
        if gap > 0.0:
            alpha = p.w1 / (1.0 + p.a2 + p.w3) - 1.0
            ratio = u0 / v0 if v0 > 0 else math.inf
            checks.append(
                ("sup(u0)/sup(v0) < alpha", ratio < alpha, f"ratio = {ratio:.6g}, alpha = {alpha:.6g}")
            )
        checks.append(
            ("sup(r0) < min(m, c*D3/w4)", r0 < min(p.m, floor), f"sup(r0) = {r0:.6g}, bound = {min(p.m, floor):.6g}")
        )
        target = None
    elif kind == PREY_RECOVERY:
        gap = p.w3 - (p.w2 + 1.0 + p.w1)
        checks.append(("w3 > w2 + 1 + w1", gap > 0.0, f"w3 - (w2+1+w1) = {gap:.6g}"))
        if gap > 0.0:
            alpha1 = p.w3 / (1.0 + p.w2 + p.w1) - 1.0
            m2 = v0 / alpha1
            bound = max(m2, p.m, floor)
            checks.append(
                ("sup(r0) > max(M2, m, c*D3/w4)", r0 > bound, f"sup(r0) = {r0:.6g}, bound = {bound:.6g}")
            )
        target = max(p.m, floor)
    elif kind == PERSISTENCE:
        checks.append(
            ("sup(r0) > min(m, c*D3/w4)", r0 > min(p.m, floor), f"sup(r0) = {r0:.6g}, bound = {min(p.m, floor):.6g}")
        )
        target = max(p.m, floor)
    else:
        raise ConfigError(f"unknown scenario kind {kind!r}")
    hyp_ok = all(ok for _, ok, _ in checks)

    cadence = snapshot_every if snapshot_every is not None else max(t_end / 50.0, 1.0)
    res = run1d_batch([p], state0, grid, t_end, cadence, ctrl or StepControl())
    final = res.snapshots[-1].fields[:, :, 0]
    sup_u, sup_v, sup_r = (_sup(final[i]) for i in range(3))

    time_hit = None
    reached = False
    notes = "" if hyp_ok else "hypotheses not satisfied: " + "; ".join(
        f"{name} FAILED ({detail})" for name, ok, detail in checks if not ok
    )
    if kind == TOTAL_EXTINCTION:
        for s in res.snapshots:
            f = s.fields[:, :, 0]
            if max(_sup(f[0]), _sup(f[1]), _sup(f[2])) < EXTINCT_TOL:
                time_hit = s.t
                break
        reached = time_hit is not None
    elif kind == PREY_RECOVERY:
        dev_u = _sup(final[0] - 1.0)
        ok = dev_u < LIMIT_TOL and sup_v < EXTINCT_TOL and abs(sup_r - target) < LIMIT_TOL
        reached = bool(ok)
        if reached:
            time_hit = res.snapshots[-1].t
    else:
        rmin = float(final[2].min())
        reached = abs(sup_r - target) < LIMIT_TOL and rmin >= target - LIMIT_TOL
        if reached:
            time_hit = res.snapshots[-1].t

    return ScenarioOutcome(
        kind,
        (sup_u, sup_v, sup_r),
        time_hit,
        reached,
        hyp_ok,
        tuple(checks),
        target,
        notes,
    )
