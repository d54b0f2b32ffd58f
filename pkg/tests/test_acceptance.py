"""Acceptance sweep: the nine headline capabilities at their stated tolerances.

One test per criterion; `pytest -v` therefore prints one pass/fail line
for each.  Every check here goes through the public API end to end and
re-derives its reference values independently (finite differences,
cofactor expansions, closed-form limits) rather than trusting the
implementation under test.
"""

import math
from contextlib import contextmanager

import numpy as np
import pytest

from alleechain.errors import ConfigError
from alleechain.model import Params, StatePoint
from alleechain import equilibria, turing
from alleechain.equilibria import interior_equilibrium, jacobian, jacobian_fd
from alleechain.turing import DiffusionMatrix, dispersion_cubic, g_coefficients
from alleechain.solver1d import (
    FieldState1D,
    StepControl,
    build_grid,
    diffusion_only_rhs,
    init_perturbation,
    run1d,
)
from alleechain.solver2d import Grid2D, init_random, run2d, step2d
from alleechain.analysis import (
    HOMOGENEOUS,
    PERSISTENCE,
    PREY_RECOVERY,
    TOTAL_EXTINCTION,
    classify_pattern,
    decay_experiment,
    linear_fit,
    loglog_fit,
    overexploitation_scenario,
)

WAVE_SET = Params(w1=0.96, w2=0.52, w3=1.06, w4=0.37, a2=0.014, c=0.1, D3=0.1,
                  m=0.01, d1=1e-3, d2=1e-5, d3=1e-5)
MIXED_SET = Params(w1=0.95, w2=0.3, w3=0.82, w4=0.53, a2=0.01, c=0.1, D3=0.1,
                   m=0.1, d1=1e-3, d2=1e-5, d3=1e-5)
STEADY_SET = Params(w1=0.6614, w2=1.7787, w3=2.2336, w4=1.5936, a2=0.1661,
                    c=0.9472, D3=0.211, m=0.0, d1=9.86e-4, d2=1.69e-4, d3=2.94e-3)


@contextmanager
def criterion(n: int, name: str):
    try:
        yield
    except Exception:
        print(f"criterion {n} ({name}): FAIL")
        raise
    print(f"criterion {n} ({name}): PASS")


def _random_params_with_interior(rng, count):
    out = []
    while len(out) < count:
        p = Params(
            w1=rng.uniform(0.3, 2.0),
            w2=rng.uniform(0.1, 2.0),
            w3=rng.uniform(0.1, 2.5),
            w4=rng.uniform(0.1, 2.0),
            a2=rng.uniform(0.005, 0.5),
            c=rng.uniform(0.05, 1.0),
            D3=rng.uniform(0.05, 0.5),
            m=rng.uniform(0.0, 0.6),
        )
        if interior_equilibrium(p).exists:
            out.append(p)
    return out


def test_criterion_1_equilibria_residuals():
    with criterion(1, "equilibrium residuals and interior window"):
        reports = equilibria.all_equilibria(WAVE_SET)
        assert len(reports) == 9
        for rep in reports:
            if rep.exists:
                assert rep.residual(WAVE_SET) < 1e-10, rep.label
        interior = interior_equilibrium(WAVE_SET)
        assert interior.exists
        assert 1.0 - WAVE_SET.w1 < interior.point.u < 1.0


def test_criterion_2_jacobian_vs_finite_differences():
    with criterion(2, "analytic Jacobian against central differences"):
        rng = np.random.default_rng(424242)
        for p in _random_params_with_interior(rng, 20):
            pt = interior_equilibrium(p).point
            J = jacobian(pt, p)
            J_fd = jacobian_fd(pt, p)
            rel = np.linalg.norm(J - J_fd) / np.linalg.norm(J)
            assert rel < 1e-5, f"rel = {rel:.3e} at {p}"


def _char_poly_by_minors(M):
    # lambda^3 + mu2 lambda^2 + mu1 lambda + mu0 via trace / principal
    # minors / determinant, written out by hand
    mu2 = -(M[0, 0] + M[1, 1] + M[2, 2])
    mu1 = (
        M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]
        + M[0, 0] * M[2, 2] - M[0, 2] * M[2, 0]
        + M[1, 1] * M[2, 2] - M[1, 2] * M[2, 1]
    )
    mu0 = -(
        M[0, 0] * (M[1, 1] * M[2, 2] - M[1, 2] * M[2, 1])
        - M[0, 1] * (M[1, 0] * M[2, 2] - M[1, 2] * M[2, 0])
        + M[0, 2] * (M[1, 0] * M[2, 1] - M[1, 1] * M[2, 0])
    )
    return mu2, mu1, mu0


def test_criterion_3_dispersion_relation_exactness():
    with criterion(3, "dispersion cubic and its stationary/oscillatory splits"):
        rng = np.random.default_rng(31415)
        for _ in range(50):
            J = rng.uniform(-2.0, 2.0, (3, 3))
            J[0, 2] = J[2, 0] = 0.0
            D = DiffusionMatrix(*np.exp(rng.uniform(np.log(1e-5), np.log(1e-2), 3)))
            k2 = rng.uniform(0.0, 3000.0)
            cub = dispersion_cubic(J, D)
            M = J - k2 * np.diag([D.d1, D.d2, D.d3])
            mu2, mu1, mu0 = _char_poly_by_minors(M)
            for got, want in ((cub.mu2(k2), mu2), (cub.mu1(k2), mu1), (cub.mu0(k2), mu0)):
                assert abs(got - want) < 1e-10 * max(1.0, abs(want))
            g_s = g_coefficients(J, D, "stationary")
            g_w = g_coefficients(J, D, "oscillatory")
            assert abs(g_s(k2) - mu0) < 1e-10 * max(1.0, abs(mu0))
            hur = mu2 * mu1 - mu0
            assert abs(g_w(k2) - hur) < 1e-10 * max(1.0, abs(hur))


def test_criterion_4_allee_threshold_flips_k0_stability():
    with criterion(4, "sign table of the k = 0 stability indicators in m"):
        for m in (0.0, 0.1):
            q = MIXED_SET.with_m(m)
            pt = interior_equilibrium(q).point
            cub = dispersion_cubic(jacobian(pt, q), DiffusionMatrix(q.d1, q.d2, q.d3))
            mu0 = cub.mu0(0.0)
            hur = cub.mu2(0.0) * cub.mu1(0.0) - cub.mu0(0.0)
            assert mu0 > 0 and hur > 0, f"m = {m}: expected (+, +)"
        for m in (0.2, 0.3, 0.4, 0.5):
            q = MIXED_SET.with_m(m)
            pt = interior_equilibrium(q).point
            cub = dispersion_cubic(jacobian(pt, q), DiffusionMatrix(q.d1, q.d2, q.d3))
            mu0 = cub.mu0(0.0)
            hur = cub.mu2(0.0) * cub.mu1(0.0) - cub.mu0(0.0)
            assert mu0 < 0 and hur < 0, f"m = {m}: expected (-, -)"


def test_criterion_5_2d_patterns_vs_allee_strength():
    with criterion(5, "2D pattern at small m, uniform state at large m"):
        grid = Grid2D(nx=100, ny=100, dx=0.1, dy=0.1, dt=0.1)
        grid.validate_for(WAVE_SET)

        # weak Allee effect: noise around the coexistence state grows
        # into a persistent spatial pattern
        eq_small = interior_equilibrium(WAVE_SET).point
        init = init_random(eq_small, grid, amplitude=0.05, seed=0)
        res_small = run2d(WAVE_SET, init, grid, t_end=1000.0, snapshot_every=50.0)
        std_u = float(res_small.final().u.std())
        assert std_u > 1e-3, f"expected a pattern, got std(u) = {std_u:.3e}"
        assert classify_pattern(res_small.snapshots) != HOMOGENEOUS

        # strong Allee effect: the same experiment relaxes to a uniform
        # state (the coexistence point is k = 0 unstable, so perturbed
        # fields fall into a homogeneous attractor)
        p_large = WAVE_SET.with_m(0.5)
        eq_large = interior_equilibrium(p_large).point
        base = StatePoint(eq_large.u + 0.05, eq_large.v + 0.05, eq_large.r + 0.05)
        init = init_random(base, grid, amplitude=0.005, seed=0)
        res_large = run2d(p_large, init, grid, t_end=1000.0, snapshot_every=50.0)
        assert classify_pattern(res_large.snapshots) == HOMOGENEOUS
        assert float(res_large.final().u.std()) < 1e-6


@pytest.mark.slow  # full protocol: 13 columns on N = 128 to t = 2000, ~20 min
def test_criterion_6_pattern_decay_rate_in_m():
    with criterion(6, "pattern distance grows like m^1"):
        records, fit_raw, fit_log = decay_experiment(
            STEADY_SET, np.linspace(0.0, 0.0035, 13))
        assert len(records) == 13
        assert fit_log.slope > 0.0
        assert fit_log.correlation > 0.9
        assert 0.72 < fit_log.slope < 1.28, f"log-log slope = {fit_log.slope:.4f}"


def test_criterion_7a_total_extinction():
    with criterion("7a", "overexploitation drives all three species extinct"):
        p = Params(w1=3.5, w2=0.3, w3=0.5, w4=1.0, a2=1.0, c=1.0, D3=0.1, m=0.5,
                   d1=1e-3, d2=1e-5, d3=1e-5)
        out = overexploitation_scenario(
            TOTAL_EXTINCTION, p, StatePoint(0.1, 1.0, 0.01), t_end=30.0,
            snapshot_every=1.0, ctrl=StepControl(atol=1e-13, rtol=1e-6))
        assert out.hypotheses_satisfied, out.notes
        assert out.reached and out.time_to_threshold is not None
        assert max(out.limits) < 1e-6


def test_criterion_7b_prey_recovery():
    with criterion("7b", "strong intermediate predation collapses to prey-only"):
        p = Params(w1=0.5, w2=0.5, w3=3.0, w4=1.0, a2=0.1, c=0.2, D3=0.1, m=0.2,
                   d1=1e-3, d2=1e-5, d3=1e-5)
        out = overexploitation_scenario(
            PREY_RECOVERY, p, StatePoint(0.5, 0.2, 1.0), t_end=2000.0)
        assert out.hypotheses_satisfied, out.notes
        assert out.reached
        target = max(p.m, p.c * p.D3 / p.w4)
        assert abs(out.limits[0] - 1.0) < 1e-3
        assert out.limits[1] < 1e-3
        assert abs(out.limits[2] - target) < 1e-3


def test_criterion_7c_persistence_floor():
    with criterion("7c", "top predator alone settles at its resource floor"):
        p = Params(w1=0.5, w2=0.5, w3=1.0, w4=1.0, a2=0.1, c=0.2, D3=0.1, m=0.0,
                   d1=1e-3, d2=1e-5, d3=1e-5)
        floor = p.c * p.D3 / p.w4
        for r0 in (0.05, 0.5):
            out = overexploitation_scenario(
                PERSISTENCE, p, StatePoint(0.0, 0.0, r0), t_end=1500.0)
            assert out.hypotheses_satisfied, out.notes
            assert out.reached, f"r0 = {r0}"
            assert abs(out.limits[2] - floor) < 1e-3


def test_criterion_8_solver_invariants():
    with criterion(8, "discretization invariants"):
        # constant equilibrium fields are fixed points (1D, adaptive)
        p = MIXED_SET
        eq = interior_equilibrium(p).point
        g = build_grid(32)
        st = init_perturbation(eq, (0.0, 0.0, 0.0), 8, g)
        res = run1d(p, st, g, t_end=10.0, snapshot_every=5.0,
                    ctrl=StepControl(atol=1e-12, rtol=1e-10))
        assert np.abs(res.final().fields - np.array(eq.as_tuple())[:, None]).max() < 1e-8

        # ... and of the explicit 2D step
        g2 = Grid2D(nx=10, ny=10, dx=0.1, dy=0.1, dt=0.05)
        from alleechain.solver2d import FieldState2D

        flat = FieldState2D(np.full((10, 10), eq.u), np.full((10, 10), eq.v),
                            np.full((10, 10), eq.r), 0.0)
        stepped = step2d(flat, p, g2)
        assert max(np.abs(f - val).max()
                   for f, val in zip(stepped.fields(), eq.as_tuple())) < 1e-13

        # zero-flux diffusion conserves the spatial mean
        from scipy.integrate import solve_ivp

        gd = build_grid(48)
        rhs = diffusion_only_rhs(gd, (1e-3, 1e-3, 1e-3))
        f0 = 1.0 + 0.3 * np.cos(2 * gd.nodes)
        ni = gd.N - 2
        y0 = np.stack([f0[1:-1]] * 3, axis=1).ravel()
        sol = solve_ivp(lambda t, y: rhs(y.reshape(ni, 3)).ravel(), (0.0, 50.0),
                        y0, rtol=1e-10, atol=1e-12)
        fin = sol.y[:, -1].reshape(ni, 3)[:, 0]
        full = np.empty(gd.N)
        full[1:-1] = fin
        full[[0, -1]] = gd.neumann_lift @ fin
        mean0 = gd.weights @ f0 / np.pi
        mean1 = gd.weights @ full / np.pi
        assert abs(mean1 - mean0) < 1e-6 * abs(mean0)

        # collocation derivative is exact on polynomials
        y = gd.nodes
        assert np.abs(gd.D1 @ (y ** 2) - 2 * y).max() < 1e-8

        # unstable explicit time steps are rejected up front
        bad = Grid2D(nx=10, ny=10, dx=0.01, dy=0.01, dt=0.1)
        with pytest.raises(ConfigError):
            bad.validate_for(WAVE_SET)

        # a pattern-forming run keeps fields nonnegative to tolerance
        st = init_perturbation(eq, (0.05, 0.05, 0.05), 8, g)
        res = run1d(p, st, g, t_end=20.0, snapshot_every=10.0)
        assert res.min_value >= -1e-12


def test_criterion_9_regression_utilities():
    with criterion(9, "power-law fits and confidence-interval coverage"):
        x = np.array([0.25, 0.5, 1.0, 2.0, 4.0, 8.0])
        for amp, expo in ((3.0, 2.0), (0.7, -1.5), (1.0, 1.0)):
            fit = loglog_fit(list(zip(x, amp * x ** expo)))
            assert abs(fit.slope - expo) < 1e-12
            assert abs(fit.intercept - math.log(amp)) < 1e-12

        rng = np.random.default_rng(987654321)
        xs = np.linspace(0.0, 2.0, 15)
        hits = 0
        trials = 1000
        for _ in range(trials):
            ys = 0.3 + 1.1 * xs + rng.normal(0.0, 0.2, xs.size)
            lo, hi = linear_fit(xs, ys).ci95_slope
            hits += lo <= 1.1 <= hi
        assert hits / trials >= 0.93, f"coverage = {hits / trials:.3f}"