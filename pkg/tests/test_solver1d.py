import numpy as np
import pytest
from scipy.integrate import solve_ivp

from alleechain.errors import ConfigError, SolverError
from alleechain.model import Params, StatePoint, reaction
from alleechain.equilibria import interior_equilibrium
from alleechain.solver1d import (
    FieldState1D,
    StepControl,
    build_grid,
    cheb_matrix,
    clenshaw_curtis_weights,
    diffusion_only_rhs,
    enforce_neumann,
    init_perturbation,
    run1d,
    run1d_batch,
)

FIG_SET = Params(w1=0.96, w2=0.52, w3=1.06, w4=0.37, a2=0.014, c=0.1, D3=0.1, m=0.01,
                 d1=1e-3, d2=1e-5, d3=1e-5)


# ----------------------------------------------------------- spectral operators


def test_cheb_matrix_annihilates_constants():
    D, x = cheb_matrix(16)
    assert np.abs(D @ np.ones(17)).max() < 1e-12


def test_cheb_matrix_exact_on_cubic():
    D, x = cheb_matrix(8)
    f = x ** 3 - 2 * x
    want = 3 * x ** 2 - 2
    assert np.abs(D @ f - want).max() < 1e-11


def test_weights_integrate_polynomials_exactly():
    w = clenshaw_curtis_weights(16)
    _, x = cheb_matrix(16)
    # int_{-1}^{1} x^k dx = 2/(k+1) for even k, 0 for odd k
    for k in range(0, 15):
        want = 2.0 / (k + 1) if k % 2 == 0 else 0.0
        assert w @ x ** k == pytest.approx(want, abs=1e-13)


def test_build_grid_geometry():
    g = build_grid(32)
    assert g.N == 32
    assert g.nodes[0] == pytest.approx(0.0, abs=1e-15)
    assert g.nodes[-1] == pytest.approx(np.pi, rel=1e-15)
    assert np.all(np.diff(g.nodes) > 0)
    assert g.weights.sum() == pytest.approx(np.pi, rel=1e-13)


def test_build_grid_rejects_small_N():
    with pytest.raises(ConfigError):
        build_grid(7)


def test_mapped_derivative_exact_on_quadratic():
    g = build_grid(64)
    y = g.nodes
    assert np.abs(g.D1 @ (y ** 2) - 2 * y).max() < 1e-8
    assert np.abs(g.D2 @ (y ** 3) - 6 * y).max() < 1e-6


def test_mapped_derivative_spectral_convergence():
    # error on a smooth non-polynomial should collapse with N
    errs = []
    for N in (12, 32):
        g = build_grid(N)
        y = g.nodes
        errs.append(np.abs(g.D1 @ np.sin(6 * y) - 6 * np.cos(6 * y)).max())
    assert errs[1] < 1e-9
    assert errs[1] < errs[0] * 1e-3


def test_weights_integrate_cos_squared():
    g = build_grid(64)
    assert g.weights @ np.cos(8 * g.nodes) ** 2 == pytest.approx(np.pi / 2, rel=1e-12)


# ------------------------------------------------------------ neumann closure


def test_neumann_lift_preserves_constants():
    g = build_grid(32)
    ends = g.neumann_lift @ np.ones(30)
    assert ends == pytest.approx([1.0, 1.0], rel=1e-12)


def test_enforce_neumann_zeroes_boundary_derivative(rng):
    g = build_grid(32)
    f = rng.uniform(0.5, 1.5, 32)
    st = enforce_neumann(FieldState1D(f, f.copy(), f.copy(), 0.0), g)
    for field in st.fields():
        df = g.D1 @ field
        assert abs(df[0]) < 1e-8 * np.abs(df).max()
        assert abs(df[-1]) < 1e-8 * np.abs(df).max()


def test_lap_interior_annihilates_constants():
    g = build_grid(32)
    assert np.abs(g.lap_interior @ np.ones(30)).max() < 1e-9


def test_lap_interior_eigenmode():
    # cos(k x) satisfies the zero-flux conditions; Lap cos(kx) = -k^2 cos(kx)
    g = build_grid(48)
    for k in (1, 2, 5):
        f = np.cos(k * g.nodes)
        got = g.lap_interior @ f[1:-1]
        assert np.abs(got + k ** 2 * f[1:-1]).max() < 1e-6 * k ** 2


# ---------------------------------------------------------------- initial data


def test_init_perturbation_zero_eps_is_equilibrium():
    g = build_grid(32)
    eq = StatePoint(0.5, 0.4, 0.1)
    st = init_perturbation(eq, (0.0, 0.0, 0.0), 8, g)
    assert np.all(st.u == 0.5) and np.all(st.v == 0.4) and np.all(st.r == 0.1)


def test_init_perturbation_profile_and_mean():
    g = build_grid(64)
    eq = StatePoint(0.5, 0.4, 0.1)
    st = init_perturbation(eq, (0.05, 0.02, 0.01), 8, g)
    assert np.allclose(st.u, 0.5 + 0.05 * np.cos(8 * g.nodes) ** 2)
    # spatial mean of cos^2 over (0, pi) is 1/2
    mean_u = (g.weights @ st.u) / np.pi
    assert mean_u == pytest.approx(0.5 + 0.025, rel=1e-12)
    assert st.min_value() >= 0.1


# ------------------------------------------------------------------ integration


def test_homogeneous_equilibrium_is_preserved():
    # pick a set whose uniform state is linearly stable so the only
    # deviation source is integrator error
    p = Params(w1=0.95, w2=0.3, w3=0.82, w4=0.53, a2=0.01, c=0.1, D3=0.1, m=0.1,
               d1=1e-3, d2=1e-5, d3=1e-5)
    eq = interior_equilibrium(p).point
    g = build_grid(32)
    st = init_perturbation(eq, (0.0, 0.0, 0.0), 8, g)
    res = run1d(p, st, g, t_end=50.0, snapshot_every=25.0,
                ctrl=StepControl(atol=1e-12, rtol=1e-10))
    fin = res.final().fields
    for field, val in zip(fin, eq.as_tuple()):
        assert np.abs(field - val).max() < 1e-8


def test_pure_diffusion_conserves_mean_and_decays_modes():
    g = build_grid(48)
    d = (1e-3, 1e-3, 1e-3)
    rhs = diffusion_only_rhs(g, d)
    f0 = 1.0 + 0.3 * np.cos(2 * g.nodes)
    ni = g.N - 2
    y0 = np.stack([f0[1:-1]] * 3, axis=1).ravel()

    sol = solve_ivp(lambda t, y: rhs(y.reshape(ni, 3)).ravel(), (0.0, 100.0), y0,
                    rtol=1e-10, atol=1e-12)
    fin = sol.y[:, -1].reshape(ni, 3)[:, 0]
    full = np.empty(g.N)
    full[1:-1] = fin
    full[[0, -1]] = g.neumann_lift @ fin
    mean0 = g.weights @ f0 / np.pi
    mean1 = g.weights @ full / np.pi
    assert abs(mean1 - mean0) < 1e-6 * abs(mean0)
    # the cos(2x) mode decays like exp(-4 d t)
    amp = full - mean1
    want = 0.3 * np.exp(-4 * 1e-3 * 100.0) * np.cos(2 * g.nodes)
    assert np.abs(amp - want).max() < 1e-2 * np.abs(want).max()


def test_run1d_matches_scipy_on_homogeneous_kinetics():
    # homogeneous fields reduce the PDE to the kinetics ODE
    p = FIG_SET
    g = build_grid(16)
    u0, v0, r0 = 0.4, 0.3, 0.12
    ones = np.ones(16)
    st = FieldState1D(u0 * ones, v0 * ones, r0 * ones, 0.0)
    res = run1d(p, st, g, t_end=50.0, snapshot_every=10.0,
                ctrl=StepControl(atol=1e-10, rtol=1e-8))

    sol = solve_ivp(lambda t, y: reaction(y[0], y[1], y[2], p), (0, 50.0),
                    [u0, v0, r0], rtol=1e-11, atol=1e-13, dense_output=True)
    want = sol.y[:, -1]
    fin = res.final().fields
    got = [fin[0][5], fin[1][5], fin[2][5]]
    assert got == pytest.approx(list(want), rel=1e-4)
    # and the profile stays homogeneous
    assert fin[0].std() < 1e-10


def test_run1d_snapshot_times_and_steps():
    eq = interior_equilibrium(FIG_SET).point
    g = build_grid(16)
    st = init_perturbation(eq, (0.01, 0.01, 0.01), 4, g)
    res = run1d(FIG_SET, st, g, t_end=1.0, snapshot_every=0.25)
    times = [s.t for s in res.snapshots]
    assert times == pytest.approx([0.0, 0.25, 0.5, 0.75, 1.0], abs=1e-12)
    assert res.steps > 0


def test_run1d_positivity_on_accepted_run():
    eq = interior_equilibrium(FIG_SET).point
    g = build_grid(32)
    st = init_perturbation(eq, (0.05, 0.05, 0.05), 8, g)
    res = run1d(FIG_SET, st, g, t_end=20.0, snapshot_every=5.0)
    assert res.min_value >= -1e-12
    assert not res.negativity_flagged


def test_run1d_flags_negative_initial_data():
    g = build_grid(16)
    u = np.full(16, 1e-3)
    u[3] = -1e-6  # deliberately below the tolerance band
    st = FieldState1D(u, np.full(16, 0.5), np.full(16, 0.1), 0.0)
    res = run1d(FIG_SET, st, g, t_end=0.01, snapshot_every=0.005)
    assert res.negativity_flagged
    assert res.min_value < -1e-12


def test_run1d_batch_columns_independent():
    # two copies of the same problem must produce identical columns, and
    # a batch must reproduce the single run on the shared time grid
    eq = interior_equilibrium(FIG_SET).point
    g = build_grid(24)
    st = init_perturbation(eq, (0.02, 0.02, 0.02), 4, g)
    res = run1d_batch([FIG_SET, FIG_SET], st, g, t_end=5.0, snapshot_every=1.0)
    last = res.snapshots[-1].fields
    assert last.shape == (3, 24, 2)
    assert np.array_equal(last[:, :, 0], last[:, :, 1])


def test_run1d_batch_varying_m_matches_separate_runs():
    eq = interior_equilibrium(FIG_SET).point
    g = build_grid(24)
    st = init_perturbation(eq, (0.02, 0.02, 0.02), 4, g)
    ms = [0.0, 0.01]
    batch = run1d_batch([FIG_SET.with_m(m) for m in ms], st, g,
                        t_end=5.0, snapshot_every=2.5)
    for j, m in enumerate(ms):
        single = run1d(FIG_SET.with_m(m), st, g, t_end=5.0, snapshot_every=2.5,
                       ctrl=StepControl(atol=1e-11, rtol=1e-9))
        got = batch.snapshots[-1].fields[:, :, j]
        want = single.final().fields
        assert np.abs(got - want).max() < 1e-5


def test_run1d_batch_rejects_mixed_kinetics():
    g = build_grid(16)
    eq = interior_equilibrium(FIG_SET).point
    st = init_perturbation(eq, (0.0, 0.0, 0.0), 8, g)
    other = Params(w1=0.95, w2=0.3, w3=0.82, w4=0.53, a2=0.01, c=0.1, D3=0.1, m=0.1,
                   d1=1e-3, d2=1e-5, d3=1e-5)
    with pytest.raises(ConfigError):
        run1d_batch([FIG_SET, other], st, g, t_end=1.0, snapshot_every=0.5)


def test_run1d_refinement_consistency():
    # trajectory-wise grid convergence on a horizon short enough that the
    # pattern-forming instability cannot amplify truncation differences
    p = Params(w1=0.6614, w2=1.7787, w3=2.2336, w4=1.5936, a2=0.1661,
               c=0.9472, D3=0.211, m=0.0, d1=9.86e-4, d2=1.69e-4, d3=2.94e-3)
    eq = interior_equilibrium(p).point
    finals = []
    for N in (64, 128):
        g = build_grid(N)
        st = init_perturbation(eq, (0.05, 0.05, 0.05), 8, g)
        res = run1d(p, st, g, t_end=10.0, snapshot_every=5.0,
                    ctrl=StepControl(atol=1e-11, rtol=1e-9))
        finals.append((g, res.final().fields))
    g1, f1 = finals[0]
    g2, f2 = finals[1]
    # compare on the coarse nodes via polynomial interpolation of the fine run
    from numpy.polynomial import chebyshev as C

    def resample(field):
        coef = C.chebfit(
            np.cos(np.pi * np.arange(g2.N) / (g2.N - 1)), field[::-1], g2.N - 1)
        xi = 1.0 - 2.0 * g1.nodes / np.pi
        return C.chebval(xi, coef)

    for a, b in zip(f1, f2):
        scale = np.abs(b).max()
        assert np.abs(a - resample(b)).max() < 1e-4 * max(scale, 1e-8)


def test_step_budget_exhaustion_raises():
    eq = interior_equilibrium(FIG_SET).point
    g = build_grid(32)
    st = init_perturbation(eq, (0.05, 0.05, 0.05), 8, g)
    with pytest.raises(SolverError):
        run1d(FIG_SET, st, g, t_end=100.0, snapshot_every=50.0,
              ctrl=StepControl(max_steps=10))
