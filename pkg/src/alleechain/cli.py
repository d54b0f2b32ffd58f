"""Batch front-end.

    alleechain <command> --config <path> [--out <dir>] [--seed <int>] [--threads <int>]

Commands: equilibria, turing, turing-table, sim1d, sim2d, decay,
overexploit.  Each invocation creates one fresh output directory
(<out>/<command>-NNN, never overwriting) containing an echo of the
effective configuration plus the command's artifacts as plain
delimiter-separated text.  Exit codes: 0 success, 2 configuration error,
3 runtime/divergence error.  A scientifically negative result (no
patterns, scenario not reached) still exits 0.
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import analysis, equilibria, turing
from .analysis import DecayConfig, classify_pattern, decay_experiment, overexploitation_scenario
from .config import RunConfig, params_from_config, parse_config
from .errors import ConfigError, SolverError
from .model import Params, StatePoint
from .solver1d import StepControl, build_grid, init_perturbation, run1d
from .solver2d import Grid2D, init_cos2, init_random, run2d

SEP = "\t"


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def write_table(path: Path, header: list[str], rows) -> None:
    with open(path, "w") as fh:
        fh.write(SEP.join(header) + "\n")
        for row in rows:
            fh.write(SEP.join(_fmt(x) for x in row) + "\n")


def write_keyvalues(path: Path, items) -> None:
    with open(path, "w") as fh:
        for k, v in items:
            fh.write(f"{k} = {_fmt(v)}\n")


def write_matrix(path: Path, M: np.ndarray, row_axis=None, col_axis=None) -> None:
    """Matrix as text; optional leading axis column (rows) and header row (cols)."""
    with open(path, "w") as fh:
        if col_axis is not None:
            lead = [""] if row_axis is not None else []
            fh.write(SEP.join(lead + [_fmt(c) for c in col_axis]) + "\n")
        for i, row in enumerate(M):
            lead = [_fmt(row_axis[i])] if row_axis is not None else []
            fh.write(SEP.join(lead + [_fmt(x) for x in row]) + "\n")


def make_run_dir(base: Path, command: str) -> Path:
    base.mkdir(parents=True, exist_ok=True)
    for idx in range(1, 10000):
        cand = base / f"{command}-{idx:03d}"
        if not cand.exists():
            cand.mkdir()
            return cand
    raise ConfigError(f"no free run directory under {base}")


def _sign_char(x: float) -> str:
    return "+" if x > 0 else ("-" if x < 0 else "0")


def cmd_equilibria(cfg: RunConfig, outdir: Path, _seed, _threads) -> int:
    p = params_from_config(cfg)
    rows = []
    for eq in equilibria.all_equilibria(p):
        res = eq.residual(p) if eq.exists else ""
        rows.append(
            (eq.label, eq.point.u, eq.point.v, eq.point.r, eq.exists, res, eq.existence_notes)
        )
    write_table(outdir / "equilibria.tsv", ["label", "u", "v", "r", "exists", "residual", "note"], rows)
    return 0


def cmd_turing(cfg: RunConfig, outdir: Path, _seed, _threads) -> int:
    p = params_from_config(cfg)
    D = turing.DiffusionMatrix(p.d1, p.d2, p.d3)
    verdicts = turing.turing_unstable(p, D)
    k2_max = cfg.get("experiment", "k2_max")
    k2_count = cfg.get("experiment", "k2_count")
    k2_grid = np.linspace(0.0, k2_max, k2_count)
    items = []
    for i, ver in enumerate(verdicts):
        prefix = f"root{i}."
        items += [
            (prefix + "point", ver.point),
            (prefix + "stable_without_diffusion", ver.stable_without_diffusion),
            (prefix + "condition_DD_or_CC", ver.condition_DD_or_CC),
            (prefix + "gmin_negative", ver.gmin_negative),
            (prefix + "turing_unstable", ver.turing_unstable),
            (prefix + "k2_T", ver.k2_T),
            (prefix + "offending_function", ver.offending_function),
            (prefix + "marginal", ver.marginal),
            (prefix + "notes", ver.notes),
        ]
        for which, br in ver.per_branch.items():
            for key in (
                "HH",
                "DD",
                "CC",
                "BB",
                "k2_T",
                "g_at_min",
                "g_min_closed_form",
                "closed_form_sign_disagrees",
                "satisfies_all",
            ):
                items.append((f"{prefix}{which}.{key}", br[key]))
        if ver.point is not None:
            J = equilibria.jacobian(StatePoint(*ver.point), p)
            write_matrix(
                outdir / f"dispersion-root{i}.tsv",
                turing.dispersion_table(J, D, k2_grid),
                col_axis=["k2", "mu0", "hurwitz", "max_re_lambda"],
            )
    write_keyvalues(outdir / "verdict.txt", items)
    return 0


def cmd_turing_table(cfg: RunConfig, outdir: Path, _seed, threads: int) -> int:
    p = params_from_config(cfg)
    D = turing.DiffusionMatrix(p.d1, p.d2, p.d3)
    m_values = cfg.get("experiment", "m_values")
    if m_values is None:
        m_values = [0.0, 0.1, 0.2, 0.3, 0.4, 0.5]

    def one(m: float):
        q = p.with_m(m)
        eq = equilibria.interior_equilibrium(q)
        if not eq.exists:
            return (m, "", "", "", "", "no interior equilibrium")
        J = equilibria.jacobian(eq.point, q)
        c = turing.dispersion_cubic(J, D)
        mu0 = c.mu0(0.0)
        hur = c.hurwitz(0.0)
        stable = turing.routh_hurwitz_stable(c, 0.0)
        comment = "patterns may occur" if stable else "no patterns"
        return (m, _sign_char(mu0), _sign_char(hur), mu0, hur, comment)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(one, m_values))
    else:
        rows = [one(m) for m in m_values]
    write_table(
        outdir / "table.tsv",
        ["m", "sign_mu0_k0", "sign_hurwitz_k0", "mu0_k0", "hurwitz_k0", "comment"],
        rows,
    )
    return 0


def _write_snapshots_1d(res, outdir: Path) -> None:
    x = res.grid.nodes
    for s in res.snapshots:
        f = s.fields
        path = outdir / f"snap-t{s.t:012.4f}.tsv"
        with open(path, "w") as fh:
            fh.write(f"# t = {_fmt(s.t)}\n")
            fh.write(SEP.join(["x", "u", "v", "r"]) + "\n")
            for i in range(len(x)):
                fh.write(SEP.join(_fmt(val) for val in (x[i], f[0, i], f[1, i], f[2, i])) + "\n")
    # space-time matrices, one per field: rows = snapshot times, cols = nodes
    times = np.array([s.t for s in res.snapshots])
    for f_idx, name in enumerate(("u", "v", "r")):
        M = np.stack([s.fields[f_idx] for s in res.snapshots])
        write_matrix(outdir / f"{name}_xt.tsv", M, row_axis=times, col_axis=x)


def cmd_sim1d(cfg: RunConfig, outdir: Path, seed, _threads) -> int:
    p = params_from_config(cfg)
    eq = equilibria.interior_equilibrium(p)
    if not eq.exists:
        raise ConfigError(f"no interior equilibrium for these parameters: {eq.existence_notes}")
    grid = build_grid(cfg.get("grid", "N"))
    eps = (cfg.get("init", "eps1"), cfg.get("init", "eps2"), cfg.get("init", "eps3"))
    init = init_perturbation(eq.point, eps, cfg.get("init", "wavenumber"), grid)
    ctrl = StepControl(atol=cfg.get("time", "atol"), rtol=cfg.get("time", "rtol"))
    res = run1d(p, init, grid, cfg.get("time", "t_end"), cfg.get("time", "snapshot_every"), ctrl)
    _write_snapshots_1d(res, outdir)
    label = classify_pattern(res.snapshots) if len(res.snapshots) >= 2 else "n/a"
    write_keyvalues(
        outdir / "classification.txt",
        [
            ("pattern", label),
            ("negativity_flagged", res.negativity_flagged),
            ("min_value", res.min_value),
            ("steps", res.steps),
            ("equilibrium", eq.point.as_tuple()),
        ],
    )
    return 0


def cmd_sim2d(cfg: RunConfig, outdir: Path, seed, _threads) -> int:
    p = params_from_config(cfg)
    eq = equilibria.interior_equilibrium(p)
    if not eq.exists:
        raise ConfigError(f"no interior equilibrium for these parameters: {eq.existence_notes}")
    grid = Grid2D(
        cfg.get("grid", "nx"),
        cfg.get("grid", "ny"),
        cfg.get("grid", "dx"),
        cfg.get("grid", "dy"),
        cfg.get("grid", "dt"),
    )
    grid.validate_for(p)
    if cfg.get("init", "kind") == "random":
        init = init_random(eq.point, grid, cfg.get("init", "amplitude"), seed)
    else:
        eps = (cfg.get("init", "eps1"), cfg.get("init", "eps2"), cfg.get("init", "eps3"))
        init = init_cos2(eq.point, grid, eps, cfg.get("init", "wavenumber"))
    res = run2d(p, init, grid, cfg.get("time", "t_end"), cfg.get("time", "snapshot_every"))
    for s_idx, s in enumerate(res.snapshots):
        for name, f in zip(("u", "v", "r"), s.fields()):
            write_matrix(outdir / f"{name}-{s_idx:04d}.tsv", f)
        write_keyvalues(
            outdir / f"meta-{s_idx:04d}.txt",
            [("t", s.t), ("nx", grid.nx), ("ny", grid.ny), ("dx", grid.dx), ("dy", grid.dy)],
        )
    label = classify_pattern(res.snapshots) if len(res.snapshots) >= 2 else "n/a"
    final_u = res.final().u
    write_keyvalues(
        outdir / "classification.txt",
        [
            ("pattern", label),
            ("spatial_std_u_final", float(final_u.std())),
            ("negativity_flagged", res.negativity_flagged),
            ("min_value", res.min_value),
            ("equilibrium", eq.point.as_tuple()),
        ],
    )
    return 0


def cmd_decay(cfg: RunConfig, outdir: Path, _seed, _threads) -> int:
    p = params_from_config(cfg)
    m_values = cfg.get("experiment", "m_values")
    if m_values is None:
        if cfg.get("experiment", "full_protocol"):
            count, m_max = 121, cfg.get("experiment", "m_max")
            dc = DecayConfig(N=256, t_end=10_000.0)
        else:
            count, m_max = cfg.get("experiment", "m_count"), cfg.get("experiment", "m_max")
            dc = DecayConfig(N=cfg.get("grid", "N"), t_end=cfg.get("time", "t_end"))
        m_values = list(np.linspace(0.0, m_max, count))
    else:
        dc = DecayConfig(N=cfg.get("grid", "N"), t_end=cfg.get("time", "t_end"))
    dc.snapshot_every = cfg.get("time", "snapshot_every")
    dc.eps = (cfg.get("init", "eps1"), cfg.get("init", "eps2"), cfg.get("init", "eps3"))
    dc.wavenumber = cfg.get("init", "wavenumber")
    dc.atol = cfg.get("time", "atol")
    dc.rtol = cfg.get("time", "rtol")
    records, raw, loglog = decay_experiment(p, m_values, config=dc)
    write_table(
        outdir / "records.tsv",
        ["m", "err_u", "err_v", "err_r", "err_combined", "steady", "note"],
        [
            (rec.m, rec.h1_error_u, rec.h1_error_v, rec.h1_error_r, rec.combined, rec.steady, rec.note)
            for rec in records
        ],
    )
    items = []
    for name, fit in (("raw", raw), ("loglog", loglog)):
        items += [
            (f"{name}.slope", fit.slope),
            (f"{name}.intercept", fit.intercept),
            (f"{name}.correlation", fit.correlation),
            (f"{name}.ci95_slope_low", fit.ci95_slope[0]),
            (f"{name}.ci95_slope_high", fit.ci95_slope[1]),
            (f"{name}.ci95_intercept_low", fit.ci95_intercept[0]),
            (f"{name}.ci95_intercept_high", fit.ci95_intercept[1]),
            (f"{name}.n_used", fit.n_used),
            (f"{name}.excluded", fit.excluded),
        ]
    write_keyvalues(outdir / "fits.txt", items)
    return 0


def cmd_overexploit(cfg: RunConfig, outdir: Path, _seed, _threads) -> int:
    p = params_from_config(cfg)
    init = StatePoint(cfg.get("scenario", "u0"), cfg.get("scenario", "v0"), cfg.get("scenario", "r0"))
    out = overexploitation_scenario(
        cfg.get("scenario", "kind"),
        p,
        init,
        cfg.get("time", "t_end"),
        N=cfg.get("scenario", "N"),
        snapshot_every=cfg.get("time", "snapshot_every"),
    )
    items = [
        ("kind", out.kind),
        ("reached", out.reached),
        ("hypotheses_satisfied", out.hypotheses_satisfied),
        ("sup_u_final", out.limits[0]),
        ("sup_v_final", out.limits[1]),
        ("sup_r_final", out.limits[2]),
        ("time_to_threshold", out.time_to_threshold),
        ("target_r", out.target),
        ("notes", out.notes),
    ]
    for name, ok, detail in out.precondition_report:
        items.append((f"precondition[{name}]", f"{'ok' if ok else 'FAILED'} ({detail})"))
    write_keyvalues(outdir / "outcome.txt", items)
    return 0


DISPATCH = {
    "equilibria": cmd_equilibria,
    "turing": cmd_turing,
    "turing-table": cmd_turing_table,
    "sim1d": cmd_sim1d,
    "sim2d": cmd_sim2d,
    "decay": cmd_decay,
    "overexploit": cmd_overexploit,
}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="alleechain",
        description="Food-chain pattern laboratory: equilibria, Turing analysis, simulations, experiments.",
    )
    parser.add_argument("command", choices=sorted(DISPATCH))
    parser.add_argument("--config", required=True, help="path to a sectioned key = value config file")
    parser.add_argument("--out", default="runs", help="base output directory (default: ./runs)")
    parser.add_argument("--seed", type=int, default=None, help="overrides [init] seed")
    parser.add_argument("--threads", type=int, default=1, help="worker threads for independent sub-runs")
    args = parser.parse_args(argv)

    try:
        text = Path(args.config).read_text()
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return 2
    try:
        cfg = parse_config(text, args.command)
        seed = args.seed if args.seed is not None else cfg.get("init", "seed")
        cfg.set("init", "seed", seed)
        threads = max(1, args.threads)
        outdir = make_run_dir(Path(args.out), args.command)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    (outdir / "config.echo.ini").write_text(cfg.effective_text())
    try:
        status = DISPATCH[args.command](cfg, outdir, seed, threads)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        (outdir / "error.txt").write_text(f"config error: {exc}\n")
        return 2
    except SolverError as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        (outdir / "error.txt").write_text(f"runtime error: {exc}\n")
        return 3
    print(f"wrote {outdir}")
    return status


if __name__ == "__main__":
    sys.exit(main())
