#!/usr/bin/env python3
"""
=======================================================
Pattern response to a small Allee threshold
=======================================================

On the stationary branch the base kinetics (m = 0) freeze into a fixed
spatial pattern.  Switching on a small threshold m perturbs that
pattern; the distance between the perturbed and the reference profile,
measured in an H1 norm, grows linearly in m.  All columns of the sweep
share one batched time integration, so slow residual drift of the
pattern is common-mode and cancels in the differences.

This demo runs a reduced protocol (N = 64 nodes, t = 300) so it
finishes in seconds; the library default integrates N = 128 to t = 2000
with 13 columns, where the log-log slope lands within one percent of 1.
"""

import numpy as np

from alleechain.analysis import DecayConfig, decay_experiment
from alleechain.presets import STEADY_BRANCH


def main():
    ms = np.linspace(0.0, 0.003, 7)
    cfg = DecayConfig(N=64, t_end=300.0, snapshot_every=50.0)
    print(f"base set: stationary branch, m = 0; sweep m in [0, {ms[-1]:g}], {len(ms)} columns")
    print(f"grid N = {cfg.N}, horizon t = {cfg.t_end:g} (reduced; default is N = 128, t = 2000)")
    print()

    records, raw, loglog = decay_experiment(STEADY_BRANCH, ms, config=cfg)

    print(f"{'m':>10} {'|H1 diff|':>12} {'u':>10} {'v':>10} {'r':>10}  note")
    for rec in records:
        print(
            f"{rec.m:10.6f} {rec.combined:12.4e} {rec.h1_error_u:10.3e}"
            f" {rec.h1_error_v:10.3e} {rec.h1_error_r:10.3e}  {rec.note or 'frozen'}"
        )

    print()
    print(f"raw fit     : slope = {raw.slope:.4f}  corr = {raw.correlation:.6f}")
    print(f"              95% CI on slope = ({raw.ci95_slope[0]:.4f}, {raw.ci95_slope[1]:.4f})")
    print(
        f"log-log fit : slope = {loglog.slope:.4f}  corr = {loglog.correlation:.6f}"
        f"  (n = {loglog.n_used}, excluded = {loglog.excluded})"
    )
    print(f"              95% CI on slope = ({loglog.ci95_slope[0]:.4f}, {loglog.ci95_slope[1]:.4f})")
    print()
    print("log-log slope near 1: the pattern's response to the threshold is first order in m")
    print("(short horizons distort the measured exponent by ~10%; the full protocol gives ~1.01)")


if __name__ == "__main__":
    main()
