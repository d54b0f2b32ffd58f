#!/usr/bin/env python3
"""
=======================================================
A tour of the nine spatially uniform states
=======================================================

The kinetics admit up to nine nonnegative equilibria: total extinction,
prey-only, several faces with one species missing, an Allee-pinned state
with the top predator held at its threshold, and full coexistence.  This
script enumerates them for the wave-instability preset, checks residuals,
and shows two structural facts worth knowing before any PDE run:

* the coexistence prey level solves a cubic whose coefficients do not
  involve the Allee threshold m, so varying m moves only v and r;
* coexistence requires the prey level to sit inside (1 - w1, 1).
"""

import numpy as np

from alleechain.equilibria import all_equilibria, interior_equilibrium
from alleechain.model import Params

WAVE = Params(w1=0.96, w2=0.52, w3=1.06, w4=0.37, a2=0.014, c=0.1, D3=0.1,
              m=0.01, d1=1e-3, d2=1e-5, d3=1e-5)

print("wave-instability preset:", WAVE)
print()
print(f"{'label':6s} {'u':>12s} {'v':>12s} {'r':>12s} {'exists':>7s} {'residual':>10s}  note")
for eq in all_equilibria(WAVE):
    res = f"{eq.residual(WAVE):.2e}" if eq.exists else "-"
    print(
        f"{eq.label:6s} {eq.point.u:12.8f} {eq.point.v:12.8f} {eq.point.r:12.8f}"
        f" {str(eq.exists):>7s} {res:>10s}  {eq.existence_notes}"
    )

# the coexistence cubic ignores m: sweep m and watch u* stay put
print()
print("coexistence state as the Allee threshold m varies:")
for m in (0.0, 0.01, 0.05, 0.1, 0.2):
    eq = interior_equilibrium(WAVE.with_m(m))
    if eq.exists:
        u, v, r = eq.point.as_tuple()
        flag = "  <- r* fell below m, still admissible" if r < m else ""
        print(f"  m = {m:4.2f}:  u* = {u:.12f}  v* = {v:.8f}  r* = {r:.8f}{flag}")
    else:
        print(f"  m = {m:4.2f}:  no interior equilibrium ({eq.existence_notes})")

eq = interior_equilibrium(WAVE)
print()
print(f"admissibility window for the prey level: ({1 - WAVE.w1:.4f}, 1)")
print(f"selected root u* = {eq.point.u:.12f} lies inside; all candidate roots:")
for u, v, r in eq.candidates:
    print(f"  u = {u:.12f}  v = {v:.8f}  r = {r:.8f}")
