#!/usr/bin/env python3
"""
=======================================================
Three long-time fates of the spatial food chain
=======================================================

Depending on how hard each level exploits the one below it, the chain
ends in one of three regimes:

  total extinction -- a greedy intermediate predator plus a top predator
      seeded below its Allee threshold wipes out all three species;
  prey recovery -- overwhelming top-predation removes the intermediate
      level, the prey relaxes to carrying capacity, and the top predator
      settles at the floor set by its alternative resource;
  persistence -- even with both prey levels absent, a top-predator
      population above the threshold survives on the alternative
      resource alone.

Each scenario checks its sufficient conditions up front (in the sup
norm), then integrates the full reaction-diffusion system and reports
what actually happened.
"""

from alleechain.analysis import (
    PERSISTENCE,
    PREY_RECOVERY,
    TOTAL_EXTINCTION,
    overexploitation_scenario,
)
from alleechain.model import Params, StatePoint
from alleechain.solver1d import StepControl

DIFF = dict(d1=1e-3, d2=1e-5, d3=1e-5)


def report(out):
    print("  preconditions:")
    for name, ok, detail in out.precondition_report:
        print(f"    [{name}] {'ok' if ok else 'FAILED'}  ({detail})")
    u, v, r = out.limits
    print(f"  final sup norms : u = {u:.3e}, v = {v:.3e}, r = {r:.3e}")
    if out.target is not None:
        print(f"  expected r level: {out.target:g}")
    if out.time_to_threshold is not None:
        print(f"  threshold hit at: t = {out.time_to_threshold:g}")
    print(f"  outcome reached : {out.reached}")
    if out.notes:
        print(f"  notes           : {out.notes}")
    print()


def main():
    print("--- total extinction ----------------------------------------")
    p = Params(w1=3.5, w2=0.3, w3=0.5, w4=1.0, a2=1.0, c=1.0, D3=0.1, m=0.5, **DIFF)
    out = overexploitation_scenario(
        TOTAL_EXTINCTION,
        p,
        StatePoint(0.1, 1.0, 0.01),
        t_end=30.0,
        snapshot_every=1.0,
        ctrl=StepControl(atol=1e-13, rtol=1e-6),
    )
    report(out)

    print("--- prey recovery -------------------------------------------")
    p = Params(w1=0.5, w2=0.5, w3=3.0, w4=1.0, a2=0.1, c=0.2, D3=0.1, m=0.2, **DIFF)
    out = overexploitation_scenario(PREY_RECOVERY, p, StatePoint(0.5, 0.2, 1.0), t_end=2000.0)
    report(out)

    print("--- persistence on the alternative resource -----------------")
    p = Params(w1=0.5, w2=0.5, w3=1.0, w4=1.0, a2=0.1, c=0.2, D3=0.1, m=0.0, **DIFF)
    print(f"resource floor c*D3/w4 = {p.c * p.D3 / p.w4:g}; top predator alone from r0 = 0.05 and 0.5")
    print()
    for r0 in (0.05, 0.5):
        print(f"  r0 = {r0}:")
        out = overexploitation_scenario(PERSISTENCE, p, StatePoint(0.0, 0.0, r0), t_end=1500.0)
        report(out)


if __name__ == "__main__":
    main()
