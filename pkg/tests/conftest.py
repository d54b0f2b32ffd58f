"""Shared fixtures: parameter draws and reference kinetics.

The reference kinetics below are written independently of the package
(straight from the model display, scalar arithmetic only) so that tests
can cross-check the vectorized implementation against a second route.
"""

import numpy as np
import pytest

from alleechain.model import Params
from alleechain.equilibria import interior_equilibrium


def reference_kinetics(u, v, r, p):
    """Scalar kinetics evaluated term by term; 0/0 ratios -> 0."""
    q1 = 0.0 if u + v == 0.0 else u * v / (u + v)
    q2 = 0.0 if v + r == 0.0 else v * r / (v + r)
    fu = u * (1.0 - u) - p.w1 * q1
    fv = -p.a2 * v + p.w2 * q1 - p.w3 * q2
    fr = r * (r - p.m) * (p.c - p.w4 * r / (v + p.D3))
    return fu, fv, fr


def random_params(rng, with_diffusion=False):
    """One random admissible parameter set (no equilibrium guarantees)."""
    kw = dict(
        w1=rng.uniform(0.3, 2.0),
        w2=rng.uniform(0.1, 2.0),
        w3=rng.uniform(0.1, 2.5),
        w4=rng.uniform(0.1, 2.0),
        a2=rng.uniform(0.005, 0.5),
        c=rng.uniform(0.05, 1.0),
        D3=rng.uniform(0.05, 0.5),
        m=rng.uniform(0.0, 0.6),
    )
    if with_diffusion:
        kw.update(
            d1=10.0 ** rng.uniform(-4, -2),
            d2=10.0 ** rng.uniform(-6, -4),
            d3=10.0 ** rng.uniform(-6, -4),
        )
    return Params(**kw)


def random_params_with_interior(rng, n, with_diffusion=False):
    """Draw until n parameter sets with an existing interior equilibrium."""
    out = []
    attempts = 0
    while len(out) < n:
        attempts += 1
        if attempts > 200 * n:
            raise RuntimeError("interior-equilibrium draws are too rare; widen the ranges")
        p = random_params(rng, with_diffusion=with_diffusion)
        eq = interior_equilibrium(p)
        if eq.exists:
            out.append((p, eq))
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(20260815)
