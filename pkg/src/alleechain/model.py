"""Parameter sets and pointwise reaction kinetics.

The nondimensional model describes a food chain of a prey u, a middle
predator v feeding on u, and a top predator r feeding on v.  Both
predation terms are ratio-dependent (they saturate in the ratio of
consumer to resource), and the top predator carries a strong Allee
effect with threshold m:

    du/dt = d1 Lap(u) + u - u^2 - w1 * u v / (u + v)
    dv/dt = d2 Lap(v) - a2 v + w2 * u v / (u + v) - w3 * v r / (v + r)
    dr/dt = d3 Lap(r) + r (r - m) (c - w4 r / (v + D3))

on a domain with zero-flux boundaries.  The ratio terms are extended
continuously by 0 at the origin; no regularizing epsilon is added to
any denominator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np


@dataclass(frozen=True)
class DimensionalParams:
    """Dimensional model inputs prior to rescaling.

    a1: prey growth rate (1/time); b1: prey competition (1/(density*time));
    a2_dim: middle-predator death rate (1/time); a3: residual-loss density;
    c_dim: top-predator self-reproduction; m_dim: Allee threshold (density);
    cap1, conv2, cap3, lim4: maximum per-capita rates of capture of prey,
    conversion to middle predator, capture of middle predator, and top
    predator self-limitation; beta1, beta3: handling-time parameters;
    diff_u, diff_v, diff_r: diffusivities (length^2/time); length: domain size.
    """

    a1: float
    b1: float
    a2_dim: float
    a3: float
    c_dim: float
    m_dim: float
    cap1: float
    conv2: float
    cap3: float
    lim4: float
    beta1: float
    beta3: float
    diff_u: float
    diff_v: float
    diff_r: float
    length: float

    def __post_init__(self):
        for name, val in self.__dict__.items():
            if not (val > 0.0) or not math.isfinite(val):
                raise ValueError(f"DimensionalParams.{name} must be strictly positive, got {val}")


@dataclass(frozen=True)
class Params:
    """Nondimensional parameters of the food-chain model.

    w1: capture rate of prey by the middle predator;
    w2: middle-predator growth from prey consumption;
    w3: capture rate of middle predator by the top predator;
    w4: top-predator density regulation; a2: middle-predator mortality;
    c: top-predator growth scale; D3: interference saturation of the top
    predator; m: Allee threshold (m = 0 allowed as the no-Allee limit);
    d1, d2, d3: diffusivities.
    """

    w1: float
    w2: float
    w3: float
    w4: float
    a2: float
    c: float
    D3: float
    m: float
    d1: float = 0.0
    d2: float = 0.0
    d3: float = 0.0

    def __post_init__(self):
        for name in ("w1", "w2", "w3", "w4", "a2", "c", "D3"):
            val = getattr(self, name)
            if not (val > 0.0) or not math.isfinite(val):
                raise ValueError(f"Params.{name} must be strictly positive, got {val}")
        for name in ("m", "d1", "d2", "d3"):
            val = getattr(self, name)
            if val < 0.0 or not math.isfinite(val):
                raise ValueError(f"Params.{name} must be nonnegative, got {val}")
        if self.m > 1.0:
            raise ValueError(f"Params.m must lie in [0, 1], got {self.m}")

    def with_m(self, m: float) -> "Params":
        return replace(self, m=m)

    def diffusion(self) -> tuple[float, float, float]:
        return (self.d1, self.d2, self.d3)


@dataclass(frozen=True)
class StatePoint:
    """A spatially homogeneous state (u, v, r), componentwise >= 0."""

    u: float
    v: float
    r: float

    def __post_init__(self):
        if self.u < 0 or self.v < 0 or self.r < 0:
            raise ValueError(f"StatePoint must be nonnegative, got {(self.u, self.v, self.r)}")

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.u, self.v, self.r)


def nondimensionalize(p: DimensionalParams) -> Params:
    """Map dimensional inputs to the nondimensional parameter set.

    Time is scaled by the prey growth rate, densities by the prey
    carrying scale and the handling parameters, and space so that the
    domain becomes (0, pi).
    """
    a1 = p.a1
    scale = p.b1 * p.length ** 2
    return Params(
        w1=p.cap1 / (p.beta1 * a1),
        w2=p.conv2 / a1,
        w3=p.cap3 / (p.beta3 * a1),
        w4=p.lim4 * p.b1 / (p.b1 ** 2 * p.beta1 * p.beta3 ** 2),
        a2=p.a2_dim / a1,
        c=p.c_dim * a1 / (a1 * p.b1 * p.beta1 * p.beta3),
        D3=p.a3 * p.b1 * p.beta1 / a1,
        m=p.m_dim * p.b1 * p.beta1 * p.beta3 / a1,
        d1=p.diff_u * math.pi ** 2 / scale,
        d2=p.diff_v * math.pi ** 2 / (scale * p.beta1),
        d3=p.diff_r * math.pi ** 2 / (scale * p.beta1 * p.beta3),
    )


def ratio_response(x, y):
    """x*y/(x+y) extended continuously by 0 where x + y = 0.

    Accepts scalars or numpy arrays (elementwise); inputs must be >= 0.
    """
    xa = np.asarray(x, dtype=float)
    ya = np.asarray(y, dtype=float)
    if np.any(xa < 0) or np.any(ya < 0):
        raise ValueError("ratio_response requires nonnegative inputs")
    s = xa + ya
    out = np.divide(xa * ya, s, out=np.zeros_like(s), where=s > 0)
    if np.isscalar(x) and np.isscalar(y):
        return float(out)
    return out


def reaction(u, v, r, p: Params):
    """Pointwise kinetics (fu, fv, fr); vectorized over arrays.

    The ratio quotients are evaluated with the 0/0 -> 0 extension, so
    boundary states such as (0,0,0) and (1,0,0) are genuine fixed points.
    """
    uu = np.asarray(u, dtype=float)
    vv = np.asarray(v, dtype=float)
    rr = np.asarray(r, dtype=float)
    q_uv = _safe_ratio(uu, vv)
    q_vr = _safe_ratio(vv, rr)
    fu = uu - uu * uu - p.w1 * q_uv
    fv = -p.a2 * vv + p.w2 * q_uv - p.w3 * q_vr
    fr = rr * (rr - p.m) * (p.c - p.w4 * rr / (vv + p.D3))
    if np.isscalar(u) and np.isscalar(v) and np.isscalar(r):
        return (float(fu), float(fv), float(fr))
    return (fu, fv, fr)


def _safe_ratio(x, y):
    # like ratio_response but without the sign check (hot path; callers
    # may hold tiny negative roundoff which the solvers flag separately)
    s = x + y
    return np.divide(x * y, s, out=np.zeros_like(s), where=s != 0)


def reaction_state(s: StatePoint, p: Params) -> tuple[float, float, float]:
    return reaction(s.u, s.v, s.r, p)
