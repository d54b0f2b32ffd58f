"""Steady states of the kinetic system and the Jacobian.

The reaction kinetics admit up to nine nonnegative equilibria: total
extinction, prey-only, two top-predator-only states (at the Allee
threshold and at the v = 0 carrying level c*D3/w4), a prey/middle-
predator state, two prey + top-predator states, a full-chain state with
the top predator pinned at the Allee threshold, and the interior
coexistence state.  The last two come from cubic equations in u.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .model import Params, StatePoint, reaction

RESIDUAL_TOL = 1e-10

# canonical table labels, in the order the equilibria are enumerated
LABELS = ("E0", "E1", "E2", "E3", "E4", "E5", "E6", "E7", "E8")


@dataclass(frozen=True)
class Equilibrium:
    label: str
    point: StatePoint
    exists: bool
    existence_notes: str = ""
    # for the cubic-rooted states: every admissible candidate (u, v, r)
    candidates: tuple = field(default_factory=tuple)

    def residual(self, p: Params) -> float:
        return max(abs(f) for f in reaction(self.point.u, self.point.v, self.point.r, p))


@dataclass(frozen=True)
class CubicCoefficients:
    """Coefficients of c3*u^3 + c2*u^2 + c1*u + c0."""

    c3: float
    c2: float
    c1: float
    c0: float

    def as_array(self) -> np.ndarray:
        return np.array([self.c3, self.c2, self.c1, self.c0], dtype=float)

    def __call__(self, u):
        return ((self.c3 * u + self.c2) * u + self.c1) * u + self.c0


def cubic_real_roots(c: CubicCoefficients, multiplicity_tol: float = 1e-7):
    """All real roots of a cubic, Newton-polished, with multiplicities.

    Closed-form solve (depressed-cubic trigonometric / Cardano branches)
    followed by Newton refinement until the residual is below
    1e-13 * max(1, |coefficients|).  Returns a list of (root, multiplicity).
    """
    if c.c3 == 0.0:
        raise ValueError("cubic_real_roots requires c3 != 0")
    a = c.c2 / c.c3
    b = c.c1 / c.c3
    d = c.c0 / c.c3
    # depressed form t^3 + p t + q with u = t - a/3
    p = b - a * a / 3.0
    q = 2.0 * a ** 3 / 27.0 - a * b / 3.0 + d
    shift = -a / 3.0
    disc = (q / 2.0) ** 2 + (p / 3.0) ** 3
    roots: list[float] = []
    if disc > 0.0:
        s = math.sqrt(disc)
        t = math.copysign(abs(-q / 2.0 + s) ** (1.0 / 3.0), -q / 2.0 + s) + math.copysign(
            abs(-q / 2.0 - s) ** (1.0 / 3.0), -q / 2.0 - s
        )
        roots = [t + shift]
    elif disc == 0.0:
        if q == 0.0:
            roots = [shift, shift, shift]
        else:
            t1 = math.copysign(abs(q / 2.0) ** (1.0 / 3.0), q / 2.0)
            roots = [-2.0 * t1 + shift, t1 + shift, t1 + shift]
    else:
        # three distinct real roots
        rho = math.sqrt(-(p ** 3) / 27.0)
        theta = math.acos(max(-1.0, min(1.0, -q / (2.0 * rho))))
        mag = 2.0 * math.sqrt(-p / 3.0)
        roots = [mag * math.cos((theta + 2.0 * math.pi * k) / 3.0) + shift for k in range(3)]

    scale = max(1.0, abs(c.c3), abs(c.c2), abs(c.c1), abs(c.c0))
    coeffs = c.as_array()
    dcoeffs = np.array([3.0 * c.c3, 2.0 * c.c2, c.c1])
    polished = []
    for r0 in roots:
        r = r0
        for _ in range(50):
            f = np.polyval(coeffs, r)
            if abs(f) < 1e-13 * scale:
                break
            df = np.polyval(dcoeffs, r)
            if df == 0.0:
                break
            step = f / df
            r -= step
            if abs(step) < 1e-16 * max(1.0, abs(r)):
                break
        polished.append(r)
    polished.sort()
    # group nearly identical polished roots into multiplicities
    grouped: list[tuple[float, int]] = []
    for r in polished:
        if grouped and abs(r - grouped[-1][0]) < multiplicity_tol * max(1.0, abs(r)):
            prev, mult = grouped[-1]
            grouped[-1] = ((prev * mult + r) / (mult + 1), mult + 1)
        else:
            grouped.append((r, 1))
    return grouped


def boundary_equilibria(p: Params) -> list[Equilibrium]:
    """The seven non-interior steady states (labels E0-E6)."""
    out = []
    out.append(Equilibrium("E0", StatePoint(0.0, 0.0, 0.0), True, "total extinction"))
    out.append(Equilibrium("E1", StatePoint(1.0, 0.0, 0.0), True, "prey only"))
    r_cap = p.c * p.D3 / p.w4
    if p.m > 0.0:
        out.append(Equilibrium("E2", StatePoint(0.0, 0.0, p.m), True, "top predator at Allee threshold"))
    else:
        out.append(
            Equilibrium("E2", StatePoint(0.0, 0.0, 0.0), False, "m = 0: coincides with total extinction")
        )
    out.append(Equilibrium("E3", StatePoint(0.0, 0.0, r_cap), True, "top predator at carrying level"))

    # prey + middle predator: u = (w2 - w1 w2 + a2 w1)/w2, v = (w2 - a2) u / a2
    exists4 = (p.w2 > p.w1 * (p.w2 - p.a2)) and (p.w2 > p.a2)
    if exists4:
        u4 = (p.w2 - p.w1 * p.w2 + p.a2 * p.w1) / p.w2
        v4 = (p.w2 - p.a2) * u4 / p.a2
        out.append(Equilibrium("E4", StatePoint(u4, v4, 0.0), True, "prey and middle predator"))
    else:
        why = []
        if not (p.w2 > p.w1 * (p.w2 - p.a2)):
            why.append("w2 <= w1*(w2 - a2)")
        if not (p.w2 > p.a2):
            why.append("w2 <= a2")
        out.append(Equilibrium("E4", StatePoint(0.0, 0.0, 0.0), False, "; ".join(why)))

    out.append(Equilibrium("E5", StatePoint(1.0, 0.0, r_cap), True, "prey with top predator at carrying level"))
    if p.m > 0.0:
        out.append(Equilibrium("E6", StatePoint(1.0, 0.0, p.m), True, "prey with top predator at Allee threshold"))
    else:
        out.append(
            Equilibrium("E6", StatePoint(1.0, 0.0, 0.0), False, "m = 0: coincides with prey-only state")
        )
    return out


def allee_pinned_cubic(p: Params) -> CubicCoefficients:
    """Cubic n1*u^3 + n2*u^2 + n3*u + n4 in u for the full-chain state
    with r pinned at the Allee threshold.  The grouping of n3 is kept
    exactly as derived; the kinetics-residual check arbitrates it.
    """
    w1, w2, w3, a2, m = p.w1, p.w2, p.w3, p.a2, p.m
    n1 = w2
    n2 = -(a2 * w1 + w2 * (2.0 + m - w1))
    n3 = (
        a2 * w1
        - w1 * w2
        + w2
        + m * w1 * w3
        - m * (-a2 * w1 + 2.0 * w2 * (w1 - 1.0))
    )
    n4 = m * (w1 - 1.0) * (w2 + w1 * (w3 - (w2 - a2)))
    return CubicCoefficients(n1, n2, n3, n4)


def coexistence_with_allee(p: Params) -> Equilibrium:
    """Full-chain steady state with the top predator at the Allee threshold."""
    if p.m <= 0.0:
        return Equilibrium(
            "E7", StatePoint(0.0, 0.0, 0.0), False, "requires m > 0 (degenerate threshold at m = 0)"
        )
    if p.w1 >= 1.0:
        return Equilibrium("E7", StatePoint(0.0, 0.0, 0.0), False, "w1 >= 1: admissibility window empty")
    cub = allee_pinned_cubic(p)
    roots = cubic_real_roots(cub)
    cands = []
    for u, _mult in roots:
        if (1.0 - p.w1) < u < 1.0:
            v = (1.0 - u) * u / (p.w1 + u - 1.0)
            if v > 0.0:
                cands.append((u, v, p.m))
    if not cands:
        return Equilibrium("E7", StatePoint(0.0, 0.0, 0.0), False, "no cubic root in (1-w1, 1)")
    note = "top predator pinned at Allee threshold"
    if len(cands) > 1:
        note += f"; {len(cands)} admissible roots, smallest u used"
    u, v, r = cands[0]
    return Equilibrium("E7", StatePoint(u, v, r), True, note, tuple(cands))


def interior_cubic(p: Params) -> CubicCoefficients:
    """Cubic a1*u^3 - a2*u^2 - a3*u - a4 = 0 for the interior state."""
    w1, w2, w3, w4, a2, c, D3 = p.w1, p.w2, p.w3, p.w4, p.a2, p.c, p.D3
    al1 = w2 * (w4 + c)
    al2 = w4 * (a2 * w1 - w1 * w2 + 2.0 * w2) + c * (w2 * (2.0 + D3) + w1 * (w3 + a2 - w2))
    al3 = (
        -w2 * (w4 + c)
        - c * D3 * w1 * (w3 + (a2 - 2.0 * w2))
        - (w1 * (a2 - w2) * w4 + c * (2.0 * D3 * w2 + w1 * (w3 + a2 - w2)))
    )
    al4 = -c * D3 * (w1 - 1.0) * (w2 + w1 * (w3 + a2 - w2))
    return CubicCoefficients(al1, -al2, -al3, -al4)


def interior_equilibrium(p: Params) -> Equilibrium:
    """Interior coexistence state (u*, v*, r*), all components positive.

    u* is an admissible root of the interior cubic with
    (1 - w1) < u* < 1 (requires w1 < 1); then
    v* = (1 - u*) u* / (w1 + u* - 1) and r* = c (v* + D3) / w4.
    All admissible candidates are surfaced; the smallest u* is marked used.
    """
    if p.w1 >= 1.0:
        return Equilibrium("E8", StatePoint(0.0, 0.0, 0.0), False, "w1 >= 1: admissibility window empty")
    cub = interior_cubic(p)
    roots = cubic_real_roots(cub)
    cands = []
    for u, _mult in roots:
        if (1.0 - p.w1) < u < 1.0:
            v = (1.0 - u) * u / (p.w1 + u - 1.0)
            r = p.c * (v + p.D3) / p.w4
            if v > 0.0 and r > 0.0:
                cands.append((u, v, r))
    if not cands:
        return Equilibrium("E8", StatePoint(0.0, 0.0, 0.0), False, "no cubic root in (1-w1, 1)")
    note = "interior coexistence"
    if len(cands) > 1:
        note += f"; {len(cands)} admissible roots, smallest u used (ambiguous)"
    u, v, r = cands[0]
    return Equilibrium("E8", StatePoint(u, v, r), True, note, tuple(cands))


def all_equilibria(p: Params) -> list[Equilibrium]:
    """All nine candidate steady states in table order E0..E8."""
    out = boundary_equilibria(p)
    out.append(coexistence_with_allee(p))
    out.append(interior_equilibrium(p))
    return out


def jacobian(s: StatePoint, p: Params) -> np.ndarray:
    """3x3 Jacobian of the kinetics at s.

    The (2,2) and (3,3) entries use the equilibrium-reduced forms, which
    are exact only at states satisfying the steady-state relations (the
    finite-difference cross-check therefore applies at the interior
    equilibrium).  The (1,3) and (3,1) entries vanish structurally: the
    prey and the top predator do not interact directly.
    """
    u, v, r = s.u, s.v, s.r
    uv = u + v
    vr = v + r
    if uv == 0.0:
        j11, j12, j21 = _origin_limit_uv(p)
    else:
        j11 = u * (-1.0 + p.w1 * v / uv ** 2)
        j12 = -p.w1 * u ** 2 / uv ** 2
        j21 = p.w2 * v ** 2 / uv ** 2
    if vr == 0.0:
        j22_pred, j23 = 0.0, 0.0
    else:
        j22_pred = v * p.w3 * r / vr ** 2
        j23 = -p.w3 * v ** 2 / vr ** 2
    if uv == 0.0:
        j22 = j22_pred
    else:
        j22 = v * (-p.w2 * u / uv ** 2) + j22_pred
    j32 = r ** 2 * (r - p.m) * p.w4 / (v + p.D3) ** 2
    j33 = -r * (r - p.m) * p.w4 / (v + p.D3)
    return np.array([[j11, j12, 0.0], [j21, j22, j23], [0.0, j32, j33]])


def _origin_limit_uv(p: Params):
    # at u = v = 0 the ratio terms vanish identically along the axes;
    # the continuous extension has zero contribution from them
    return (0.0, 0.0, 0.0)


def jacobian_fd(s: StatePoint, p: Params, rel_step: float = 1e-6) -> np.ndarray:
    """Central finite-difference Jacobian of the kinetics (test oracle)."""
    x0 = np.array(s.as_tuple())
    J = np.zeros((3, 3))
    for j in range(3):
        h = rel_step * max(1.0, abs(x0[j]))
        xp = x0.copy()
        xm = x0.copy()
        xp[j] += h
        xm[j] -= h
        fp = np.array(reaction(xp[0], xp[1], xp[2], p))
        fm = np.array(reaction(xm[0], xm[1], xm[2], p))
        J[:, j] = (fp - fm) / (2.0 * h)
    return J
