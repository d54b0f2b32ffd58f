"""Diffusion-driven (Turing) instability analysis of the interior state.

Linearizing about a spatially homogeneous steady state with Fourier
wavenumber k gives a cubic eigenvalue polynomial in lambda whose
coefficients are polynomials in k^2.  Instability can enter through the
constant coefficient mu0 (a stationary, pattern-forming branch) or
through the Hurwitz combination mu2*mu1 - mu0 (an oscillatory branch).
Both are cubics in k^2, G(k^2) = HH + DD k^2 + CC k^4 + BB k^6 with
BB > 0, minimized at

    k2_min = (-CC + sqrt(CC^2 - 3 BB DD)) / (3 BB).

The verdict operation checks, per branch: stability of the uniform
state at k = 0, the sign conditions (DD < 0 or CC < 0) together with
CC^2 - 3 BB DD > 0, and negativity of the minimum of G.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .equilibria import interior_equilibrium, jacobian
from .model import Params, StatePoint

MARGINAL_SCALE = 1e-12

STEADY = "stationary"  # instability through mu0
WAVE = "oscillatory"  # instability through mu2*mu1 - mu0
BRANCHES = (STEADY, WAVE)


@dataclass(frozen=True)
class DiffusionMatrix:
    d1: float
    d2: float
    d3: float

    def __post_init__(self):
        if min(self.d1, self.d2, self.d3) <= 0.0:
            raise ValueError("diffusivities must be strictly positive")

    def as_array(self):
        return np.array([self.d1, self.d2, self.d3])


@dataclass(frozen=True)
class DispersionCubic:
    """mu2, mu1, mu0 as polynomial coefficients in k^2 (descending order)."""

    mu2_poly: tuple  # degree 1: (k2, const)
    mu1_poly: tuple  # degree 2
    mu0_poly: tuple  # degree 3

    def mu2(self, k2):
        return np.polyval(self.mu2_poly, k2)

    def mu1(self, k2):
        return np.polyval(self.mu1_poly, k2)

    def mu0(self, k2):
        return np.polyval(self.mu0_poly, k2)

    def hurwitz(self, k2):
        return self.mu2(k2) * self.mu1(k2) - self.mu0(k2)


@dataclass(frozen=True)
class GCoefficients:
    """Cubic-in-k^2 coefficients G = HH + DD k^2 + CC k^4 + BB k^6."""

    which: str  # STEADY or WAVE
    HH: float
    DD: float
    CC: float
    BB: float

    def __call__(self, k2):
        return self.HH + k2 * (self.DD + k2 * (self.CC + k2 * self.BB))


@dataclass(frozen=True)
class TuringVerdict:
    stable_without_diffusion: bool
    condition_DD_or_CC: bool
    gmin_negative: bool
    turing_unstable: bool
    k2_T: float | None
    offending_function: str | None
    marginal: bool = False
    notes: str = ""
    per_branch: dict = field(default_factory=dict)
    point: tuple | None = None


def dispersion_cubic(J: np.ndarray, D: DiffusionMatrix) -> DispersionCubic:
    """Coefficients of lambda^3 + mu2 lambda^2 + mu1 lambda + mu0.

    Valid for the food-chain structure where J13 = J31 = 0.
    """
    j11, j12 = J[0, 0], J[0, 1]
    j21, j22, j23 = J[1, 0], J[1, 1], J[1, 2]
    j32, j33 = J[2, 1], J[2, 2]
    d1, d2, d3 = D.d1, D.d2, D.d3
    mu2_poly = (d1 + d2 + d3, -(j11 + j22 + j33))
    mu1_poly = (
        d2 * d3 + d1 * d2 + d1 * d3,
        -((d3 + d1) * j22 + (d2 + d1) * j33 + (d2 + d3) * j11),
        j11 * j33 + j11 * j22 + j22 * j33 - j32 * j23 - j12 * j21,
    )
    mu0_poly = (
        d1 * d2 * d3,
        -(d1 * d2 * j33 + d1 * d3 * j22 + d2 * d3 * j11),
        d1 * (j22 * j33 - j32 * j23) + d2 * j11 * j33 + d3 * (j22 * j11 - j12 * j21),
        j11 * j32 * j23 - j11 * j22 * j33 + j12 * j21 * j33,
    )
    return DispersionCubic(mu2_poly, mu1_poly, mu0_poly)


def routh_hurwitz_stable(c: DispersionCubic, k2: float) -> bool:
    """All eigenvalues have negative real part at this wavenumber."""
    m2, m1, m0 = c.mu2(k2), c.mu1(k2), c.mu0(k2)
    return (m2 > 0.0) and (m1 > 0.0) and (m0 > 0.0) and (m2 * m1 - m0 > 0.0)


def g_coefficients(J: np.ndarray, D: DiffusionMatrix, which: str) -> GCoefficients:
    """HH, DD, CC, BB for the chosen branch (stationary or oscillatory)."""
    j11, j12 = J[0, 0], J[0, 1]
    j21, j22, j23 = J[1, 0], J[1, 1], J[1, 2]
    j32, j33 = J[2, 1], J[2, 2]
    d1, d2, d3 = D.d1, D.d2, D.d3
    if which == STEADY:
        HH = j11 * j32 * j23 + j12 * j21 * j33 - j11 * j22 * j33
        DD = d1 * (j22 * j33 - j32 * j23) + d2 * j11 * j33 + d3 * (j11 * j22 - j12 * j21)
        CC = -d1 * d2 * j33 - d1 * d3 * j22 - d2 * d3 * j11
        BB = d1 * d2 * d3
    elif which == WAVE:
        HH = (
            j11 * j22 * j33
            - (j11 + j22 + j33) * (j11 * j22 - j12 * j21 + j11 * j33 + j22 * j33 - j23 * j32)
            - j11 * j23 * j32
            - j12 * j21 * j33
        )
        DD = (
            d1 * (2 * j11 * j33 + 2 * j11 * j22 + 2 * j22 * j33 + j33 * j33 + j22 * j22 - j12 * j21)
            + d2 * (2 * j22 * j11 + 2 * j22 * j33 + 2 * j33 * j11 + j11 * j11 + j33 * j33 - j21 * j12 - j23 * j32)
            + d3 * (2 * j22 * j11 + 2 * j22 * j33 + 2 * j33 * j11 + j11 * j11 + j22 * j22 - j23 * j32)
        )
        CC = (
            -j11 * (d2 + d3) * (2 * d1 + d2 + d3)
            - j22 * (d1 + d3) * (d1 + 2 * d2 + d3)
            - j33 * (d1 + d2) * (d1 + d2 + 2 * d3)
        )
        BB = (d2 + d3) * (d1 * d1 + d2 * d3 + d1 * d2 + d1 * d3)
    else:
        raise ValueError(f"unknown branch {which!r}")
    return GCoefficients(which, HH, DD, CC, BB)


def turing_point(g: GCoefficients) -> float | None:
    """Wavenumber-squared minimizing G, when the minimum is admissible."""
    if g.BB <= 0.0:
        raise ValueError("turing_point requires BB > 0")
    disc = g.CC * g.CC - 3.0 * g.BB * g.DD
    if disc <= 0.0:
        return None
    k2 = (-g.CC + np.sqrt(disc)) / (3.0 * g.BB)
    return k2 if k2 > 0.0 else None


def g_min(g: GCoefficients) -> float:
    """Closed-form minimum indicator 2CC^3 - 9 DD CC BB - 2(CC^2 - 3 DD BB)^{3/2} + 27 BB HH^2.

    Implemented exactly in this published arrangement.  Note the last
    term squares HH; the directly evaluated scaled minimum
    27 BB^2 G(k2_min) carries 27 BB^2 HH instead, so the two can
    disagree in sign.  Verdicts rely on direct evaluation of G at the
    minimizer; this closed form is reported alongside, and callers are
    warned when the signs differ (see g_min_discrepancy).
    """
    disc = g.CC * g.CC - 3.0 * g.BB * g.DD
    if disc <= 0.0:
        raise ValueError("g_min requires CC^2 - 3 BB DD > 0")
    return (
        2.0 * g.CC ** 3
        - 9.0 * g.DD * g.CC * g.BB
        - 2.0 * disc ** 1.5
        + 27.0 * g.BB * g.HH ** 2
    )


def g_min_direct(g: GCoefficients) -> float | None:
    """27 BB^2 G(k2_min): same normalization as g_min, via direct evaluation."""
    k2 = turing_point(g)
    if k2 is None:
        return None
    return 27.0 * g.BB ** 2 * g(k2)


def g_min_discrepancy(g: GCoefficients) -> bool:
    """True when the closed form and the direct minimum disagree in sign."""
    direct = g_min_direct(g)
    if direct is None:
        return False
    return (g_min(g) < 0.0) != (direct < 0.0)


def _branch_report(J: np.ndarray, D: DiffusionMatrix, which: str) -> dict:
    g = g_coefficients(J, D, which)
    disc = g.CC * g.CC - 3.0 * g.BB * g.DD
    k2 = turing_point(g)
    rep = {
        "HH": g.HH,
        "DD": g.DD,
        "CC": g.CC,
        "BB": g.BB,
        "discriminant": disc,
        "k2_T": k2,
        "g_at_min": (g(k2) if k2 is not None else None),
        "g_min_closed_form": (g_min(g) if disc > 0.0 else None),
        "closed_form_sign_disagrees": (g_min_discrepancy(g) if disc > 0.0 else False),
        "HH_positive": g.HH > 0.0,
        "DD_or_CC_negative": (g.DD < 0.0) or (g.CC < 0.0),
        "discriminant_positive": disc > 0.0,
    }
    rep["min_negative"] = rep["g_at_min"] is not None and rep["g_at_min"] < 0.0
    scale = max(abs(g.HH), abs(g.DD), abs(g.CC), abs(g.BB), 1e-300)
    rep["marginal"] = rep["g_at_min"] is not None and abs(rep["g_at_min"]) < MARGINAL_SCALE * scale
    return rep


def turing_verdict_at(point: StatePoint, p: Params, D: DiffusionMatrix | None = None) -> TuringVerdict:
    """Instability verdict for a given homogeneous steady state."""
    if D is None:
        D = DiffusionMatrix(p.d1, p.d2, p.d3)
    J = jacobian(point, p)
    c = dispersion_cubic(J, D)
    stable0 = routh_hurwitz_stable(c, 0.0)
    branches = {w: _branch_report(J, D, w) for w in BRANCHES}
    offending = None
    cond2 = False
    gneg = False
    marginal = False
    for w in BRANCHES:
        b = branches[w]
        b["satisfies_all"] = (
            stable0 and b["HH_positive"] and b["DD_or_CC_negative"] and b["discriminant_positive"] and b["min_negative"]
        )
        marginal = marginal or b["marginal"]
        if b["DD_or_CC_negative"] and b["discriminant_positive"]:
            cond2 = True
        if b["min_negative"]:
            gneg = True
        if b["satisfies_all"] and offending is None:
            offending = w
    unstable = offending is not None
    return TuringVerdict(
        stable_without_diffusion=stable0,
        condition_DD_or_CC=cond2,
        gmin_negative=gneg,
        turing_unstable=unstable,
        k2_T=(branches[offending]["k2_T"] if unstable else None),
        offending_function=offending,
        marginal=marginal,
        notes="" if stable0 else "uniform state not stable at k = 0; no diffusion-driven verdict",
        per_branch=branches,
        point=point.as_tuple(),
    )


def turing_unstable(p: Params, D: DiffusionMatrix | None = None) -> list[TuringVerdict]:
    """Verdicts for every admissible interior-equilibrium candidate."""
    eq = interior_equilibrium(p)
    if not eq.exists:
        return [
            TuringVerdict(
                stable_without_diffusion=False,
                condition_DD_or_CC=False,
                gmin_negative=False,
                turing_unstable=False,
                k2_T=None,
                offending_function=None,
                notes=f"no interior equilibrium: {eq.existence_notes}",
            )
        ]
    out = []
    for u, v, r in eq.candidates:
        out.append(turing_verdict_at(StatePoint(u, v, r), p, D))
    return out


def growth_rates(J: np.ndarray, D: DiffusionMatrix, k2_grid) -> np.ndarray:
    """Largest real part of the dispersion eigenvalues on a k^2 grid."""
    k2_grid = np.asarray(k2_grid, dtype=float)
    if np.any(k2_grid < 0) or np.any(np.diff(k2_grid) < 0):
        raise ValueError("k2_grid must be nonnegative and sorted")
    c = dispersion_cubic(J, D)
    out = np.empty_like(k2_grid)
    for i, k2 in enumerate(k2_grid):
        lam = np.roots([1.0, c.mu2(k2), c.mu1(k2), c.mu0(k2)])
        out[i] = lam.real.max()
    return out


def dispersion_table(J: np.ndarray, D: DiffusionMatrix, k2_grid) -> np.ndarray:
    """Columns (k^2, mu0, mu2*mu1 - mu0, max Re lambda) for plotting."""
    k2_grid = np.asarray(k2_grid, dtype=float)
    c = dispersion_cubic(J, D)
    rates = growth_rates(J, D, k2_grid)
    return np.column_stack([k2_grid, c.mu0(k2_grid), c.hurwitz(k2_grid), rates])
