"""Bundled parameter sets.

WAVE_BRANCH: the coexistence state loses stability through the
oscillatory branch of the dispersion relation; 1D runs develop
spatio-temporal patterns and 2D runs form spots.

MIXED_BRANCH: at small m only the oscillatory branch is active; around
m = 0.1 the stationary branch activates as well and 1D runs freeze into
stripes.

STEADY_BRANCH: only the stationary branch is active (the oscillatory
combination stays positive for every wavenumber), so patterns freeze;
the default base for the decay-rate experiment, where frozen patterns
are required.  Chosen so that the instability band, growth rate, and
stability margins are robust to small parameter perturbations.
"""

from .model import Params

DIFF_DEFAULT = dict(d1=1e-3, d2=1e-5, d3=1e-5)

WAVE_BRANCH = Params(w1=0.96, w2=0.52, w3=1.06, w4=0.37, a2=0.014, c=0.1, D3=0.1, m=0.01, **DIFF_DEFAULT)

MIXED_BRANCH = Params(w1=0.95, w2=0.3, w3=0.82, w4=0.53, a2=0.01, c=0.1, D3=0.1, m=0.1, **DIFF_DEFAULT)

STEADY_BRANCH = Params(
    w1=0.6614,
    w2=1.7787,
    w3=2.2336,
    w4=1.5936,
    a2=0.1661,
    c=0.9472,
    D3=0.211,
    m=0.0,
    d1=9.86e-4,
    d2=1.69e-4,
    d3=2.94e-3,
)
