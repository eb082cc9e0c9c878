"""Walk parameters, derived constants, and regime classification.

The walk copies a uniformly chosen past step with probability p, negates it
with probability q, and stays put with probability r, with p+q+r = 1. The
first step is +1 with probability s. Everything downstream is driven by the
two fundamental parameters a = p - q and b = p + q = 1 - r and by the memory
parameter p_r = p/(1-r), whose position relative to 3/4 picks the regime.
"""

import math
from dataclasses import dataclass
from enum import Enum

from .errors import DegenerateParameters, InvalidSimplex

SIMPLEX_TOL = 1e-12
CRITICAL_TOL = 1e-12


class Regime(Enum):
    DIFFUSIVE = "diffusive"
    CRITICAL = "critical"
    SUPERDIFFUSIVE = "superdiffusive"


@dataclass(frozen=True)
class WalkParams:
    p: float  # copy a remembered step
    q: float  # flip a remembered step
    r: float  # stop
    s: float  # P(first step = +1)

    def as_dict(self) -> dict:
        return {"p": self.p, "q": self.q, "r": self.r, "s": self.s}


@dataclass(frozen=True)
class DerivedConstants:
    a: float                 # p - q
    b: float                 # p + q = 1 - r
    p_r: float               # memory parameter p/(1-r)
    regime: Regime
    sd_exponent: float       # 2p + r - 1, the superdiffusive scaling exponent (= a)
    sigma_r2: float | None   # diffusive asymptotic variance b/(b-2a)
    tau_r2: float | None     # superdiffusive fluctuation variance b/(2a-b)
    ell_r: float | None      # diffusive growth constant of v_n/n^{b-2a}


def validate(p: float, q: float, r: float, s: float) -> DerivedConstants:
    """Check (p, q, r, s) and derive every downstream constant.

    Raises InvalidSimplex when a component leaves [0,1] or p+q+r strays from 1
    by more than 1e-12 (inputs inside tolerance are renormalized, never
    silently fixed beyond that). Raises DegenerateParameters at the q=1 Gamma
    pole and at r=1 where the walk freezes after one step.
    """
    for name, value in (("p", p), ("q", q), ("r", r), ("s", s)):
        if not math.isfinite(value) or value < 0.0 or value > 1.0:
            raise InvalidSimplex(f"{name}={value!r} outside [0, 1]")
    total = p + q + r
    if abs(total - 1.0) > SIMPLEX_TOL:
        raise InvalidSimplex(f"p+q+r = {total!r} differs from 1 beyond {SIMPLEX_TOL}")
    p, q, r = p / total, q / total, r / total

    if r >= 1.0 - SIMPLEX_TOL:
        raise DegenerateParameters("r=1: the walk is stuck at zero after the first step")
    a = p - q
    if a <= -1.0 + SIMPLEX_TOL:
        raise DegenerateParameters("q=1 (a=-1): Gamma-ratio coefficients hit a pole")
    b = p + q

    gap = 2.0 * a - b
    if abs(gap) <= CRITICAL_TOL:
        regime = Regime.CRITICAL
    elif gap < 0.0:
        regime = Regime.DIFFUSIVE
    else:
        regime = Regime.SUPERDIFFUSIVE

    sigma_r2 = tau_r2 = ell_r = None
    if regime is Regime.DIFFUSIVE:
        sigma_r2 = b / (b - 2.0 * a)
        ell_r = math.gamma(a + 1.0) ** 2 / ((b - 2.0 * a) * math.gamma(b + 1.0))
    elif regime is Regime.SUPERDIFFUSIVE:
        tau_r2 = b / (2.0 * a - b)

    return DerivedConstants(
        a=a,
        b=b,
        p_r=p / (1.0 - r),
        regime=regime,
        sd_exponent=2.0 * p + r - 1.0,
        sigma_r2=sigma_r2,
        tau_r2=tau_r2,
        ell_r=ell_r,
    )


def validate_params(params: WalkParams) -> DerivedConstants:
    return validate(params.p, params.q, params.r, params.s)
