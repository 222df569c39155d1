"""Criticality classification for integrable drifts against additive noise.

A drift in the mixed norm space L_q([0,T], L_p(R^d)) competes with the
noise roughness at small scales.  For fractional noise of Hurst index H the
sharp dividing line is

    (1-H)/q + H*d/p  vs  1-H,

and for symmetric alpha-stable noise with index alpha in (1,2)

    (alpha-1)/q + d/p  vs  alpha-1.

Below the line (subcritical) weak solutions exist; strictly above, an
explicit drift with no weak solution can be built from a triple
(alpha_ce, beta_ce, gamma_ce) of profile exponents.  This module evaluates
the conditions and produces such triples deterministically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

__all__ = [
    "NoiseKind",
    "Classification",
    "RegimeParams",
    "RegimeVerdict",
    "CounterexampleParams",
    "InfeasibleRegime",
    "check_fbm_condition",
    "check_levy_condition",
    "check_reference_conditions",
    "counterexample_params",
]

BOUNDARY_TOL = 1e-12


class NoiseKind(str, Enum):
    FBM = "fbm"
    STABLE = "stable"


class Classification(str, Enum):
    SUBCRITICAL = "Subcritical"
    BOUNDARY = "Boundary"
    SUPERCRITICAL = "Supercritical"


class InfeasibleRegime(Exception):
    """Raised when counterexample parameters are requested off the supercritical regime."""


@dataclass(frozen=True)
class RegimeParams:
    """Parameter tuple (H or alpha, d, p, q) for one drift/noise pairing.

    Exactly one of ``hurst`` / ``stability_index`` is set; ``q`` may be
    ``math.inf``, in which case 1/q = 0 in every formula.
    """

    dim: int
    p: float
    q: float
    hurst: float | None = None
    stability_index: float | None = None

    def __post_init__(self):
        if (self.hurst is None) == (self.stability_index is None):
            raise ValueError("set exactly one of hurst / stability_index")
        if self.hurst is not None and not (0.0 < self.hurst < 1.0):
            raise ValueError(f"hurst must lie in (0,1), got {self.hurst}")
        if self.stability_index is not None and not (1.0 < self.stability_index < 2.0):
            raise ValueError(
                f"stability index must lie in (1,2), got {self.stability_index}"
            )
        if self.dim < 1:
            raise ValueError("dim must be a positive integer")
        if self.p < 1.0 or self.q < 1.0:
            raise ValueError("p and q must be >= 1")

    @property
    def kind(self) -> NoiseKind:
        return NoiseKind.FBM if self.hurst is not None else NoiseKind.STABLE

    def inv_q(self) -> float:
        return 0.0 if math.isinf(self.q) else 1.0 / self.q


@dataclass(frozen=True)
class RegimeVerdict:
    """Signed distance to the critical surface plus its classification."""

    condition_value: float
    classification: Classification

    @staticmethod
    def from_value(value: float) -> "RegimeVerdict":
        if value < -BOUNDARY_TOL:
            cls = Classification.SUBCRITICAL
        elif value > BOUNDARY_TOL:
            cls = Classification.SUPERCRITICAL
        else:
            cls = Classification.BOUNDARY
        return RegimeVerdict(value, cls)


@dataclass(frozen=True)
class CounterexampleParams:
    """Exponents of the no-solution drift profile -sign(x^i)|x|^-a 1_{|x|<1} t^-b.

    Feasibility demands a*g + b*(1-g) > 1-g together with a < d/p, b < 1/q
    and g < H relative to the generating regime.
    """

    alpha_ce: float
    beta_ce: float
    gamma_ce: float

    def __post_init__(self):
        if self.alpha_ce <= 0 or self.beta_ce <= 0 or not (0 < self.gamma_ce < 1):
            raise ValueError("need alpha_ce, beta_ce > 0 and gamma_ce in (0,1)")

    def profile_value(self) -> float:
        """a*g + b*(1-g) - (1-g); positive iff the triple admits no solution."""
        g = self.gamma_ce
        return self.alpha_ce * g + self.beta_ce * (1.0 - g) - (1.0 - g)


def check_fbm_condition(params: RegimeParams) -> RegimeVerdict:
    """Evaluate (1-H)/q + H*d/p - (1-H) and classify its sign."""
    if params.kind is not NoiseKind.FBM:
        raise ValueError("expected fBm-kind parameters")
    H = params.hurst
    value = (1.0 - H) * params.inv_q() + H * params.dim / params.p - (1.0 - H)
    return RegimeVerdict.from_value(value)


def check_levy_condition(params: RegimeParams) -> RegimeVerdict:
    """Evaluate (alpha-1)/q + d/p - (alpha-1) and classify its sign."""
    if params.kind is not NoiseKind.STABLE:
        raise ValueError("expected stable-kind parameters")
    a = params.stability_index
    value = (a - 1.0) * params.inv_q() + params.dim / params.p - (a - 1.0)
    return RegimeVerdict.from_value(value)


def check_reference_conditions(params: RegimeParams) -> dict:
    """Classical sufficient conditions for comparison columns.

    lps:    2/q + d/p < 1
    krylov: 1/q + d/p <= 1       (H-independent)
    gg23:   1/q + H*d/p < 1-H and 2*H*d/p < 1-H   (fBm kind only)
    """
    iq = params.inv_q()
    dp = params.dim / params.p
    out = {
        "lps": 2.0 * iq + dp < 1.0,
        "krylov": iq + dp <= 1.0,
    }
    if params.kind is NoiseKind.FBM:
        H = params.hurst
        out["gg23"] = (iq + H * dp < 1.0 - H) and (2.0 * H * dp < 1.0 - H)
    else:
        out["gg23"] = None
    return out


def counterexample_params(params: RegimeParams) -> CounterexampleParams:
    """Deterministic feasible triple for a strictly supercritical fBm regime.

    Anchors the triple at the fractions (d/p, 1/q, H) scaled by (1-theta)
    and bisects theta downward from 1/2; strict supercriticality makes the
    profile inequality hold for every small enough theta, so the loop
    terminates.  Raises InfeasibleRegime off the supercritical regime and
    for q = inf, where no positive time exponent is available.
    """
    if params.kind is not NoiseKind.FBM:
        raise ValueError("counterexample construction is for fBm-kind parameters")
    if math.isinf(params.q):
        raise InfeasibleRegime(
            "profile needs a positive time exponent beta_ce < 1/q; q = inf leaves none"
        )
    verdict = check_fbm_condition(params)
    if verdict.classification is not Classification.SUPERCRITICAL:
        raise InfeasibleRegime(
            f"(1-H)/q + Hd/p - (1-H) = {verdict.condition_value:.6g} is not > 0"
        )
    H, dp, iq = params.hurst, params.dim / params.p, 1.0 / params.q
    theta = 0.5
    for _ in range(200):
        trial = CounterexampleParams(
            alpha_ce=dp * (1.0 - theta),
            beta_ce=iq * (1.0 - theta),
            gamma_ce=H * (1.0 - theta),
        )
        if trial.profile_value() > 0.0:
            return trial
        theta *= 0.5
    raise InfeasibleRegime("bisection failed to find a feasible triple")
