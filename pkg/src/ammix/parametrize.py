"""The (s, t) parametrization of the region between the CSMM and CPMM.

Every direction from the origin is indexed by s = a*x/(a*x + b*y) through
the base point v(s) = (s/a, (1-s)/b).  Scaling v(s) by lam places it on a
chosen curve: lam = C on the constant-sum line, lam = P(s) on the
constant-product curve, and the mixing-specific lam(s, t) in between.
Inverting x(s) = (s/a) lam(s) recovers states from coordinates, which is
how trades are solved.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import inf, isfinite

from ammix import _kernels as k
from ammix.core import CurveParams, Family, MarketState, MixSpec, kernel_codes
from ammix.errors import InvalidParameterError, OutOfRangeError
from ammix.schedules import (
    S_MAX,
    S_MIN,
    Parabolic,
    PowerLaw,
    StableswapDynamic,
    Uniform,
    _check_s,
)


def s_of_state(params: CurveParams, state: MarketState) -> float:
    """Ray coordinate of a state; always lands in (0, 1) for positive reserves."""
    ax = params.a * state.x
    return ax / (ax + params.b * state.y)


def base_point(params: CurveParams, s: float) -> tuple[float, float]:
    """Unscaled ray point (s/a, (1-s)/b)."""
    _check_s(s)
    return s / params.a, (1.0 - s) / params.b


@dataclass(frozen=True)
class ScalingPair:
    """Scalings moving one direction onto the CSMM and CPMM surfaces."""

    lambda0: float
    lambda1: float


def scaling_factors(params: CurveParams, v: MarketState) -> ScalingPair:
    """Scalings (lambda0, lambda1) such that lambda_i * v lies on A_i = 1."""
    lam0 = params.c / (params.a * v.x + params.b * v.y)
    deg = params.deg
    lam1 = (params.x0 / v.x) ** (params.alpha / deg) * (params.y0 / v.y) ** (params.beta / deg)
    return ScalingPair(lambda0=lam0, lambda1=lam1)


def lambda_mix(params: CurveParams, family: Family, s: float, t: float) -> float:
    """Scaling placing the base point on the family's curve for blend t.

    Homotopy and geometric scalings are closed forms; the arithmetic one is
    the unique positive root of
    lam*(1-t)/C + lam**deg * (s/(a*x0))**alpha * ((1-s)/(b*y0))**beta * t = 1,
    found by bracketed Newton iteration to relative 1e-12.
    """
    _check_s(s)
    if not (isfinite(t) and 0.0 <= t <= 1.0):
        raise InvalidParameterError(f"blend weight must be in [0, 1], got {t!r}")
    fam = {Family.ARITHMETIC: 0, Family.GEOMETRIC: 1, Family.HOMOTOPY: 2}[family]
    return k.lam_uniform(fam, s, t, params.a, params.b, params.x0, params.y0,
                         params.alpha, params.beta)


def _lam_at(params: CurveParams, mix: MixSpec, s: float) -> float:
    fam, kind, q0, q1, q2 = kernel_codes(params, mix)
    return k.lam_at(fam, kind, q0, q1, q2, s, params.a, params.b, params.x0,
                    params.y0, params.alpha, params.beta)


def point_at(params: CurveParams, mix: MixSpec, s: float) -> MarketState:
    """The curve point at ray coordinate s (schedule resolved through t(s))."""
    _check_s(s)
    lam = _lam_at(params, mix, s)
    return MarketState(lam * s / params.a, lam * (1.0 - s) / params.b)


def _mirror_schedule(schedule):
    # reflecting s -> 1-s swaps the roles of the two currencies
    if isinstance(schedule, (Uniform, PowerLaw, StableswapDynamic)):
        return schedule
    if isinstance(schedule, Parabolic):
        return Parabolic(bias=1.0 - schedule.bias, center=schedule.center)
    raise InvalidParameterError(f"not a schedule: {schedule!r}")


def mirror(params: CurveParams, mix: MixSpec) -> tuple[CurveParams, MixSpec]:
    """The same market with the currencies relabeled (x <-> y)."""
    m_params = CurveParams(a=params.b, b=params.a, x0=params.y0, y0=params.x0)
    m_mix = MixSpec(mix.family, _mirror_schedule(mix.schedule))
    return m_params, m_mix


def max_reach_x(params: CurveParams, mix: MixSpec) -> float:
    """Supremum of x along the curve; finite only when the x-intercept is.

    Arithmetic mixings with t < 1 (and every family at t = 0) end at
    x = C / (a*(1-t)); the other mixings run to infinity.
    """
    if isinstance(mix.schedule, Uniform):
        t = mix.schedule.t
        if t == 0.0 or (mix.family is Family.ARITHMETIC and t < 1.0):
            return params.c / (params.a * (1.0 - t))
    return inf


def state_for_x(params: CurveParams, mix: MixSpec, x_target: float) -> MarketState:
    """The on-curve state with the given x reserve, solved by bisection in s."""
    if not (isfinite(x_target) and x_target > 0.0):
        raise InvalidParameterError(f"x_target must be positive and finite, got {x_target!r}")
    fam, kind, q0, q1, q2 = kernel_codes(params, mix)
    a, b, x0, y0 = params.a, params.b, params.x0, params.y0
    alpha, beta = params.alpha, params.beta
    x_lo = S_MIN / a * k.lam_at(fam, kind, q0, q1, q2, S_MIN, a, b, x0, y0, alpha, beta)
    x_hi = S_MAX / a * k.lam_at(fam, kind, q0, q1, q2, S_MAX, a, b, x0, y0, alpha, beta)
    if x_target > x_hi:
        reach = max_reach_x(params, mix)
        if not isfinite(reach):
            reach = x_hi
        raise OutOfRangeError(
            f"x={x_target!r} beyond the curve's reach (max reachable x is {reach:.12g})",
            max_reachable=reach,
        )
    if x_target < x_lo:
        raise OutOfRangeError(
            f"x={x_target!r} below the curve's reach (min representable x is {x_lo:.12g})",
            max_reachable=x_lo,
        )
    s = k.solve_s_for_x(fam, kind, q0, q1, q2, x_target, a, b, x0, y0, alpha, beta, S_MIN, S_MAX)
    lam = k.lam_at(fam, kind, q0, q1, q2, s, a, b, x0, y0, alpha, beta)
    return MarketState(x_target, lam * (1.0 - s) / b)


def state_for_y(params: CurveParams, mix: MixSpec, y_target: float) -> MarketState:
    """The on-curve state with the given y reserve (mirrored x-solve)."""
    m_params, m_mix = mirror(params, mix)
    mirrored = state_for_x(m_params, m_mix, y_target)
    return MarketState(mirrored.y, y_target)
