"""Curve parameters and the three CSMM/CPMM mixing invariants.

A market is anchored at an initial state (x0, y0) with linear weights
(a, b).  The constant-sum and constant-product components are normalized
to equal 1 there:

    A0(x, y) = (a*x + b*y) / (a*x0 + b*y0)
    A1(x, y) = x**alpha * y**beta / (x0**alpha * y0**beta)

with (alpha, beta) calibrated so both components share the initial
exchange rate a/b.  A mixing blends the two with weight t: arithmetic
(weighted sum), geometric (weighted product), or homotopy (each curve
point sits exactly fraction t along the segment between its constant-sum
and constant-product projections).  The market is the level set
A_t(x, y) = 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from math import isfinite

from ammix import _kernels as k
from ammix.errors import (
    DegenerateGradientError,
    InvalidParameterError,
    UnsupportedScheduleError,
)
from ammix.schedules import (
    Parabolic,
    PowerLaw,
    StableswapDynamic,
    TSchedule,
    Uniform,
    schedule_coeffs,
    t_first,
)


def calibrate_weights(a: float, b: float, x0: float, y0: float) -> tuple[float, float]:
    """Exponents (alpha, beta) giving the CPMM the initial rate a/b.

    alpha = a*x0 / (a*x0 + b*y0) and beta = b*y0 / (a*x0 + b*y0), i.e. the
    normalized solution of (a, b) parallel to (alpha/x0, beta/y0).
    """
    for name, v in (("a", a), ("b", b), ("x0", x0), ("y0", y0)):
        if not (isfinite(v) and v > 0.0):
            raise InvalidParameterError(f"{name} must be positive and finite, got {v!r}")
    c = a * x0 + b * y0
    return a * x0 / c, b * y0 / c


@dataclass(frozen=True)
class CurveParams:
    """Anchor constants of a 2-currency market.

    The derived fields are cached at construction: calibrated exponents
    (alpha, beta), the weighted total c = a*x0 + b*y0, and the initial ray
    coordinate s0 = a*x0/c.
    """

    a: float
    b: float
    x0: float
    y0: float
    alpha: float = field(init=False)
    beta: float = field(init=False)
    c: float = field(init=False)
    s0: float = field(init=False)

    def __post_init__(self) -> None:
        alpha, beta = calibrate_weights(self.a, self.b, self.x0, self.y0)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "c", self.a * self.x0 + self.b * self.y0)
        object.__setattr__(self, "s0", alpha)

    @property
    def deg(self) -> float:
        """Degree of the CPMM component, alpha + beta (1 when calibrated)."""
        return self.alpha + self.beta

    @property
    def initial_state(self) -> "MarketState":
        return MarketState(self.x0, self.y0)


@dataclass(frozen=True)
class MarketState:
    """Current reserves of the two currencies; strictly positive."""

    x: float
    y: float

    def __post_init__(self) -> None:
        if not (isfinite(self.x) and self.x > 0.0 and isfinite(self.y) and self.y > 0.0):
            raise InvalidParameterError(f"reserves must be positive and finite, got ({self.x!r}, {self.y!r})")


class Family(Enum):
    ARITHMETIC = "arithmetic"
    GEOMETRIC = "geometric"
    HOMOTOPY = "homotopy"


_FAMILY_CODE = {
    Family.ARITHMETIC: k.FAMILY_ARITHMETIC,
    Family.GEOMETRIC: k.FAMILY_GEOMETRIC,
    Family.HOMOTOPY: k.FAMILY_HOMOTOPY,
}


@dataclass(frozen=True)
class MixSpec:
    """A mixing family plus its blend schedule.

    Arithmetic and geometric mixings only support a uniform weight; the
    homotopy family accepts any schedule.
    """

    family: Family
    schedule: TSchedule

    def __post_init__(self) -> None:
        if not isinstance(self.schedule, (Uniform, PowerLaw, Parabolic, StableswapDynamic)):
            raise InvalidParameterError(f"not a schedule: {self.schedule!r}")
        if self.family is not Family.HOMOTOPY and not isinstance(self.schedule, Uniform):
            raise InvalidParameterError(
                f"{self.family.value} mixing requires a uniform blend weight"
            )

    @classmethod
    def arithmetic(cls, t: float) -> "MixSpec":
        return cls(Family.ARITHMETIC, Uniform(t))

    @classmethod
    def geometric(cls, t: float) -> "MixSpec":
        return cls(Family.GEOMETRIC, Uniform(t))

    @classmethod
    def homotopy(cls, t: float) -> "MixSpec":
        return cls(Family.HOMOTOPY, Uniform(t))

    @classmethod
    def scheduled(cls, schedule: TSchedule) -> "MixSpec":
        return cls(Family.HOMOTOPY, schedule)

    @property
    def is_uniform(self) -> bool:
        return isinstance(self.schedule, Uniform)


def kernel_codes(params: CurveParams, mix: MixSpec) -> tuple[int, int, float, float, float]:
    """(family, kind, q0, q1, q2) encoding consumed by the kernel backend."""
    kind, q0, q1, q2 = schedule_coeffs(mix.schedule, params.s0)
    return _FAMILY_CODE[mix.family], kind, q0, q1, q2


def eval_component(params: CurveParams, state: MarketState) -> tuple[float, float]:
    """Normalized component values (A0, A1) at the state; both 1 at (x0, y0)."""
    a0 = (params.a * state.x + params.b * state.y) / params.c
    a1 = (state.x / params.x0) ** params.alpha * (state.y / params.y0) ** params.beta
    return a0, a1


def _blend_weight(params: CurveParams, mix: MixSpec, state: MarketState) -> float:
    """Resolve the blend weight t at a state, for any schedule kind."""
    sched = mix.schedule
    if isinstance(sched, Uniform):
        return sched.t
    if isinstance(sched, StableswapDynamic):
        d2 = sched.scale * sched.scale
        return d2 / (16.0 * sched.amplification * state.x * state.y + d2)
    s = s_of_state_raw(params, state)
    kind, q0, q1, q2 = schedule_coeffs(sched, params.s0)
    return k.sched_value(kind, q0, q1, q2, s, params.s0)


def s_of_state_raw(params: CurveParams, state: MarketState) -> float:
    """Ray coordinate s = a*x / (a*x + b*y) of a state."""
    ax = params.a * state.x
    return ax / (ax + params.b * state.y)


def eval_mixed(params: CurveParams, mix: MixSpec, state: MarketState) -> float:
    """Value of the mixed invariant at the state; the state is on the AMM iff 1."""
    a0, a1 = eval_component(params, state)
    t = _blend_weight(params, mix, state)
    if mix.family is Family.ARITHMETIC:
        return a0 * (1.0 - t) + a1 * t
    if mix.family is Family.GEOMETRIC:
        return a0 ** (1.0 - t) * a1**t
    return (1.0 - t) / a0 + a1 ** (-1.0 / params.deg) * t


def grad_mixed(params: CurveParams, mix: MixSpec, state: MarketState) -> tuple[float, float]:
    """Outward-oriented gradient of the mixed invariant at the state.

    The homotopy invariant as tabulated decreases as reserves grow, so its
    gradient is taken on the reciprocal form; with that orientation every
    family reduces to grad A0 at t = 0 and grad A1 at t = 1, and the ratio
    of the partials is the internal exchange rate for all of them.
    """
    x, y = state.x, state.y
    a, b, alpha, beta, c, deg = params.a, params.b, params.alpha, params.beta, params.c, params.deg
    a0, a1 = eval_component(params, state)
    n = a * x + b * y
    sched = mix.schedule
    if isinstance(sched, StableswapDynamic):
        raise UnsupportedScheduleError(
            "gradients of the dynamic Stableswap blend are not exposed; "
            "use stableswap_dynamic_residual"
        )
    if isinstance(sched, Uniform):
        t, tp = sched.t, 0.0
    else:
        s = s_of_state_raw(params, state)
        t, tp = t_first(sched, params, s)
    if mix.family is Family.ARITHMETIC:
        return (
            (1.0 - t) * a / c + t * a1 * alpha / x,
            (1.0 - t) * b / c + t * a1 * beta / y,
        )
    if mix.family is Family.GEOMETRIC:
        g = a0 ** (1.0 - t) * a1**t
        return (
            g * ((1.0 - t) * a / n + t * alpha / x),
            g * ((1.0 - t) * b / n + t * beta / y),
        )
    # homotopy: differentiate the raw (decreasing) form, then flip via 1/A
    w = a1 ** (-1.0 / deg)
    raw = (1.0 - t) * c / n + t * w
    raw_x = -(1.0 - t) * c * a / (n * n) - t * w * alpha / (deg * x)
    raw_y = -(1.0 - t) * c * b / (n * n) - t * w * beta / (deg * y)
    if tp != 0.0:
        s_x = a * b * y / (n * n)
        s_y = -a * b * x / (n * n)
        dt_term = w - c / n
        raw_x += tp * s_x * dt_term
        raw_y += tp * s_y * dt_term
    inv2 = 1.0 / (raw * raw)
    return -raw_x * inv2, -raw_y * inv2


def spot_rate(params: CurveParams, mix: MixSpec, state: MarketState) -> float:
    """Internal exchange rate of currency 1 in units of currency 2."""
    gx, gy = grad_mixed(params, mix, state)
    if gy == 0.0:
        raise DegenerateGradientError("vanishing partial derivative in y")
    return gx / gy


def rebase_curve(params: CurveParams, state: MarketState, new_rate: float) -> CurveParams:
    """Re-anchor the curve at the state with a fresh initial rate.

    The returned parameters set (x0, y0) to the state, fix b = 1 with
    a = new_rate, and re-calibrate the exponents; every mixing family then
    passes through the state with spot rate new_rate.
    """
    if not (isfinite(new_rate) and new_rate > 0.0):
        raise InvalidParameterError(f"new_rate must be positive and finite, got {new_rate!r}")
    return CurveParams(a=new_rate, b=1.0, x0=state.x, y0=state.y)
