"""Pure-Python scalar kernels for curve evaluation and root solving.

This module is the fallback backend; ``ammix._kernels._fast`` is the
compiled twin with identical semantics.  Every function here operates on
flat floats so both backends stay line-for-line comparable.

Conventions shared by both backends:

* family codes: 0 = arithmetic, 1 = geometric, 2 = homotopy
* schedule kinds: 0 = uniform (q0 = t), 1 = power law (q0 = exponent),
  2 = parabolic (q0, q1, q2 = quadratic coefficients, highest first)
* curve constants are passed as (a, b, x0, y0, alpha, beta); the sum
  C = a*x0 + b*y0, deg = alpha + beta, and s0 = a*x0/C are derived inside.
* the CPMM ray scaling is computed as P(s) = C * exp(g(s)) with
  g(s) = [alpha*log(s0/s) + beta*log((1-s0)/(1-s))] / deg, which makes
  P(s0) == C exact and keeps P - C = C*expm1(g) accurate near s0.
"""

from __future__ import annotations

from math import copysign, exp, expm1, log

from ammix.errors import NonDifferentiablePointError, ScheduleRangeError

BACKEND_NAME = "pure"

_REL_TOL = 1e-12
_MAX_ITER = 200


def ray_log_ratio(s, a, b, x0, y0, alpha, beta):
    """g(s) and g'(s) for the CPMM scaling along the ray at parameter s."""
    deg = alpha + beta
    c = a * x0 + b * y0
    s0 = a * x0 / c
    g = (alpha * log(s0 / s) + beta * log((1.0 - s0) / (1.0 - s))) / deg
    gp = (beta * s - alpha * (1.0 - s)) / (deg * s * (1.0 - s))
    return g, gp


def lam_arith(s, t, a, b, x0, y0, alpha, beta):
    """Scaling putting the ray point on the arithmetic mix, by bracketed Newton.

    Solves lam*(1-t)/C + t*(lam/P)**deg = 1; the left side is strictly
    increasing in lam, so the root is unique and bracketed by
    (0, C/(1-t)] for t < 1.
    """
    deg = alpha + beta
    c = a * x0 + b * y0
    if t <= 0.0:
        return c
    g, _ = ray_log_ratio(s, a, b, x0, y0, alpha, beta)
    p = c * exp(g)
    if t >= 1.0:
        return p
    lo = 0.0
    hi = c / (1.0 - t)
    # deg == 1 closed form; exact for calibrated weights, a good seed otherwise
    lam = c * p / ((1.0 - t) * p + t * c)
    for _ in range(_MAX_ITER):
        r = lam / p
        f = lam * (1.0 - t) / c + t * r**deg - 1.0
        if f > 0.0:
            hi = lam
        else:
            lo = lam
        fp = (1.0 - t) / c + t * deg * r**deg / lam
        nxt = lam - f / fp
        if not lo < nxt < hi:
            nxt = 0.5 * (lo + hi)
        if abs(nxt - lam) <= _REL_TOL * nxt:
            return nxt
        lam = nxt
    return lam


def lam_uniform(family, s, t, a, b, x0, y0, alpha, beta):
    """Scaling lam(s, t) for a uniform blend weight, any family."""
    deg = alpha + beta
    c = a * x0 + b * y0
    if family == 0:
        return lam_arith(s, t, a, b, x0, y0, alpha, beta)
    g, _ = ray_log_ratio(s, a, b, x0, y0, alpha, beta)
    if family == 1:
        d = (1.0 - t) + deg * t
        return c * exp(g * deg * t / d)
    # homotopy: lam = C*(1-t) + P*t
    return c + c * expm1(g) * t


def lam_uniform_with_prime(family, s, t, a, b, x0, y0, alpha, beta):
    """(lam, dlam/ds) for a uniform blend weight."""
    deg = alpha + beta
    c = a * x0 + b * y0
    g, gp = ray_log_ratio(s, a, b, x0, y0, alpha, beta)
    p = c * exp(g)
    if family == 0:
        lam = lam_arith(s, t, a, b, x0, y0, alpha, beta)
        if t <= 0.0:
            return lam, 0.0
        rd = t * deg * (lam / p) ** deg
        return lam, rd * gp / ((1.0 - t) / c + rd / lam)
    if family == 1:
        d = (1.0 - t) + deg * t
        lam = c * exp(g * deg * t / d)
        return lam, lam * deg * t * gp / d
    lam = c + c * expm1(g) * t
    return lam, p * gp * t


def sched_value(kind, q0, q1, q2, s, s0):
    """Blend weight t(s); defined everywhere on (0, 1)."""
    if kind == 0:
        t = q0
    elif kind == 1:
        m = s0 if s0 >= 1.0 - s0 else 1.0 - s0
        d = s - s0
        t = 0.0 if d == 0.0 else (abs(d) / m) ** q0
    else:
        t = (q0 * s + q1) * s + q2
    if t < -1e-12 or t > 1.0 + 1e-12:
        raise ScheduleRangeError(f"schedule value t={t!r} outside [0, 1] at s={s!r}")
    return min(1.0, max(0.0, t))


def sched_first(kind, q0, q1, q2, s, s0):
    """(t, t') — raises only where the first derivative fails to exist."""
    if kind == 0:
        return q0, 0.0
    if kind == 1:
        m = s0 if s0 >= 1.0 - s0 else 1.0 - s0
        d = s - s0
        if d == 0.0:
            if q0 <= 1.0:
                raise NonDifferentiablePointError(
                    f"power-law schedule with exponent {q0!r} has no derivative at s0"
                )
            return 0.0, 0.0
        u = abs(d) / m
        return u**q0, copysign(q0 / m * u ** (q0 - 1.0), d)
    t = (q0 * s + q1) * s + q2
    return t, 2.0 * q0 * s + q1


def sched_eval(kind, q0, q1, q2, s, s0):
    """(t, t', t'') — raises where either derivative fails to exist."""
    if kind == 0:
        return q0, 0.0, 0.0
    if kind == 1:
        m = s0 if s0 >= 1.0 - s0 else 1.0 - s0
        d = s - s0
        if d == 0.0:
            if q0 < 2.0:
                raise NonDifferentiablePointError(
                    f"power-law schedule with exponent {q0!r} is singular at s0"
                )
            tpp = 2.0 / (m * m) if q0 == 2.0 else 0.0
            return 0.0, 0.0, tpp
        u = abs(d) / m
        t = u**q0
        tp = copysign(q0 / m * u ** (q0 - 1.0), d)
        tpp = q0 * (q0 - 1.0) / (m * m) * u ** (q0 - 2.0)
        return t, tp, tpp
    t = (q0 * s + q1) * s + q2
    return t, 2.0 * q0 * s + q1, 2.0 * q0


def lam_chain(kind, q0, q1, q2, s, a, b, x0, y0, alpha, beta):
    """(lam, lam', lam'') for the homotopy family under a schedule t(s).

    lam   = (P - C) t + C
    lam'  = (P - C) t' + P' t
    lam'' = (P - C) t'' + 2 P' t' + P'' t
    with P' = -[alpha(1-s) - beta*s] / [s(1-s)(alpha+beta)] * P and
    P'' = [2 alpha^2 (1-s)^2 + alpha beta (1-2s)^2 + 2 beta^2 s^2]
          / [s^2 (1-s)^2 (alpha+beta)^2] * P.
    """
    deg = alpha + beta
    c = a * x0 + b * y0
    s0 = a * x0 / c
    t, tp, tpp = sched_eval(kind, q0, q1, q2, s, s0)
    g, gp = ray_log_ratio(s, a, b, x0, y0, alpha, beta)
    p = c * exp(g)
    pmc = c * expm1(g)
    pp = p * gp
    u = 1.0 - s
    num = 2.0 * alpha * alpha * u * u + alpha * beta * (1.0 - 2.0 * s) ** 2 + 2.0 * beta * beta * s * s
    ppp = num / (s * s * u * u * deg * deg) * p
    lam = pmc * t + c
    lamp = pmc * tp + pp * t
    lampp = pmc * tpp + 2.0 * pp * tp + ppp * t
    return lam, lamp, lampp


def lam_at(family, kind, q0, q1, q2, s, a, b, x0, y0, alpha, beta):
    """Scaling lam(s) for any (family, schedule) pair."""
    if kind == 0:
        return lam_uniform(family, s, q0, a, b, x0, y0, alpha, beta)
    c = a * x0 + b * y0
    t = sched_value(kind, q0, q1, q2, s, a * x0 / c)
    g, _ = ray_log_ratio(s, a, b, x0, y0, alpha, beta)
    return c + c * expm1(g) * t


def lam_prime_at(family, kind, q0, q1, q2, s, a, b, x0, y0, alpha, beta):
    """(lam, dlam/ds) for any (family, schedule) pair."""
    if kind == 0:
        return lam_uniform_with_prime(family, s, q0, a, b, x0, y0, alpha, beta)
    c = a * x0 + b * y0
    t, tp = sched_first(kind, q0, q1, q2, s, a * x0 / c)
    g, gp = ray_log_ratio(s, a, b, x0, y0, alpha, beta)
    p = c * exp(g)
    return c + c * expm1(g) * t, c * expm1(g) * tp + p * gp * t


def solve_s_for_x(family, kind, q0, q1, q2, x_target, a, b, x0, y0, alpha, beta, s_lo, s_hi):
    """Invert x(s) = (s/a) lam(s) by bisection, then one Newton polish.

    The bracket [s_lo, s_hi] must already contain the solution; x(s) is
    increasing on valid curves.
    """
    lo = s_lo
    hi = s_hi
    for _ in range(_MAX_ITER):
        mid = 0.5 * (lo + hi)
        xm = mid / a * lam_at(family, kind, q0, q1, q2, mid, a, b, x0, y0, alpha, beta)
        if xm < x_target:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-14:
            break
    s = 0.5 * (lo + hi)
    try:
        lam, lamp = lam_prime_at(family, kind, q0, q1, q2, s, a, b, x0, y0, alpha, beta)
    except NonDifferentiablePointError:
        return s
    xp = (lam + s * lamp) / a
    if xp > 0.0:
        s_new = s - (s / a * lam - x_target) / xp
        if s_lo <= s_new <= s_hi:
            s = s_new
    return s
