# cython: language_level=3
"""Compiled scalar kernels; the line-for-line twin of ``pure.py``.

Both backends must produce the same values for the same inputs, so every
formula here keeps the evaluation order of the pure-Python fallback.
"""

from libc.math cimport copysign, exp, expm1, fabs, log, pow

from ammix.errors import NonDifferentiablePointError, ScheduleRangeError

BACKEND_NAME = "compiled"

cdef double _REL_TOL = 1e-12
cdef int _MAX_ITER = 200


cdef inline double _g_of(double s, double a, double b, double x0, double y0,
                         double alpha, double beta):
    cdef double deg = alpha + beta
    cdef double c = a * x0 + b * y0
    cdef double s0 = a * x0 / c
    return (alpha * log(s0 / s) + beta * log((1.0 - s0) / (1.0 - s))) / deg


cdef inline double _gp_of(double s, double alpha, double beta):
    cdef double deg = alpha + beta
    return (beta * s - alpha * (1.0 - s)) / (deg * s * (1.0 - s))


def ray_log_ratio(double s, double a, double b, double x0, double y0,
                  double alpha, double beta):
    return _g_of(s, a, b, x0, y0, alpha, beta), _gp_of(s, alpha, beta)


cdef double _lam_arith(double s, double t, double a, double b, double x0,
                       double y0, double alpha, double beta):
    cdef double deg = alpha + beta
    cdef double c = a * x0 + b * y0
    cdef double g, p, lo, hi, lam, r, f, fp, nxt
    cdef int i
    if t <= 0.0:
        return c
    g = _g_of(s, a, b, x0, y0, alpha, beta)
    p = c * exp(g)
    if t >= 1.0:
        return p
    lo = 0.0
    hi = c / (1.0 - t)
    lam = c * p / ((1.0 - t) * p + t * c)
    for i in range(_MAX_ITER):
        r = lam / p
        f = lam * (1.0 - t) / c + t * pow(r, deg) - 1.0
        if f > 0.0:
            hi = lam
        else:
            lo = lam
        fp = (1.0 - t) / c + t * deg * pow(r, deg) / lam
        nxt = lam - f / fp
        if not (lo < nxt < hi):
            nxt = 0.5 * (lo + hi)
        if fabs(nxt - lam) <= _REL_TOL * nxt:
            return nxt
        lam = nxt
    return lam


def lam_arith(double s, double t, double a, double b, double x0, double y0,
              double alpha, double beta):
    return _lam_arith(s, t, a, b, x0, y0, alpha, beta)


cdef double _lam_uniform(int family, double s, double t, double a, double b,
                         double x0, double y0, double alpha, double beta):
    cdef double deg = alpha + beta
    cdef double c = a * x0 + b * y0
    cdef double g, d
    if family == 0:
        return _lam_arith(s, t, a, b, x0, y0, alpha, beta)
    g = _g_of(s, a, b, x0, y0, alpha, beta)
    if family == 1:
        d = (1.0 - t) + deg * t
        return c * exp(g * deg * t / d)
    return c + c * expm1(g) * t


def lam_uniform(int family, double s, double t, double a, double b,
                double x0, double y0, double alpha, double beta):
    return _lam_uniform(family, s, t, a, b, x0, y0, alpha, beta)


def lam_uniform_with_prime(int family, double s, double t, double a, double b,
                           double x0, double y0, double alpha, double beta):
    cdef double deg = alpha + beta
    cdef double c = a * x0 + b * y0
    cdef double g = _g_of(s, a, b, x0, y0, alpha, beta)
    cdef double gp = _gp_of(s, alpha, beta)
    cdef double p = c * exp(g)
    cdef double lam, rd, d
    if family == 0:
        lam = _lam_arith(s, t, a, b, x0, y0, alpha, beta)
        if t <= 0.0:
            return lam, 0.0
        rd = t * deg * pow(lam / p, deg)
        return lam, rd * gp / ((1.0 - t) / c + rd / lam)
    if family == 1:
        d = (1.0 - t) + deg * t
        lam = c * exp(g * deg * t / d)
        return lam, lam * deg * t * gp / d
    lam = c + c * expm1(g) * t
    return lam, p * gp * t


cdef double _sched_value(int kind, double q0, double q1, double q2, double s,
                         double s0) except? -2.0:
    cdef double t, m, d
    if kind == 0:
        t = q0
    elif kind == 1:
        m = s0 if s0 >= 1.0 - s0 else 1.0 - s0
        d = s - s0
        t = 0.0 if d == 0.0 else pow(fabs(d) / m, q0)
    else:
        t = (q0 * s + q1) * s + q2
    if t < -1e-12 or t > 1.0 + 1e-12:
        raise ScheduleRangeError(f"schedule value t={t!r} outside [0, 1] at s={s!r}")
    if t < 0.0:
        return 0.0
    if t > 1.0:
        return 1.0
    return t


def sched_value(int kind, double q0, double q1, double q2, double s, double s0):
    return _sched_value(kind, q0, q1, q2, s, s0)


def sched_first(int kind, double q0, double q1, double q2, double s, double s0):
    cdef double m, d, u, t
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
        u = fabs(d) / m
        return pow(u, q0), copysign(q0 / m * pow(u, q0 - 1.0), d)
    t = (q0 * s + q1) * s + q2
    return t, 2.0 * q0 * s + q1


def sched_eval(int kind, double q0, double q1, double q2, double s, double s0):
    cdef double m, d, u, t, tp, tpp
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
        u = fabs(d) / m
        t = pow(u, q0)
        tp = copysign(q0 / m * pow(u, q0 - 1.0), d)
        tpp = q0 * (q0 - 1.0) / (m * m) * pow(u, q0 - 2.0)
        return t, tp, tpp
    t = (q0 * s + q1) * s + q2
    return t, 2.0 * q0 * s + q1, 2.0 * q0


def lam_chain(int kind, double q0, double q1, double q2, double s, double a,
              double b, double x0, double y0, double alpha, double beta):
    cdef double deg = alpha + beta
    cdef double c = a * x0 + b * y0
    cdef double s0 = a * x0 / c
    t_tuple = sched_eval(kind, q0, q1, q2, s, s0)
    cdef double t = t_tuple[0]
    cdef double tp = t_tuple[1]
    cdef double tpp = t_tuple[2]
    cdef double g = _g_of(s, a, b, x0, y0, alpha, beta)
    cdef double gp = _gp_of(s, alpha, beta)
    cdef double p = c * exp(g)
    cdef double pmc = c * expm1(g)
    cdef double pp = p * gp
    cdef double u = 1.0 - s
    cdef double num = (2.0 * alpha * alpha * u * u
                       + alpha * beta * pow(1.0 - 2.0 * s, 2)
                       + 2.0 * beta * beta * s * s)
    cdef double ppp = num / (s * s * u * u * deg * deg) * p
    cdef double lam = pmc * t + c
    cdef double lamp = pmc * tp + pp * t
    cdef double lampp = pmc * tpp + 2.0 * pp * tp + ppp * t
    return lam, lamp, lampp


cdef double _lam_at(int family, int kind, double q0, double q1, double q2,
                    double s, double a, double b, double x0, double y0,
                    double alpha, double beta) except? -2.0:
    cdef double c, t, g
    if kind == 0:
        return _lam_uniform(family, s, q0, a, b, x0, y0, alpha, beta)
    c = a * x0 + b * y0
    t = _sched_value(kind, q0, q1, q2, s, a * x0 / c)
    g = _g_of(s, a, b, x0, y0, alpha, beta)
    return c + c * expm1(g) * t


def lam_at(int family, int kind, double q0, double q1, double q2, double s,
           double a, double b, double x0, double y0, double alpha, double beta):
    return _lam_at(family, kind, q0, q1, q2, s, a, b, x0, y0, alpha, beta)


def lam_prime_at(int family, int kind, double q0, double q1, double q2,
                 double s, double a, double b, double x0, double y0,
                 double alpha, double beta):
    cdef double c, g, gp, p, t, tp
    if kind == 0:
        return lam_uniform_with_prime(family, s, q0, a, b, x0, y0, alpha, beta)
    c = a * x0 + b * y0
    t_tp = sched_first(kind, q0, q1, q2, s, a * x0 / c)
    t = t_tp[0]
    tp = t_tp[1]
    g = _g_of(s, a, b, x0, y0, alpha, beta)
    gp = _gp_of(s, alpha, beta)
    p = c * exp(g)
    return c + c * expm1(g) * t, c * expm1(g) * tp + p * gp * t


def solve_s_for_x(int family, int kind, double q0, double q1, double q2,
                  double x_target, double a, double b, double x0, double y0,
                  double alpha, double beta, double s_lo, double s_hi):
    cdef double lo = s_lo
    cdef double hi = s_hi
    cdef double mid, xm, s, lam, lamp, xp, s_new
    cdef int i
    for i in range(_MAX_ITER):
        mid = 0.5 * (lo + hi)
        xm = mid / a * _lam_at(family, kind, q0, q1, q2, mid, a, b, x0, y0, alpha, beta)
        if xm < x_target:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-14:
            break
    s = 0.5 * (lo + hi)
    try:
        lam_lamp = lam_prime_at(family, kind, q0, q1, q2, s, a, b, x0, y0, alpha, beta)
    except NonDifferentiablePointError:
        return s
    lam = lam_lamp[0]
    lamp = lam_lamp[1]
    xp = (lam + s * lamp) / a
    if xp > 0.0:
        s_new = s - (s / a * lam - x_target) / xp
        if s_lo <= s_new <= s_hi:
            s = s_new
    return s
