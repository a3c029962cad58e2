"""The general-n Stableswap invariant and its arithmetic-mixing form.

Stableswap's leverage parameter chi interpolates between constant-product
(chi = 0) and constant-sum (chi -> infinity).  Normalizing the invariant
shows it is exactly an arithmetic mixing with blend weight
t = n**-n / (chi + n**-n); ``equivalence_check`` verifies that identity
numerically on arbitrary states.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isfinite, prod
from typing import Sequence

from ammix.errors import InvalidParameterError


@dataclass(frozen=True)
class StableswapParams:
    """Pool constants: currency count n, invariant scale, and leverage chi.

    The balanced initial state holds scale/n of every currency.
    """

    n: int
    scale: float
    chi: float

    def __post_init__(self) -> None:
        if self.n < 2:
            raise InvalidParameterError(f"n must be >= 2, got {self.n!r}")
        if not (isfinite(self.scale) and self.scale > 0.0):
            raise InvalidParameterError(f"scale must be positive and finite, got {self.scale!r}")
        if not (isfinite(self.chi) and self.chi >= 0.0):
            raise InvalidParameterError(f"chi must be >= 0, got {self.chi!r}")

    @property
    def balanced_state(self) -> tuple[float, ...]:
        return (self.scale / self.n,) * self.n


def _check_reserves(n: int, reserves: Sequence[float]) -> None:
    if len(reserves) != n:
        raise InvalidParameterError(f"expected {n} reserves, got {len(reserves)}")
    if any(not (isfinite(x) and x > 0.0) for x in reserves):
        raise InvalidParameterError(f"reserves must be positive and finite, got {reserves!r}")


def invariant_residual(ss: StableswapParams, reserves: Sequence[float]) -> float:
    """LHS - RHS of chi*D**(n-1)*sum(x) + prod(x) = chi*D**n + (D/n)**n."""
    _check_reserves(ss.n, reserves)
    d, n, chi = ss.scale, ss.n, ss.chi
    lhs = chi * d ** (n - 1) * sum(reserves) + prod(reserves)
    rhs = chi * d**n + (d / n) ** n
    return lhs - rhs


def t_from_chi(chi: float, n: int) -> float:
    """Blend weight of the equivalent arithmetic mixing: n**-n / (chi + n**-n)."""
    if chi < 0.0 or not isfinite(chi):
        raise InvalidParameterError(f"chi must be >= 0 and finite, got {chi!r}")
    if n < 2:
        raise InvalidParameterError(f"n must be >= 2, got {n!r}")
    nn = float(n) ** (-n)
    return nn / (chi + nn)


def chi_from_t(t: float, n: int) -> float:
    """Inverse of t_from_chi: chi = n**-n * (1 - t) / t."""
    if not (0.0 < t <= 1.0):
        raise InvalidParameterError(f"t must be in (0, 1], got {t!r}")
    if n < 2:
        raise InvalidParameterError(f"n must be >= 2, got {n!r}")
    return float(n) ** (-n) * (1.0 - t) / t


def dynamic_chi(amplification: float, scale: float, reserves: Sequence[float]) -> float:
    """State-tracking leverage chi = A * prod(x) / (D/n)**n; equals A when balanced."""
    if not (isfinite(amplification) and amplification > 0.0):
        raise InvalidParameterError(f"amplification must be > 0, got {amplification!r}")
    if not (isfinite(scale) and scale > 0.0):
        raise InvalidParameterError(f"scale must be > 0, got {scale!r}")
    n = len(reserves)
    _check_reserves(n, reserves)
    return amplification * prod(reserves) / (scale / n) ** n


def normalized_components(scale: float, reserves: Sequence[float]) -> tuple[float, float]:
    """(A0, A1) with A0 = sum(x)/D and A1 = (n/D)**n * prod(x); both 1 when balanced."""
    n = len(reserves)
    a0 = sum(reserves) / scale
    a1 = (n / scale) ** n * prod(reserves)
    return a0, a1


def equivalence_check(ss: StableswapParams, reserves: Sequence[float]) -> float:
    """|A0*(1-t) + A1*t - 1| with t = t_from_chi(chi, n).

    Zero exactly when the reserves satisfy the Stableswap invariant: the
    numerical content of the chi <-> t reparametrization.
    """
    _check_reserves(ss.n, reserves)
    t = t_from_chi(ss.chi, ss.n)
    a0, a1 = normalized_components(ss.scale, reserves)
    return abs(a0 * (1.0 - t) + a1 * t - 1.0)


def solve_reserve(ss: StableswapParams, partial: Sequence[float]) -> float:
    """Last reserve putting (partial..., x_n) on the invariant, by bisection.

    The residual is strictly increasing in the last coordinate, so the root
    is unique.
    """
    if len(partial) != ss.n - 1:
        raise InvalidParameterError(f"expected {ss.n - 1} fixed reserves, got {len(partial)}")
    lo = 1e-12 * ss.scale / ss.n
    hi = 64.0 * ss.scale
    f = lambda x: invariant_residual(ss, [*partial, x])
    flo, fhi = f(lo), f(hi)
    if flo > 0.0 or fhi < 0.0:
        raise InvalidParameterError(
            f"no on-surface completion for partial reserves {partial!r}"
        )
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if f(mid) < 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-15 * hi:
            break
    return 0.5 * (lo + hi)
