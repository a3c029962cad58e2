"""Swap execution and quoting along a fixed curve, fee-free.

A trade adds the input amount to one reserve and walks the state along the
invariant's level set; the drop in the other reserve is the output.
Slippage compares the pre-trade spot price p1 against the realized price
p2 = output/input: slippage = |p1 - p2| / |p1|.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from math import isfinite

from ammix.core import CurveParams, Family, MarketState, MixSpec, spot_rate
from ammix.errors import InsufficientLiquidityError, InvalidParameterError, OutOfRangeError
from ammix.parametrize import state_for_x, state_for_y
from ammix.schedules import S_MAX, S_MIN, Uniform
from ammix import parametrize


class Currency(Enum):
    CUR1 = "cur1"
    CUR2 = "cur2"


@dataclass(frozen=True)
class Quote:
    """Priced trade: what goes in, what comes out, and the realized slippage."""

    input_currency: Currency
    input_amount: float
    output_amount: float
    spot_before: float
    effective_price: float
    slippage: float


def _solve_trade(params: CurveParams, mix: MixSpec, state: MarketState,
                 input_currency: Currency, amount: float) -> tuple[MarketState, Quote]:
    if not (isfinite(amount) and amount > 0.0):
        raise InvalidParameterError(f"trade amount must be positive and finite, got {amount!r}")
    rate = spot_rate(params, mix, state)
    if input_currency is Currency.CUR1:
        p1 = rate
        try:
            new_state = state_for_x(params, mix, state.x + amount)
        except OutOfRangeError as exc:
            raise InsufficientLiquidityError(
                f"trade of {amount!r} cur1 exceeds the curve's reach",
                max_amount=exc.max_reachable - state.x,
            ) from exc
        output = state.y - new_state.y
    else:
        p1 = 1.0 / rate
        try:
            new_state = state_for_y(params, mix, state.y + amount)
        except OutOfRangeError as exc:
            raise InsufficientLiquidityError(
                f"trade of {amount!r} cur2 exceeds the curve's reach",
                max_amount=exc.max_reachable - state.y,
            ) from exc
        output = state.x - new_state.x
    p2 = output / amount
    quote_ = Quote(
        input_currency=input_currency,
        input_amount=amount,
        output_amount=output,
        spot_before=p1,
        effective_price=p2,
        slippage=abs(p1 - p2) / abs(p1),
    )
    return new_state, quote_


def quote(params: CurveParams, mix: MixSpec, state: MarketState,
          input_currency: Currency, amount: float) -> Quote:
    """Price a trade without executing it."""
    return _solve_trade(params, mix, state, input_currency, amount)[1]


def swap(params: CurveParams, mix: MixSpec, state: MarketState,
         input_currency: Currency, amount: float) -> tuple[MarketState, Quote]:
    """Execute a trade; returns the post-trade state and its quote."""
    return _solve_trade(params, mix, state, input_currency, amount)


@dataclass(frozen=True)
class LiquidityBound:
    """How much of a currency the curve can pay out.

    ``attainable`` marks curves that actually end at a finite intercept
    (constant-sum-like); supremum-only curves approach the bound
    asymptotically and never pay the full reserve.
    """

    amount: float
    attainable: bool


def max_extractable(params: CurveParams, mix: MixSpec, state: MarketState,
                    currency: Currency) -> LiquidityBound:
    """Bound on the extractable amount of ``currency`` from the state.

    Arithmetic mixings with t < 1 (and every family at t = 0) have finite
    intercepts, so the bound is reached at finite cost; geometric and
    homotopy mixings with t > 0 only approach the full reserve.
    """
    finite_side = False
    if isinstance(mix.schedule, Uniform):
        t = mix.schedule.t
        finite_side = t == 0.0 or (mix.family is Family.ARITHMETIC and t < 1.0)
    if not finite_side:
        reserve = state.y if currency is Currency.CUR2 else state.x
        return LiquidityBound(amount=reserve, attainable=False)
    if currency is Currency.CUR2:
        end = parametrize.point_at(params, mix, S_MAX)
        return LiquidityBound(amount=state.y - end.y, attainable=True)
    end = parametrize.point_at(params, mix, S_MIN)
    return LiquidityBound(amount=state.x - end.x, attainable=True)
