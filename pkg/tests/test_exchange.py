import pytest

from ammix import (
    Currency,
    Family,
    MarketState,
    MixSpec,
    PowerLaw,
    Uniform,
    eval_mixed,
    max_extractable,
    quote,
    swap,
)
from ammix.errors import InsufficientLiquidityError, InvalidParameterError

FAMILIES = [Family.ARITHMETIC, Family.GEOMETRIC, Family.HOMOTOPY]


def test_quote_cpmm_sell_one(unit_params, unit_state):
    q = quote(unit_params, MixSpec.arithmetic(1.0), unit_state, Currency.CUR1, 1.0)
    assert q.output_amount == pytest.approx(0.5, rel=1e-9)
    assert q.spot_before == pytest.approx(1.0, rel=1e-12)
    assert q.effective_price == pytest.approx(0.5, rel=1e-9)
    assert q.slippage == pytest.approx(0.5, rel=1e-9)


def test_quote_csmm_no_slippage(unit_params, unit_state):
    q = quote(unit_params, MixSpec.arithmetic(0.0), unit_state, Currency.CUR1, 0.5)
    assert q.output_amount == pytest.approx(0.5, rel=1e-9)
    assert q.slippage == pytest.approx(0.0, abs=1e-12)


def test_quote_homotopy_between_endpoints(unit_params, unit_state):
    # the mixed curve pays between the constant-sum and constant-product outputs
    q = quote(unit_params, MixSpec.homotopy(0.5), unit_state, Currency.CUR1, 0.5)
    assert 1 / 3 < q.output_amount < 0.5
    # membership of the implied post-trade state
    post = MarketState(1.5, 1.0 - q.output_amount)
    assert abs(eval_mixed(unit_params, MixSpec.homotopy(0.5), post) - 1.0) <= 1e-10


def test_quote_rejects_zero_amount(unit_params, unit_state):
    with pytest.raises(InvalidParameterError):
        quote(unit_params, MixSpec.homotopy(0.5), unit_state, Currency.CUR1, 0.0)


def test_swap_cpmm(unit_params, unit_state):
    new_state, q = swap(unit_params, MixSpec.arithmetic(1.0), unit_state, Currency.CUR1, 1.0)
    assert new_state.x == pytest.approx(2.0, rel=1e-12)
    assert new_state.y == pytest.approx(0.5, rel=1e-9)


def test_swap_reverse_returns_to_start(unit_params, unit_state):
    for family in FAMILIES:
        for t in (0.0, 0.5, 1.0):
            mix = MixSpec(family, Uniform(t))
            mid, q = swap(unit_params, mix, unit_state, Currency.CUR1, 0.4)
            back, _ = swap(unit_params, mix, mid, Currency.CUR2, q.output_amount)
            assert back.x == pytest.approx(unit_state.x, abs=1e-9)
            assert back.y == pytest.approx(unit_state.y, abs=1e-9)


def test_swap_path_independence(pool_params):
    state = pool_params.initial_state
    for family in FAMILIES:
        mix = MixSpec(family, Uniform(0.5))
        one_shot, _ = swap(pool_params, mix, state, Currency.CUR1, 100.0)
        mid, _ = swap(pool_params, mix, state, Currency.CUR1, 60.0)
        two_step, _ = swap(pool_params, mix, mid, Currency.CUR1, 40.0)
        assert two_step.x == pytest.approx(one_shot.x, abs=1e-9)
        assert two_step.y == pytest.approx(one_shot.y, abs=1e-9)


def test_swap_conserves_invariant(pool_params):
    state = pool_params.initial_state
    for family in FAMILIES:
        for t in (0.25, 0.75):
            mix = MixSpec(family, Uniform(t))
            post, _ = swap(pool_params, mix, state, Currency.CUR2, 50.0)
            assert abs(eval_mixed(pool_params, mix, post) - 1.0) <= 1e-10


def test_swap_scheduled_pool_less_slippage_than_cpmm(pool_params):
    # selling 2% of the cur1 reserve: the stabilized schedule quotes closer
    # to spot than the pure constant-product curve
    state = pool_params.initial_state
    stabilized = MixSpec.scheduled(PowerLaw(4.0))
    cpmm = MixSpec.homotopy(1.0)
    post, q_stab = swap(pool_params, stabilized, state, Currency.CUR1, 60.0)
    assert abs(eval_mixed(pool_params, stabilized, post) - 1.0) <= 1e-10
    q_cpmm = quote(pool_params, cpmm, state, Currency.CUR1, 60.0)
    assert q_stab.slippage < q_cpmm.slippage


def test_trader_never_beats_spot(unit_params, pool_params):
    # convex curve: the realized price of a sell cannot exceed the quoted spot
    for params in (unit_params, pool_params):
        state = params.initial_state
        for family in FAMILIES:
            for t in (0.0, 0.3, 0.8, 1.0):
                mix = MixSpec(family, Uniform(t))
                q = quote(params, mix, state, Currency.CUR1, 0.05 * state.x)
                assert q.effective_price <= q.spot_before + 1e-12 * q.spot_before


def test_insufficient_liquidity_carries_max(unit_params, unit_state):
    mix = MixSpec.arithmetic(0.0)
    with pytest.raises(InsufficientLiquidityError) as err:
        quote(unit_params, mix, unit_state, Currency.CUR1, 5.0)
    assert err.value.max_amount == pytest.approx(1.0, rel=1e-9)
    # the reported maximum is itself tradable
    q = quote(unit_params, mix, unit_state, Currency.CUR1, err.value.max_amount * (1 - 1e-9))
    assert q.output_amount <= 1.0


def test_max_extractable_csmm(unit_params, unit_state):
    bound = max_extractable(unit_params, MixSpec.arithmetic(0.0), unit_state, Currency.CUR2)
    assert bound.attainable
    assert bound.amount == pytest.approx(1.0, abs=1e-9)


def test_max_extractable_cpmm(unit_params, unit_state):
    bound = max_extractable(unit_params, MixSpec.arithmetic(1.0), unit_state, Currency.CUR2)
    assert not bound.attainable
    assert bound.amount == 1.0


def test_max_extractable_arith_strictly_inside(unit_params, unit_state):
    bound = max_extractable(unit_params, MixSpec.arithmetic(0.5), unit_state, Currency.CUR2)
    assert bound.attainable
    assert bound.amount < 1.0
    # oracle: bisect the largest solvable trade in the extraction direction
    lo, hi = 0.0, 1.0
    mix = MixSpec.arithmetic(0.5)
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        try:
            from ammix import state_for_y
            state_for_y(unit_params, mix, 1.0 - mid)
            lo = mid
        except Exception:
            hi = mid
    assert bound.amount == pytest.approx(lo, abs=1e-9)


def test_liquidity_dichotomy(unit_params, unit_state):
    # finite for arithmetic below t = 1 and for every family at t = 0;
    # supremum-only for geometric/homotopy above t = 0
    for t in (0.0, 0.5):
        assert max_extractable(unit_params, MixSpec.arithmetic(t), unit_state, Currency.CUR2).attainable
    for family in (Family.GEOMETRIC, Family.HOMOTOPY):
        assert max_extractable(unit_params, MixSpec(family, Uniform(0.0)), unit_state, Currency.CUR2).attainable
        for t in (0.5, 1.0):
            bound = max_extractable(unit_params, MixSpec(family, Uniform(t)), unit_state, Currency.CUR2)
            assert not bound.attainable
            assert bound.amount == 1.0


def test_max_extractable_cur1_side(unit_params, unit_state):
    bound = max_extractable(unit_params, MixSpec.arithmetic(0.0), unit_state, Currency.CUR1)
    assert bound.attainable
    assert bound.amount == pytest.approx(1.0, abs=1e-9)
