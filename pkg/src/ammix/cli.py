"""Command-line surface: curve sampling, certification, quoting, analysis
tables, Stableswap comparison, and simulation runs/sweeps.

Data goes to stdout as CSV (default) or JSON, diagnostics to stderr.
Numeric output is printed with 12 significant digits and identical seeded
invocations are byte-identical.  Exit codes: 0 success, 2 invalid
parameters or usage, 3 failed convexity certification, 4 infeasible trade.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from math import isfinite, isnan

import numpy as np

from ammix.analysis import PriceVector, arbitrage_state, impermanent_loss, reduced_value
from ammix.core import CurveParams, Family, MarketState, MixSpec, eval_mixed
from ammix.errors import AmmixError, InsufficientLiquidityError, OutOfRangeError
from ammix.exchange import Currency, quote
from ammix.parametrize import point_at
from ammix.schedules import (
    Parabolic,
    PowerLaw,
    Uniform,
    check_convexity,
    stableswap_dynamic_residual,
)
from ammix.simulate import SimConfig, batch_summary, run_sim

SAMPLE_INSET = 1e-4


def _fmt(value) -> str:
    """12-significant-digit rendering shared by both output formats."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if not isfinite(value):
            return ""
        return f"{value:.12g}"
    return str(value)


def _fmt_json(value) -> str:
    if value is None or (isinstance(value, float) and not isfinite(value)):
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.12g}"
    if isinstance(value, int):
        return str(value)
    return json.dumps(str(value))


def emit_table(rows: list[dict], format: str = "csv") -> str:
    """Serialize uniform-schema rows; byte-stable for identical inputs."""
    if not rows:
        raise AmmixError("no rows to emit")
    keys = list(rows[0].keys())
    for row in rows:
        if list(row.keys()) != keys:
            raise AmmixError(f"row schema mismatch: {list(row.keys())!r} != {keys!r}")
    if format == "csv":
        lines = [",".join(keys)]
        lines.extend(",".join(_fmt(row[k]) for k in keys) for row in rows)
        return "\n".join(lines) + "\n"
    if format == "json":
        body = ",\n".join(
            "{" + ",".join(f"{json.dumps(k)}:{_fmt_json(row[k])}" for k in keys) + "}"
            for row in rows
        )
        return "[\n" + body + "\n]\n"
    raise AmmixError(f"unknown format {format!r}")


def _load_config(path: str | None) -> dict:
    if not path:
        return {}
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise AmmixError("config file must hold a JSON object")
    return data


def _curve_from(ns: argparse.Namespace, config: dict) -> CurveParams:
    curve_cfg = config.get("curve", {})
    def pick(flag, key, default):
        v = getattr(ns, flag)
        if v is not None:
            return v
        return curve_cfg.get(key, default)
    return CurveParams(
        a=pick("a", "a", 1.0),
        b=pick("b", "b", 1.0),
        x0=pick("x0", "x0", 1.0),
        y0=pick("y0", "y0", 1.0),
    )


_MIX_ALIASES = {"csmm": 0.0, "cpmm": 1.0}
_FAMILY_BY_NAME = {"arith": Family.ARITHMETIC, "geo": Family.GEOMETRIC, "hom": Family.HOMOTOPY}


def _schedule_from(ns: argparse.Namespace):
    name = getattr(ns, "schedule", None)
    if name is None:
        return None
    if name == "uniform":
        if ns.t is None:
            raise AmmixError("--schedule uniform requires --t")
        return Uniform(ns.t)
    if name == "powerlaw":
        if ns.k is None:
            raise AmmixError("--schedule powerlaw requires --k")
        return PowerLaw(ns.k)
    if name == "parabolic":
        if ns.bias is None or ns.center is None:
            raise AmmixError("--schedule parabolic requires --bias and --center")
        return Parabolic(bias=ns.bias, center=ns.center)
    raise AmmixError(f"unknown schedule {name!r}")


def _mix_from(ns: argparse.Namespace) -> MixSpec:
    alias = ns.mix
    if alias in _MIX_ALIASES:
        return MixSpec.arithmetic(_MIX_ALIASES[alias])
    family = _FAMILY_BY_NAME.get(alias)
    if family is None:
        raise AmmixError(f"unknown mix {alias!r}")
    schedule = _schedule_from(ns)
    if schedule is not None:
        return MixSpec(family, schedule)
    if ns.t is None:
        raise AmmixError(f"--mix {alias} requires --t (or a --schedule for hom)")
    return MixSpec(family, Uniform(ns.t))


def _floats(text: str) -> list[float]:
    out = [float(part) for part in text.split(",") if part.strip()]
    if not out:
        raise AmmixError(f"empty number list: {text!r}")
    return out


def _cmd_curve_sample(ns: argparse.Namespace) -> tuple[str, int]:
    config = _load_config(ns.config)
    params = _curve_from(ns, config)
    mix = _mix_from(ns)
    n = ns.samples
    rows = []
    for i in range(n):
        s = SAMPLE_INSET + (1.0 - 2.0 * SAMPLE_INSET) * i / (n - 1)
        state = point_at(params, mix, s)
        rows.append({"s": s, "x": state.x, "y": state.y})
    return emit_table(rows, ns.format), 0


def _cmd_convexity(ns: argparse.Namespace) -> tuple[str, int]:
    config = _load_config(ns.config)
    params = _curve_from(ns, config)
    schedule = _schedule_from(ns)
    if schedule is None:
        raise AmmixError("convexity requires --schedule")
    report = check_convexity(params, schedule, grid_size=ns.grid)
    rows = [{
        "passed": report.passed,
        "min_margin": report.min_margin,
        "worst_s": report.worst_s,
        "grid_size": report.grid_size,
        "skipped": report.skipped,
    }]
    return emit_table(rows, ns.format), 0 if report.passed else 3


def _cmd_quote(ns: argparse.Namespace) -> tuple[str, int]:
    config = _load_config(ns.config)
    params = _curve_from(ns, config)
    mix = _mix_from(ns)
    state = MarketState(ns.x, ns.y)
    currency = Currency(ns.sell)
    q = quote(params, mix, state, currency, ns.amount)
    rows = [{
        "input_currency": q.input_currency.value,
        "input_amount": q.input_amount,
        "output_amount": q.output_amount,
        "spot_before": q.spot_before,
        "effective_price": q.effective_price,
        "slippage": q.slippage,
    }]
    return emit_table(rows, ns.format), 0


def _cmd_il_table(ns: argparse.Namespace) -> tuple[str, int]:
    config = _load_config(ns.config)
    params = _curve_from(ns, config)
    mix = _mix_from(ns)
    init = params.initial_state
    r0 = params.a / params.b
    rows = []
    for ratio in _floats(ns.ratios):
        p_f = PriceVector(ratio * r0, 1.0)
        x_f = arbitrage_state(params, mix, p_f)
        report = impermanent_loss(p_f, init, x_f)
        rows.append({"ratio": ratio, "il": report.il})
    return emit_table(rows, ns.format), 0


def _cmd_pvf_table(ns: argparse.Namespace) -> tuple[str, int]:
    config = _load_config(ns.config)
    params = _curve_from(ns, config)
    r_grid = np.linspace(ns.r_min, ns.r_max, ns.r_points)
    rows = []
    for stability in _floats(ns.stabilities):
        if ns.bias is None:
            mix = MixSpec.homotopy(1.0 - stability)
        else:
            center = 0.9 * (1.0 - stability) + 0.1 * stability
            mix = MixSpec.scheduled(Parabolic(bias=ns.bias, center=center))
        for r in r_grid:
            rows.append({
                "stability": stability,
                "r": float(r),
                "value": reduced_value(params, mix, float(r)),
            })
    return emit_table(rows, ns.format), 0


def _solve_dynamic_y(amp: float, scale: float, x: float) -> float:
    # residual is +inf at y -> 0 and eventually negative; bisect the sign change
    lo = 1e-12 * scale
    hi = 4.0 * scale
    while stableswap_dynamic_residual(amp, scale, MarketState(x, hi)) > 0.0:
        hi *= 2.0
        if hi > 1e12 * scale:
            raise AmmixError(f"no curve crossing found for x={x!r}")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if stableswap_dynamic_residual(amp, scale, MarketState(x, mid)) > 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-15 * hi:
            break
    return 0.5 * (lo + hi)


def _cmd_stableswap_compare(ns: argparse.Namespace) -> tuple[str, int]:
    amp, scale = ns.amp, ns.scale
    half = scale / 2.0
    params = CurveParams(1.0, 1.0, half, half)
    uniform = MixSpec.homotopy(ns.uniform_t)
    xs = np.linspace(0.2 * half, 2.5 * half, ns.samples)
    rows = []
    for x in xs:
        x = float(x)
        y = _solve_dynamic_y(amp, scale, x)
        t_dyn = scale * scale / (16.0 * amp * x * y + scale * scale)
        state = MarketState(x, y)
        rows.append({
            "x": x,
            "y": y,
            "t_dynamic": t_dyn,
            "uniform_residual": eval_mixed(params, uniform, state) - 1.0,
        })
    return emit_table(rows, ns.format), 0


def _sim_config_from(ns: argparse.Namespace, config: dict) -> SimConfig:
    sim_cfg = dict(config.get("sim", {}))
    init_x = sim_cfg.pop("init_x", 3000.0)
    init_y = sim_cfg.pop("init_y", 1000.0)
    base = SimConfig(init_state=MarketState(init_x, init_y), **sim_cfg)
    overrides = {}
    for flag in ("steps", "stability", "runs", "seed"):
        v = getattr(ns, flag, None)
        if v is not None:
            overrides[flag] = v
    return replace(base, **overrides) if overrides else base


def _cmd_sim_run(ns: argparse.Namespace) -> tuple[str, int]:
    config = _load_config(ns.config)
    sim_config = _sim_config_from(ns, config)
    trace = run_sim(sim_config)
    rows = []
    for i in range(len(trace)):
        cur = trace.extracted[i]
        slip = trace.slippage[i]
        rows.append({
            "step": i,
            "x": float(trace.x[i]),
            "y": float(trace.y[i]),
            "internal_rate": float(trace.internal_rate[i]),
            "external_rate": float(trace.external_rate[i]),
            "extracted": cur.value if cur is not None else None,
            "trade_output": None if isnan(trace.trade_output[i]) else float(trace.trade_output[i]),
            "trade_input": None if isnan(trace.trade_input[i]) else float(trace.trade_input[i]),
            "slippage": None if isnan(slip) else float(slip),
        })
    return emit_table(rows, ns.format), 0


def _cmd_sim_sweep(ns: argparse.Namespace) -> tuple[str, int]:
    config = _load_config(ns.config)
    sim_config = _sim_config_from(ns, config)
    stabilities = _floats(ns.stabilities)
    rows = []
    for summary in batch_summary(sim_config, stabilities):
        rows.append({
            "stability": summary.stability,
            "mse_internal_external": summary.mse_internal_external,
            "early_window_slippage": summary.early_window_slippage,
            "final_window_mse": summary.final_window_mse,
        })
    return emit_table(rows, ns.format), 0


def _add_curve_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--a", type=float, default=None, help="linear weight of currency 1")
    p.add_argument("--b", type=float, default=None, help="linear weight of currency 2")
    p.add_argument("--x0", type=float, default=None, help="initial reserve of currency 1")
    p.add_argument("--y0", type=float, default=None, help="initial reserve of currency 2")
    p.add_argument("--config", default=None, help="JSON config file; flags override it")


def _add_mix_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--mix", required=True, choices=["csmm", "cpmm", "arith", "geo", "hom"])
    p.add_argument("--t", type=float, default=None, help="uniform blend weight in [0, 1]")
    _add_schedule_flags(p)


def _add_schedule_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--schedule", choices=["uniform", "powerlaw", "parabolic"], default=None)
    p.add_argument("--k", type=float, default=None, help="power-law exponent")
    p.add_argument("--bias", type=float, default=None, help="parabolic t(0)")
    p.add_argument("--center", type=float, default=None, help="parabolic t(s0)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ammix",
        description="Mixed constant-sum/constant-product market maker toolkit",
    )
    parser.add_argument("--format", choices=["csv", "json"], default="csv")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("curve-sample", help="sample (s, x, y) points along a curve")
    _add_mix_flags(p)
    _add_curve_flags(p)
    p.add_argument("--samples", type=int, default=512)
    p.set_defaults(handler=_cmd_curve_sample)

    p = sub.add_parser("convexity", help="certify a schedule's curve convexity")
    _add_schedule_flags(p)
    p.add_argument("--t", type=float, default=None, help="uniform blend weight")
    _add_curve_flags(p)
    p.add_argument("--grid", type=int, default=10_001)
    p.set_defaults(handler=_cmd_convexity)

    p = sub.add_parser("quote", help="price a swap without executing it")
    _add_mix_flags(p)
    _add_curve_flags(p)
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--y", type=float, required=True)
    p.add_argument("--sell", required=True, choices=["cur1", "cur2"])
    p.add_argument("--amount", type=float, required=True)
    p.set_defaults(handler=_cmd_quote)

    p = sub.add_parser("il-table", help="impermanent loss against rate drift")
    _add_mix_flags(p)
    _add_curve_flags(p)
    p.add_argument("--ratios", default="0.25,0.5,2,4", help="final/initial rate ratios")
    p.set_defaults(handler=_cmd_il_table)

    p = sub.add_parser("pvf-table", help="reduced portfolio value over a rate grid")
    _add_curve_flags(p)
    p.add_argument("--stabilities", default="0,0.25,0.5,0.75,1")
    p.add_argument("--bias", type=float, default=None,
                   help="use a parabolic schedule with this bias instead of uniform blends")
    p.add_argument("--r-min", type=float, default=0.1)
    p.add_argument("--r-max", type=float, default=10.0)
    p.add_argument("--r-points", type=int, default=25)
    p.set_defaults(handler=_cmd_pvf_table)

    p = sub.add_parser("stableswap-compare",
                       help="trace the dynamic-blend Stableswap curve")
    p.add_argument("--amp", type=float, required=True)
    p.add_argument("--scale", type=float, required=True)
    p.add_argument("--samples", type=int, default=41)
    p.add_argument("--uniform-t", dest="uniform_t", type=float, default=0.5)
    p.set_defaults(handler=_cmd_stableswap_compare)

    p = sub.add_parser("sim-run", help="one seeded arbitrage simulation")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--stability", type=float, default=None)
    p.add_argument("--steps", type=int, default=None)
    p.add_argument("--config", default=None)
    p.set_defaults(handler=_cmd_sim_run, runs=None)

    p = sub.add_parser("sim-sweep", help="seeded stability sweep with averaged runs")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--stabilities", default=",".join(f"{0.05 * i:.2f}" for i in range(1, 20)))
    p.add_argument("--runs", type=int, default=None)
    p.add_argument("--config", default=None)
    p.set_defaults(handler=_cmd_sim_sweep, stability=None, steps=None)

    return parser


def run_command(argv: list[str]) -> int:
    """Parse and dispatch one invocation; returns the process exit code."""
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        text, code = ns.handler(ns)
    except (InsufficientLiquidityError, OutOfRangeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except (AmmixError, ValueError, TypeError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(text)
    return code


def main() -> None:
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
