"""``latency-race`` command-line front end.

Exit codes: 0 success, 1 internal error, 2 config error, 3 model
precondition violated, 4 iteration budget exhausted.
"""
from __future__ import annotations

import argparse
import enum
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, is_dataclass

import numpy as np

from .channel import error_probabilities
from .config import SCHEMA_VERSION, ConfigError, RunConfig, load_config
from .decoder import f_value, optimal_threshold
from .dynamics import Updates, run_dynamics
from .equilibrium import (
    EquilibriumReport,
    Regime,
    StrategyPair,
    asymmetric_equilibrium,
    classify_regime,
)
from .errors import BudgetError, RangeError
from .payoff import FirmLabel, expected_payoff
from .rng import make_stream
from .simulate import monte_carlo_game

EXIT_OK, EXIT_INTERNAL, EXIT_CONFIG, EXIT_PRECONDITION, EXIT_BUDGET = 0, 1, 2, 3, 4

SWEEP_COLUMNS = (
    "schema_version", "axis", "value", "snr", "regime", "t_star", "f_t_star",
    "eq1_t_a", "eq1_t_b", "eq1_payoff_a", "eq1_payoff_b",
    "eq2_t_a", "eq2_t_b", "eq2_payoff_a", "eq2_payoff_b",
)


class PreconditionError(Exception):
    pass


def fmt_float(x: float) -> str:
    return format(x, ".17g")


def to_json(obj) -> str:
    """Deterministic JSON with floats at 17 significant digits."""
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, enum.Enum):
        return to_json(obj.value)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return fmt_float(x) if math.isfinite(x) else "null"
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if is_dataclass(obj):
        return to_json(asdict(obj))
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{to_json(str(k))}: {to_json(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(to_json(v) for v in obj) + "]"
    raise TypeError(f"cannot render {type(obj).__name__}")


def _pair(p: StrategyPair) -> list[int]:
    return [int(p.t_a), int(p.t_b)]


def _report_dict(report: EquilibriumReport, cfg: RunConfig, firm_a, firm_b, params) -> dict:
    out = {
        "schema_version": SCHEMA_VERSION,
        "command": "solve",
        "mode": cfg.mode,
        "snr_a": firm_a.snr,
        "snr_b": firm_b.snr,
        "regime": report.regime,
        "t_star": report.t_star,
        "equilibria": [_pair(p) for p in report.equilibria],
        "verified": report.verified,
        "reason": report.reason,
        "deviation": report.deviation,
    }
    if report.t_star is not None:
        ts = report.t_star
        symmetric = firm_a.channel == firm_b.channel
        for firm in (firm_a,) if symmetric else (firm_a, firm_b):
            key = "f_values" if symmetric else f"f_values_{firm.label.value}"
            out[key] = {
                "t_star_minus_1": f_value(ts - 1, firm.snr, params, cfg.mode) if ts >= 1 else None,
                "t_star": f_value(ts, firm.snr, params, cfg.mode),
                "t_star_plus_1": f_value(ts + 1, firm.snr, params, cfg.mode),
            }
    ev = report.evidence
    if "conditions" in ev:
        out["conditions"] = ev["conditions"]
        out["horizon_collapse"] = ev.get("horizon_collapse", False)
    if "inverses" in ev:
        out["inverses"] = ev["inverses"]
        out["stronger"] = ev["stronger"]
        out["orientation"] = ev.get("orientation")
        out["candidates"] = {
            name: {"pair": _pair(c["pair"]), "nash": c["nash"], "deviation": c["deviation"]}
            for name, c in ev["candidates"].items()
        }
    out["payoffs"] = [
        {
            "pair": _pair(p),
            "payoff_a": expected_payoff(p.t_a, p.t_b, firm_a, params, cfg.mode).total,
            "payoff_b": expected_payoff(p.t_b, p.t_a, firm_b, params, cfg.mode).total,
        }
        for p in report.equilibria
    ]
    return out


def cmd_solve(cfg: RunConfig) -> str:
    params = cfg.game_params()
    firm_a = cfg.firm(FirmLabel.A, params)
    firm_b = cfg.firm(FirmLabel.B, params)
    if firm_a.channel == firm_b.channel:
        report = classify_regime(params, firm_a, cfg.mode)
        if report.regime is Regime.NONE and report.t_star is None:
            raise PreconditionError(report.reason)
    else:
        try:
            report = asymmetric_equilibrium(firm_a, firm_b, params, cfg.mode)
        except RangeError as exc:
            raise PreconditionError(str(exc)) from exc
    return to_json(_report_dict(report, cfg, firm_a, firm_b, params)) + "\n"


def _sweep_point(args) -> list[str]:
    cfg, value = args
    axis = cfg.sweep.axis
    overrides = {}
    snr = None
    if axis == "snr":
        snr = float(value)
    elif axis == "t0":
        overrides["t0"] = int(round(value))
    elif axis == "p1":
        overrides["p1"] = float(value)
        overrides["p2"] = None
    else:
        overrides[axis] = float(value)
    params = cfg.game_params(**overrides)
    firm = cfg.firm(FirmLabel.A, params, snr=snr)
    report = classify_regime(params, firm, cfg.mode)
    row = [str(SCHEMA_VERSION), axis, fmt_float(float(value)), fmt_float(firm.snr), report.regime.value]
    if report.regime is Regime.NONE:
        return row + [""] * (len(SWEEP_COLUMNS) - len(row))
    row += [str(report.t_star), fmt_float(f_value(report.t_star, firm.snr, params, cfg.mode))]
    for i in range(2):
        if i < len(report.equilibria):
            p = report.equilibria[i]
            row += [
                str(p.t_a), str(p.t_b),
                fmt_float(expected_payoff(p.t_a, p.t_b, firm, params, cfg.mode).total),
                fmt_float(expected_payoff(p.t_b, p.t_a, firm, params, cfg.mode).total),
            ]
        else:
            row += [""] * 4
    return row


def sweep_values(cfg: RunConfig) -> np.ndarray:
    sw = cfg.sweep
    return np.linspace(sw.start, sw.stop, sw.steps)


def cmd_sweep(cfg: RunConfig, jobs: int = 1) -> str:
    if cfg.sweep is None:
        raise ConfigError("sweep command needs a 'sweep' section")
    values = sweep_values(cfg)
    if cfg.sweep.axis == "snr" and np.any(values > cfg.firm_a.snr_max):
        raise ConfigError(f"sweep.stop exceeds firm_a.snr_max={cfg.firm_a.snr_max}")
    tasks = [(cfg, float(v)) for v in values]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_sweep_point, tasks))
    else:
        rows = [_sweep_point(t) for t in tasks]
    lines = [",".join(SWEEP_COLUMNS)] + [",".join(r) for r in rows]
    return "\n".join(lines) + "\n"


def cmd_dynamics(cfg: RunConfig) -> str:
    dyn = cfg.dynamics
    if dyn is None:
        raise ConfigError("dynamics command needs a 'dynamics' section")
    params = cfg.game_params()
    firm_a = cfg.firm(FirmLabel.A, params)
    firm_b = cfg.firm(FirmLabel.B, params)
    trace = run_dynamics(StrategyPair(*dyn.start), firm_a, firm_b, params, cfg.mode, dyn.updates, dyn.max_steps)
    lines = []
    for step, (pair, mover) in enumerate(zip(trace.path, trace.movers)):
        lines.append(to_json({
            "schema_version": SCHEMA_VERSION,
            "step": step,
            "t_a": pair.t_a,
            "t_b": pair.t_b,
            "mover": mover,
            "payoff_a": expected_payoff(pair.t_a, pair.t_b, firm_a, params, cfg.mode).total,
            "payoff_b": expected_payoff(pair.t_b, pair.t_a, firm_b, params, cfg.mode).total,
        }))
    final = trace.path[-1]
    lines.append(to_json({
        "schema_version": SCHEMA_VERSION,
        "status": trace.status,
        "updates": trace.updates,
        "steps": trace.steps,
        "final": _pair(final),
    }))
    return "\n".join(lines) + "\n"


def _z(emp, ana, se):
    if emp is None or se is None:
        return None
    if se == 0:
        return 0.0 if emp == ana else None
    return (emp - ana) / se


def cmd_simulate(cfg: RunConfig) -> str:
    sim = cfg.simulate
    if sim is None:
        raise ConfigError("simulate command needs a 'simulate' section")
    params = cfg.game_params()
    firm_a = cfg.firm(FirmLabel.A, params)
    firm_b = cfg.firm(FirmLabel.B, params)
    pair = StrategyPair(sim.t_a, sim.t_b)
    report = monte_carlo_game(pair, firm_a, firm_b, params, sim.n, make_stream(cfg.seed), cfg.mode)
    analytic = {
        "payoff_a": expected_payoff(pair.t_a, pair.t_b, firm_a, params, cfg.mode).total,
        "payoff_b": expected_payoff(pair.t_b, pair.t_a, firm_b, params, cfg.mode).total,
    }
    z = {
        "payoff_a": _z(report.payoff_a, analytic["payoff_a"], report.payoff_a_se),
        "payoff_b": _z(report.payoff_b, analytic["payoff_b"], report.payoff_b_se),
    }
    n_sell = report.n_trials - report.n_buy
    for tag, firm, t in (("a", firm_a, pair.t_a), ("b", firm_b, pair.t_b)):
        if t >= 1:
            h = optimal_threshold(t, firm.snr, params, cfg.mode).h_star
            pe1, pe2 = error_probabilities(t, firm.channel, h)
        else:
            pe1 = pe2 = 0.5
        analytic[f"pe1_{tag}"] = pe1
        analytic[f"pe2_{tag}"] = pe2
        for key, p, cnt in ((f"pe1_{tag}", pe1, report.n_buy), (f"pe2_{tag}", pe2, n_sell)):
            se = math.sqrt(p * (1 - p) / cnt) if cnt else None
            z[key] = _z(getattr(report, key), p, se)
    out = {
        "schema_version": SCHEMA_VERSION,
        "command": "simulate",
        "mode": cfg.mode,
        "seed": cfg.seed,
        "strategies": _pair(pair),
        "snr_a": firm_a.snr,
        "snr_b": firm_b.snr,
        "report": report.to_dict(),
        "analytic": analytic,
        "z": z,
    }
    return to_json(out) + "\n"


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="latency-race", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=("solve", "sweep", "dynamics", "simulate"))
    ap.add_argument("--config", required=True, help="JSON run configuration")
    ap.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE",
                    help="dotted-path override, e.g. params.c=0.2 (value parsed as JSON when possible)")
    ap.add_argument("--jobs", type=int, default=os.cpu_count() or 1, help="sweep worker processes")
    ap.add_argument("--out", help="write output here instead of stdout")
    return ap


def run(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config, args.overrides)
        if args.command == "solve":
            text = cmd_solve(cfg)
        elif args.command == "sweep":
            text = cmd_sweep(cfg, max(1, args.jobs))
        elif args.command == "dynamics":
            text = cmd_dynamics(cfg)
        else:
            text = cmd_simulate(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except PreconditionError as exc:
        print(f"precondition violated: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except BudgetError as exc:
        print(f"iteration budget exhausted: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
