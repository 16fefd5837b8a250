"""Command-line driver.

Subcommands: eprb, chsh, bell, cat, position. Angles are given in degrees
(``*-deg`` flags); omega and phi in units of pi (``--omega-pi``,
``--phi-pi``). Output is CSV (header + rows) or JSON
(``{"meta": ..., "rows": [...]}``) on stdout or ``--output``.

Exit codes: 0 success, 1 usage error, 2 domain or numerical error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from oscket import __version__
from oscket.bell import CLASSICAL_CHSH_BOUND, ChshConfig, bell_original_check, chsh_scan, chsh_value
from oscket.cat import CatConfig, empirical_survival_curve, simulate_death_ticks, survival_curve
from oscket.eprb import OscillationParams, correlation, p_continuous, p_discrete, p_spin_s, p_standard
from oscket.errors import ModelError
from oscket.position import (
    HiddenPositionState,
    PositionGrid,
    band_limited_vector,
    first_order_error,
    loglog_slope,
    measure_position,
    sample_hidden_positions,
    translate_exact,
    translate_first_order,
)
from oscket.sampler import estimate_chsh
from oscket.spin_core import SpinQuantumNumber

# execution details that must not change the data stream
_NOT_ECHOED = {"output", "config", "threads", "func"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _nonneg_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {text}")
    return value


def _pos_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


# --- subcommands -------------------------------------------------------------


def _theta_grid(args) -> list[float]:
    if args.theta_deg is not None:
        return [args.theta_deg]
    if args.theta_step_deg <= 0:
        raise UsageError("--theta-step-deg must be positive")
    count = int(math.floor((args.theta_stop_deg - args.theta_start_deg) / args.theta_step_deg + 1e-9))
    return [args.theta_start_deg + i * args.theta_step_deg for i in range(count + 1)]


def _omega(args) -> float:
    return args.omega if args.omega is not None else args.omega_pi * math.pi


def cmd_eprb(args) -> tuple[list[dict], dict]:
    params = OscillationParams(omega=_omega(args), phi=args.phi_pi * math.pi)
    t = float(args.n) if args.t is None else args.t
    spin = SpinQuantumNumber(args.twice_s)
    rows = []
    for deg in _theta_grid(args):
        theta = math.radians(deg)
        rows.append(
            {
                "theta_deg": deg,
                "p_standard": p_standard(theta),
                "p_discrete": p_discrete(theta, args.n),
                "p_continuous": p_continuous(theta, t, params),
                "p_spin_s": p_spin_s(spin, theta, args.n),
                "correlation": correlation(theta, args.n),
            }
        )
    return rows, {}


def cmd_chsh(args) -> tuple[list[dict], dict]:
    if args.scan:
        config, s_value = chsh_scan(math.radians(args.step_deg), args.n, workers=args.threads)
        angles = [math.degrees(math.atan2(d.x, d.z)) % 180.0 for d in (config.a, config.a_prime, config.b, config.b_prime)]
    else:
        angles = [args.a_deg, args.a_prime_deg, args.b_deg, args.b_prime_deg]
        config = ChshConfig.coplanar(*(math.radians(x) for x in angles))
        s_value = chsh_value(config, args.n)
    row = {
        "a_deg": angles[0],
        "a_prime_deg": angles[1],
        "b_deg": angles[2],
        "b_prime_deg": angles[3],
        "S": s_value,
        "classical_bound": CLASSICAL_CHSH_BOUND,
        "violated": s_value > CLASSICAL_CHSH_BOUND + 1e-12,
        "margin": s_value - CLASSICAL_CHSH_BOUND,
        "mc_estimate": None,
        "mc_stderr": None,
        "mc_trials_per_pair": None,
    }
    if args.trials:
        report = estimate_chsh(config, args.n, args.trials, args.seed, workers=args.threads)
        row.update(mc_estimate=report.estimate, mc_stderr=report.stderr, mc_trials_per_pair=args.trials)
    return [row], {}


def cmd_bell(args) -> tuple[list[dict], dict]:
    spin = SpinQuantumNumber(args.twice_s)
    report = bell_original_check(math.radians(args.theta_deg), args.n, spin)
    row = {
        "theta_deg": args.theta_deg,
        "lhs": report.lhs,
        "rhs": report.rhs_or_bound,
        "violated": report.violated,
        "margin": report.margin,
        "interpretation_dependent": report.interpretation_dependent,
    }
    return [row], {}


def cmd_cat(args) -> tuple[list[dict], dict]:
    config = CatConfig(omega=_omega(args), phi=args.phi_pi * math.pi, ticks=args.ticks)
    closed = survival_curve(config)
    empirical = empirical_survival_curve(simulate_death_ticks(config, args.runs, args.seed, args.threads), args.ticks)
    rows = [
        {"tick": n, "survival_closed": float(closed[n]), "survival_empirical": float(empirical[n])}
        for n in range(args.ticks + 1)
    ]
    return rows, {}


def cmd_position(args) -> tuple[list[dict], dict]:
    grid = PositionGrid(args.grid_L, args.grid_h)
    v = band_limited_vector(grid, args.modes, args.seed)
    if args.delta:
        deltas = list(args.delta)
    else:
        if not (0 < args.delta_min < args.delta_max) or args.points < 2:
            raise UsageError("need 0 < --delta-min < --delta-max and --points >= 2")
        deltas = list(np.geomspace(args.delta_min, args.delta_max, args.points))
    rows = []
    for d in deltas:
        rows.append(
            {
                "delta": float(d),
                "error_norm": first_order_error(v, d, grid),
                "exact_norm": float(np.linalg.norm(translate_exact(v, d, grid))),
                "first_order_norm": float(np.linalg.norm(translate_first_order(v, d, grid))),
            }
        )
    extra = {}
    positive = [(r["delta"], r["error_norm"]) for r in rows if r["delta"] > 0 and r["error_norm"] > 0]
    if len(positive) >= 2:
        extra["loglog_slope"] = loglog_slope(*zip(*positive))
    if args.delta_cap is not None:
        state = HiddenPositionState(args.x_center, args.delta_cap)
        xs = sample_hidden_positions(state, np.arange(args.samples), args.seed)
        lo, hi = state.interval
        extra["hidden_position"] = {
            "min": float(xs.min()),
            "max": float(xs.max()),
            "mean": float(xs.mean()),
            "contained": bool(np.all((xs >= lo) & (xs <= hi))),
        }
        measured = measure_position(state, args.delta_cap / 10, args.seed)
        extra["after_measurement"] = {"x_center": measured.x_center, "delta_cap": measured.delta_cap}
    return rows, extra


# --- parser ------------------------------------------------------------------


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--output", default=None, help="write here instead of stdout")
    p.add_argument("--config", default=None, help="key=value file; flags override it")
    p.add_argument("--threads", type=_pos_int, default=1, help="worker threads (results do not depend on it)")


def build_parser() -> tuple[argparse.ArgumentParser, dict[str, argparse.ArgumentParser]]:
    parser = _Parser(prog="oscket", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"oscket {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)
    subs = {}

    p = sub.add_parser("eprb", help="probability-law sweep over theta")
    p.add_argument("--theta-deg", type=float, default=None, help="single angle; overrides the sweep")
    p.add_argument("--theta-start-deg", type=float, default=0.0)
    p.add_argument("--theta-stop-deg", type=float, default=180.0)
    p.add_argument("--theta-step-deg", type=float, default=15.0)
    p.add_argument("--n", type=_nonneg_int, default=0, help="tick")
    p.add_argument("--t", type=float, default=None, help="continuous time in ticks (default: n)")
    p.add_argument("--omega", type=float, default=None, help="radians per tick; overrides --omega-pi")
    p.add_argument("--omega-pi", type=float, default=2.0)
    p.add_argument("--phi-pi", type=float, default=0.0)
    p.add_argument("--twice-s", type=_nonneg_int, default=1)
    p.set_defaults(func=cmd_eprb)
    subs["eprb"] = p

    p = sub.add_parser("chsh", help="CHSH statistic, optional grid scan and Monte Carlo")
    p.add_argument("--a-deg", type=float, default=0.0)
    p.add_argument("--a-prime-deg", type=float, default=90.0)
    p.add_argument("--b-deg", type=float, default=45.0)
    p.add_argument("--b-prime-deg", type=float, default=135.0)
    p.add_argument("--scan", action="store_true")
    p.add_argument("--step-deg", type=float, default=22.5)
    p.add_argument("--n", type=_nonneg_int, default=0)
    p.add_argument("--trials", type=_nonneg_int, default=0, help="Monte Carlo trials per pair (0 = none)")
    p.add_argument("--seed", type=_nonneg_int, default=0)
    p.set_defaults(func=cmd_chsh)
    subs["chsh"] = p

    p = sub.add_parser("bell", help="three-axis Bell inequality")
    p.add_argument("--theta-deg", type=float, default=120.0)
    p.add_argument("--n", type=_nonneg_int, default=0)
    p.add_argument("--twice-s", type=_nonneg_int, default=1)
    p.set_defaults(func=cmd_bell)
    subs["bell"] = p

    p = sub.add_parser("cat", help="survival curve of the shooting process")
    p.add_argument("--omega", type=float, default=None, help="radians per tick; overrides --omega-pi")
    p.add_argument("--omega-pi", type=float, default=2.0)
    p.add_argument("--phi-pi", type=float, default=0.0)
    p.add_argument("--ticks", type=_nonneg_int, default=10)
    p.add_argument("--runs", type=_pos_int, default=1000)
    p.add_argument("--seed", type=_nonneg_int, default=0)
    p.set_defaults(func=cmd_cat)
    subs["cat"] = p

    p = sub.add_parser("position", help="first-order translation error sweep")
    p.add_argument("--grid-L", type=int, default=256)
    p.add_argument("--grid-h", type=float, default=1.0)
    p.add_argument("--modes", type=_nonneg_int, default=4, help="band limit of the test vector")
    p.add_argument("--delta", type=float, action="append", default=None, help="explicit delta (repeatable)")
    p.add_argument("--delta-min", type=float, default=0.01)
    p.add_argument("--delta-max", type=float, default=1.0)
    p.add_argument("--points", type=int, default=9)
    p.add_argument("--delta-cap", type=float, default=None, help="also sample hidden positions with this aperture")
    p.add_argument("--x-center", type=float, default=0.0)
    p.add_argument("--samples", type=_pos_int, default=1000)
    p.add_argument("--seed", type=_nonneg_int, default=0)
    p.set_defaults(func=cmd_position)
    subs["position"] = p

    for p in subs.values():
        _common(p)
    return parser, subs


def _read_config(path: str) -> dict[str, str]:
    values = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value")
        key, value = (part.strip() for part in line.split("=", 1))
        values[key.replace("-", "_")] = value
    return values


def _apply_config(subparser: argparse.ArgumentParser, values: dict[str, str]) -> None:
    actions = {a.dest: a for a in subparser._actions}
    defaults = {}
    for key, value in values.items():
        action = actions.get(key)
        if action is None or key in _NOT_ECHOED or key == "help":
            raise UsageError(f"unknown config key {key!r}")
        if isinstance(action, argparse._StoreTrueAction):
            defaults[key] = value.lower() in ("1", "true", "yes", "on")
        elif isinstance(action, argparse._AppendAction):
            defaults[key] = [action.type(v) for v in value.split(",") if v.strip()]
        else:
            try:
                defaults[key] = action.type(value) if action.type else value
            except (ValueError, argparse.ArgumentTypeError) as exc:
                raise UsageError(f"bad config value {key}={value}: {exc}") from exc
            if action.choices and defaults[key] not in action.choices:
                raise UsageError(f"bad config value {key}={value}")
    subparser.set_defaults(**defaults)


def parse_args(argv: list[str]) -> argparse.Namespace:
    parser, _ = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        values = _read_config(args.config)
        parser, subs = build_parser()
        _apply_config(subs[args.subcommand], values)
        args = parser.parse_args(argv)
    return args


# --- output ------------------------------------------------------------------


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def render(rows: list[dict], meta: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps({"meta": meta, "rows": rows}, indent=2, allow_nan=False) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    header = list(rows[0]) if rows else []
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(row[k]) for k in header])
    return buf.getvalue()


def run(argv: list[str]) -> tuple[str, argparse.Namespace]:
    args = parse_args(argv)
    rows, extra = args.func(args)
    config = {k: v for k, v in sorted(vars(args).items()) if k not in _NOT_ECHOED}
    meta = {"artifact": "oscket", "version": __version__, "subcommand": args.subcommand, "config": config, **extra}
    return render(rows, meta, args.format), args


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        text, args = run(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except ModelError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
