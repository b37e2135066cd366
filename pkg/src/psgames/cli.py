"""Command-line front end: ``psgames {ess,sweep,verify}``.

Exit codes: 0 ok, 1 runtime error, 2 degenerate game, 64 usage error.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import asdict, dataclass, field
from typing import Optional

from . import __version__
from .analysis import SweepError, company_family, detect_rc, foraging_family, gamma_grid, sweep
from .checks import run_suite
from .company import CompanyParams, company_game, parse_utility
from .foraging import ForagingParams, ModifiedForagingParams, foraging_game
from .solver import SolverConfig, SolverError, find_ess, verify_ess
from .tableio import write_tables

log = logging.getLogger("psgames")

EXIT_OK, EXIT_ERROR, EXIT_DEGENERATE, EXIT_USAGE = 0, 1, 2, 64

GAMES = ("foraging", "foraging-modified", "company")
FORAGING_DEFAULTS = {"n": 4, "s": 0.4, "gamma": 1.0}
COMPANY_DEFAULTS = {"n": 4, "s": 0.6, "gamma": 1.0, "c": 0.15, "a": 0.5, "p_succ": 0.5, "utility": "exp:2"}

# every key a config file may hold; flags use the same names with '-'
CONFIG_KEYS = {
    "game", "n", "s", "gamma", "c", "a", "p_succ", "utility", "producer_keeps_all",
    "gamma_range", "second_axis", "min_drop", "out", "format", "workers",
    "grid_points", "root_tol", "gap_tol",
}


class UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass(frozen=True)
class AxisRange:
    lo: float
    hi: float
    step: float
    name: Optional[str] = None

    def values(self) -> list:
        return [float(v) for v in gamma_grid(self.lo, self.hi, self.step)]


@dataclass(frozen=True)
class RunConfig:
    game: str
    params: dict
    gamma_range: Optional[AxisRange] = None
    second_axis: Optional[AxisRange] = None
    min_drop: float = 1e-6
    out: Optional[str] = None
    format: str = "csv"
    workers: int = 1
    solver: SolverConfig = field(default_factory=SolverConfig)

    def echo(self) -> dict:
        """Everything that affects results, as plain JSON-able values."""
        out = {"game": self.game, "params": dict(self.params), "min_drop": self.min_drop}
        if self.gamma_range:
            out["gamma_range"] = asdict(self.gamma_range)
        if self.second_axis:
            out["second_axis"] = asdict(self.second_axis)
        out["solver"] = asdict(self.solver)
        return out


def _parse_range(text, what: str, named: bool = False) -> AxisRange:
    if isinstance(text, (list, tuple)):
        parts = list(text)
    elif isinstance(text, str):
        parts = text.split(":")
    else:
        raise UsageError(f"{what}: expected a string or list, got {text!r}")
    name = None
    if named:
        if len(parts) != 4:
            raise UsageError(f"{what}: expected NAME:LO:HI:STEP, got {text!r}")
        name, parts = str(parts[0]), parts[1:]
        if name not in ("s", "c"):
            raise UsageError(f"{what}: NAME must be 's' or 'c', got {name!r}")
    if len(parts) != 3:
        raise UsageError(f"{what}: expected LO:HI:STEP, got {text!r}")
    try:
        lo, hi, step = (float(x) for x in parts)
    except ValueError:
        raise UsageError(f"{what}: non-numeric bound in {text!r}") from None
    if not step > 0:
        raise UsageError(f"{what}: step must be positive")
    if not lo < hi:
        raise UsageError(f"{what}: need LO < HI")
    return AxisRange(lo, hi, step, name)


def _load_file(path: str) -> dict:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"config {path} is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise UsageError("config file must hold a JSON object")
    data = {k.replace("-", "_"): v for k, v in data.items()}
    unknown = sorted(set(data) - CONFIG_KEYS)
    if unknown:
        raise UsageError(f"unknown config keys: {', '.join(unknown)}")
    return data


def _game_params(game: str, raw: dict) -> dict:
    if game in ("foraging", "foraging-modified"):
        extra = sorted(k for k in ("c", "a", "p_succ", "utility") if raw.get(k) is not None)
        if extra:
            raise UsageError(f"{game} does not take {', '.join(extra)}")
        out = {k: raw.get(k) if raw.get(k) is not None else v for k, v in FORAGING_DEFAULTS.items()}
        if game == "foraging-modified":
            out["producer_keeps_all"] = bool(raw.get("producer_keeps_all") or False)
        elif raw.get("producer_keeps_all"):
            raise UsageError("producer_keeps_all applies only to foraging-modified")
        ForagingParams(out["n"], out["s"], out["gamma"])
        return out
    if raw.get("producer_keeps_all"):
        raise UsageError("producer_keeps_all applies only to foraging-modified")
    out = {k: raw.get(k) if raw.get(k) is not None else v for k, v in COMPANY_DEFAULTS.items()}
    out["utility"] = str(parse_utility(str(out["utility"])))
    _company_params(out)
    return out


def _company_params(params: dict, **override) -> CompanyParams:
    d = {**params, **override}
    return CompanyParams(d["n"], d["gamma"], d["s"], d["c"], d["a"], d["p_succ"], parse_utility(d["utility"]))


def build_config(args: argparse.Namespace) -> RunConfig:
    raw = _load_file(args.config) if getattr(args, "config", None) else {}
    for key in CONFIG_KEYS:
        value = getattr(args, key, None)
        if value is not None and value is not False:
            raw[key] = value
    game = raw.get("game", "foraging")
    if game not in GAMES:
        raise UsageError(f"game must be one of {', '.join(GAMES)}, got {game!r}")
    if "n" in raw and not (isinstance(raw["n"], int) and not isinstance(raw["n"], bool)):
        raise UsageError(f"n must be an integer, got {raw['n']!r}")
    try:
        params = _game_params(game, raw)
        solver = SolverConfig(
            int(raw.get("grid_points", 2001)), float(raw.get("root_tol", 1e-10)), float(raw.get("gap_tol", 1e-9))
        )
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    gamma_range = _parse_range(raw["gamma_range"], "gamma-range") if raw.get("gamma_range") else None
    second = _parse_range(raw["second_axis"], "second-axis", named=True) if raw.get("second_axis") else None
    if second is not None and second.name == "c" and game != "company":
        raise UsageError("second axis 'c' applies only to the company game")
    fmt = raw.get("format", "csv")
    if fmt not in ("csv", "json"):
        raise UsageError(f"format must be csv or json, got {fmt!r}")
    min_drop = float(raw.get("min_drop", 1e-6))
    if not min_drop >= 0:
        raise UsageError("min-drop must be non-negative")
    workers = int(raw.get("workers", 1))
    if workers < 1:
        raise UsageError("workers must be at least 1")
    return RunConfig(game, params, gamma_range, second, min_drop, raw.get("out"), fmt, workers, solver)


def _instance(cfg: RunConfig):
    p = cfg.params
    if cfg.game == "foraging":
        return foraging_game(ForagingParams(p["n"], p["s"], p["gamma"]))
    if cfg.game == "foraging-modified":
        return foraging_game(ModifiedForagingParams(p["n"], p["s"], p["gamma"], p["producer_keeps_all"]))
    return company_game(_company_params(p))


def _family(cfg: RunConfig, second_value: Optional[float] = None):
    p = dict(cfg.params)
    if second_value is not None:
        p[cfg.second_axis.name] = second_value
    if cfg.game == "company":
        return company_family(p["n"], p["s"], p["c"], p["a"], p["p_succ"], parse_utility(p["utility"]))
    return foraging_family(
        p["n"], p["s"], modified=cfg.game == "foraging-modified", producer_keeps_all=p.get("producer_keeps_all", False)
    )


def _num(x) -> str:
    return "-" if x is None else f"{x:.10g}"


def cmd_ess(cfg: RunConfig) -> int:
    if cfg.gamma_range or cfg.second_axis:
        raise UsageError("ess takes a single gamma, not a sweep range")
    game = _instance(cfg)
    res = find_ess(game, cfg.solver)
    if res.is_degenerate:
        print(f"{res.classification} (every strategy earns the same payoff)")
        return EXIT_DEGENERATE
    ok = verify_ess(game, res.p_star, cfg.solver)
    print(
        f"{res.classification} p★={_num(res.p_star)} π★={_num(res.pi_star)} "
        f"Γ★={_num(res.total_production)} verified={'yes' if ok else 'no'}"
    )
    return EXIT_OK


def _rc_json(table, min_drop: float) -> dict:
    return {
        f: [[r.gamma_lo, r.gamma_hi, r.drop] for r in detect_rc(table, min_drop, f)]
        for f in ("pi_star", "total_production")
    }


def cmd_sweep(cfg: RunConfig) -> int:
    if cfg.gamma_range is None:
        raise UsageError("sweep needs --gamma-range LO:HI:STEP")
    second_values = cfg.second_axis.values() if cfg.second_axis else [None]
    # validate every sub-sweep before computing any of them
    families = []
    for v in second_values:
        try:
            families.append((v, _family(cfg, v)))
        except ValueError as exc:
            raise UsageError(f"second axis value {v!r}: {exc}") from None
    tables, rc = [], []
    for v, fam in families:
        table = sweep(fam, cfg.gamma_range.lo, cfg.gamma_range.hi, cfg.gamma_range.step, cfg.solver, cfg.workers)
        tables.append((v, table))
        entry = _rc_json(table, cfg.min_drop)
        if v is not None:
            entry = {cfg.second_axis.name: v, **entry}
        rc.append(entry)
        log.info("swept %s=%s: %d rows", cfg.second_axis.name if cfg.second_axis else "-", v, len(table))
    metadata = {"config": cfg.echo(), "rc_intervals": rc, "version": __version__}
    if cfg.game == "company":
        metadata["extrapolated"] = not parse_utility(cfg.params["utility"]).is_default
    if cfg.second_axis:
        metadata["second_axis"] = {"name": cfg.second_axis.name}
    write_tables(cfg.out, tables, cfg.format, metadata, cfg.second_axis.name if cfg.second_axis else None)
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    params = dict(cfg.params)
    if cfg.game == "company":
        params["utility"] = parse_utility(params["utility"])
    else:
        params.pop("gamma")
    results = run_suite(cfg.game, params, cfg.solver)
    for r in results:
        print(r.line())
    return EXIT_OK if all(r.passed for r in results) else EXIT_ERROR


COMMANDS = {"ess": cmd_ess, "sweep": cmd_sweep, "verify": cmd_verify}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="JSON file with the same keys as the flags")
    common.add_argument("--game", choices=GAMES)
    common.add_argument("--n", type=int)
    common.add_argument("--s", type=float)
    common.add_argument("--gamma", type=float)
    common.add_argument("--c", type=float)
    common.add_argument("--a", type=float)
    common.add_argument("--p-succ", dest="p_succ", type=float)
    common.add_argument("--utility", help="linear | exp:RATE | cap:CAP")
    common.add_argument("--producer-keeps-all", dest="producer_keeps_all", action="store_true", default=None)
    common.add_argument("--gamma-range", dest="gamma_range", metavar="LO:HI:STEP")
    common.add_argument("--second-axis", dest="second_axis", metavar="NAME:LO:HI:STEP")
    common.add_argument("--min-drop", dest="min_drop", type=float)
    common.add_argument("--out", metavar="PATH")
    common.add_argument("--format", choices=("csv", "json"))
    common.add_argument("--workers", type=int)
    common.add_argument("--grid-points", dest="grid_points", type=int)
    common.add_argument("--root-tol", dest="root_tol", type=float)
    common.add_argument("--gap-tol", dest="gap_tol", type=float)
    common.add_argument("-v", "--verbose", action="store_true")

    parser = _Parser(prog="psgames", description="ESS of producer/scrounger games.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("ess", parents=[common], help="solve one game")
    sub.add_parser("sweep", parents=[common], help="sweep gamma and write a table")
    sub.add_parser("verify", parents=[common], help="run the oracle cross-checks")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        cfg = build_config(args)
        return COMMANDS[args.command](cfg)
    except UsageError as exc:
        print(f"psgames: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SolverError, SweepError, OSError) as exc:
        print(f"psgames: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
