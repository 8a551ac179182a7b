"""Command-line workbench: seeded, reproducible runs emitting JSON or CSV.

Every subcommand reads one JSON config (see README for the schema), resolves
it against defaults, runs the corresponding library routine, and writes the
report to --out (or stdout).  Reports embed the resolved config and seed so
a result file is always reproducible on its own.

Exit codes: 0 success, 2 configuration error, 3 infeasible/cap exceeded,
1 internal error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from typing import Callable

from . import fourier, kernels
from .errors import DomainError, InfeasibleError, KoroboxError
from .index_set import DEFAULT_CAP, comp_wor_all, enumerate_index_set, truncation_error
from .lattice import search_generator
from .quantum import QuantumPipeline, amplitude_estimation_pmf, qsum
from .randomized import make_run, run_report
from .space import SpaceDescriptor, WeightSchedule, kernel_diag, zeta
from .tractability import growth_csv, growth_study, speedup_table, verdict_table


class ConfigError(KoroboxError):
    pass


@dataclass
class RunConfig:
    space: SpaceDescriptor
    epsilon: float
    seed: int
    trials: int
    c_of_d: Callable[[int], float]
    cap: int
    raw: dict


def _build_c_of_d(obj: dict) -> Callable[[int], float]:
    kind = obj.get("kind", "linear")
    scale = float(obj.get("scale", 1.0))
    if kind == "linear":
        return lambda d: scale * d
    if kind == "quadratic":
        return lambda d: scale * d * d
    if kind == "constant":
        return lambda d: scale
    raise ConfigError(f"unknown cost kind {kind!r}")


def load_config(path: str, seed_override: int | None) -> RunConfig:
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except OSError as e:
        raise ConfigError(f"cannot read config: {e}") from e
    except json.JSONDecodeError as e:
        raise ConfigError(f"config is not valid JSON: {e}") from e
    try:
        weights = WeightSchedule.from_dict(raw["weights"])
        space = SpaceDescriptor(d=int(raw["d"]), alpha=float(raw["alpha"]), weights=weights)
        epsilon = float(raw.get("epsilon", 0.5))
        if not 0.0 < epsilon < 1.0:
            raise ConfigError(f"epsilon must lie in (0, 1); got {epsilon}")
        seed = int(raw.get("seed", 0)) if seed_override is None else seed_override
        trials = int(raw.get("trials", 100))
        c_of_d = _build_c_of_d(raw.get("cost_c_of_d", {}))
        cap = int(raw.get("caps", {}).get("index_set_max", DEFAULT_CAP))
    except KeyError as e:
        raise ConfigError(f"config is missing required key {e}") from e
    except (TypeError, ValueError, DomainError) as e:
        raise ConfigError(str(e)) from e
    resolved = dict(raw)
    resolved["seed"] = seed
    return RunConfig(
        space=space, epsilon=epsilon, seed=seed, trials=trials, c_of_d=c_of_d, cap=cap, raw=resolved
    )


def _test_function(cfg: RunConfig):
    tf = cfg.raw.get("test_function", {})
    return fourier.random_unit(
        cfg.space,
        support_size=int(tf.get("support_size", 10)),
        max_freq=int(tf.get("max_freq", 4)),
        seed=cfg.seed,
    )


def _sanitize(obj):
    """JSON-safe floats: non-finite values become strings."""
    if isinstance(obj, float) and not math.isfinite(obj):
        return repr(obj)
    if isinstance(obj, dict):
        return {k: _sanitize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_sanitize(v) for v in obj]
    return obj


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_json(payload: dict, out: str | None) -> None:
    _emit(json.dumps(_sanitize(payload), indent=2, sort_keys=True) + "\n", out)


def cmd_index_set(cfg: RunConfig, args) -> None:
    iset = enumerate_index_set(cfg.space, cfg.epsilon, cap=cfg.cap)
    payload = iset.to_json_dict()
    payload["config"] = cfg.raw
    if args.format == "csv":
        lines = ["epsilon,d,member"] + [
            f"{format(cfg.epsilon, '.17g')},{cfg.space.d},{' '.join(str(v) for v in row)}"
            for row in payload["members"]
        ]
        _emit("\n".join(lines) + "\n", args.out)
    else:
        _emit_json(payload, args.out)


def cmd_approx_worst(cfg: RunConfig, args) -> None:
    f = _test_function(cfg)
    err = truncation_error(cfg.space, cfg.epsilon, f)
    payload = {
        "epsilon": cfg.epsilon,
        "R_size": comp_wor_all(cfg.space, cfg.epsilon, cap=cfg.cap),
        "truncation_error": err,
        "within_budget": err <= cfg.epsilon,
        "config": cfg.raw,
    }
    _emit_json(payload, args.out)


def cmd_approx_mc(cfg: RunConfig, args) -> None:
    f = _test_function(cfg)
    run = make_run(cfg.space, cfg.epsilon, seed=cfg.seed, cap=cfg.cap)
    payload = run_report(run, f, trials=cfg.trials, c_of_d=cfg.c_of_d)
    payload["config"] = cfg.raw
    _emit_json(payload, args.out)


def cmd_approx_quantum(cfg: RunConfig, args) -> None:
    pipeline = QuantumPipeline(cfg.space, cfg.epsilon, c_of_d=cfg.c_of_d, cap=cfg.cap)
    f = _test_function(cfg)
    output = pipeline.run(f, cfg.seed)
    payload = output.report_dict()
    payload["diagnostics"] = pipeline.diagnostics()
    payload["config"] = cfg.raw
    _emit_json(payload, args.out)


def cmd_lattice_search(cfg: RunConfig, args) -> None:
    lat = cfg.raw.get("lattice", {})
    n = int(lat.get("N", 101))
    mode = lat.get("mode", "cbc")
    result = search_generator(cfg.space, n, mode=mode)
    payload = result.rule.to_json_dict()
    payload.update(
        {
            "error": result.error,
            "bound": result.bound,
            "certified": result.certified,
            "config": cfg.raw,
        }
    )
    _emit_json(payload, args.out)


def cmd_tractability(cfg: RunConfig, args) -> None:
    payload = {
        "verdicts": [v.to_dict() for v in verdict_table(cfg.space)],
        "config": cfg.raw,
    }
    _emit_json(payload, args.out)


def _grids(cfg: RunConfig) -> tuple[list[float], list[int]]:
    eps_grid = [float(e) for e in cfg.raw.get("epsilon_grid", [2.0**-k for k in range(1, 6)])]
    d_grid = [int(d) for d in cfg.raw.get("d_grid", [cfg.space.d])]
    return eps_grid, d_grid


def cmd_growth(cfg: RunConfig, args) -> None:
    eps_grid, d_grid = _grids(cfg)
    rows = growth_study(cfg.space, eps_grid, d_grid, cap=cfg.cap)
    if args.format == "json":
        payload = {
            "rows": [
                {
                    "epsilon": r.epsilon,
                    "d": r.d,
                    "R_size": r.r_size,
                    "fitted_slope": r.fitted_slope,
                    "flagged": r.flagged,
                }
                for r in rows
            ],
            "config": cfg.raw,
        }
        _emit_json(payload, args.out)
    else:
        _emit(growth_csv(rows), args.out)


def cmd_speedup(cfg: RunConfig, args) -> None:
    eps_grid, _ = _grids(cfg)
    table = speedup_table(cfg.space, eps_grid, cfg.c_of_d, cap=cfg.cap)
    if args.format == "json":
        payload = {
            "rows": [
                {
                    "epsilon": r.epsilon,
                    "cost_rand": r.cost_rand,
                    "cost_quantum": r.cost_quantum,
                    "ratio": r.ratio,
                }
                for r in table.rows
            ],
            "fitted_ratio_exponent": table.fitted_ratio_exponent,
            "config": cfg.raw,
        }
        _emit_json(payload, args.out)
    else:
        _emit(table.to_csv(), args.out)


def cmd_selftest(cfg: RunConfig | None, args) -> int:
    """Quick oracle battery; prints one line per check."""
    import numpy as np

    checks: list[tuple[str, bool]] = []

    def check(name: str, ok: bool) -> None:
        checks.append((name, bool(ok)))

    check("zeta(2) = pi^2/6", abs(zeta(2.0) - math.pi**2 / 6.0) < 1e-12)
    w1 = WeightSchedule.explicit([1.0])
    s1 = SpaceDescriptor(d=1, alpha=2.0, weights=w1)
    check("kernel diagonal 1 + 2 zeta(2)", abs(kernel_diag(s1) - (1 + 2 * zeta(2.0))) < 1e-12)
    s2 = SpaceDescriptor(d=2, alpha=2.0, weights=WeightSchedule.explicit([1.0, 1.0]))
    check("index set (d=2, eps=1/2) has 9 members", enumerate_index_set(s2, 0.5).cardinality == 9)
    from .lattice import LatticeRule, worst_case_int_error

    e = worst_case_int_error(s1, LatticeRule(N=5, z=(1,)), method="kernel")
    check("lattice error pi/sqrt(75) at N=5", abs(e - math.pi / math.sqrt(75.0)) < 1e-9)
    pmf = amplitude_estimation_pmf(0.3, 32)
    check("amplitude pmf sums to 1", abs(float(pmf.sum()) - 1.0) < 1e-12)
    from .quantum import QuantumSumConfig

    est = qsum(np.full(16, 2.5), 2.5, QuantumSumConfig(n_queries=16, repetitions=3, seed=7))
    check("on-grid summation is exact", abs(est - 2.5) < 1e-12)
    check("kernel backend loads", kernels.BACKEND in ("compiled", "fallback"))

    failed = [name for name, ok in checks if not ok]
    for name, ok in checks:
        print(f"{'PASS' if ok else 'FAIL'}  {name}")
    print(f"selftest: {len(checks) - len(failed)}/{len(checks)} checks passed "
          f"(kernel backend: {kernels.BACKEND})")
    return 1 if failed else 0


_COMMANDS = {
    "index-set": cmd_index_set,
    "approx-worst": cmd_approx_worst,
    "approx-mc": cmd_approx_mc,
    "approx-quantum": cmd_approx_quantum,
    "lattice-search": cmd_lattice_search,
    "tractability": cmd_tractability,
    "growth": cmd_growth,
    "speedup": cmd_speedup,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="korobox",
        description="Approximation workbench for weighted Korobov spaces.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in list(_COMMANDS) + ["selftest"]:
        p = sub.add_parser(name)
        p.add_argument("--config", help="JSON config file", default=None)
        p.add_argument("--out", help="output file (default: stdout)", default=None)
        p.add_argument("--format", choices=["json", "csv"], default="json")
        p.add_argument("--seed", type=int, default=None, help="override the config seed")
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return 0 if e.code in (0, None) else 2
    try:
        if args.command == "selftest":
            return cmd_selftest(None, args)
        if args.config is None:
            raise ConfigError(f"{args.command} requires --config FILE")
        cfg = load_config(args.config, args.seed)
        _COMMANDS[args.command](cfg, args)
        return 0
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2
    except InfeasibleError as e:
        print(f"infeasible: {e}", file=sys.stderr)
        return 3
    except DomainError as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2
    except Exception as e:  # internal failure
        print(f"internal error: {type(e).__name__}: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
