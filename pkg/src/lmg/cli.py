"""Command-line surface: reproducible, machine-readable access to everything.

All numeric output is JSON by default (CSV for the tabular subcommands via
--format csv), floats printed with 17 significant digits so values round-trip
exactly, and every command is deterministic given its flags and seeds.
LMG_THREADS caps internal parallelism for the vqe/benchmark subcommands.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import __version__
from .bethe import SolverOptions, solve_bethe
from .circuit import (
    build_circuit,
    encode,
    export_circuit,
    import_circuit,
    linear_angles,
    log_angles,
)
from .errors import InvalidArgumentError, LmgError
from .model import (
    SectorConfig,
    exact_spectrum,
    make_params,
    sector_configs,
)
from .simulator import encoded_expectation, run
from .verify import available_checks, run_checks
from .vqe import VqeOptions, benchmark, optimize


def _format_float(value: float) -> str:
    return f"{value:.17g}"


def _to_json(obj, indent=0) -> str:
    """Deterministic JSON with 17-significant-digit floats and sorted keys."""
    pad = " " * indent
    if isinstance(obj, dict):
        items = ", ".join(f'"{key}": {_to_json(obj[key])}' for key in sorted(obj))
        return "{" + items + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_to_json(item) for item in obj) + "]"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        value = float(obj)
        if value != value:
            return "null"
        return _format_float(value)
    if isinstance(obj, str):
        import json as _json

        return _json.dumps(obj)
    raise TypeError(f"cannot serialize {type(obj)!r}")


def _emit_json(payload) -> None:
    sys.stdout.write(_to_json(payload) + "\n")


def _emit_csv(rows: list[dict]) -> None:
    if not rows:
        return
    keys = sorted({key for row in rows for key in row})
    sys.stdout.write(",".join(keys) + "\n")
    for row in rows:
        cells = []
        for key in keys:
            value = row.get(key)
            if isinstance(value, float):
                cells.append(_format_float(value))
            elif value is None:
                cells.append("")
            else:
                cells.append(str(value))
        sys.stdout.write(",".join(cells) + "\n")


def _parse_sector(text: str, n: int) -> SectorConfig:
    try:
        nu_a, nu_b = (int(part) for part in text.split(","))
    except ValueError as exc:
        raise InvalidArgumentError(f"--sector expects 'NU_A,NU_B', got {text!r}") from exc
    if (n - nu_a - nu_b) % 2 or n - nu_a - nu_b < 0:
        raise InvalidArgumentError(f"sector ({nu_a},{nu_b}) is impossible for N={n}")
    return SectorConfig((n - nu_a - nu_b) // 2, nu_a, nu_b)


def _sector_dict(config: SectorConfig) -> dict:
    return {"m": config.m, "nu_a": config.nu_a, "nu_b": config.nu_b}


def _spectrum_rows(params) -> list[dict]:
    bethe_by_parity: dict[int, list] = {}
    if not params.rational:
        for config in sector_configs(params.n):
            try:
                bethe_by_parity[config.parity] = list(solve_bethe(config, params))
            except LmgError:
                bethe_by_parity[config.parity] = []
    rows = []
    counters = {0: 0, 1: 0}
    config_by_parity = {c.parity: c for c in sector_configs(params.n)}
    for index, (omega, state) in enumerate(exact_spectrum(params), start=1):
        config = config_by_parity[state.parity]
        row = {
            "index": index,
            "omega_exact": omega,
            "m": config.m,
            "nu_a": config.nu_a,
            "nu_b": config.nu_b,
            "sector_index": counters[state.parity] + 1,
        }
        sols = bethe_by_parity.get(state.parity, [])
        if counters[state.parity] < len(sols):
            sol = sols[counters[state.parity]]
            row["omega_bethe"] = sol.omega
            row["bethe_residual"] = sol.residual_norm
        counters[state.parity] += 1
        rows.append(row)
    return rows


def _eigenpair(params, index: int):
    pairs = exact_spectrum(params)
    if not 1 <= index <= len(pairs):
        raise InvalidArgumentError(f"--index must lie in 1..{len(pairs)}, got {index}")
    omega, state = pairs[index - 1]
    config = next(c for c in sector_configs(params.n) if c.parity == state.parity)
    return omega, state, config


def _angles_for(params, index: int, depth: str):
    omega, state, config = _eigenpair(params, index)
    target = encode(state, config)
    angles = linear_angles(target) if depth == "linear" else log_angles(target)
    return omega, state, config, target, angles


def _cmd_spectrum(args) -> int:
    params = make_params(args.n, args.v, args.w)
    rows = _spectrum_rows(params)
    if args.format == "csv":
        _emit_csv(rows)
    else:
        _emit_json({"params": {"n": params.n, "v": params.v, "w": params.w}, "levels": rows})
    return 0


def _cmd_bethe(args) -> int:
    params = make_params(args.n, args.v, args.w)
    config = _parse_sector(args.sector, args.n)
    opts = SolverOptions(
        seed=args.seed,
        allow_hyperbolic=args.allow_hyperbolic,
        tol=args.tol,
        match_tol=args.match_tol,
        start_budget_factor=args.budget,
    )
    solutions = solve_bethe(config, params, opts)
    rows = [
        {
            "index": sol.index,
            "omega": sol.omega,
            "residual_norm": sol.residual_norm,
            "pairons": list(sol.energies),
        }
        for sol in solutions
    ]
    if args.format == "csv":
        flat = []
        for row in rows:
            entry = {"index": row["index"], "omega": row["omega"],
                     "residual_norm": row["residual_norm"]}
            for i, e in enumerate(row["pairons"], start=1):
                entry[f"e{i}"] = e
            flat.append(entry)
        _emit_csv(flat)
    else:
        _emit_json({"sector": _sector_dict(config), "solutions": rows})
    return 0


def _cmd_state(args) -> int:
    params = make_params(args.n, args.v, args.w)
    omega, state, config = _eigenpair(params, args.index)
    occupations = [
        [params.n - state.parity - 2 * k, state.parity + 2 * k]
        for k in range(state.amps.size)
    ]
    payload = {
        "index": args.index,
        "omega": omega,
        "sector": _sector_dict(config),
        "amplitudes": list(state.amps),
        "occupations": occupations,
    }
    if args.format == "csv":
        _emit_csv(
            [
                {"n_a": occ[0], "n_b": occ[1], "amplitude": amp}
                for occ, amp in zip(occupations, state.amps)
            ]
        )
    else:
        _emit_json(payload)
    return 0


def _cmd_angles(args) -> int:
    params = make_params(args.n, args.v, args.w)
    omega, _, config, _, angles = _angles_for(params, args.index, args.depth)
    payload = {
        "index": args.index,
        "omega": omega,
        "sector": _sector_dict(config),
        "depth": args.depth,
        "thetas": list(angles.thetas),
    }
    if args.format == "csv":
        _emit_csv([{"j": j + 1, "theta": t} for j, t in enumerate(angles.thetas)])
    else:
        _emit_json(payload)
    return 0


def _cmd_circuit(args) -> int:
    params = make_params(args.n, args.v, args.w)
    _, _, _, _, angles = _angles_for(params, args.index, args.depth)
    text = export_circuit(build_circuit(angles), args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    return 0


def _cmd_simulate(args) -> int:
    with open(args.circuit, encoding="utf-8") as handle:
        circ = import_circuit(handle.read())
    state = run(circ)
    block = state.one_hot_block()
    payload = {
        "num_qubits": circ.num_qubits,
        "one_hot_amplitudes": [float(a.real) for a in block],
        "leakage": state.one_hot_leakage(),
    }
    if args.report_energy:
        if args.n is None or args.v is None or args.w is None:
            raise InvalidArgumentError("--report-energy needs --n, --v and --w")
        params = make_params(args.n, args.v, args.w)
        m = circ.num_qubits - 1
        leftover = args.n - 2 * m
        if args.sector is not None:
            config = _parse_sector(args.sector, args.n)
        elif leftover in (0, 2):
            config = SectorConfig(m, leftover // 2, leftover // 2)
        else:
            raise InvalidArgumentError(
                "odd-particle circuits need --sector to pick (nu_a, nu_b)"
            )
        if config.m != m:
            raise InvalidArgumentError(
                f"circuit has {m + 1} qubits but the sector needs {config.m + 1}"
            )
        payload["energy"] = encoded_expectation(state, config, params)
        payload["sector"] = _sector_dict(config)
    _emit_json(payload)
    return 0


def _max_workers() -> int:
    raw = os.environ.get("LMG_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _cmd_vqe(args) -> int:
    params = make_params(args.n, args.v, args.w)
    if args.sector is not None:
        config = _parse_sector(args.sector, args.n)
    else:
        pairs = exact_spectrum(params)
        parity = pairs[0][1].parity
        config = next(c for c in sector_configs(args.n) if c.parity == parity)
    opts = VqeOptions(
        restarts=args.restarts,
        seed=args.seed,
        estimator="sampled" if args.shots else "exact",
        shots=args.shots or 0,
        warm=args.warm,
        depth=args.depth,
        max_workers=_max_workers(),
    )
    result = optimize(config, params, opts)
    _emit_json(
        {
            "sector": _sector_dict(config),
            "estimator": result.estimator,
            "seed": result.seed,
            "best_energy": result.best_energy,
            "exact_energy": result.exact_energy,
            "abs_error": result.abs_error,
            "evaluations": result.evaluations,
            "converged": result.converged,
            "thetas": list(result.best_thetas.thetas),
        }
    )
    return 0


def _cmd_benchmark(args) -> int:
    params = make_params(args.n, args.v, args.w)
    budgets = tuple(None if b == 0 else b for b in args.shots) if args.shots else ()
    opts = VqeOptions(
        restarts=args.restarts, seed=args.seed, shot_budgets=budgets,
        max_workers=_max_workers(),
    )
    report = benchmark(params, opts)
    text = _to_json(report) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_verify(args) -> int:
    names = args.only or None
    if args.list:
        for name in available_checks():
            sys.stdout.write(name + "\n")
        return 0
    results = run_checks(names)
    failed = 0
    for result in results:
        status = "ok  " if result.passed else "FAIL"
        sys.stdout.write(f"{status} {result.name:14s} {result.seconds:7.2f}s  {result.detail}\n")
        failed += not result.passed
    sys.stdout.write(f"{len(results) - failed}/{len(results)} checks passed\n")
    return 1 if failed else 0


def _add_instance_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--n", type=int, required=True, help="particle count")
    parser.add_argument("--v", type=float, required=True, help="pair-exchange strength V")
    parser.add_argument("--w", type=float, required=True, help="density-density strength W")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lmg",
        description="Exact LMG spectra, eigenstate circuits, and VQE benchmarking.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="full exact + pair-energy spectrum table")
    _add_instance_flags(p)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=_cmd_spectrum)

    p = sub.add_parser("bethe", help="spectral parameters of one sector")
    _add_instance_flags(p)
    p.add_argument("--sector", required=True, help="fiducial occupations, e.g. 1,0")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--allow-hyperbolic", action="store_true")
    p.add_argument("--tol", type=float, default=1e-10, help="residual tolerance")
    p.add_argument("--match-tol", type=float, default=1e-8, help="oracle match tolerance")
    p.add_argument("--budget", type=int, default=50, help="start attempts per solution")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=_cmd_bethe)

    p = sub.add_parser("state", help="eigenstate amplitudes by energy index")
    _add_instance_flags(p)
    p.add_argument("--index", type=int, required=True, help="1 = ground state")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=_cmd_state)

    p = sub.add_parser("angles", help="rotation angles preparing an eigenstate")
    _add_instance_flags(p)
    p.add_argument("--index", type=int, required=True)
    p.add_argument("--depth", choices=("linear", "log"), default="linear")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=_cmd_angles)

    p = sub.add_parser("circuit", help="export a preparation circuit")
    _add_instance_flags(p)
    p.add_argument("--index", type=int, required=True)
    p.add_argument("--depth", choices=("linear", "log"), default="linear")
    p.add_argument("--format", choices=("json", "qasm"), default="json")
    p.add_argument("--out", help="write to a file instead of stdout")
    p.set_defaults(func=_cmd_circuit)

    p = sub.add_parser("simulate", help="run a circuit JSON file")
    p.add_argument("--circuit", required=True, help="path to circuit JSON")
    p.add_argument("--report-energy", action="store_true")
    p.add_argument("--n", type=int)
    p.add_argument("--v", type=float)
    p.add_argument("--w", type=float)
    p.add_argument("--sector", help="fiducial occupations for --report-energy")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("vqe", help="variational optimization against exact answers")
    _add_instance_flags(p)
    p.add_argument("--sector", help="fiducial occupations; default: ground sector")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--shots", type=int, default=0, help="0 = exact estimator")
    p.add_argument("--restarts", type=int, default=10)
    p.add_argument("--warm", action="store_true")
    p.add_argument("--depth", choices=("linear", "log"), default="linear")
    p.set_defaults(func=_cmd_vqe)

    p = sub.add_parser("benchmark", help="full per-eigenstate scorecard (report JSON)")
    _add_instance_flags(p)
    p.add_argument("--shots", type=int, nargs="*", help="VQE shot budgets; 0 = exact")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--restarts", type=int, default=10)
    p.add_argument("--out", help="write the report to a file")
    p.set_defaults(func=_cmd_benchmark)

    p = sub.add_parser("verify", help="run the bundled fixture and invariant checks")
    p.add_argument("--only", nargs="*", help="subset of checks to run")
    p.add_argument("--list", action="store_true", help="list available checks")
    p.set_defaults(func=_cmd_verify)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except LmgError as exc:
        error = {"error": {"type": type(exc).__name__, "message": str(exc)}}
        sys.stderr.write(_to_json(error) + "\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
