"""Command-line driver: inspect, energy, vqe, exact, and bench subcommands.

Every option can also be supplied through ``--config FILE`` holding flat
``key=value`` lines (``#`` starts a comment); a flag given on the command
line always wins over the file.  Machine-readable output goes to stdout,
run summaries and errors to stderr.
"""

import argparse
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from .backends import expval_sampled
from .bench import (RunConfig, emit_table, inspect as inspect_row,
                    run_config, suite_fixtures)
from .chem import hf_energy
from .circuit import transpile
from .errors import ResourceLimitError
from .backends import exact_ground_energy
from .pipeline import encode_problem, load_problem
from .vqe import VqeConfig, VqeSolver

_TRACE_COLUMNS = ("iteration", "energy", "grad_norm", "n_evaluations",
                  "elapsed_s")


def _bool_value(text):
    lowered = text.strip().lower()
    if lowered in ("true", "1", "on", "yes"):
        return True
    if lowered in ("false", "0", "off", "no"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _frozen_value(text):
    text = text.strip()
    if text == "auto":
        return "auto"
    return int(text)


_DEFAULTS = {
    "encoding": "parity",
    "two_qubit_reduction": None,
    "tapering": True,
    "n_frozen": "auto",
    "backend": "statevector",
    "shots": 1024,
    "seed": 0,
    "tol": 1e-6,
    "max_iter": 200,
    "gradient_step": 1e-6,
    "max_qubits": None,
    "mode": "auto",
    "assumed_e_iter": 10,
    "full_max_qubits": 8,
    "format": "csv",
    "parallel_rows": 1,
}

_CONVERTERS = {
    "encoding": str,
    "two_qubit_reduction": _bool_value,
    "tapering": _bool_value,
    "n_frozen": _frozen_value,
    "backend": str,
    "shots": int,
    "seed": int,
    "tol": float,
    "max_iter": int,
    "gradient_step": float,
    "max_qubits": int,
    "mode": str,
    "assumed_e_iter": int,
    "full_max_qubits": int,
    "format": str,
    "parallel_rows": int,
}


def load_config_file(path):
    """Parse flat key=value lines; keys use the long flag names."""
    values = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line {raw!r} is not key=value")
        key, _, value = line.partition("=")
        key = key.strip().replace("-", "_")
        if key not in _CONVERTERS:
            raise ValueError(f"unknown config key {key!r}")
        values[key] = value.strip()
    return values


def _resolve_settings(args, file_values):
    """CLI value if given, else config-file value, else built-in default."""
    settings = {}
    for key, default in _DEFAULTS.items():
        cli = getattr(args, key, None)
        if cli is not None:
            settings[key] = cli
        elif key in file_values:
            settings[key] = _CONVERTERS[key](file_values[key])
        else:
            settings[key] = default
    return settings


def build_parser():
    pipeline = argparse.ArgumentParser(add_help=False)
    pipeline.add_argument("--config", help="key=value settings file")
    pipeline.add_argument("--encoding", choices=("jw", "parity", "bk"))
    pipeline.add_argument("--two-qubit-reduction", dest="two_qubit_reduction",
                          action=argparse.BooleanOptionalAction)
    pipeline.add_argument("--tapering", action=argparse.BooleanOptionalAction)
    pipeline.add_argument("--n-frozen", dest="n_frozen", type=_frozen_value,
                          help='frozen spatial orbitals, or "auto"')
    pipeline.add_argument("--max-qubits", dest="max_qubits", type=int)

    backend = argparse.ArgumentParser(add_help=False)
    backend.add_argument("--backend", choices=("statevector", "sampled"))
    backend.add_argument("--shots", type=int)
    backend.add_argument("--seed", type=int)

    optimizer = argparse.ArgumentParser(add_help=False)
    optimizer.add_argument("--tol", type=float,
                           help="energy convergence tolerance in Ha")
    optimizer.add_argument("--max-iter", dest="max_iter", type=int)
    optimizer.add_argument("--gradient-step", dest="gradient_step", type=float)

    parser = argparse.ArgumentParser(
        prog="vqemol-bench",
        description="Molecular VQE pipeline: encode FCIDUMP fixtures, "
                    "evaluate and minimize energies, benchmark resources.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_inspect = sub.add_parser(
        "inspect", parents=[pipeline],
        help="run the pipeline through circuit construction, report counts")
    p_inspect.add_argument("fixture")
    p_inspect.add_argument("--dump-hamiltonian", action="store_true",
                           help="print the qubit Hamiltonian, one term per "
                                "line: coeff_re coeff_im axes")
    p_inspect.add_argument("--dump-circuit", action="store_true",
                           help="print the transpiled gate list")
    p_inspect.add_argument("--format", choices=("csv", "table"))

    p_energy = sub.add_parser(
        "energy", parents=[pipeline, backend],
        help="evaluate the ansatz energy at fixed parameters")
    p_energy.add_argument("fixture")
    p_energy.add_argument("--theta",
                          help="comma-separated parameter values "
                               "(default: all zero, the reference state)")

    p_vqe = sub.add_parser(
        "vqe", parents=[pipeline, backend, optimizer],
        help="minimize the energy; trace CSV on stdout, summary on stderr")
    p_vqe.add_argument("fixture")

    p_exact = sub.add_parser(
        "exact", parents=[pipeline],
        help="exact ground energy of the encoded Hamiltonian")
    p_exact.add_argument("fixture")

    p_bench = sub.add_parser(
        "bench", parents=[pipeline, backend, optimizer],
        help="benchmark rows for fixtures or a whole suite directory")
    p_bench.add_argument("fixtures", nargs="*")
    p_bench.add_argument("--suite", help="directory of fixtures to add")
    p_bench.add_argument("--mode",
                         choices=("inspect", "estimate", "full", "auto"))
    p_bench.add_argument("--assumed-e-iter", dest="assumed_e_iter", type=int)
    p_bench.add_argument("--full-max-qubits", dest="full_max_qubits",
                         type=int,
                         help="auto mode runs full VQE up to this register "
                              "size and estimates beyond it")
    p_bench.add_argument("--format", choices=("csv", "table"))
    p_bench.add_argument("--parallel-rows", dest="parallel_rows", type=int,
                         help="build this many rows concurrently "
                              "(inspect mode only)")
    return parser


def _make_config(fixture, settings, mode):
    return RunConfig(
        fixture=str(fixture),
        encoding=settings["encoding"],
        two_qubit_reduction=settings["two_qubit_reduction"],
        tapering=settings["tapering"],
        n_frozen=settings["n_frozen"],
        backend=settings["backend"],
        shots=settings["shots"],
        seed=settings["seed"],
        energy_tolerance=settings["tol"],
        max_iterations=settings["max_iter"],
        gradient_step=settings["gradient_step"],
        max_qubits=settings["max_qubits"],
        mode=mode,
        assumed_e_iter=settings["assumed_e_iter"])


def _build(config):
    problem, _ = load_problem(config.fixture, n_frozen=config.n_frozen)
    encoded = encode_problem(problem, encoding=config.encoding,
                             reduce_qubits=config.reduce_qubits,
                             tapering=config.tapering)
    return problem, encoded


def _parse_theta(text, n_parameters):
    if text is None:
        return [0.0] * n_parameters
    return [float(part) for part in text.split(",") if part.strip()]


def cmd_inspect(args, settings, out, err):
    config = _make_config(args.fixture, settings, "inspect")
    if args.dump_hamiltonian or args.dump_circuit:
        _, encoded = _build(config)
        if args.dump_hamiltonian:
            out.write(encoded.hamiltonian.render() + "\n")
        if args.dump_circuit:
            out.write(transpile(encoded.circuit).render_gate_list())
        return 0
    record = inspect_row(config)
    out.write(emit_table([record], format=settings["format"]))
    return 0


def cmd_energy(args, settings, out, err):
    config = _make_config(args.fixture, settings, "full")
    _, encoded = _build(config)
    fused = transpile(encoded.circuit)
    theta = _parse_theta(args.theta, fused.n_parameters)
    if settings["backend"] == "sampled":
        estimate = expval_sampled(encoded.hamiltonian, fused.bind(theta),
                                  settings["shots"], settings["seed"])
        out.write(f"energy={estimate.mean!r}\n")
        out.write(f"stderr={estimate.stderr!r}\n")
        return 0
    solver = VqeSolver(encoded.hamiltonian, fused,
                       max_qubits=settings["max_qubits"])
    out.write(f"energy={solver.energy_at(theta)!r}\n")
    return 0


def cmd_vqe(args, settings, out, err):
    config = _make_config(args.fixture, settings, "full")
    problem, encoded = _build(config)
    fused = transpile(encoded.circuit)
    solver = VqeSolver(encoded.hamiltonian, fused,
                       backend=settings["backend"], shots=settings["shots"],
                       seed=settings["seed"],
                       max_qubits=settings["max_qubits"])
    result = solver.minimize(VqeConfig(
        energy_tolerance=settings["tol"],
        max_iterations=settings["max_iter"],
        gradient_step=settings["gradient_step"]))
    err.write(f"label={problem.label} n_qubits={encoded.n_qubits} "
              f"n_varpar={fused.n_parameters} backend={settings['backend']}\n")
    err.write(f"e_hf={float(hf_energy(problem))!r} energy={result.energy!r} "
              f"converged={result.converged} reason={result.stop_reason}\n")
    err.write(f"n_iterations={result.n_energy_iterations} "
              f"n_evaluations={result.n_evaluations} "
              f"tts_conv={result.tts_conv:.4g}s\n")
    out.write(",".join(_TRACE_COLUMNS) + "\n")
    for record in result.trace:
        out.write(f"{record.iteration},{record.energy!r},"
                  f"{record.gradient_norm!r},{record.n_evaluations},"
                  f"{record.elapsed_s!r}\n")
    return 0 if result.converged else 1


def cmd_exact(args, settings, out, err):
    config = _make_config(args.fixture, settings, "full")
    problem, encoded = _build(config)
    kwargs = {}
    if settings["max_qubits"] is not None:
        kwargs["max_qubits"] = settings["max_qubits"]
    energy, _ = exact_ground_energy(encoded.hamiltonian, **kwargs)
    out.write(f"e_hf={float(hf_energy(problem))!r}\n")
    out.write(f"e_fci={energy!r}\n")
    return 0


def cmd_bench(args, settings, out, err):
    fixtures = [Path(f) for f in args.fixtures]
    if args.suite:
        fixtures.extend(suite_fixtures(args.suite))
    if not fixtures:
        err.write("error: no fixtures given (positional paths or --suite)\n")
        return 2
    mode = settings["mode"]
    parallel = settings["parallel_rows"]
    if parallel > 1 and mode != "inspect":
        err.write("error: --parallel-rows requires --mode inspect "
                  "(timed rows run one at a time)\n")
        return 2
    if parallel > 1:
        configs = [_make_config(f, settings, "inspect") for f in fixtures]
        with ThreadPoolExecutor(max_workers=parallel) as pool:
            records = list(pool.map(inspect_row, configs))
    else:
        records = []
        for fixture in fixtures:
            row_mode = mode
            if row_mode == "auto":
                probe = inspect_row(_make_config(fixture, settings,
                                                 "inspect"))
                row_mode = ("full"
                            if probe.n_qubits <= settings["full_max_qubits"]
                            else "estimate")
            records.append(run_config(_make_config(fixture, settings,
                                                   row_mode)))
    out.write(emit_table(records, format=settings["format"]))
    failures = [r for r in records if r.failure is not None]
    for record in failures:
        err.write(f"note: {record.label}: {record.failure}\n")
    return 0 if not failures else 1


_HANDLERS = {
    "inspect": cmd_inspect,
    "energy": cmd_energy,
    "vqe": cmd_vqe,
    "exact": cmd_exact,
    "bench": cmd_bench,
}


def main(argv=None):
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    file_values = {}
    if getattr(args, "config", None):
        try:
            file_values = load_config_file(args.config)
        except (OSError, ValueError) as exc:
            sys.stderr.write(f"error: {exc}\n")
            return 2
    settings = _resolve_settings(args, file_values)
    handler = _HANDLERS[args.command]
    try:
        return handler(args, settings, sys.stdout, sys.stderr)
    except (OSError, ValueError, ResourceLimitError, RuntimeError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
