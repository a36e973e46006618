"""Benchmark rows over fixtures: resource counts, timing estimates, full runs.

A row is built in one of three modes.  `inspect` stops after circuit
construction and reports counts only.  `estimate` times a single energy
evaluation and extrapolates one optimizer iteration (n_varpar parameter
shifts, two evaluations each would be a gradient; the iteration estimate
follows the reporting convention tts_iter = n_varpar * tts_1vp) and a
converged run (an assumed iteration count, default 10).  `full` runs the
optimizer to convergence and reports measured timings alongside the
Hartree-Fock, VQE, and exact ground-state energies.

Gate counts always describe the transpiled circuit (single-qubit runs fused,
redundant CNOT pairs cancelled); every row records that convention in a
`count_convention` column so counts from other synthesis conventions are
never silently mixed.
"""

import csv
import io
from dataclasses import dataclass, fields, replace
from pathlib import Path

from .backends import exact_ground_energy
from .chem import hf_energy
from .circuit import transpile
from .errors import ResourceLimitError
from .pipeline import encode_problem, load_problem
from .vqe import VqeConfig, VqeSolver

MODES = ("full", "estimate", "inspect")
COUNT_CONVENTION = "fused+cnot-cancelled"

_ESTIMATABLE = ("tts_iter", "n_e_iter", "tts_conv")
_TIMING_VIEW = ("label", "n_electrons", "n_qubits", "n_gates", "n_varpar",
                "tts_1vp", "tts_iter", "n_e_iter", "tts_conv")
_ENERGY_VIEW = ("label", "n_electrons", "n_qubits", "n_gates", "depth",
                "n_varpar", "e_hf", "e_vqe", "e_delta")


@dataclass(frozen=True, slots=True)
class RunConfig:
    """Everything needed to reproduce one benchmark row.

    two_qubit_reduction defaults to None, meaning "on exactly when the
    encoding is parity"; requesting it explicitly with any other encoding
    is an error because the reduction is a parity-basis construction.
    """

    fixture: str
    encoding: str = "parity"
    two_qubit_reduction: bool = None
    tapering: bool = True
    n_frozen: object = "auto"
    backend: str = "statevector"
    shots: int = 1024
    seed: int = 0
    energy_tolerance: float = 1e-6
    max_iterations: int = 200
    gradient_step: float = 1e-6
    max_qubits: int = None
    mode: str = "full"
    assumed_e_iter: int = 10

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}; pick from {MODES}")
        if self.two_qubit_reduction and self.encoding != "parity":
            raise ValueError("the two-qubit reduction requires the parity "
                             "encoding")
        if self.assumed_e_iter < 1:
            raise ValueError("assumed_e_iter must be at least 1")

    @property
    def reduce_qubits(self):
        if self.two_qubit_reduction is None:
            return self.encoding == "parity"
        return bool(self.two_qubit_reduction)


@dataclass(frozen=True, slots=True)
class BenchmarkRecord:
    """One emitted benchmark row; None fields render as empty cells.

    `estimated` names the fields holding extrapolated rather than measured
    values; only tts_iter, n_e_iter and tts_conv may ever be estimated.
    """

    label: str
    basis: str
    mode: str
    n_electrons: int
    n_qubits: int
    n_gates: int
    n_cnot: int
    depth: int
    n_varpar: int
    tts_1vp: float = None
    tts_iter: float = None
    n_e_iter: int = None
    tts_conv: float = None
    e_hf: float = None
    e_vqe: float = None
    e_delta: float = None
    e_fci: float = None
    n_evaluations: int = None
    encoding: str = "parity"
    two_qubit_reduction: bool = True
    tapering: bool = True
    n_frozen: int = 0
    count_convention: str = COUNT_CONVENTION
    failure: str = None
    estimated: tuple = ()

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}; pick from {MODES}")
        object.__setattr__(self, "estimated", tuple(sorted(self.estimated)))
        unknown = set(self.estimated) - set(_ESTIMATABLE)
        if unknown:
            raise ValueError(f"fields {sorted(unknown)} cannot be estimates")
        if self.e_vqe is not None and self.e_hf is not None:
            if self.e_delta is None or \
                    abs(self.e_delta - (self.e_vqe - self.e_hf)) > 1e-12:
                raise ValueError("e_delta must equal e_vqe - e_hf")
        if None not in (self.e_fci, self.e_vqe, self.e_hf):
            sandwich = (self.e_fci <= self.e_vqe + 1e-9
                        and self.e_vqe <= self.e_hf + 1e-9)
            if not sandwich:
                raise ValueError(
                    f"variational sandwich violated: e_fci={self.e_fci!r} "
                    f"e_vqe={self.e_vqe!r} e_hf={self.e_hf!r}")


def _build_row(config):
    """Run the pipeline through transpilation; shared by all three modes."""
    problem, metadata = load_problem(config.fixture, n_frozen=config.n_frozen)
    encoded = encode_problem(problem, encoding=config.encoding,
                             reduce_qubits=config.reduce_qubits,
                             tapering=config.tapering)
    fused = transpile(encoded.circuit)
    stats = fused.stats()
    base = dict(
        label=problem.label,
        basis=metadata.get("basis", Path(config.fixture).stem),
        mode=config.mode,
        n_electrons=problem.n_electrons,
        n_qubits=encoded.n_qubits,
        n_gates=stats.n_gates,
        n_cnot=stats.n_cnot,
        depth=stats.depth,
        n_varpar=encoded.n_parameters,
        encoding=config.encoding,
        two_qubit_reduction=config.reduce_qubits,
        tapering=config.tapering,
        n_frozen=problem.n_frozen,
    )
    return problem, encoded, fused, base


def _solver(config, encoded, fused):
    return VqeSolver(encoded.hamiltonian, fused, backend=config.backend,
                     shots=config.shots, seed=config.seed,
                     max_qubits=config.max_qubits)


def inspect(config):
    """Counts-only row: the pipeline runs, nothing is evaluated or timed."""
    config = replace(config, mode="inspect")
    _, _, _, base = _build_row(config)
    return BenchmarkRecord(**base)


def estimate(config, assumed_e_iter=None):
    """Time one energy evaluation, extrapolate the iteration and the run.

    tts_1vp is measured; tts_iter = n_varpar * tts_1vp and
    tts_conv = assumed_e_iter * tts_iter are exact arithmetic over it and
    are flagged as estimates, as is the assumed iteration count.
    """
    config = replace(config, mode="estimate")
    if assumed_e_iter is None:
        assumed_e_iter = config.assumed_e_iter
    _, encoded, fused, base = _build_row(config)
    try:
        solver = _solver(config, encoded, fused)
        energy = solver.energy_at([0.0] * fused.n_parameters)
    except ResourceLimitError as exc:
        return BenchmarkRecord(**base, failure=str(exc))
    tts_1vp = solver.tts_1vp
    tts_iter = base["n_varpar"] * tts_1vp
    return BenchmarkRecord(**base, tts_1vp=tts_1vp, tts_iter=tts_iter,
                           n_e_iter=assumed_e_iter,
                           tts_conv=assumed_e_iter * tts_iter,
                           e_hf=float(energy),
                           n_evaluations=solver.n_evaluations,
                           estimated=_ESTIMATABLE)


def run_full(config):
    """Converge the optimizer and report measured timings and energies.

    The exact ground energy is attached as an oracle column when the
    register fits the diagonalization cap and the backend is noiseless;
    an optimizer abort or a resource refusal yields a partial row with a
    failure note instead of an exception.
    """
    config = replace(config, mode="full")
    problem, encoded, fused, base = _build_row(config)
    e_hf = float(hf_energy(problem))
    try:
        solver = _solver(config, encoded, fused)
        result = solver.minimize(VqeConfig(
            energy_tolerance=config.energy_tolerance,
            max_iterations=config.max_iterations,
            gradient_step=config.gradient_step))
    except (ResourceLimitError, RuntimeError) as exc:
        return BenchmarkRecord(**base, e_hf=e_hf, failure=str(exc))
    e_fci = None
    if config.backend == "statevector":
        try:
            e_fci, _ = exact_ground_energy(encoded.hamiltonian)
        except ResourceLimitError:
            e_fci = None
    failure = None
    if not result.converged:
        failure = f"optimizer stopped: {result.stop_reason}"
    return BenchmarkRecord(**base, tts_1vp=result.tts_1vp,
                           tts_iter=result.tts_iter,
                           n_e_iter=result.n_energy_iterations,
                           tts_conv=result.tts_conv,
                           e_hf=e_hf, e_vqe=result.energy,
                           e_delta=result.energy - e_hf, e_fci=e_fci,
                           n_evaluations=result.n_evaluations,
                           failure=failure)


def run_config(config):
    """Dispatch a RunConfig to the builder its mode names."""
    if config.mode == "inspect":
        return inspect(config)
    if config.mode == "estimate":
        return estimate(config)
    return run_full(config)


def suite_fixtures(directory):
    """FCIDUMP files directly in `directory` or one level below it."""
    root = Path(directory)
    found = sorted(root.glob("*.fcidump")) + sorted(root.glob("*/*.fcidump"))
    if not found:
        raise FileNotFoundError(f"no .fcidump fixtures under {root}")
    return found


_CSV_FIELDS = tuple(f.name for f in fields(BenchmarkRecord)
                    if f.name != "estimated")
_FLOAT_FIELDS = frozenset(("tts_1vp", "tts_iter", "tts_conv",
                           "e_hf", "e_vqe", "e_delta", "e_fci"))
_INT_FIELDS = frozenset(("n_electrons", "n_qubits", "n_gates", "n_cnot",
                         "depth", "n_varpar", "n_e_iter", "n_evaluations",
                         "n_frozen"))
_BOOL_FIELDS = frozenset(("two_qubit_reduction", "tapering"))


def _csv_cell(record, name):
    value = getattr(record, name)
    if value is None:
        return ""
    if name in _BOOL_FIELDS:
        text = "true" if value else "false"
    elif name in _FLOAT_FIELDS:
        text = repr(float(value))
    else:
        text = str(value)
    if name in record.estimated:
        text += "~"
    return text


def _parse_cell(name, text):
    estimated = False
    if name in _ESTIMATABLE and text.endswith("~"):
        estimated = True
        text = text[:-1]
    if text == "":
        return None, estimated
    if name in _BOOL_FIELDS:
        if text not in ("true", "false"):
            raise ValueError(f"bad boolean cell {text!r} for {name}")
        return text == "true", estimated
    if name in _FLOAT_FIELDS:
        return float(text), estimated
    if name in _INT_FIELDS:
        return int(text), estimated
    return text, estimated


def emit_table(records, format="csv"):
    """Render records as CSV (default) or as aligned text tables.

    The text rendering prints a timing view and, when any record carries
    energies, an energy view; estimated values are suffixed with `~` and
    missing cells print as `--` (empty in CSV).
    """
    records = list(records)
    if not records:
        raise ValueError("emit_table needs at least one record")
    if format == "csv":
        return _emit_csv(records)
    if format == "table":
        return _emit_text(records)
    raise ValueError(f"unknown format {format!r}; pick csv or table")


def _emit_csv(records):
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(_CSV_FIELDS)
    for record in records:
        writer.writerow([_csv_cell(record, name) for name in _CSV_FIELDS])
    return out.getvalue()


def parse_csv(text):
    """Inverse of the CSV emitter: text from _emit_csv -> identical records."""
    reader = csv.reader(io.StringIO(text))
    rows = list(reader)
    if not rows or tuple(rows[0]) != _CSV_FIELDS:
        raise ValueError("text does not start with the benchmark CSV header")
    records = []
    for row in rows[1:]:
        if len(row) != len(_CSV_FIELDS):
            raise ValueError(f"row has {len(row)} cells, "
                             f"expected {len(_CSV_FIELDS)}")
        kwargs = {}
        estimated = []
        for name, cell in zip(_CSV_FIELDS, row):
            value, was_estimate = _parse_cell(name, cell)
            kwargs[name] = value
            if was_estimate:
                estimated.append(name)
        records.append(BenchmarkRecord(**kwargs, estimated=tuple(estimated)))
    return records


def _text_cell(record, name):
    value = getattr(record, name)
    if value is None:
        return "--"
    if name in _FLOAT_FIELDS:
        text = f"{value:.6f}" if name.startswith("e_") else f"{value:.4g}"
    else:
        text = str(value)
    if name in record.estimated:
        text += "~"
    return text


def _aligned(title, columns, records):
    rows = [[_text_cell(r, name) for name in columns] for r in records]
    widths = [max(len(name), *(len(row[i]) for row in rows))
              for i, name in enumerate(columns)]
    lines = [f"# {title}",
             "  ".join(name.ljust(w) for name, w in zip(columns, widths))]
    for row in rows:
        lines.append("  ".join(cell.rjust(w) for cell, w in zip(row, widths)))
    return "\n".join(lines) + "\n"


def _emit_text(records):
    blocks = [_aligned("timing", _TIMING_VIEW, records)]
    if any(r.e_hf is not None or r.e_vqe is not None or r.e_fci is not None
           for r in records):
        blocks.append(_aligned("energies", _ENERGY_VIEW, records))
    return "\n".join(blocks)
