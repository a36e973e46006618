"""Gate circuits for Pauli-exponential ansatz construction.

The gate basis is {X, H, RX, RY, RZ, CNOT} plus the fused single-qubit
gate U produced by `transpile`.  Only RZ angles may depend on a
variational parameter, expressed as (parameter_index, multiplier) with the
bound angle equal to multiplier * theta[parameter_index]; every other rotation
carries a plain constant in radians.  A U gate carries four constants
(alpha, a, b, c) meaning exp(i*alpha) * RZ(a) * RY(b) * RZ(c), which can
represent any single-qubit unitary including its global phase.
"""

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .pauli import PauliString

_SINGLE_QUBIT = frozenset({"X", "H", "RX", "RY", "RZ"})
_ROTATIONS = frozenset({"RX", "RY", "RZ"})


@dataclass(frozen=True, slots=True)
class Gate:
    name: str
    qubits: tuple
    angle: float = None
    parameter_index: int = None
    multiplier: float = None

    def is_parametric(self):
        return self.parameter_index is not None

    def render(self):
        parts = [self.name] + [str(q) for q in self.qubits]
        if self.is_parametric():
            parts.append(f"p{self.parameter_index}*{self.multiplier!r}")
        elif isinstance(self.angle, tuple):
            parts.extend(repr(a) for a in self.angle)
        elif self.angle is not None:
            parts.append(repr(self.angle))
        return " ".join(parts)


@dataclass(frozen=True, slots=True)
class CircuitStats:
    n_gates: int
    n_cnot: int
    depth: int
    n_parameters: int


class Circuit:
    """Ordered gate sequence on a fixed register, immutable once built."""

    __slots__ = ("n_qubits", "gates", "n_parameters")

    def __init__(self, n_qubits, gates=(), n_parameters=0):
        if n_qubits < 1:
            raise ValueError(f"n_qubits must be positive, got {n_qubits}")
        if n_parameters < 0:
            raise ValueError("n_parameters must be nonnegative")
        gates = tuple(gates)
        for gate in gates:
            if gate.name == "CNOT":
                if len(gate.qubits) != 2 or gate.qubits[0] == gate.qubits[1]:
                    raise ValueError(f"CNOT needs two distinct qubits, got {gate.qubits}")
                if gate.angle is not None or gate.is_parametric():
                    raise ValueError("CNOT takes no angle")
            elif gate.name == "U":
                if len(gate.qubits) != 1:
                    raise ValueError("U acts on exactly one qubit")
                if gate.is_parametric():
                    raise ValueError("U gates are never parametric")
                if not (isinstance(gate.angle, tuple) and len(gate.angle) == 4):
                    raise ValueError("U needs four angles (alpha, a, b, c)")
            elif gate.name in _SINGLE_QUBIT:
                if len(gate.qubits) != 1:
                    raise ValueError(f"{gate.name} acts on exactly one qubit")
                if gate.name in _ROTATIONS:
                    if gate.is_parametric():
                        if gate.name != "RZ":
                            raise ValueError("only RZ angles may be parametric")
                        if gate.angle is not None:
                            raise ValueError("parametric gate cannot also fix an angle")
                        if not 0 <= gate.parameter_index < n_parameters:
                            raise ValueError(
                                f"parameter index {gate.parameter_index} outside "
                                f"0..{n_parameters - 1}")
                        if gate.multiplier is None:
                            raise ValueError("parametric RZ needs a multiplier")
                    elif gate.angle is None:
                        raise ValueError(f"{gate.name} needs an angle")
                elif gate.angle is not None or gate.is_parametric():
                    raise ValueError(f"{gate.name} takes no angle")
            else:
                raise ValueError(f"unknown gate {gate.name!r}")
            for q in gate.qubits:
                if not 0 <= q < n_qubits:
                    raise ValueError(f"qubit {q} outside register of {n_qubits}")
        self.n_qubits = n_qubits
        self.gates = gates
        self.n_parameters = n_parameters

    def __len__(self):
        return len(self.gates)

    def __eq__(self, other):
        return (isinstance(other, Circuit) and self.n_qubits == other.n_qubits
                and self.n_parameters == other.n_parameters
                and self.gates == other.gates)

    def bind(self, theta):
        """Resolve every parametric angle; returns a parameter-free circuit."""
        if len(theta) != self.n_parameters:
            raise ValueError(f"expected {self.n_parameters} parameters, "
                             f"got {len(theta)}")
        bound = []
        for gate in self.gates:
            if gate.is_parametric():
                angle = gate.multiplier * float(theta[gate.parameter_index])
                bound.append(Gate("RZ", gate.qubits, angle=angle))
            else:
                bound.append(gate)
        return Circuit(self.n_qubits, bound, n_parameters=0)

    def stats(self):
        frontier = [0] * self.n_qubits
        depth = 0
        n_cnot = 0
        for gate in self.gates:
            level = 1 + max(frontier[q] for q in gate.qubits)
            for q in gate.qubits:
                frontier[q] = level
            depth = max(depth, level)
            if gate.name == "CNOT":
                n_cnot += 1
        return CircuitStats(n_gates=len(self.gates), n_cnot=n_cnot,
                            depth=depth, n_parameters=self.n_parameters)

    def render_gate_list(self):
        """One gate per line: `GATE q0 [q1] [angle|p<k>*<mult>]`."""
        return "\n".join(gate.render() for gate in self.gates) + ("\n" if self.gates else "")

    def __repr__(self):
        return (f"Circuit(n_qubits={self.n_qubits}, n_gates={len(self.gates)}, "
                f"n_parameters={self.n_parameters})")


def exponentiate_pauli(term, angle, n_parameters=None):
    """Circuit for exp(-i * angle * P) via a CNOT parity ladder.

    X and Y axes are rotated into Z (H and RX(pi/2) respectively), parities
    accumulate along a CNOT ladder onto the highest involved qubit, which
    carries RZ(2*angle), and everything unwinds.  `angle` is a constant in
    radians or an (parameter_index, multiplier) pair.
    """
    if not isinstance(term, PauliString):
        raise TypeError("term must be a PauliString")
    if term.is_identity():
        raise ValueError("identity strings exponentiate to a global phase; "
                         "drop them before circuit synthesis")
    support = [q for q in range(term.n_qubits) if term.axis(q) != "I"]
    gates = []
    for q in support:
        axis = term.axis(q)
        if axis == "X":
            gates.append(Gate("H", (q,)))
        elif axis == "Y":
            gates.append(Gate("RX", (q,), angle=math.pi / 2))
    for a, b in zip(support, support[1:]):
        gates.append(Gate("CNOT", (a, b)))
    apex = support[-1]
    if isinstance(angle, tuple):
        index, multiplier = angle
        gates.append(Gate("RZ", (apex,), parameter_index=index,
                          multiplier=2.0 * multiplier))
        if n_parameters is None:
            n_parameters = index + 1
    else:
        gates.append(Gate("RZ", (apex,), angle=2.0 * float(angle)))
        if n_parameters is None:
            n_parameters = 0
    for a, b in reversed(list(zip(support, support[1:]))):
        gates.append(Gate("CNOT", (a, b)))
    for q in reversed(support):
        axis = term.axis(q)
        if axis == "X":
            gates.append(Gate("H", (q,)))
        elif axis == "Y":
            gates.append(Gate("RX", (q,), angle=-math.pi / 2))
    return Circuit(term.n_qubits, gates, n_parameters=n_parameters)


def cancel_adjacent_cnots(circuit):
    """Remove redundant identical CNOT pairs until none remain.

    A pair cancels when the two gates match exactly and every gate
    between them acts on disjoint qubits, so the first CNOT commutes
    through to meet the second.
    """
    gates = list(circuit.gates)
    changed = True
    while changed:
        changed = False
        removed = [False] * len(gates)
        for i, gate in enumerate(gates):
            if removed[i] or gate.name != "CNOT":
                continue
            touched = set(gate.qubits)
            for j in range(i + 1, len(gates)):
                if removed[j]:
                    continue
                if touched.isdisjoint(gates[j].qubits):
                    continue
                if gates[j].name == "CNOT" and gates[j].qubits == gate.qubits:
                    removed[i] = removed[j] = True
                    changed = True
                break
        if changed:
            gates = [g for g, r in zip(gates, removed) if not r]
    return Circuit(circuit.n_qubits, gates, n_parameters=circuit.n_parameters)


def constant_gate_matrix(gate):
    """2x2 matrix of a non-parametric single-qubit gate."""
    if gate.is_parametric() or gate.name == "CNOT":
        raise ValueError(f"no constant matrix for {gate.render()}")
    if gate.name == "X":
        return np.array([[0, 1], [1, 0]], dtype=complex)
    if gate.name == "H":
        return np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
    if gate.name == "U":
        alpha, a, b, c = gate.angle
        return cmath.exp(1j * alpha) * (_rz_matrix(a) @ _ry_matrix(b)
                                        @ _rz_matrix(c))
    angle = gate.angle
    if gate.name == "RZ":
        return _rz_matrix(angle)
    if gate.name == "RY":
        return _ry_matrix(angle)
    if gate.name == "RX":
        half = angle / 2.0
        return np.array([[math.cos(half), -1j * math.sin(half)],
                         [-1j * math.sin(half), math.cos(half)]])
    raise ValueError(f"unknown gate {gate.name!r}")


def _rz_matrix(angle):
    return np.array([[cmath.exp(-0.5j * angle), 0],
                     [0, cmath.exp(0.5j * angle)]])


def _ry_matrix(angle):
    half = angle / 2.0
    return np.array([[math.cos(half), -math.sin(half)],
                     [math.sin(half), math.cos(half)]], dtype=complex)


def zyz_angles(matrix):
    """Decompose a 2x2 unitary as exp(i*alpha) RZ(a) RY(b) RZ(c).

    The phase alpha is kept so the decomposition reproduces the input
    exactly, not merely up to a global phase.
    """
    matrix = np.asarray(matrix, dtype=complex)
    det = matrix[0, 0] * matrix[1, 1] - matrix[0, 1] * matrix[1, 0]
    alpha = 0.5 * cmath.phase(det)
    special = matrix * cmath.exp(-1j * alpha)
    b = 2.0 * math.atan2(abs(special[1, 0]), abs(special[0, 0]))
    if abs(special[1, 0]) < 1e-12:
        a = 2.0 * cmath.phase(special[1, 1])
        c = 0.0
    elif abs(special[0, 0]) < 1e-12:
        a = 2.0 * cmath.phase(special[1, 0])
        c = 0.0
    else:
        a = cmath.phase(special[1, 1]) + cmath.phase(special[1, 0])
        c = cmath.phase(special[1, 1]) - cmath.phase(special[1, 0])
    return alpha, a, b, c


def fuse_single_qubit_gates(circuit):
    """Collapse each run of constant single-qubit gates into at most one U gate.

    Runs accumulate per qubit and survive across gates on other qubits;
    they flush when the qubit meets a CNOT or a parametric rotation.
    A run multiplying out to the identity disappears entirely, and a
    run of length one keeps its original gate.
    """
    out = []
    pending = {}

    def flush(qubit):
        entry = pending.pop(qubit, None)
        if entry is None:
            return
        run, matrix = entry
        if len(run) == 1:
            out.append(run[0])
            return
        if np.max(np.abs(matrix - np.eye(2))) < 1e-12:
            return
        alpha, a, b, c = zyz_angles(matrix)
        out.append(Gate("U", (qubit,), angle=(alpha, a, b, c)))

    for gate in circuit.gates:
        if gate.name == "CNOT" or gate.is_parametric():
            for q in gate.qubits:
                flush(q)
            out.append(gate)
        else:
            q = gate.qubits[0]
            matrix = constant_gate_matrix(gate)
            if q in pending:
                run, accumulated = pending[q]
                pending[q] = (run + [gate], matrix @ accumulated)
            else:
                pending[q] = ([gate], matrix)
    for q in sorted(pending):
        flush(q)
    return Circuit(circuit.n_qubits, out, n_parameters=circuit.n_parameters)


def transpile(circuit):
    """Cancel redundant CNOTs and fuse single-qubit runs, to a fixpoint.

    The result has the same unitary action as the input (including
    global phase); only the gate count, and therefore the reported
    statistics, change.
    """
    current = circuit
    previous = -1
    while len(current) != previous:
        previous = len(current)
        current = fuse_single_qubit_gates(cancel_adjacent_cnots(current))
    return current
