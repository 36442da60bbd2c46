"""A small line-oriented circuit language, its classifier, and runner.

Grammar (one statement per line):

    qubits N                  header, required first statement
    <opcode> <operands...>    instruction

* ``#`` starts a comment that runs to end of line; blank lines are skipped.
* Opcodes (case-insensitive): h x y z s sdg t tdg rx ry rz cnot cz measure.
* Single-qubit opcodes take one qubit index; cnot/cz take two distinct
  indices; rx/ry/rz additionally take one angle operand.
* Angles are decimal float literals (as accepted by ``float``) or a
  pi-token: ``pi``, ``-pi``, ``pi/2``, ``+pi/4`` and so on.

Parse failures raise a :class:`ParseError` subclass identifying the kind
(header, opcode, arity, qubit index, angle) with 1-based line and column.

:func:`format_circuit` emits the canonical form: lowercase opcodes,
single spaces, angles rendered with ``repr`` so they round-trip exactly,
LF line endings.  ``parse(format_circuit(c)) == c`` for every circuit
(source locations are excluded from equality).

:func:`classify` marks a circuit stabilizer-simulable when every
instruction is Clifford: the discrete set {h,x,y,z,s,sdg,cnot,cz,measure}
plus any rotation whose angle is an integer multiple of pi/2 within
1e-12.  t/tdg and all other rotation angles are non-Clifford witnesses.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

import numpy as np

from . import stabilizer as st
from . import statevector as sv
from .errors import BellSimError, ConfigError, NonCliffordGate

CLIFFORD_ANGLE_ATOL = 1e-12

# opcode -> (number of qubit operands, takes an angle operand)
OPCODES: dict[str, tuple[int, bool]] = {
    "h": (1, False),
    "x": (1, False),
    "y": (1, False),
    "z": (1, False),
    "s": (1, False),
    "sdg": (1, False),
    "t": (1, False),
    "tdg": (1, False),
    "rx": (1, True),
    "ry": (1, True),
    "rz": (1, True),
    "cnot": (2, False),
    "cz": (2, False),
    "measure": (1, False),
}

_ALWAYS_CLIFFORD = frozenset({"H", "X", "Y", "Z", "S", "SDG", "CNOT", "CZ", "MEASURE"})
_ROTATIONS = frozenset({"RX", "RY", "RZ"})

_INT_RE = re.compile(r"^[+-]?[0-9]+$")
_PI_RE = re.compile(r"^([+-]?)([0-9]+)?pi(?:/([1-9][0-9]*))?$", re.IGNORECASE)
_TOKEN_RE = re.compile(r"\S+")


class ParseError(BellSimError):
    """Base for circuit-text errors; carries a 1-based source location."""

    def __init__(self, line: int, column: int, message: str) -> None:
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class HeaderError(ParseError):
    """Missing or malformed ``qubits N`` header."""


class UnknownOpcodeError(ParseError):
    """Opcode not in the instruction set."""


class ArityError(ParseError):
    """Wrong number of operands for the opcode."""


class QubitRangeError(ParseError):
    """Qubit operand malformed, out of range, or duplicated."""


class AngleError(ParseError):
    """Angle operand is neither a float literal nor a pi-token."""


@dataclass(frozen=True)
class Instruction:
    """One parsed statement; source location does not affect equality."""

    opcode: str
    qubit_args: tuple[int, ...]
    angle: float | None = None
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Circuit:
    num_qubits: int
    instructions: tuple[Instruction, ...]

    def source_map(self) -> dict[int, tuple[int, int]]:
        """Instruction index -> (line, column) in the source text."""
        return {i: (ins.line, ins.column) for i, ins in enumerate(self.instructions)}


def parse_angle(token: str) -> float:
    """Parse an angle operand: float literal or pi-token.

    Pi-tokens carry an optional sign, integer numerator and integer
    divisor: ``pi``, ``-pi/2``, ``3pi/4``, ``-3pi/4``, ``2pi``.
    Raises ValueError for anything else, including nan and inf.
    """
    m = _PI_RE.match(token)
    if m:
        value = math.pi * int(m.group(2) or 1)
        if m.group(3):
            value /= int(m.group(3))
        return -value if m.group(1) == "-" else value
    value = float(token)
    if not math.isfinite(value):
        raise ValueError(f"angle must be finite, got {token!r}")
    return value


def parse(text: str) -> Circuit:
    """Parse circuit text into a :class:`Circuit`; raise located errors."""
    num_qubits: int | None = None
    instructions: list[Instruction] = []
    for lineno, raw in enumerate(text.split("\n"), start=1):
        body = raw.split("#", 1)[0].rstrip("\r")
        tokens = [(m.group(), m.start() + 1) for m in _TOKEN_RE.finditer(body)]
        if not tokens:
            continue
        word, col = tokens[0]
        if num_qubits is None:
            if word.lower() != "qubits":
                raise HeaderError(lineno, col, "first statement must be a 'qubits N' header")
            if len(tokens) != 2:
                raise HeaderError(lineno, col, "'qubits' header takes exactly one count")
            count_tok, count_col = tokens[1]
            if not _INT_RE.match(count_tok) or int(count_tok) < 1:
                raise HeaderError(
                    lineno, count_col, f"qubit count must be a positive integer, got {count_tok!r}"
                )
            num_qubits = int(count_tok)
            continue
        name = word.lower()
        if name not in OPCODES:
            raise UnknownOpcodeError(lineno, col, f"unknown opcode {word!r}")
        arity, takes_angle = OPCODES[name]
        operands = tokens[1:]
        expected = arity + (1 if takes_angle else 0)
        if len(operands) != expected:
            raise ArityError(
                lineno, col, f"{name} expects {expected} operand(s), got {len(operands)}"
            )
        qubits: list[int] = []
        for tok, tok_col in operands[:arity]:
            if not _INT_RE.match(tok):
                raise QubitRangeError(lineno, tok_col, f"malformed qubit index {tok!r}")
            q = int(tok)
            if not 0 <= q < num_qubits:
                raise QubitRangeError(
                    lineno, tok_col, f"qubit {q} out of range for {num_qubits} qubit(s)"
                )
            if q in qubits:
                raise QubitRangeError(lineno, tok_col, f"duplicate qubit index {q}")
            qubits.append(q)
        angle: float | None = None
        if takes_angle:
            tok, tok_col = operands[arity]
            try:
                angle = parse_angle(tok)
            except ValueError:
                raise AngleError(lineno, tok_col, f"malformed angle {tok!r}") from None
        instructions.append(Instruction(name.upper(), tuple(qubits), angle, lineno, col))
    if num_qubits is None:
        raise HeaderError(1, 1, "missing 'qubits N' header")
    return Circuit(num_qubits, tuple(instructions))


def format_circuit(circuit: Circuit) -> str:
    """Canonical text form; parsing it back yields an equal circuit."""
    lines = [f"qubits {circuit.num_qubits}"]
    for ins in circuit.instructions:
        parts = [ins.opcode.lower()]
        parts.extend(str(q) for q in ins.qubit_args)
        if ins.angle is not None:
            parts.append(repr(ins.angle))
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"


def is_clifford_instruction(ins: Instruction) -> bool:
    if ins.opcode in _ALWAYS_CLIFFORD:
        return True
    if ins.opcode in _ROTATIONS:
        assert ins.angle is not None
        half_turns = ins.angle / (math.pi / 2.0)
        return abs(ins.angle - round(half_turns) * (math.pi / 2.0)) <= CLIFFORD_ANGLE_ATOL
    return False


STABILIZER_SIMULABLE = "StabilizerSimulable"
REQUIRES_STATEVECTOR = "RequiresStatevector"


@dataclass(frozen=True)
class SimulabilityClass:
    """Whether the stabilizer engine can run the circuit, with witnesses.

    ``witnesses`` holds (line, column) of every non-Clifford instruction;
    it is empty exactly when ``value`` is ``StabilizerSimulable``.
    """

    value: str
    witnesses: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        if self.value not in (STABILIZER_SIMULABLE, REQUIRES_STATEVECTOR):
            raise ConfigError(f"unknown simulability class {self.value!r}")
        if self.simulable == bool(self.witnesses):
            raise ConfigError("witness list inconsistent with simulability class")

    @property
    def simulable(self) -> bool:
        return self.value == STABILIZER_SIMULABLE


def classify(circuit: Circuit) -> SimulabilityClass:
    """Decide stabilizer simulability instruction by instruction."""
    witnesses = tuple(
        (ins.line, ins.column)
        for ins in circuit.instructions
        if not is_clifford_instruction(ins)
    )
    value = STABILIZER_SIMULABLE if not witnesses else REQUIRES_STATEVECTOR
    return SimulabilityClass(value=value, witnesses=witnesses)


_RZ_SEQUENCES: dict[int, tuple[str, ...]] = {
    0: (),
    1: ("S",),
    2: ("Z",),
    3: ("SDG",),
}
_RX_SEQUENCES: dict[int, tuple[str, ...]] = {
    0: (),
    1: ("H", "S", "H"),
    2: ("X",),
    3: ("H", "SDG", "H"),
}
_RY_SEQUENCES: dict[int, tuple[str, ...]] = {
    0: (),
    1: ("SDG", "H", "S", "H", "S"),
    2: ("Y",),
    3: ("SDG", "H", "SDG", "H", "S"),
}


def rotation_to_cliffords(opcode: str, angle: float) -> tuple[str, ...]:
    """Clifford gate sequence (time order) equal to the rotation up to phase.

    Only valid when the angle is an integer multiple of pi/2 within
    1e-12; anything else raises :class:`NonCliffordGate`.
    """
    quarter_turns = round(angle / (math.pi / 2.0))
    if abs(angle - quarter_turns * (math.pi / 2.0)) > CLIFFORD_ANGLE_ATOL:
        raise NonCliffordGate(f"{opcode} angle {angle!r} is not a multiple of pi/2")
    k = quarter_turns % 4
    table = {"RZ": _RZ_SEQUENCES, "RX": _RX_SEQUENCES, "RY": _RY_SEQUENCES}[opcode]
    return table[k]


@dataclass
class RunRecord:
    """Result of executing a circuit: outcomes plus a final-state readout.

    ``outcomes`` has one entry per measure instruction, in program order.
    Exactly one of ``final_statevector`` / ``final_stabilizers`` is set,
    matching the engine that ran.
    """

    engine: str
    outcomes: list[int]
    final_statevector: sv.StateVector | None = None
    final_stabilizers: list[str] | None = None


def run(circuit: Circuit, engine: str = "auto", seed: int = 0) -> RunRecord:
    """Execute a circuit on the chosen engine.

    ``engine`` is "auto" (stabilizer when the circuit is Clifford, dense
    otherwise), "statevector", or "stabilizer".  Requesting the
    stabilizer engine for a non-Clifford circuit raises
    :class:`NonCliffordGate` naming the witness locations.  Measurement
    randomness is seeded; the two engines draw from their generators
    differently, so individual outcomes are engine-specific even though
    the outcome distributions agree.
    """
    if engine not in ("auto", "statevector", "stabilizer"):
        raise ConfigError(f"engine must be auto, statevector or stabilizer, got {engine!r}")
    report = classify(circuit)
    if engine == "stabilizer" and not report.simulable:
        spots = ", ".join(f"line {ln} column {col}" for ln, col in report.witnesses)
        raise NonCliffordGate(f"circuit has non-Clifford instructions at {spots}")
    chosen = engine if engine != "auto" else ("stabilizer" if report.simulable else "statevector")
    rng = np.random.default_rng(seed)
    outcomes: list[int] = []
    if chosen == "statevector":
        state = sv.zero_state(circuit.num_qubits)
        for ins in circuit.instructions:
            if ins.opcode == "MEASURE":
                outcome, _, state = sv.measure_qubit(state, ins.qubit_args[0], rng)
                outcomes.append(outcome)
            else:
                state = sv.apply_gate(state, sv.GateOp(ins.opcode, ins.qubit_args, ins.angle))
        return RunRecord(engine=chosen, outcomes=outcomes, final_statevector=state)
    tableau = st.init_zero(circuit.num_qubits)
    for ins in circuit.instructions:
        if ins.opcode == "MEASURE":
            outcome, _, tableau = st.measure_z(tableau, ins.qubit_args[0], rng)
            outcomes.append(outcome)
        elif ins.opcode in _ROTATIONS:
            assert ins.angle is not None
            for kind in rotation_to_cliffords(ins.opcode, ins.angle):
                tableau = st.apply(tableau, kind, ins.qubit_args[0])
        else:
            tableau = st.apply_clifford(tableau, sv.GateOp(ins.opcode, ins.qubit_args))
    return RunRecord(
        engine=chosen, outcomes=outcomes, final_stabilizers=st.stabilizer_strings(tableau)
    )
