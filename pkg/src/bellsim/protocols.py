"""Protocol drivers: teleportation, superdense coding, and BB84.

Each driver runs the protocol circuit on one of the two engines and
returns a :class:`ProtocolReport` with the engine used, the classical
bits produced, and numeric quality metrics (fidelity, error rates).

Wire layout conventions:

* teleportation: qubit 0 carries the input state, qubits 1 and 2 hold a
  (|00> + |11>)/sqrt(2) resource pair; qubit 2 receives the state.
  Corrections: X on qubit 2 when the qubit-1 measurement is 1, then Z
  when the qubit-0 measurement is 1.
* superdense coding: sender holds qubit 0 of the resource pair, encodes
  two classical bits (b1, b2) as X^b2 then Z^b1 on it; decoding is
  CNOT(0,1), H(0) followed by measuring both qubits, which returns
  (b1, b2) deterministically.
* BB84: one fresh single-qubit tableau per round; bases are 0 = Z,
  1 = X (preparation applies X^bit then H^basis).

Randomness is drawn only from the caller-supplied generator, in a fixed
documented order per round, so seeded runs are exactly reproducible.
Measurements with deterministic outcomes consume no randomness.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import stabilizer as st
from . import statevector as sv
from .errors import ConfigError, InputError, NonCliffordGate

TELEPORT_FORCE_PAIRS = ((0, 0), (0, 1), (1, 0), (1, 1))

# Gate sequences preparing the six single-qubit stabilizer states from |0>.
STABILIZER_INPUTS: dict[str, tuple[str, ...]] = {
    "0": (),
    "1": ("X",),
    "+": ("H",),
    "-": ("X", "H"),
    "+i": ("H", "S"),
    "-i": ("H", "SDG"),
}

_INPUT_ALIASES = {
    "zero": "0",
    "one": "1",
    "plus": "+",
    "minus": "-",
    "plus_i": "+i",
    "plus-i": "+i",
    "i": "+i",
    "minus_i": "-i",
    "minus-i": "-i",
}


@dataclass
class ProtocolReport:
    """Outcome record for one protocol run."""

    protocol: str
    engine: str
    classically_simulable: bool
    classical_bits: list[int] = field(default_factory=list)
    metrics: dict[str, float] = field(default_factory=dict)

    def to_key_value_lines(self) -> list[str]:
        """Line-oriented key=value serialization (metrics at 10 decimals)."""
        lines = [
            f"protocol={self.protocol}",
            f"engine={self.engine}",
            f"simulable={'true' if self.classically_simulable else 'false'}",
            f"classical_bits={''.join(str(b) for b in self.classical_bits)}",
        ]
        lines.extend(f"{k}={v:.10f}" for k, v in self.metrics.items())
        return lines


def resolve_stabilizer_input(name: str) -> tuple[str, ...]:
    """Preparation gates for a named single-qubit stabilizer state.

    Accepts 0, 1, +, -, +i, -i (and word aliases like plus, minus-i).
    Any other state name raises :class:`NonCliffordGate`: it has no
    stabilizer-engine preparation.
    """
    key = name.strip().lower()
    key = _INPUT_ALIASES.get(key, key)
    if key not in STABILIZER_INPUTS:
        raise NonCliffordGate(
            f"input {name!r} is not one of the six single-qubit stabilizer states "
            f"(0, 1, +, -, +i, -i) and cannot be prepared on the stabilizer engine"
        )
    return STABILIZER_INPUTS[key]


def stabilizer_input_state(name: str) -> sv.StateVector:
    """Dense single-qubit state for a named stabilizer input."""
    state = sv.zero_state(1)
    for kind in resolve_stabilizer_input(name):
        state = sv.apply(state, kind, 0)
    return state


def teleport_statevector(
    input_state: sv.StateVector,
    rng: np.random.Generator,
    force_outcomes: tuple[int, int] | None = None,
) -> tuple[ProtocolReport, np.ndarray]:
    """Teleport a single-qubit state, exactly, on the statevector engine.

    Returns the report together with the receiver qubit's 2x2 reduced
    density matrix.  ``force_outcomes`` optionally pins the two
    mid-protocol measurement outcomes (m0, m1) instead of sampling them;
    every pair occurs with probability 1/4, so forcing is always legal.
    The fidelity metric compares the receiver qubit against the input.
    """
    if input_state.num_qubits != 1:
        raise InputError(f"teleportation input must be 1 qubit, got {input_state.num_qubits}")
    amps = np.kron(input_state.amplitudes, sv.bell_phi_plus().amplitudes)
    state = sv.StateVector(3, amps)
    state = sv.apply(state, "CNOT", 0, 1)
    state = sv.apply(state, "H", 0)
    if force_outcomes is None:
        m0, _, state = sv.measure_qubit(state, 0, rng)
        m1, _, state = sv.measure_qubit(state, 1, rng)
    else:
        m0, m1 = force_outcomes
        _, state = sv.project_qubit(state, 0, m0)
        _, state = sv.project_qubit(state, 1, m1)
    if m1:
        state = sv.apply(state, "X", 2)
    if m0:
        state = sv.apply(state, "Z", 2)
    rho = sv.reduced_density(state, 2)
    fid = sv.fidelity(input_state, rho)
    report = ProtocolReport(
        protocol="teleport",
        engine="statevector",
        classically_simulable=False,
        classical_bits=[m0, m1],
        metrics={"fidelity": fid},
    )
    return report, rho


def teleport_stabilizer(input_name: str, rng: np.random.Generator) -> ProtocolReport:
    """Teleport a named stabilizer state on the tableau engine.

    Only the six single-qubit stabilizer states are preparable here;
    anything else raises :class:`NonCliffordGate`.  Metrics include the
    receiver qubit's Bloch components and the exact fidelity against the
    ideal input.
    """
    prep = resolve_stabilizer_input(input_name)
    t = st.init_zero(3)
    for kind in prep:
        t = st.apply(t, kind, 0)
    t = st.apply(t, "H", 1)
    t = st.apply(t, "CNOT", 1, 2)
    t = st.apply(t, "CNOT", 0, 1)
    t = st.apply(t, "H", 0)
    m0, _, t = st.measure_z(t, 0, rng)
    m1, _, t = st.measure_z(t, 1, rng)
    if m1:
        t = st.apply(t, "X", 2)
    if m0:
        t = st.apply(t, "Z", 2)
    ideal = stabilizer_input_state(input_name)
    rho = sv.reduced_density(st.to_statevector(t), 2)
    metrics = {
        "fidelity": sv.fidelity(ideal, rho),
        "output_x": st.pauli_expectation(t, 2, "X"),
        "output_y": st.pauli_expectation(t, 2, "Y"),
        "output_z": st.pauli_expectation(t, 2, "Z"),
    }
    return ProtocolReport(
        protocol="teleport",
        engine="stabilizer",
        classically_simulable=True,
        classical_bits=[m0, m1],
        metrics=metrics,
    )


def superdense_code(bits: tuple[int, int], rng: np.random.Generator) -> ProtocolReport:
    """Send two classical bits through one qubit of a shared pair.

    Decoding is deterministic: the measured bits always equal the input
    ``bits``.  Runs on the stabilizer engine.
    """
    b1, b2 = bits
    if b1 not in (0, 1) or b2 not in (0, 1):
        raise InputError(f"bits must be 0 or 1, got {bits!r}")
    t = st.init_zero(2)
    t = st.apply(t, "H", 0)
    t = st.apply(t, "CNOT", 0, 1)
    if b2:
        t = st.apply(t, "X", 0)
    if b1:
        t = st.apply(t, "Z", 0)
    t = st.apply(t, "CNOT", 0, 1)
    t = st.apply(t, "H", 0)
    m0, det0, t = st.measure_z(t, 0, rng)
    m1, det1, t = st.measure_z(t, 1, rng)
    return ProtocolReport(
        protocol="superdense",
        engine="stabilizer",
        classically_simulable=True,
        classical_bits=[m0, m1],
        metrics={
            "success": float((m0, m1) == (b1, b2)),
            "deterministic": float(det0 and det1),
        },
    )


def bb84_simulate(
    num_rounds: int, intercept_resend: bool, rng: np.random.Generator
) -> ProtocolReport:
    """BB84 key distribution, optionally with an intercept-resend attacker.

    Per round the generator is consumed in this order: sender bit, sender
    basis, (attacker basis, attacker measurement if random), receiver
    basis, receiver measurement if random.  Rounds where sender and
    receiver bases match are sifted; qber is the error fraction among
    sifted rounds (0.0 when nothing was sifted).  The classical bits in
    the report are the receiver's sifted key.
    """
    if num_rounds < 1:
        raise ConfigError(f"num_rounds must be positive, got {num_rounds}")
    sifted = 0
    errors = 0
    key_bits: list[int] = []
    for _ in range(num_rounds):
        bit = int(rng.integers(0, 2))
        basis = int(rng.integers(0, 2))
        t = st.init_zero(1)
        if bit:
            t = st.apply(t, "X", 0)
        if basis:
            t = st.apply(t, "H", 0)
        if intercept_resend:
            eve_basis = int(rng.integers(0, 2))
            if eve_basis:
                t = st.apply(t, "H", 0)
            _, _, t = st.measure_z(t, 0, rng)
            if eve_basis:
                t = st.apply(t, "H", 0)
        bob_basis = int(rng.integers(0, 2))
        if bob_basis:
            t = st.apply(t, "H", 0)
        m, _, t = st.measure_z(t, 0, rng)
        if bob_basis == basis:
            sifted += 1
            key_bits.append(m)
            if m != bit:
                errors += 1
    qber = errors / sifted if sifted else 0.0
    return ProtocolReport(
        protocol="bb84",
        engine="stabilizer",
        classically_simulable=True,
        classical_bits=key_bits,
        metrics={
            "rounds": float(num_rounds),
            "sifted_count": float(sifted),
            "sift_rate": sifted / num_rounds,
            "error_count": float(errors),
            "qber": qber,
        },
    )
