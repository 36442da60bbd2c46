"""Circuit language tests: parsing, formatting, classification, execution."""

import math
import pathlib

import numpy as np
import pytest

from bellsim import dsl
from bellsim import statevector as sv
from bellsim.errors import ConfigError, NonCliffordGate

CORPUS = pathlib.Path(__file__).parent / "corpus"

INVALID_KINDS = {
    "arity_high": dsl.ArityError,
    "arity_low": dsl.ArityError,
    "bad_angle": dsl.AngleError,
    "bad_header_count": dsl.HeaderError,
    "comment_only": dsl.HeaderError,
    "duplicate_qubits": dsl.QubitRangeError,
    "header_extra_operand": dsl.HeaderError,
    "header_no_count": dsl.HeaderError,
    "malformed_index": dsl.QubitRangeError,
    "missing_angle": dsl.ArityError,
    "missing_header": dsl.HeaderError,
    "nan_angle": dsl.AngleError,
    "negative_qubit": dsl.QubitRangeError,
    "qubit_out_of_range": dsl.QubitRangeError,
    "unknown_opcode": dsl.UnknownOpcodeError,
    "zero_qubits": dsl.HeaderError,
}


def test_parse_angle_tokens():
    assert dsl.parse_angle("pi") == math.pi
    assert dsl.parse_angle("-pi/2") == -math.pi / 2
    assert dsl.parse_angle("+pi/4") == math.pi / 4
    assert dsl.parse_angle("3pi/4") == 3 * math.pi / 4
    assert dsl.parse_angle("-3pi/4") == -3 * math.pi / 4
    assert dsl.parse_angle("2pi") == 2 * math.pi
    assert dsl.parse_angle("PI/2") == math.pi / 2
    assert dsl.parse_angle("0.5") == 0.5
    assert dsl.parse_angle("-1e-3") == -1e-3


def test_parse_angle_rejects_garbage():
    for token in ("banana", "nan", "inf", "-inf", "pi/0", "pi/", "2pi/", "pipi"):
        with pytest.raises(ValueError):
            dsl.parse_angle(token)


def test_parse_basic_circuit():
    circuit = dsl.parse("qubits 2\nh 0\ncnot 0 1\nmeasure 1\n")
    assert circuit.num_qubits == 2
    assert [i.opcode for i in circuit.instructions] == ["H", "CNOT", "MEASURE"]
    assert circuit.instructions[1].qubit_args == (0, 1)
    assert circuit.instructions[1].angle is None


def test_parse_is_case_insensitive_and_skips_comments():
    text = "# leading comment\nQUBITS 2  # two wires\n\nH 0 # hadamard\n  CNOT 0 1\n"
    circuit = dsl.parse(text)
    assert circuit.num_qubits == 2
    assert [i.opcode for i in circuit.instructions] == ["H", "CNOT"]


def test_parse_records_one_based_locations():
    circuit = dsl.parse("qubits 2\nh 0\n  cnot 0 1\n")
    assert (circuit.instructions[0].line, circuit.instructions[0].column) == (2, 1)
    assert (circuit.instructions[1].line, circuit.instructions[1].column) == (3, 3)
    assert circuit.source_map() == {0: (2, 1), 1: (3, 3)}


def test_instruction_equality_ignores_location():
    a = dsl.Instruction("H", (0,), None, line=5, column=3)
    b = dsl.Instruction("H", (0,), None, line=9, column=1)
    assert a == b
    assert a != dsl.Instruction("X", (0,), None, line=5, column=3)


def test_parse_error_locations_and_kinds():
    cases = [
        ("h 0\n", dsl.HeaderError, 1, 1),
        ("qubits 0\n", dsl.HeaderError, 1, 8),
        ("qubits 2\nfoo 0\n", dsl.UnknownOpcodeError, 2, 1),
        ("qubits 2\nh 0 1\n", dsl.ArityError, 2, 1),
        ("qubits 2\nh 2\n", dsl.QubitRangeError, 2, 3),
        ("qubits 2\ncnot 1 1\n", dsl.QubitRangeError, 2, 8),
        ("qubits 1\nrz 0 bad\n", dsl.AngleError, 2, 6),
    ]
    for text, kind, line, column in cases:
        with pytest.raises(kind) as excinfo:
            dsl.parse(text)
        err = excinfo.value
        assert (err.line, err.column) == (line, column)
        assert str(err).startswith(f"line {line}, column {column}:")


def test_invalid_corpus_raises_expected_kinds():
    files = sorted((CORPUS / "invalid").glob("*.qc"))
    assert {f.stem for f in files} == set(INVALID_KINDS)
    for path in files:
        with pytest.raises(dsl.ParseError) as excinfo:
            dsl.parse(path.read_text())
        err = excinfo.value
        assert type(err) is INVALID_KINDS[path.stem], path.name
        assert err.line >= 1 and err.column >= 1


def test_valid_corpus_parses_and_round_trips():
    files = sorted((CORPUS / "valid").glob("*.qc"))
    assert len(files) >= 20
    for path in files:
        circuit = dsl.parse(path.read_text())
        assert dsl.parse(dsl.format_circuit(circuit)) == circuit, path.name


def test_valid_corpus_classification_matches_markers():
    # Non-Clifford lines in the corpus carry a trailing "# non-clifford"
    # marker; the classifier's witness lines must match them exactly.
    for path in sorted((CORPUS / "valid").glob("*.qc")):
        text = path.read_text()
        marked = {
            lineno
            for lineno, line in enumerate(text.split("\n"), start=1)
            if "# non-clifford" in line
        }
        result = dsl.classify(dsl.parse(text))
        assert {line for line, _ in result.witnesses} == marked, path.name
        assert result.simulable == (not marked), path.name


def test_format_circuit_golden():
    circuit = dsl.parse("QUBITS 2 # c\n H 0\nRZ 1 pi/2 # rot\ncnot 0 1\nmeasure 0\n")
    assert dsl.format_circuit(circuit) == (
        "qubits 2\nh 0\nrz 1 1.5707963267948966\ncnot 0 1\nmeasure 0\n"
    )


def test_classify_reports_witness_columns():
    result = dsl.classify(dsl.parse("qubits 1\n  t 0\nh 0\nrx 0 pi/4\n"))
    assert result.value == dsl.REQUIRES_STATEVECTOR
    assert result.simulable is False
    assert result.witnesses == ((2, 3), (4, 1))


def test_classify_accepts_quarter_turn_rotations():
    text = "qubits 1\nrx 0 pi/2\nry 0 -pi\nrz 0 2pi\nrz 0 0\n"
    result = dsl.classify(dsl.parse(text))
    assert result.value == dsl.STABILIZER_SIMULABLE
    assert result.simulable is True
    assert result.witnesses == ()


def test_simulability_class_validates_consistency():
    with pytest.raises(ConfigError):
        dsl.SimulabilityClass(value="Sometimes", witnesses=())
    with pytest.raises(ConfigError):
        dsl.SimulabilityClass(value=dsl.STABILIZER_SIMULABLE, witnesses=((1, 1),))
    with pytest.raises(ConfigError):
        dsl.SimulabilityClass(value=dsl.REQUIRES_STATEVECTOR, witnesses=())


def test_rotation_to_cliffords_matches_unitaries():
    for opcode in ("RX", "RY", "RZ"):
        for quarter_turns in range(-4, 8):
            angle = quarter_turns * math.pi / 2.0
            sequence = dsl.rotation_to_cliffords(opcode, angle)
            mat = np.eye(2, dtype=complex)
            for kind in sequence:
                mat = sv.FIXED_GATES[kind] @ mat
            target = sv.rotation_matrix(opcode, angle)
            # compare up to global phase via the largest entry
            idx = np.unravel_index(np.abs(target).argmax(), target.shape)
            phase = mat[idx] / target[idx]
            assert abs(abs(phase) - 1.0) < 1e-12
            np.testing.assert_allclose(mat, phase * target, atol=1e-12)


def test_rotation_to_cliffords_rejects_other_angles():
    with pytest.raises(NonCliffordGate):
        dsl.rotation_to_cliffords("RZ", math.pi / 4)
    with pytest.raises(NonCliffordGate):
        dsl.rotation_to_cliffords("RX", 1.0)


def test_run_measures_flipped_qubit_on_both_engines():
    circuit = dsl.parse("qubits 1\nx 0\nmeasure 0\n")
    for engine in ("statevector", "stabilizer"):
        record = dsl.run(circuit, engine=engine)
        assert record.engine == engine
        assert record.outcomes == [1]


def test_run_auto_selects_engine_by_classification():
    clifford = dsl.parse("qubits 2\nh 0\ncnot 0 1\n")
    assert dsl.run(clifford).engine == "stabilizer"
    magic = dsl.parse("qubits 1\nt 0\n")
    assert dsl.run(magic).engine == "statevector"


def test_run_bell_outcomes_are_correlated_and_seeded():
    circuit = dsl.parse("qubits 2\nh 0\ncnot 0 1\nmeasure 0\nmeasure 1\n")
    for engine in ("statevector", "stabilizer"):
        seen = set()
        for seed in range(24):
            record = dsl.run(circuit, engine=engine, seed=seed)
            assert record.outcomes[0] == record.outcomes[1]
            seen.add(tuple(record.outcomes))
            again = dsl.run(circuit, engine=engine, seed=seed)
            assert again.outcomes == record.outcomes
        assert seen == {(0, 0), (1, 1)}


def test_run_final_state_fields_match_engine():
    circuit = dsl.parse("qubits 1\nh 0\nrz 0 pi/2\n")
    dense = dsl.run(circuit, engine="statevector")
    assert dense.final_stabilizers is None
    expected = np.array([1.0, 1.0j]) / math.sqrt(2.0)
    overlap = abs(np.vdot(expected, dense.final_statevector.amplitudes))
    assert abs(overlap - 1.0) < 1e-12

    tableau = dsl.run(circuit, engine="stabilizer")
    assert tableau.final_statevector is None
    assert tableau.final_stabilizers == ["+Y"]


def test_run_stabilizer_rejects_nonclifford_with_witnesses():
    circuit = dsl.parse("qubits 1\nh 0\nt 0\n")
    with pytest.raises(NonCliffordGate) as excinfo:
        dsl.run(circuit, engine="stabilizer")
    assert "line 3 column 1" in str(excinfo.value)


def test_run_rejects_unknown_engine():
    with pytest.raises(ConfigError):
        dsl.run(dsl.parse("qubits 1\nh 0\n"), engine="qasm")
