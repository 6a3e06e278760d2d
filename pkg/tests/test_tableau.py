"""Tests for the signed stabilizer tableau and its group solver."""

import numpy as np
import pytest

from convqec.circuits import build_encoding_circuit
from convqec.code import build_code, syndrome_of
from convqec.pauli import pauli_from_codes, pauli_from_string
from convqec.tableau import (
    CliffordGate,
    SignedPauli,
    StabilizerTableau,
    gate_cx,
    gate_cz,
    gate_h,
)


def test_from_bits_signs():
    t = StabilizerTableau.from_bits([0] * 7)
    assert t.dump() == ["+" + "I" * q + "Z" + "I" * (6 - q) for q in range(7)]
    t = StabilizerTableau.from_bits([0, 0, 0, 0, 0, 1, 0])
    assert t.dump()[5] == "-IIIIIZI"


def test_from_bits_length_check():
    with pytest.raises(ValueError):
        StabilizerTableau.from_bits([0, 1], n=3)


def test_gate_validation():
    with pytest.raises(ValueError):
        CliffordGate("CX", (2, 2))
    with pytest.raises(ValueError):
        CliffordGate("H", (0,))
    with pytest.raises(ValueError):
        CliffordGate("SWAP", (1, 2))


def test_hadamard_conjugation():
    t = StabilizerTableau.from_bits([0])
    t.apply_gate(gate_h(1))
    assert t.dump() == ["+X"]
    t.apply_gate(gate_h(1))
    assert t.dump() == ["+Z"]


def test_hadamard_flips_y_sign():
    t = StabilizerTableau(
        x=np.array([[1]], dtype=np.uint8),
        z=np.array([[1]], dtype=np.uint8),
        phase=np.array([1], dtype=np.int64),  # i * XZ = +Y
    )
    assert t.dump() == ["+Y"]
    t.apply_gate(gate_h(1))
    assert t.dump() == ["-Y"]


def test_cx_conjugation():
    t = StabilizerTableau.from_bits([0, 0])
    t.apply_gate(gate_h(1))  # rows now +XI, +IZ
    t.apply_gate(gate_cx(1, 2))
    assert t.dump() == ["+XX", "+ZZ"]


def test_cz_conjugation():
    t = StabilizerTableau.from_bits([0, 0])
    t.apply_gate(gate_h(1))
    t.apply_gate(gate_cz(1, 2))
    assert t.dump()[0] == "+XZ"


def test_double_hadamard_is_identity_on_random_circuit_state():
    rng = np.random.default_rng(3)
    t = StabilizerTableau.from_bits(rng.integers(0, 2, 6))
    gates = [gate_h(2), gate_cx(2, 3), gate_cz(1, 4), gate_h(5), gate_cx(5, 6)]
    t.apply_gates(gates)
    before = t.dump()
    t.apply_gate(gate_h(4))
    t.apply_gate(gate_h(4))
    assert t.dump() == before


def test_rows_commute_and_full_rank_after_circuit():
    code = build_code(2)
    t = StabilizerTableau.from_bits([0] * code.n)
    t.apply_gates(build_encoding_circuit(2).gates())
    rows = t.rows()
    from convqec.pauli import symplectic_product

    for i in range(len(rows)):
        for j in range(i + 1, len(rows)):
            assert symplectic_product(rows[i].pauli, rows[j].pauli) == 0
    solver = t.solver()
    assert solver.basis.rank == code.n


def test_stabilizes_own_rows_and_sign_sensitivity():
    t = StabilizerTableau.from_bits([0, 0, 0])
    for row in t.rows():
        assert t.stabilizes(row)
    z1 = pauli_from_string("ZII")
    assert t.stabilizes(SignedPauli(z1, 0))
    assert not t.stabilizes(SignedPauli(z1, 1))


def test_stabilizes_post_encoding_generator():
    code = build_code(1)
    t = StabilizerTableau.from_bits([0] * 7)
    t.apply_gates(build_encoding_circuit(1).gates())
    assert t.stabilizes(SignedPauli(code.generators[2], 0))
    assert not t.stabilizes(SignedPauli(code.generators[2], 1))


def test_measure_row_on_zero_state():
    t = StabilizerTableau.from_bits([0, 0])
    assert t.measure_row(pauli_from_string("ZI")) == 0
    assert t.measure_row(pauli_from_string("XI")) is None


def test_measure_row_matches_symplectic_syndrome():
    code = build_code(2)
    base = StabilizerTableau.from_bits([0] * code.n)
    base.apply_gates(build_encoding_circuit(2).gates())
    rng = np.random.default_rng(9)
    for _ in range(20):
        codes = [0] * code.n
        for q in rng.choice(code.n, size=2, replace=False):
            codes[q] = int(rng.integers(1, 4))
        err = pauli_from_codes(codes)
        t = base.copy()
        t.apply_pauli_error(err)
        expected = syndrome_of(code, err).bits
        got = tuple(t.measure_row(g) for g in code.generators)
        assert got == expected


def test_measure_row_matches_syndrome_at_larger_length():
    """Weight <= 2 sample at N=8 (the exhaustive sweep at N <= 4 lives in the
    acceptance suite)."""
    code = build_code(8)
    base = StabilizerTableau.from_bits([0] * code.n)
    base.apply_gates(build_encoding_circuit(8).gates())
    rng = np.random.default_rng(14)
    for _ in range(30):
        codes = [0] * code.n
        for q in rng.choice(code.n, size=int(rng.integers(1, 3)), replace=False):
            codes[q] = int(rng.integers(1, 4))
        err = pauli_from_codes(codes)
        t = base.copy()
        t.apply_pauli_error(err)
        solver = t.solver()
        got = tuple(solver.measure(g) for g in code.generators)
        assert got == syndrome_of(code, err).bits


def test_signed_pauli_str():
    assert str(SignedPauli(pauli_from_string("XZ"), 0)) == "+XZ"
    assert str(SignedPauli(pauli_from_string("XZ"), 1)) == "-XZ"
