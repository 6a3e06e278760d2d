"""Layered online encoding/decoding circuits and error-propagation analysis.

The encoder is organized as six layers of {H, CX, CZ} gates whose count per
five-qubit block is constant, so the layer count does not grow with the code
length and qubits can be emitted as soon as their gates have fired:

    layer 1   H on every ancilla position
    layer 2   boundary CZs: CZ(1,2), CZ(5i+2, 5i+1) for i >= 1, CZ(n, n-1)
    layer 3   CX(5i+5, 5i+6), CZ(5i+5, 5i+7)   for each block i
    layer 4   CX(5i+4, 5i+5), CZ(5i+4, 5i+6)
    layer 5   CX(5i+3, 5i+4), CZ(5i+3, 5i+5)
    layer 6   CX(5i+2, 5i+3), CZ(5i+2, 5i+4)

Within a layer every pair of gates commutes (same-control bundles, disjoint
supports, or diagonal overlaps), which is what makes the reversed circuit a
valid decoder and keeps error propagation bounded: a single-qubit fault can
only spread through the finitely many gates of the six layers that touch its
neighborhood.

Applied to a computational basis state with information bits at positions
5i+1, the circuit maps the initial Z stabilizers row-by-row onto the code's
generators and signed logical Zs; this tableau-level contract is the ground
truth the tests enforce, independent of any particular gate transcription.
"""

from __future__ import annotations

from dataclasses import dataclass

from .pauli import Pauli, pauli_from_codes
from .tableau import CliffordGate, gate_cx, gate_cz, gate_h


@dataclass(frozen=True)
class LayeredCircuit:
    n: int
    layers: tuple[tuple[CliffordGate, ...], ...]

    def gates(self):
        for layer in self.layers:
            yield from layer

    def gate_count(self) -> int:
        return sum(len(layer) for layer in self.layers)


def build_encoding_circuit(blocks: int) -> LayeredCircuit:
    """Six-layer online encoder for a code with ``blocks`` logical qubits."""
    if blocks < 1:
        raise ValueError(f"block count must be >= 1, got {blocks}")
    n = 5 * blocks + 2

    ancillas = [1]
    for i in range(blocks):
        ancillas.extend(range(5 * i + 2, 5 * i + 6))
    ancillas.append(n)
    layer1 = tuple(gate_h(q) for q in ancillas)

    boundary = [gate_cz(1, 2)]
    boundary += [gate_cz(5 * i + 2, 5 * i + 1) for i in range(1, blocks)]
    boundary.append(gate_cz(n, n - 1))
    layer2 = tuple(boundary)

    def bundle_layer(offset: int) -> tuple[CliffordGate, ...]:
        gates = []
        for i in range(blocks):
            p = 5 * i + offset
            gates.append(gate_cx(p, p + 1))
            gates.append(gate_cz(p, p + 2))
        return tuple(gates)

    layers = (layer1, layer2, bundle_layer(5), bundle_layer(4), bundle_layer(3), bundle_layer(2))
    return LayeredCircuit(n, layers)


def build_decoding_circuit(blocks: int) -> LayeredCircuit:
    """Decoder: the encoding layers in reverse order (every gate is an involution)."""
    enc = build_encoding_circuit(blocks)
    return LayeredCircuit(enc.n, tuple(reversed(enc.layers)))


def _conjugate_signed(x: int, z: int, phase: int, gate: CliffordGate) -> tuple[int, int, int]:
    """Conjugate i^phase * prod X^x Z^z through one gate (bit-packed, exact)."""
    if gate.kind == "H":
        q = gate.qubits[0] - 1
        xq, zq = (x >> q) & 1, (z >> q) & 1
        phase = (phase + 2 * (xq & zq)) % 4
        x ^= (xq ^ zq) << q
        z ^= (xq ^ zq) << q
    elif gate.kind == "CX":
        c, t = (q - 1 for q in gate.qubits)
        x ^= ((x >> c) & 1) << t
        z ^= ((z >> t) & 1) << c
    elif gate.kind == "CZ":
        c, t = (q - 1 for q in gate.qubits)
        xc, xt = (x >> c) & 1, (x >> t) & 1
        phase = (phase + 2 * (xc & xt)) % 4
        z ^= (xc << t) | (xt << c)
    else:
        raise ValueError(f"cannot propagate through gate kind {gate.kind!r}")
    return x, z, phase


def gates_commute(a: CliffordGate, b: CliffordGate) -> bool:
    """Exact commutation check by conjugating X_q/Z_q generators both ways."""
    support = sorted(set(a.qubits) | set(b.qubits))
    if len(support) == len(a.qubits) + len(b.qubits):
        return True
    for q in support:
        for seed_x, seed_z in ((1 << (q - 1), 0), (0, 1 << (q - 1))):
            ab = _conjugate_signed(*_conjugate_signed(seed_x, seed_z, 0, a), b)
            ba = _conjugate_signed(*_conjugate_signed(seed_x, seed_z, 0, b), a)
            if ab != ba:
                return False
    return True


def verify_layer_commutation(circuit: LayeredCircuit) -> bool:
    """True iff every pair of gates inside each layer commutes."""
    for layer in circuit.layers:
        for i in range(len(layer)):
            for j in range(i + 1, len(layer)):
                if not gates_commute(layer[i], layer[j]):
                    return False
    return True


def propagate_error(circuit: LayeredCircuit, e: Pauli, from_layer: int) -> Pauli:
    """Conjugate a (phase-free) error through layers from_layer..end.

    Errors are inserted between layers; from_layer == len(layers) means after
    the final layer, leaving the error untouched.
    """
    if e.n != circuit.n:
        raise ValueError(f"error acts on {e.n} qubits, circuit has {circuit.n}")
    if not 0 <= from_layer <= len(circuit.layers):
        raise ValueError(f"from_layer {from_layer} out of range 0..{len(circuit.layers)}")
    x, z = e.x, e.z
    for layer in circuit.layers[from_layer:]:
        for gate in layer:
            x, z, _ = _conjugate_signed(x, z, 0, gate)
    return Pauli(e.n, x, z)


def max_error_spread(circuit: LayeredCircuit) -> int:
    """Worst-case weight of a propagated single-qubit error, over all
    positions, Pauli kinds, and insertion layers."""
    worst = 0
    for from_layer in range(len(circuit.layers) + 1):
        for q in range(1, circuit.n + 1):
            for letter in (1, 2, 3):
                codes = [0] * circuit.n
                codes[q - 1] = letter
                out = propagate_error(circuit, pauli_from_codes(codes), from_layer)
                w = (out.x | out.z).bit_count()
                worst = max(worst, w)
    return worst


def support_window(circuit: LayeredCircuit) -> int:
    """Largest index distance between qubits touched by one gate.

    A constant window is the structural reason encoding can run online: the
    gates acting on a qubit involve only its near neighbors.
    """
    spans = [max(g.qubits) - min(g.qubits) for g in circuit.gates()]
    return max(spans, default=0)


def export_circuit(circuit: LayeredCircuit) -> str:
    """Line-oriented text: one gate per line, blank line between layers."""
    sections = ["\n".join(str(g) for g in layer) for layer in circuit.layers]
    return "\n\n".join(sections) + "\n"
