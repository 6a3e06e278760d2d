"""Signed stabilizer-tableau simulation for H/CX/CZ circuits.

Each tableau row represents one stabilizer generator of an n-qubit state.
Internally a row is stored as bit vectors (x, z) plus a phase exponent
p mod 4, encoding the operator

    i^p  *  prod_q X_q^{x_q} Z_q^{z_q}     (per-qubit XZ order).

With the convention Y := i X Z this is exact, so all conjugation sign rules
below are derivable by reordering X and Z factors; no lookup tables of
special cases are needed.  A row is Hermitian iff p has the same parity as
the number of Y factors, and states are only ever stabilized by Hermitian
rows, so the externally visible sign is always +1 or -1.

Conjugation rules (phase increments are mod 4):

    H(q):     swap x_q, z_q;                      p += 2 * x_q * z_q
    CX(c,t):  x_t ^= x_c;  z_c ^= z_t;            p += 0
    CZ(c,t):  z_t ^= x_c;  z_c ^= x_t;            p += 2 * x_c * x_t
    X(q):     p += 2 * z_q          Z(q):  p += 2 * x_q
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import gf2
from .pauli import Pauli

GATE_ARITY = {"H": 1, "X": 1, "Z": 1, "CX": 2, "CZ": 2}


@dataclass(frozen=True)
class CliffordGate:
    kind: str
    qubits: tuple[int, ...]

    def __post_init__(self) -> None:
        arity = GATE_ARITY.get(self.kind)
        if arity is None:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        if len(self.qubits) != arity:
            raise ValueError(f"{self.kind} takes {arity} qubit(s), got {self.qubits}")
        if any(q < 1 for q in self.qubits):
            raise ValueError(f"qubit indices are 1-based, got {self.qubits}")
        if arity == 2 and self.qubits[0] == self.qubits[1]:
            raise ValueError("control and target must differ")

    def __str__(self) -> str:
        return " ".join([self.kind] + [str(q) for q in self.qubits])


def gate_h(q: int) -> CliffordGate:
    return CliffordGate("H", (q,))


def gate_cx(control: int, target: int) -> CliffordGate:
    return CliffordGate("CX", (control, target))


def gate_cz(a: int, b: int) -> CliffordGate:
    return CliffordGate("CZ", (a, b))


@dataclass(frozen=True)
class SignedPauli:
    """A Pauli with an explicit +/-1 sign (0 means +1, 1 means -1)."""

    pauli: Pauli
    sign: int = 0

    def __str__(self) -> str:
        return ("-" if self.sign else "+") + str(self.pauli)


def _phase_of_signed(sp: SignedPauli) -> int:
    y_count = (sp.pauli.x & sp.pauli.z).bit_count()
    return (y_count + 2 * sp.sign) % 4


class StabilizerTableau:
    """Mutable stabilizer-state tableau; callers own their instance."""

    def __init__(self, x: np.ndarray, z: np.ndarray, phase: np.ndarray):
        self.x = x
        self.z = z
        self.phase = phase
        self.n = x.shape[1]

    @classmethod
    def from_bits(cls, bits, n: int | None = None) -> "StabilizerTableau":
        """Computational basis state |bits>: stabilizers (-1)^{bits[q]} Z_q."""
        bits = np.asarray(bits, dtype=np.uint8)
        if n is not None and bits.shape[0] != n:
            raise ValueError(f"got {bits.shape[0]} bits for {n} qubits")
        n = bits.shape[0]
        x = np.zeros((n, n), dtype=np.uint8)
        z = np.eye(n, dtype=np.uint8)
        phase = (2 * bits.astype(np.int64)) % 4
        return cls(x, z, phase)

    def copy(self) -> "StabilizerTableau":
        return StabilizerTableau(self.x.copy(), self.z.copy(), self.phase.copy())

    def apply_gate(self, gate: CliffordGate) -> None:
        if any(q > self.n for q in gate.qubits):
            raise ValueError(f"gate {gate} exceeds qubit count {self.n}")
        if gate.kind == "H":
            q = gate.qubits[0] - 1
            self.phase = (self.phase + 2 * (self.x[:, q] & self.z[:, q])) % 4
            self.x[:, q], self.z[:, q] = self.z[:, q].copy(), self.x[:, q].copy()
        elif gate.kind == "CX":
            c, t = (q - 1 for q in gate.qubits)
            self.x[:, t] ^= self.x[:, c]
            self.z[:, c] ^= self.z[:, t]
        elif gate.kind == "CZ":
            c, t = (q - 1 for q in gate.qubits)
            self.phase = (self.phase + 2 * (self.x[:, c] & self.x[:, t])) % 4
            self.z[:, t] ^= self.x[:, c]
            self.z[:, c] ^= self.x[:, t]
        elif gate.kind == "X":
            q = gate.qubits[0] - 1
            self.phase = (self.phase + 2 * self.z[:, q]) % 4
        elif gate.kind == "Z":
            q = gate.qubits[0] - 1
            self.phase = (self.phase + 2 * self.x[:, q]) % 4

    def apply_gates(self, gates) -> None:
        for gate in gates:
            self.apply_gate(gate)

    def apply_pauli_error(self, e: Pauli) -> None:
        """Corrupt the state by a (phase-free) Pauli: flip signs of
        anticommuting rows."""
        if e.n != self.n:
            raise ValueError(f"error acts on {e.n} qubits, tableau has {self.n}")
        ex = np.array([(e.x >> q) & 1 for q in range(self.n)], dtype=np.int64)
        ez = np.array([(e.z >> q) & 1 for q in range(self.n)], dtype=np.int64)
        anti = (self.x.astype(np.int64) @ ez + self.z.astype(np.int64) @ ex) % 2
        self.phase = (self.phase + 2 * anti) % 4

    def _row_ints(self, r: int) -> tuple[int, int]:
        xb = int.from_bytes(np.packbits(self.x[r], bitorder="little").tobytes(), "little")
        zb = int.from_bytes(np.packbits(self.z[r], bitorder="little").tobytes(), "little")
        return xb, zb

    def rows(self) -> list[SignedPauli]:
        out = []
        for r in range(self.x.shape[0]):
            xb, zb = self._row_ints(r)
            p = Pauli(self.n, xb, zb)
            y_count = (xb & zb).bit_count()
            sign = ((int(self.phase[r]) - y_count) % 4) // 2
            out.append(SignedPauli(p, sign))
        return out

    def dump(self) -> list[str]:
        """Sign-prefixed Pauli strings, one per row (for golden-file tests)."""
        return [str(sp) for sp in self.rows()]

    def solver(self) -> "GroupSolver":
        return GroupSolver(self)

    def stabilizes(self, sp: SignedPauli) -> bool:
        """True iff the signed operator is a product of the tableau rows."""
        return self.solver().sign_of(sp.pauli) == sp.sign

    def measure_row(self, observable: Pauli) -> int | None:
        """Deterministic measurement outcome of a Pauli observable, or None.

        Returns 0/1 when the observable commutes with every row (outcome
        +1/-1 respectively); returns None when some row anticommutes, i.e.
        the outcome would be random.
        """
        return self.solver().measure(observable)


class GroupSolver:
    """GF(2) solver over a tableau snapshot, reusable for many queries.

    The row-space reduction is done once at construction; each query then
    costs one back-substitution plus a signed product of the selected rows.
    """

    def __init__(self, t: StabilizerTableau):
        self.n = t.n
        self.rows: list[tuple[int, int, int]] = []
        self.basis = gf2.RowBasis()
        for r in range(t.x.shape[0]):
            xb, zb = t._row_ints(r)
            self.rows.append((xb, zb, int(t.phase[r])))
            self.basis.add(xb | (zb << self.n))

    def _check(self, p: Pauli) -> None:
        if p.n != self.n:
            raise ValueError(f"operator acts on {p.n} qubits, tableau has {self.n}")

    def sign_of(self, p: Pauli) -> int | None:
        """External sign with which p appears in the row group, else None."""
        self._check(p)
        mask = self.basis.combination(p.x | (p.z << self.n))
        if mask is None:
            return None
        x = z = phase = 0
        idx = 0
        while mask:
            if mask & 1:
                rx, rz, rp = self.rows[idx]
                phase = (phase + rp + 2 * (z & rx).bit_count()) % 4
                x ^= rx
                z ^= rz
            mask >>= 1
            idx += 1
        y_count = (x & z).bit_count()
        return ((phase - y_count) % 4) // 2

    def measure(self, observable: Pauli) -> int | None:
        self._check(observable)
        for rx, rz, _ in self.rows:
            if ((observable.x & rz) ^ (observable.z & rx)).bit_count() & 1:
                return None
        sign = self.sign_of(observable)
        if sign is None:
            raise ValueError("observable commutes with all rows but is outside the group")
        return sign
