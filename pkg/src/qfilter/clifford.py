"""Clifford gates, circuits and conjugation tableaux.

Gates act on Paulis by exact conjugation, P -> G P G^dagger, including
phases.  A tableau caches the images of every X_j and Z_j generator in both
directions at construction time, so conjugating an arbitrary Pauli is a
product of cached generator images.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .pauli import PauliString

GATE_KINDS_1Q = ("H", "S", "X", "Y", "Z")
GATE_KINDS_2Q = ("CX", "CZ", "CY")


@dataclass(frozen=True)
class CliffordGate:
    kind: str
    qubits: tuple[int, ...]

    def __post_init__(self):
        if self.kind in GATE_KINDS_1Q:
            assert len(self.qubits) == 1
        else:
            assert self.kind in GATE_KINDS_2Q and len(self.qubits) == 2
            assert self.qubits[0] != self.qubits[1]


# Generator images (x image, z image) on the gate's own qubits, as text.
# Two-qubit entries list images of X_c, Z_c, X_t, Z_t in that order.
_GATE_IMAGES = {
    "H": ("Z", "X"),
    "S": ("+iXZ", "Z"),  # S X S^dagger = Y
    "X": ("X", "-Z"),
    "Y": ("-X", "-Z"),
    "Z": ("-X", "Z"),
    "CX": ("XX", "ZI", "IX", "ZZ"),
    "CZ": ("XZ", "ZI", "ZX", "IZ"),
    "CY": ("+iXXZ", "ZI", "ZX", "ZZ"),  # X_c -> X_c Y_t
}

# Inverse gates within the same gate set; S^-1 = S Z.
_GATE_INVERSE = {
    "H": ("H",), "X": ("X",), "Y": ("Y",), "Z": ("Z",),
    "CX": ("CX",), "CZ": ("CZ",), "CY": ("CY",),
    "S": ("Z", "S"),
}


def _embed(p: PauliString, n: int, qubits: tuple[int, ...]) -> PauliString:
    """Place a small Pauli onto the given qubits of an n-qubit register."""
    x = z = 0
    for i, q in enumerate(qubits):
        x |= ((p.x_bits >> i) & 1) << q
        z |= ((p.z_bits >> i) & 1) << q
    return PauliString(n, x, z, p.phase_exp)


def apply_gate(gate: CliffordGate, p: PauliString) -> PauliString:
    """Forward conjugation G P G^dagger with exact phase."""
    images = _GATE_IMAGES[gate.kind]
    n = p.n_qubits
    # Clear the gate's qubits from p, then multiply the conjugated factors
    # back in.  Per-qubit blocks X^x Z^z on distinct qubits commute.
    gate_mask = 0
    for q in gate.qubits:
        gate_mask |= 1 << q
    out = PauliString(n, p.x_bits & ~gate_mask, p.z_bits & ~gate_mask, p.phase_exp)
    for i, q in enumerate(gate.qubits):
        x_img = _embed(PauliString.from_text(images[2 * i]), n, gate.qubits)
        z_img = _embed(PauliString.from_text(images[2 * i + 1]), n, gate.qubits)
        if (p.x_bits >> q) & 1:
            out = out * x_img
        if (p.z_bits >> q) & 1:
            out = out * z_img
    return out


def apply_gate_inverse(gate: CliffordGate, p: PauliString) -> PauliString:
    """Backward conjugation G^dagger P G."""
    for kind in _GATE_INVERSE[gate.kind]:
        p = apply_gate(CliffordGate(kind, gate.qubits), p)
    return p


@dataclass
class CliffordCircuit:
    """Ordered list of gates on a fixed-width register."""

    n_qubits: int
    gates: list[CliffordGate] = field(default_factory=list)

    def append(self, kind: str, *qubits: int) -> "CliffordCircuit":
        for q in qubits:
            assert 0 <= q < self.n_qubits
        self.gates.append(CliffordGate(kind, tuple(qubits)))
        return self

    # -- text format: one gate per line, e.g. "CX 0 1" -----------------

    def to_text(self) -> str:
        return "\n".join(f"{g.kind} {' '.join(str(q) for q in g.qubits)}"
                         for g in self.gates)

    @staticmethod
    def from_text(text: str, n_qubits: int) -> "CliffordCircuit":
        circ = CliffordCircuit(n_qubits)
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            circ.append(parts[0], *(int(t) for t in parts[1:]))
        return circ

    def inverse_gates(self) -> list[CliffordGate]:
        out: list[CliffordGate] = []
        for g in reversed(self.gates):
            out.extend(CliffordGate(k, g.qubits) for k in _GATE_INVERSE[g.kind])
        return out


def brickwork_circuit(n_qubits: int, depth: int) -> CliffordCircuit:
    """Alternating-layer CNOT circuit.

    Odd layers (1st, 3rd, ...) pair qubits (0,1), (2,3), ...; even layers
    pair (1,2), (3,4), ...  Control is always the lower index.
    """
    assert n_qubits >= 2 and depth >= 1
    circ = CliffordCircuit(n_qubits)
    for layer in range(depth):
        start = layer % 2
        for a in range(start, n_qubits - 1, 2):
            circ.append("CX", a, a + 1)
    return circ


class CliffordTableau:
    """Conjugation table for a Clifford unitary C.

    `image_x[j]` / `image_z[j]` are C X_j C^dagger and C Z_j C^dagger; the
    backward images C^dagger X_j C etc. are cached at construction so both
    directions cost one generator-image product.
    """

    def __init__(self, n_qubits: int,
                 image_x: list[PauliString], image_z: list[PauliString],
                 inv_image_x: list[PauliString], inv_image_z: list[PauliString]):
        self.n_qubits = n_qubits
        self.image_x = image_x
        self.image_z = image_z
        self.inv_image_x = inv_image_x
        self.inv_image_z = inv_image_z

    @staticmethod
    def identity(n: int) -> "CliffordTableau":
        xs = [PauliString.single(n, q, "X") for q in range(n)]
        zs = [PauliString.single(n, q, "Z") for q in range(n)]
        return CliffordTableau(n, list(xs), list(zs), list(xs), list(zs))

    @staticmethod
    def from_circuit(circ: CliffordCircuit) -> "CliffordTableau":
        n = circ.n_qubits
        fwd_x = [PauliString.single(n, q, "X") for q in range(n)]
        fwd_z = [PauliString.single(n, q, "Z") for q in range(n)]
        for g in circ.gates:
            fwd_x = [apply_gate(g, p) for p in fwd_x]
            fwd_z = [apply_gate(g, p) for p in fwd_z]
        inv_x = [PauliString.single(n, q, "X") for q in range(n)]
        inv_z = [PauliString.single(n, q, "Z") for q in range(n)]
        for g in circ.inverse_gates():
            inv_x = [apply_gate(g, p) for p in inv_x]
            inv_z = [apply_gate(g, p) for p in inv_z]
        return CliffordTableau(n, fwd_x, fwd_z, inv_x, inv_z)

    def _conjugate(self, p: PauliString, img_x: list[PauliString],
                   img_z: list[PauliString]) -> PauliString:
        out = PauliString(self.n_qubits, 0, 0, p.phase_exp)
        for q in range(self.n_qubits):
            if (p.x_bits >> q) & 1:
                out = out * img_x[q]
            if (p.z_bits >> q) & 1:
                out = out * img_z[q]
        return out

    def conjugate_forward(self, p: PauliString) -> PauliString:
        """C P C^dagger."""
        return self._conjugate(p, self.image_x, self.image_z)

    def conjugate_backward(self, p: PauliString) -> PauliString:
        """C^dagger P C."""
        return self._conjugate(p, self.inv_image_x, self.inv_image_z)

    def compose(self, other: "CliffordTableau") -> "CliffordTableau":
        """Tableau of self applied after other (self o other)."""
        assert self.n_qubits == other.n_qubits
        fwd_x = [self.conjugate_forward(p) for p in other.image_x]
        fwd_z = [self.conjugate_forward(p) for p in other.image_z]
        inv_x = [other.conjugate_backward(p) for p in self.inv_image_x]
        inv_z = [other.conjugate_backward(p) for p in self.inv_image_z]
        return CliffordTableau(self.n_qubits, fwd_x, fwd_z, inv_x, inv_z)

    def inverse(self) -> "CliffordTableau":
        return CliffordTableau(self.n_qubits, list(self.inv_image_x),
                               list(self.inv_image_z), list(self.image_x),
                               list(self.image_z))


def random_clifford_circuit(n_qubits: int, n_gates: int, rng) -> CliffordCircuit:
    """Random circuit over the gate library; rng is a numpy Generator."""
    circ = CliffordCircuit(n_qubits)
    kinds_1q = list(GATE_KINDS_1Q)
    for _ in range(n_gates):
        if n_qubits >= 2 and rng.random() < 0.5:
            a, b = rng.choice(n_qubits, size=2, replace=False)
            circ.append(("CX", "CZ")[rng.integers(2)], int(a), int(b))
        else:
            circ.append(kinds_1q[rng.integers(len(kinds_1q))], int(rng.integers(n_qubits)))
    return circ
