"""Noisy filter circuits: elements, builders and fault propagation.

Qubits 0..n_system-1 are the data register; ancillae follow.  Every
two-qubit gate is followed by fault sites applying local depolarizing noise
on its control and target.  Measurements are Hadamard-basis (the closing
Hadamard of the filter is folded into MeasureX), so an outcome flips exactly
when the accumulated frame anticommutes with X on the measured ancilla.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..channels import PauliChannel
from ..clifford import CliffordCircuit, CliffordGate, CliffordTableau, apply_gate
from ..pauli import PauliString


@dataclass(frozen=True)
class FaultSite:
    """Stochastic Pauli fault location.

    Either per-qubit depolarizing rates or an explicit channel embedded on
    the listed qubits.
    """

    rates: tuple[tuple[int, float], ...] = ()
    channel: PauliChannel | None = None
    qubits: tuple[int, ...] = ()

    @staticmethod
    def depolarizing(rates: dict[int, float]) -> "FaultSite":
        for p in rates.values():
            assert 0.0 <= p <= 1.0
        return FaultSite(rates=tuple(sorted(rates.items())))

    @staticmethod
    def from_channel(channel: PauliChannel, qubits: tuple[int, ...]) -> "FaultSite":
        assert channel.n_qubits == len(qubits)
        return FaultSite(channel=channel, qubits=qubits)


@dataclass(frozen=True)
class DenseFault:
    """Arbitrary Kraus noise; supported by the dense oracle only."""

    qubits: tuple[int, ...]
    kraus: tuple

    @staticmethod
    def make(qubits: tuple[int, ...], kraus: list[np.ndarray]) -> "DenseFault":
        return DenseFault(qubits, tuple(np.asarray(k, dtype=complex) for k in kraus))


@dataclass(frozen=True)
class MeasureX:
    qubit: int
    bit: str


@dataclass(frozen=True)
class ConditionalPauli:
    bit: str
    pauli: PauliString  # full register width


@dataclass(frozen=True)
class Unitary1Q:
    """Non-Clifford single-qubit gate; dense oracle only (e.g. a T gate)."""

    qubit: int
    matrix: tuple


def unitary_1q(qubit: int, matrix: np.ndarray) -> Unitary1Q:
    m = np.asarray(matrix, dtype=complex)
    return Unitary1Q(qubit, tuple(map(tuple, m)))


@dataclass
class NoisyCircuit:
    n_system: int
    n_ancilla: int
    elements: list = field(default_factory=list)
    postselect_bits: list[str] = field(default_factory=list)

    @property
    def n_total(self) -> int:
        return self.n_system + self.n_ancilla

    def measurement_bits(self) -> list[str]:
        return [e.bit for e in self.elements if isinstance(e, MeasureX)]

    def validate(self):
        seen: set[str] = set()
        for e in self.elements:
            if isinstance(e, CliffordGate):
                assert all(0 <= q < self.n_total for q in e.qubits)
            elif isinstance(e, MeasureX):
                assert 0 <= e.qubit < self.n_total and e.bit not in seen
                seen.add(e.bit)
            elif isinstance(e, ConditionalPauli):
                assert e.bit in seen and e.pauli.n_qubits == self.n_total
        assert all(b in seen for b in self.postselect_bits)


def propagate_fault(circ: NoisyCircuit, site_index: int,
                    fault: PauliString) -> tuple[PauliString, dict[str, int]]:
    """Push a fault at one site forward to the end of the circuit.

    Returns the residual frame (Hadamard-basis measurements fold the basis
    change into the measured ancilla's letters) and the realized outcome
    flips; conditional corrections fold into the frame per those flips.
    """
    assert 0 <= site_index < len(circ.elements)
    assert isinstance(circ.elements[site_index], (FaultSite, DenseFault))
    assert fault.n_qubits == circ.n_total
    frame = fault
    flips: dict[str, int] = {}
    for e in circ.elements[site_index + 1:]:
        if isinstance(e, CliffordGate):
            frame = apply_gate(e, frame)
        elif isinstance(e, MeasureX):
            flip = (frame.z_bits >> e.qubit) & 1
            flips[e.bit] = flip
            # Fold the implicit Hadamard: swap X/Z letters on the ancilla.
            bit = 1 << e.qubit
            x, z = frame.x_bits, frame.z_bits
            nx = (x & ~bit) | (bit if z & bit else 0)
            nz = (z & ~bit) | (bit if x & bit else 0)
            frame = PauliString(frame.n_qubits, nx, nz, frame.phase_exp)
        elif isinstance(e, ConditionalPauli):
            if flips.get(e.bit, 0):
                frame = frame * e.pauli
    return frame.phase_free(), flips


# -- builders ------------------------------------------------------------


def build_probe_filter_circuit(probe: PauliString, pc: float = 0.0,
                               pt: float = 0.0,
                               channel: PauliChannel | None = None,
                               correction: PauliString | None = None,
                               bit: str = "m") -> NoisyCircuit:
    """Single commutation filter probing one Pauli on the system register.

    Controlled probe letters open and close around the channel site; without
    a conditional correction the accepting outcome 0 is post-selected.
    """
    n = probe.n_qubits
    a = n
    circ = NoisyCircuit(n_system=n, n_ancilla=1)
    circ.elements.append(CliffordGate("H", (a,)))

    def half():
        for q in range(n):
            letter = probe.letter(q)
            if letter == "I":
                continue
            circ.elements.append(CliffordGate("C" + letter, (a, q)))
            if pc > 0 or pt > 0:
                circ.elements.append(FaultSite.depolarizing({a: pc, q: pt}))

    half()
    if channel is not None:
        circ.elements.append(FaultSite.from_channel(channel, tuple(range(n))))
    half()
    circ.elements.append(MeasureX(a, bit))
    if correction is not None:
        pad = PauliString(n + 1, correction.x_bits, correction.z_bits,
                          correction.phase_exp)
        circ.elements.append(ConditionalPauli(bit, pad))
    else:
        circ.postselect_bits.append(bit)
    circ.validate()
    return circ


def build_single_pauli_filter(kind: str, pc: float = 0.0, pt: float = 0.0,
                              channel: PauliChannel | None = None,
                              middle: list | None = None):
    """One-qubit corrected filter with named fault sites.

    kind "Z" probes Z and corrects with X; kind "X" probes X and corrects
    with Z.  Sites A/C sit on the ancilla after the opening/closing gate,
    B/D on the system.  Returns (circuit, site name -> element index).
    """
    assert kind in ("Z", "X")
    corr = "X" if kind == "Z" else "Z"
    circ = NoisyCircuit(n_system=1, n_ancilla=1)
    sites: dict[str, int] = {}

    def fault(name: str, qubit: int, rate: float):
        sites[name] = len(circ.elements)
        circ.elements.append(FaultSite.depolarizing({qubit: rate}))

    circ.elements.append(CliffordGate("H", (1,)))
    circ.elements.append(CliffordGate("C" + kind, (1, 0)))
    fault("A", 1, pc)
    fault("B", 0, pt)
    if channel is not None:
        circ.elements.append(FaultSite.from_channel(channel, (0,)))
    for e in middle or []:
        circ.elements.append(e)
    circ.elements.append(CliffordGate("C" + kind, (1, 0)))
    fault("C", 1, pc)
    fault("D", 0, pt)
    circ.elements.append(MeasureX(1, "m"))
    circ.elements.append(ConditionalPauli("m", PauliString.single(2, 0, corr)))
    circ.validate()
    return circ, sites


def build_correction_filter_circuit(n: int, pc: float, pt: float,
                                    channel: PauliChannel | None = None,
                                    channel_rate: float | None = None) -> NoisyCircuit:
    """Per-qubit X- and Z-probe filters with conditional corrections.

    Layout per qubit: controlled-X from its X-filter ancilla, controlled-Z
    from its Z-filter ancilla, the target channel, then the mirrored closing
    gates, measurements and corrections.  With noiseless gates every
    trajectory ends with an identity residual, so nothing is post-selected.
    """
    assert n >= 1
    circ = NoisyCircuit(n_system=n, n_ancilla=2 * n)
    ax = [n + 2 * i for i in range(n)]       # X-filter ancillae
    az = [n + 2 * i + 1 for i in range(n)]   # Z-filter ancillae
    nt = circ.n_total

    def noisy(kind: str, control: int, target: int):
        circ.elements.append(CliffordGate(kind, (control, target)))
        if pc > 0 or pt > 0:
            circ.elements.append(FaultSite.depolarizing({control: pc, target: pt}))

    for i in range(n):
        circ.elements.append(CliffordGate("H", (ax[i],)))
        circ.elements.append(CliffordGate("H", (az[i],)))
        noisy("CX", ax[i], i)
        noisy("CZ", az[i], i)
    if channel is not None:
        assert channel.n_qubits == n
        circ.elements.append(FaultSite.from_channel(channel, tuple(range(n))))
    elif channel_rate:
        circ.elements.append(FaultSite.depolarizing(
            {q: channel_rate for q in range(n)}))
    for i in range(n):
        noisy("CZ", az[i], i)
        noisy("CX", ax[i], i)
        circ.elements.append(MeasureX(az[i], f"z{i}"))
        circ.elements.append(MeasureX(ax[i], f"x{i}"))
        circ.elements.append(ConditionalPauli(f"z{i}", PauliString.single(nt, i, "X")))
        circ.elements.append(ConditionalPauli(f"x{i}", PauliString.single(nt, i, "Z")))
    circ.validate()
    return circ


def build_ae_filter_circuit(target: CliffordCircuit, pc_filter: float,
                            pt_filter: float, pc_circuit: float,
                            pt_circuit: float,
                            channel: PauliChannel | None = None) -> NoisyCircuit:
    """Two-ancilla filter wrapped around a Clifford circuit.

    Ancilla n controls the backward-propagated Z^n block before the circuit
    and the plain Z^n block after; ancilla n+1 does the same for X^n.
    Controlled multi-qubit Paulis decompose into controlled single-qubit
    Paulis in ascending qubit order, each with its own fault site.  Both
    accepting outcomes are post-selected.
    """
    n = target.n_qubits
    a_z, a_x = n, n + 1
    tab = CliffordTableau.from_circuit(target)
    back_z = tab.conjugate_backward(PauliString.from_letters("Z" * n))
    back_x = tab.conjugate_backward(PauliString.from_letters("X" * n))
    circ = NoisyCircuit(n_system=n, n_ancilla=2)

    def controlled_block(pauli: PauliString, anc: int):
        for q in range(n):
            letter = pauli.letter(q)
            if letter == "I":
                continue
            circ.elements.append(CliffordGate("C" + letter, (anc, q)))
            if pc_filter > 0 or pt_filter > 0:
                circ.elements.append(
                    FaultSite.depolarizing({anc: pc_filter, q: pt_filter}))

    circ.elements.append(CliffordGate("H", (a_z,)))
    circ.elements.append(CliffordGate("H", (a_x,)))
    controlled_block(back_z, a_z)
    controlled_block(back_x, a_x)
    for g in target.gates:
        circ.elements.append(g)
        if len(g.qubits) == 2 and (pc_circuit > 0 or pt_circuit > 0):
            circ.elements.append(FaultSite.depolarizing(
                {g.qubits[0]: pc_circuit, g.qubits[1]: pt_circuit}))
    if channel is not None:
        assert channel.n_qubits == n
        circ.elements.append(FaultSite.from_channel(channel, tuple(range(n))))
    controlled_block(PauliString.from_letters("X" * n), a_x)
    controlled_block(PauliString.from_letters("Z" * n), a_z)
    circ.elements.append(MeasureX(a_z, "m_z"))
    circ.elements.append(MeasureX(a_x, "m_x"))
    circ.postselect_bits = ["m_z", "m_x"]
    circ.validate()
    return circ


def build_plain_circuit(target: CliffordCircuit, pc: float, pt: float) -> NoisyCircuit:
    """The unfiltered noisy circuit, for original-fidelity baselines."""
    circ = NoisyCircuit(n_system=target.n_qubits, n_ancilla=0)
    for g in target.gates:
        circ.elements.append(g)
        if len(g.qubits) == 2 and (pc > 0 or pt > 0):
            circ.elements.append(FaultSite.depolarizing(
                {g.qubits[0]: pc, g.qubits[1]: pt}))
    circ.validate()
    return circ
