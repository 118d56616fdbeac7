"""Pauli-frame Monte Carlo over compiled noisy circuits.

The circuit is compiled once: every fault-site outcome is propagated through
the remaining gates to the end, leaving a residual (x, z) word and a
measurement-flip word.  Faults compose linearly over GF(2), so a shot is a
categorical draw per atom, XOR folds, conditional-correction folds keyed on
realized flip bits, and a post-selection test.

Randomness comes from a counter-based Philox stream per run (key = seed);
uniforms are consumed in shot-major, atom-minor order, which makes results
independent of any parallel schedule above this function.
"""

from __future__ import annotations

from dataclasses import dataclass

import math

import numpy as np

from ..clifford import CliffordGate, apply_gate
from ..pauli import PauliString
from .circuit import ConditionalPauli, DenseFault, FaultSite, MeasureX, NoisyCircuit
from .kernels import sample_chunk


def _push_to_end(circ: NoisyCircuit, start: int, pauli: PauliString,
                 bit_index: dict[str, int]) -> tuple[int, int, int]:
    """Propagate a Pauli placed after element `start` to the end.

    Conditional corrections are not folded here (they are realized per
    shot); measurement folds record flip bits.
    """
    frame = pauli
    flips = 0
    for e in circ.elements[start + 1:]:
        if isinstance(e, CliffordGate):
            frame = apply_gate(e, frame)
        elif isinstance(e, MeasureX):
            if (frame.z_bits >> e.qubit) & 1:
                flips |= 1 << bit_index[e.bit]
            bit = 1 << e.qubit
            x, z = frame.x_bits, frame.z_bits
            nx = (x & ~bit) | (bit if z & bit else 0)
            nz = (z & ~bit) | (bit if x & bit else 0)
            frame = PauliString(frame.n_qubits, nx, nz, frame.phase_exp)
    return frame.x_bits, frame.z_bits, flips


@dataclass
class CompiledCircuit:
    offsets: np.ndarray   # int64, n_atoms + 1
    cum: np.ndarray       # float32 cumulative outcome bounds
    out_x: np.ndarray     # uint64 residual words per outcome
    out_z: np.ndarray
    out_f: np.ndarray
    cond_bits: np.ndarray
    cond_x: np.ndarray
    cond_z: np.ndarray
    cond_f: np.ndarray
    ps_mask: int
    sys_mask: int

    @property
    def n_atoms(self) -> int:
        return len(self.offsets) - 1


def compile_circuit(circ: NoisyCircuit) -> CompiledCircuit:
    circ.validate()
    nt = circ.n_total
    assert nt <= 64 and len(circ.measurement_bits()) <= 64
    bit_index = {b: i for i, b in enumerate(circ.measurement_bits())}
    offsets = [0]
    cum: list[float] = []
    out_x: list[int] = []
    out_z: list[int] = []
    out_f: list[int] = []
    conds: list[tuple[int, int, int, int]] = []
    for idx, e in enumerate(circ.elements):
        if isinstance(e, FaultSite):
            outcomes: list[list[tuple[float, PauliString]]] = []
            for q, p in e.rates:
                if p <= 0.0:
                    continue
                outcomes.append([(1.0 - p, PauliString.identity(nt))] +
                                [(p / 3.0, PauliString.single(nt, q, l))
                                 for l in ("X", "Y", "Z")])
            if e.channel is not None:
                embedded = []
                for pauli, w in sorted(e.channel.probs.items(),
                                       key=lambda kv: (kv[0].z_bits, kv[0].x_bits)):
                    x = z = 0
                    for i, q in enumerate(e.qubits):
                        x |= ((pauli.x_bits >> i) & 1) << q
                        z |= ((pauli.z_bits >> i) & 1) << q
                    embedded.append((w, PauliString(nt, x, z)))
                outcomes.append(embedded)
            for outs in outcomes:
                acc = 0.0
                for w, pauli in outs:
                    acc += w
                    cum.append(acc)
                    x, z, f = _push_to_end(circ, idx, pauli, bit_index)
                    out_x.append(x)
                    out_z.append(z)
                    out_f.append(f)
                offsets.append(len(cum))
        elif isinstance(e, DenseFault):
            raise ValueError("DenseFault requires the dense oracle path")
        elif isinstance(e, ConditionalPauli):
            x, z, f = _push_to_end(circ, idx, e.pauli, bit_index)
            conds.append((bit_index[e.bit], x, z, f))
    ps_mask = 0
    for b in circ.postselect_bits:
        ps_mask |= 1 << bit_index[b]
    sys_mask = (1 << circ.n_system) - 1
    u64 = np.uint64
    return CompiledCircuit(
        offsets=np.asarray(offsets, dtype=np.int64),
        cum=np.asarray(cum, dtype=np.float32),
        out_x=np.asarray(out_x, dtype=u64),
        out_z=np.asarray(out_z, dtype=u64),
        out_f=np.asarray(out_f, dtype=u64),
        cond_bits=np.asarray([c[0] for c in conds], dtype=u64),
        cond_x=np.asarray([c[1] for c in conds], dtype=u64),
        cond_z=np.asarray([c[2] for c in conds], dtype=u64),
        cond_f=np.asarray([c[3] for c in conds], dtype=u64),
        ps_mask=ps_mask,
        sys_mask=sys_mask,
    )


@dataclass
class SimResult:
    shots: int
    accepted: int
    identity_residual: int
    seed: int

    def __post_init__(self):
        assert 0 <= self.identity_residual <= self.accepted <= self.shots

    @property
    def fidelity_estimate(self) -> float:
        return self.identity_residual / self.accepted if self.accepted else 0.0

    @property
    def postselect_rate(self) -> float:
        return self.accepted / self.shots

    @property
    def fidelity_stderr(self) -> float:
        if not self.accepted:
            return 0.0
        f = self.fidelity_estimate
        return math.sqrt(f * (1.0 - f) / self.accepted)

    @property
    def postselect_stderr(self) -> float:
        r = self.postselect_rate
        return math.sqrt(r * (1.0 - r) / self.shots)


def monte_carlo(circ: NoisyCircuit, shots: int, seed: int) -> SimResult:
    """Sample the compiled circuit; deterministic given (circ, shots, seed)."""
    assert shots >= 1
    comp = compile_circuit(circ)
    if comp.n_atoms == 0:
        ident = shots  # no faults: every shot accepted with identity residual
        return SimResult(shots, shots, ident, seed)
    rng = np.random.Generator(np.random.Philox(key=seed))
    chunk = max(1024, min(shots, (1 << 22) // comp.n_atoms))
    accepted = 0
    identity = 0
    done = 0
    while done < shots:
        m = min(chunk, shots - done)
        u = rng.random((m, comp.n_atoms), dtype=np.float32)
        a, i = sample_chunk(u, comp.offsets, comp.cum, comp.out_x, comp.out_z,
                            comp.out_f, comp.cond_bits, comp.cond_x,
                            comp.cond_z, comp.cond_f, np.uint64(comp.ps_mask),
                            np.uint64(comp.sys_mask))
        accepted += a
        identity += i
        done += m
    return SimResult(shots, accepted, identity, seed)
