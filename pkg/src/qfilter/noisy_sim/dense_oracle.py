"""Brute-force superoperator evolution of noisy circuits (<= 3 qubits).

Every measurement splits the state into explicit outcome branches, so the
result is exact: per-branch probabilities and the post-selected output
channel on the system register.  This is the independent cross-check for
both the channel-level filter algebra and the Monte Carlo sampler.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..channels import pauli_probs_from_dense, pauli_to_matrix
from ..clifford import CliffordGate
from ..pauli import PauliString
from .circuit import (ConditionalPauli, DenseFault, FaultSite, MeasureX,
                      NoisyCircuit, Unitary1Q)

_H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
_S = np.diag([1, 1j]).astype(complex)
_P1 = {l: pauli_to_matrix(PauliString.single(1, 0, l)) for l in "IXYZ"}


def _embed_1q(m: np.ndarray, q: int, n: int) -> np.ndarray:
    out = np.array([[1]], dtype=complex)
    for i in range(n):
        out = np.kron(m if i == q else np.eye(2), out)
    return out


def _gate_matrix(g: CliffordGate, n: int) -> np.ndarray:
    if g.kind == "H":
        return _embed_1q(_H, g.qubits[0], n)
    if g.kind == "S":
        return _embed_1q(_S, g.qubits[0], n)
    if g.kind in ("X", "Y", "Z"):
        return _embed_1q(_P1[g.kind], g.qubits[0], n)
    c, t = g.qubits
    d = 2 ** n
    u = np.zeros((d, d), dtype=complex)
    p = _embed_1q(_P1[g.kind[1]], t, n)
    for b in range(d):
        if (b >> c) & 1:
            u[:, b] = p[:, b]
        else:
            u[b, b] = 1.0
    return u


@dataclass
class _Branch:
    bits: dict[str, int]
    rho: np.ndarray  # unnormalized full-register density matrix


@dataclass
class DenseRunResult:
    n_system: int
    branches: list[tuple[dict[str, int], float]]
    acceptance_prob: float
    superop: np.ndarray  # post-selected, normalized; shape (d, d, d, d)

    @property
    def n_qubits(self) -> int:
        return self.n_system

    def apply(self, rho: np.ndarray) -> np.ndarray:
        return np.einsum("ijkl,kl->ij", self.superop, rho)

    def pauli_probs(self) -> dict[PauliString, float]:
        return pauli_probs_from_dense(self.apply, self.n_system)


def _evolve(circ: NoisyCircuit, rho0: np.ndarray) -> list[_Branch]:
    nt = circ.n_total
    d = 2 ** nt
    branches = [_Branch({}, rho0)]
    for e in circ.elements:
        if isinstance(e, CliffordGate):
            u = _gate_matrix(e, nt)
            for b in branches:
                b.rho = u @ b.rho @ u.conj().T
        elif isinstance(e, Unitary1Q):
            u = _embed_1q(np.asarray(e.matrix, dtype=complex), e.qubit, nt)
            for b in branches:
                b.rho = u @ b.rho @ u.conj().T
        elif isinstance(e, FaultSite):
            kraus_sets = []
            for q, p in e.rates:
                if p <= 0.0:
                    continue
                kraus_sets.append([np.sqrt(1 - p) * _embed_1q(_P1["I"], q, nt)] +
                                  [np.sqrt(p / 3) * _embed_1q(_P1[l], q, nt)
                                   for l in "XYZ"])
            if e.channel is not None:
                ks = []
                for pauli, w in e.channel.probs.items():
                    m = np.array([[1]], dtype=complex)
                    letters = {q: pauli.letter(i) for i, q in enumerate(e.qubits)}
                    for i in range(nt):
                        m = np.kron(_P1[letters.get(i, "I")], m)
                    ks.append(np.sqrt(w) * m)
                kraus_sets.append(ks)
            for ks in kraus_sets:
                for b in branches:
                    b.rho = sum(k @ b.rho @ k.conj().T for k in ks)
        elif isinstance(e, DenseFault):
            ks = [np.asarray(k, dtype=complex) for k in e.kraus]
            assert len(e.qubits) == 1, "dense faults are single-qubit here"
            ks = [_embed_1q(k, e.qubits[0], nt) for k in ks]
            for b in branches:
                b.rho = sum(k @ b.rho @ k.conj().T for k in ks)
        elif isinstance(e, MeasureX):
            x = _embed_1q(_P1["X"], e.qubit, nt)
            eye = np.eye(d)
            new = []
            for b in branches:
                for outcome, proj in ((0, (eye + x) / 2), (1, (eye - x) / 2)):
                    new.append(_Branch({**b.bits, e.bit: outcome},
                                       proj @ b.rho @ proj))
            branches = new
        elif isinstance(e, ConditionalPauli):
            m = pauli_to_matrix(e.pauli)
            for b in branches:
                if b.bits.get(e.bit, 0):
                    b.rho = m @ b.rho @ m.conj().T
    return branches


def dense_oracle_run(circ: NoisyCircuit) -> DenseRunResult:
    """Exact evolution with ancillae prepared in |0>; system traced back out.

    The post-selected channel is normalized by the acceptance probability;
    branch probabilities are quoted for the maximally mixed system input.
    """
    circ.validate()
    nt, ns = circ.n_total, circ.n_system
    assert nt <= 3, "dense oracle is limited to 3 total qubits"
    ds, da = 2 ** ns, 2 ** circ.n_ancilla
    anc = np.zeros((da, da), dtype=complex)
    anc[0, 0] = 1.0
    superop = np.zeros((ds, ds, ds, ds), dtype=complex)
    branch_acc: dict[tuple, float] = {}
    accept = 0.0
    for i in range(ds):
        for j in range(ds):
            unit = np.zeros((ds, ds), dtype=complex)
            unit[i, j] = 1.0
            rho0 = np.kron(anc, unit)
            for b in _evolve(circ, rho0):
                # Partial trace over ancillae (high-order tensor factors).
                full = b.rho.reshape(da, ds, da, ds)
                out = np.einsum("aiaj->ij", full)
                key = tuple(sorted(b.bits.items()))
                if i == j:
                    branch_acc[key] = branch_acc.get(key, 0.0) + np.real(np.trace(out)) / ds
                if all(b.bits[p] == 0 for p in circ.postselect_bits):
                    superop[:, :, i, j] += out
                    if i == j:
                        accept += np.real(np.trace(out)) / ds
    assert accept > 1e-12, "post-selection annihilates the channel"
    return DenseRunResult(ns, [(dict(k), v) for k, v in sorted(branch_acc.items())],
                          accept, superop / accept)
