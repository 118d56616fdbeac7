"""Stochastic Pauli channels and the dense matrix oracle.

A stochastic Pauli channel is a sparse probability map over phase-free
Pauli strings; composition is probability convolution and conjugation by a
Clifford relabels the keys.  The dense side keeps explicit Kraus operators
and is used as an independent cross-check at <= 3 qubits.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .clifford import CliffordTableau
from .pauli import PauliString, enumerate_paulis

_ATOL = 1e-12

_PAULI_1Q = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def pauli_to_matrix(p: PauliString) -> np.ndarray:
    """Dense 2^n x 2^n matrix; qubit 0 is the least significant tensor factor.

    Built from the X^x Z^z normal form so the stored phase exponent applies
    exactly once (the Y letter's factor of i lives in phase_exp).
    """
    assert p.n_qubits <= 12
    m = np.array([[1]], dtype=complex)
    for q in range(p.n_qubits):
        xb, zb = (p.x_bits >> q) & 1, (p.z_bits >> q) & 1
        factor = _PAULI_1Q["X" if xb else "I"] @ _PAULI_1Q["Z" if zb else "I"]
        m = np.kron(factor, m)
    return (1j ** p.phase_exp) * m


@dataclass
class PauliChannel:
    """Sparse probability distribution over phase-free Pauli strings."""

    n_qubits: int
    probs: dict[PauliString, float] = field(default_factory=dict)

    def __post_init__(self):
        clean: dict[PauliString, float] = {}
        for p, w in self.probs.items():
            assert p.n_qubits == self.n_qubits
            assert w >= -_ATOL
            if w > _ATOL:
                key = p.phase_free()
                clean[key] = clean.get(key, 0.0) + w
        total = sum(clean.values())
        assert abs(total - 1.0) < 1e-9, f"probabilities sum to {total}"
        self.probs = clean

    @staticmethod
    def identity(n: int) -> "PauliChannel":
        return PauliChannel(n, {PauliString.identity(n): 1.0})

    @staticmethod
    def from_letter_probs(probs: dict[str, float]) -> "PauliChannel":
        some = next(iter(probs))
        return PauliChannel(len(some), {PauliString.from_letters(k): v
                                        for k, v in probs.items()})

    def prob(self, p: PauliString) -> float:
        return self.probs.get(p.phase_free(), 0.0)

    def fidelity(self) -> float:
        """Entanglement fidelity: the identity-component probability."""
        return self.prob(PauliString.identity(self.n_qubits))

    def infidelity(self) -> float:
        return 1.0 - self.fidelity()

    def compose(self, other: "PauliChannel") -> "PauliChannel":
        """self applied after other; probability convolution over the group."""
        assert self.n_qubits == other.n_qubits
        out: dict[PauliString, float] = {}
        for p, wp in self.probs.items():
            for q, wq in other.probs.items():
                key = (p * q).phase_free()
                out[key] = out.get(key, 0.0) + wp * wq
        return PauliChannel(self.n_qubits, out)

    def tensor(self, other: "PauliChannel") -> "PauliChannel":
        n = self.n_qubits + other.n_qubits
        out: dict[PauliString, float] = {}
        for p, wp in self.probs.items():
            for q, wq in other.probs.items():
                key = PauliString(n, p.x_bits | (q.x_bits << self.n_qubits),
                                  p.z_bits | (q.z_bits << self.n_qubits),
                                  p.phase_exp + q.phase_exp)
                out[key.phase_free()] = out.get(key.phase_free(), 0.0) + wp * wq
        return PauliChannel(n, out)

    def conjugate(self, tableau: CliffordTableau, backward: bool = False) -> "PauliChannel":
        """Channel C E(.) C^dagger; keys relabel, probabilities are unchanged."""
        conj = tableau.conjugate_backward if backward else tableau.conjugate_forward
        out: dict[PauliString, float] = {}
        for p, w in self.probs.items():
            key = conj(p).phase_free()
            out[key] = out.get(key, 0.0) + w
        return PauliChannel(self.n_qubits, out)

    # -- JSON round trip ------------------------------------------------

    def to_json(self) -> str:
        body = {p.letters(): w for p, w in sorted(
            self.probs.items(), key=lambda kv: (kv[0].z_bits, kv[0].x_bits))}
        return json.dumps({"n": self.n_qubits, "probs": body})

    @staticmethod
    def from_json(text: str) -> "PauliChannel":
        data = json.loads(text)
        probs = {PauliString.from_letters(k): v for k, v in data["probs"].items()}
        return PauliChannel(data["n"], probs)


def depolarizing(n: int, p: float) -> "PauliChannel":
    """Tensor power of the single-qubit depolarizing channel at rate p.

    Each qubit independently suffers X, Y or Z with probability p/3 each.
    Materializes all 4^n components, so guarded to small n; use the
    symmetric-channel engine for exact large-n statistics.
    """
    assert 0.0 <= p <= 1.0 and 1 <= n <= 8
    q = 1.0 - p
    probs: dict[PauliString, float] = {}
    for pauli in enumerate_paulis(n):
        w = pauli.weight()
        probs[pauli] = (q ** (n - w)) * ((p / 3.0) ** w)
    return PauliChannel(n, probs)


def biased_pauli_1q(p_x: float, p_y: float, p_z: float) -> PauliChannel:
    return PauliChannel.from_letter_probs(
        {"I": 1.0 - p_x - p_y - p_z, "X": p_x, "Y": p_y, "Z": p_z})


# -- dense oracle -------------------------------------------------------


@dataclass
class DenseChannel:
    """Explicit Kraus representation, for brute-force cross-checks."""

    n_qubits: int
    kraus: list[np.ndarray]

    def __post_init__(self):
        d = 2 ** self.n_qubits
        assert self.n_qubits <= 3, "dense oracle is limited to 3 qubits"
        acc = sum(k.conj().T @ k for k in self.kraus)
        assert np.allclose(acc, np.eye(d), atol=1e-9), "Kraus completeness fails"

    def apply(self, rho: np.ndarray) -> np.ndarray:
        return sum(k @ rho @ k.conj().T for k in self.kraus)

    def compose(self, other: "DenseChannel") -> "DenseChannel":
        """self applied after other."""
        assert self.n_qubits == other.n_qubits
        return DenseChannel(self.n_qubits,
                            [a @ b for a in self.kraus for b in other.kraus])


def dense_from_pauli(ch: PauliChannel) -> DenseChannel:
    kraus = [math.sqrt(w) * pauli_to_matrix(p) for p, w in ch.probs.items()]
    return DenseChannel(ch.n_qubits, kraus)


def pauli_probs_from_dense(apply_fn, n: int) -> dict[PauliString, float]:
    """Recover Pauli-component probabilities from any channel map.

    Uses the Walsh transform of the Pauli transfer matrix diagonal; exact for
    stochastic Pauli channels.
    """
    d = 2 ** n
    paulis = list(enumerate_paulis(n))
    diag = {}
    for p in paulis:
        m = pauli_to_matrix(p)
        diag[p] = np.real(np.trace(m @ apply_fn(m))) / d
    out = {}
    for q in paulis:
        acc = 0.0
        for p in paulis:
            sign = 1.0 if p.commutes(q) else -1.0
            acc += sign * diag[p]
        w = acc / (4 ** n)
        if w > 1e-13:
            out[q] = w
    return out


def channel_distance(a, b, n: int | None = None) -> float:
    """Max Frobenius distance of outputs over the Pauli input basis.

    Arguments may be PauliChannel, DenseChannel or anything with an
    ``apply(rho)`` method plus ``n_qubits``.
    """
    def as_apply(c):
        if isinstance(c, PauliChannel):
            return dense_from_pauli(c).apply, c.n_qubits
        return c.apply, getattr(c, "n_qubits", n)

    fa, na = as_apply(a)
    fb, nb = as_apply(b)
    n = na if na is not None else nb
    assert n is not None and n == (nb if nb is not None else n)
    worst = 0.0
    for p in enumerate_paulis(n):
        m = pauli_to_matrix(p)
        worst = max(worst, float(np.linalg.norm(fa(m) - fb(m))))
    return worst


def random_pauli_channel(n: int, rng, n_components: int | None = None) -> PauliChannel:
    """Random sparse stochastic Pauli channel with a dominant identity part."""
    paulis = list(enumerate_paulis(n))
    k = n_components or int(rng.integers(2, min(len(paulis), 8) + 1))
    idx = rng.choice(len(paulis), size=k, replace=False)
    weights = rng.random(k)
    weights /= weights.sum()
    probs: dict[PauliString, float] = {PauliString.identity(n): 0.5}
    for i, w in zip(idx, weights):
        key = paulis[int(i)]
        probs[key] = probs.get(key, 0.0) + 0.5 * float(w)
    return PauliChannel(n, probs)


def random_dense_channel(n: int, rng, n_kraus: int = 3) -> DenseChannel:
    """Random CPTP channel (possibly coherent) from a Haar-ish isometry."""
    d = 2 ** n
    g = rng.standard_normal((n_kraus * d, d)) + 1j * rng.standard_normal((n_kraus * d, d))
    q, _ = np.linalg.qr(g)
    return DenseChannel(n, [q[i * d:(i + 1) * d, :] for i in range(n_kraus)])
