"""Filter superchannels acting on stochastic Pauli channels.

All transformations here are exact channel-level algebra.  A commutation
filter with probe P splits a Pauli channel into the branch that commutes
with P (kept, renormalized) and the branch that anticommutes; corrections
relabel the anticommuting branch back onto the identity.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .channels import PauliChannel, pauli_to_matrix
from .clifford import CliffordTableau
from .pauli import PauliString

_ATOL = 1e-12


@dataclass
class FilterOutcome:
    """One measurement branch: its probability and the renormalized channel."""

    probability: float
    channel: PauliChannel | None


def commutation_filter(ch: PauliChannel, probe: PauliString,
                       branch: int = 0) -> FilterOutcome:
    """Keep the components of ch that (anti)commute with the probe.

    branch 0 keeps commuting components; branch 1 the anticommuting ones.
    """
    assert ch.n_qubits == probe.n_qubits and branch in (0, 1)
    keep = {p: w for p, w in ch.probs.items()
            if p.commutes(probe) == (branch == 0)}
    total = sum(keep.values())
    if total <= _ATOL:
        return FilterOutcome(0.0, None)
    scaled = {p: w / total for p, w in keep.items()}
    return FilterOutcome(total, PauliChannel(ch.n_qubits, scaled))


def successive_filtration(ch: PauliChannel, probes: Sequence[PauliString],
                          branches: Sequence[int] | None = None) -> FilterOutcome:
    """Apply commutation filters in sequence along one branch path."""
    branches = branches if branches is not None else [0] * len(probes)
    assert len(branches) == len(probes)
    prob = 1.0
    for probe, b in zip(probes, branches):
        out = commutation_filter(ch, probe, b)
        prob *= out.probability
        if out.channel is None:
            return FilterOutcome(0.0, None)
        ch = out.channel
    return FilterOutcome(prob, ch)


def channel_correction(ch: PauliChannel) -> tuple[PauliChannel, dict[PauliString, float]]:
    """Deterministic per-qubit Z-then-X filtering with Pauli feedback.

    Each qubit passes an X-probe filter and a Z-probe filter; the
    anticommuting branch of each is relabeled by the conditional correction
    (X for the Z-syndrome, Z for the X-syndrome).  The output channel is
    exactly the identity and the syndrome labels recover the input
    distribution.
    """
    n = ch.n_qubits
    syndromes: dict[PauliString, float] = {}
    out: dict[PauliString, float] = {}
    branches = [(PauliChannel(n, dict(ch.probs)), 1.0, PauliString.identity(n))]
    for q in range(n):
        probe_z = PauliString.single(n, q, "Z")
        probe_x = PauliString.single(n, q, "X")
        corr_for = {probe_z: PauliString.single(n, q, "X"),
                    probe_x: PauliString.single(n, q, "Z")}
        for probe in (probe_z, probe_x):
            new_branches = []
            for cur, w, label in branches:
                for b in (0, 1):
                    o = commutation_filter(cur, probe, b)
                    if o.channel is None:
                        continue
                    fixed = o.channel
                    new_label = label
                    if b == 1:
                        corr = corr_for[probe]
                        fixed = PauliChannel(n, {(corr * p).phase_free(): v
                                                 for p, v in fixed.probs.items()})
                        new_label = (label * corr.phase_free()).phase_free()
                    new_branches.append((fixed, w * o.probability, new_label))
            branches = new_branches
    for cur, w, label in branches:
        syndromes[label] = syndromes.get(label, 0.0) + w
        for p, v in cur.probs.items():
            out[p] = out.get(p, 0.0) + w * v
    return PauliChannel(n, out), syndromes


def correction_superkraus_apply(op: np.ndarray) -> dict[tuple[int, int], np.ndarray]:
    """Single-qubit corrected-filter super-Kraus maps applied to a 2x2 operator.

    Keys are syndrome pairs (u0, u1) from the X- and Z-probe filters; the
    composed map sends the Pauli labeled by the syndrome to the identity and
    annihilates the other three.
    """
    i2 = np.eye(2, dtype=complex)
    x = pauli_to_matrix(PauliString.single(1, 0, "X"))
    z = pauli_to_matrix(PauliString.single(1, 0, "Z"))

    def f_z(e, u):
        if u == 0:
            return (e + z @ e @ z) / 2.0
        return x @ (e - z @ e @ z) / 2.0

    def f_x(e, u):
        if u == 0:
            return (e + x @ e @ x) / 2.0
        return z @ (e - x @ e @ x) / 2.0

    return {(u0, u1): f_x(f_z(op, u1), u0) for u0 in (0, 1) for u1 in (0, 1)}


@dataclass
class GeneralFilterSpec:
    """Prepared superposition of conjugation pairs (P_i, Q_i).

    On the all-zero ancilla outcome the filter maps each Kraus operator E to
    sum_i w_i Q_i E P_i.  An optional unitary prepare matrix V (columns are
    ancilla measurement states) activates the remaining outcome branches with
    coefficients alpha_ij = v_i0 * conj(v_ij); column 0 must reproduce the
    weights, v_i0 = sqrt(w_i).
    """

    weights: list[float]
    pairs: list[tuple[PauliString, PauliString]]
    prepare: np.ndarray | None = None

    def __post_init__(self):
        assert len(self.weights) == len(self.pairs) > 0
        assert abs(sum(self.weights) - 1.0) < 1e-9
        if self.prepare is not None:
            v = np.asarray(self.prepare, dtype=complex)
            assert v.shape == (len(self.weights), len(self.weights))
            assert np.allclose(v.conj().T @ v, np.eye(len(self.weights)), atol=1e-9)
            assert np.allclose(v[:, 0], np.sqrt(np.asarray(self.weights)), atol=1e-9)
            self.prepare = v


def _conjugation_scalar(noise: PauliString, p: PauliString, q: PauliString) -> complex:
    """s with Q N P = s N, or None when the letters change."""
    m = q * noise * p
    if (m.x_bits, m.z_bits) != (noise.x_bits, noise.z_bits):
        return None
    return 1j ** ((m.phase_exp - noise.phase_exp) % 4)


def general_filter_outcome(ch: PauliChannel, spec: GeneralFilterSpec,
                           outcome: int = 0) -> FilterOutcome:
    """Branch of the prepared filter for one ancilla measurement outcome.

    Each noise component N is kept with weight |c_N|^2 where
    c_N = sum_i alpha_i(outcome) s_i and Q_i N P_i = s_i N; components whose
    letters are changed by any pair are rejected (the pairs are assumed to
    act diagonally on the channel support, which holds for Pauli pairs).
    """
    n = ch.n_qubits
    if outcome == 0:
        alphas = list(spec.weights)
    else:
        assert spec.prepare is not None and 0 < outcome < len(spec.weights)
        v = spec.prepare
        alphas = [v[i, 0] * np.conj(v[i, outcome]) for i in range(len(spec.weights))]
    kept: dict[PauliString, float] = {}
    total = 0.0
    for noise, w in ch.probs.items():
        c = 0.0 + 0.0j
        for a, (p, q) in zip(alphas, spec.pairs):
            s = _conjugation_scalar(noise, p, q)
            assert s is not None, "conjugation pair does not act diagonally"
            c += a * s
        amp = abs(c) ** 2
        if amp > _ATOL:
            kept[noise] = kept.get(noise, 0.0) + w * amp
            total += w * amp
    if total <= _ATOL:
        return FilterOutcome(0.0, None)
    return FilterOutcome(total, PauliChannel(n, {p: v / total for p, v in kept.items()}))


def general_filter_outcome0(ch: PauliChannel, spec: GeneralFilterSpec) -> FilterOutcome:
    return general_filter_outcome(ch, spec, 0)


def ae_spec(n: int) -> GeneralFilterSpec:
    """Two-ancilla filter spec: equal weights on I, Z^n, X^n and Y^n."""
    ident = PauliString.identity(n)
    zs = PauliString.from_letters("Z" * n)
    xs = PauliString.from_letters("X" * n)
    ys = PauliString.from_letters("Y" * n)
    pairs = [(p, p) for p in (ident, zs, xs, ys)]
    return GeneralFilterSpec([0.25] * 4, pairs)


def ae_removes(tc) -> bool:
    """Removal rule of the two-ancilla filter from a PauliTypeCount.

    A component is rejected exactly when two of (weight, x, y, z counts)
    are odd; otherwise its acceptance amplitude is exactly 1.
    """
    odd = sum(v % 2 for v in (tc.weight, tc.x_count, tc.y_count, tc.z_count))
    assert odd in (0, 2)
    return odd == 2


def ae_filter(ch: PauliChannel) -> FilterOutcome:
    """Two-ancilla filter on the accepting (all-zero) outcome.

    Equivalent to general_filter_outcome0 with ae_spec; implemented directly
    from the parity removal rule.
    """
    kept = {p: w for p, w in ch.probs.items() if not ae_removes(p.type_count())}
    total = sum(kept.values())
    if total <= _ATOL:
        return FilterOutcome(0.0, None)
    return FilterOutcome(total, PauliChannel(ch.n_qubits,
                                             {p: w / total for p, w in kept.items()}))


def ae_filter_for_circuit(ch: PauliChannel, tableau: CliffordTableau) -> FilterOutcome:
    """Two-ancilla filter wrapped around a Clifford circuit.

    Noise following the circuit sees the same filter as ae_filter; the
    tableau only fixes the backward-propagated controlled Paulis of the
    physical construction, so the channel-level result is identical.
    """
    assert tableau.n_qubits == ch.n_qubits
    return ae_filter(ch)
