"""Symplectic binary representation of the n-qubit Pauli group.

A Pauli operator is stored as ``i**phase_exp * prod_j X_j**x_j Z_j**z_j``
with the x and z bit vectors packed into Python integers (bit j = qubit j)
and the phase exponent tracked mod 4.  In this convention the Y letter on a
single qubit is ``i * X Z``, i.e. ``(x=1, z=1, phase_exp=1)``.

Commutation, weight and multiplication reduce to popcounts of bitwise ANDs,
so everything here is exact integer arithmetic.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, NamedTuple

_LETTER_TO_BITS = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
_BITS_TO_LETTER = {v: k for k, v in _LETTER_TO_BITS.items()}
_PHASE_PREFIX = {0: "", 1: "+i", 2: "-", 3: "-i"}


class PauliTypeCount(NamedTuple):
    """Letter multiplicities of a Pauli string."""

    x_count: int
    y_count: int
    z_count: int

    @property
    def weight(self) -> int:
        return self.x_count + self.y_count + self.z_count


@dataclass(frozen=True)
class PauliString:
    """Immutable n-qubit Pauli with exact phase tracking."""

    n_qubits: int
    x_bits: int
    z_bits: int
    phase_exp: int = 0

    def __post_init__(self):
        assert self.n_qubits >= 0
        mask = (1 << self.n_qubits) - 1
        assert 0 <= self.x_bits <= mask and 0 <= self.z_bits <= mask
        object.__setattr__(self, "phase_exp", self.phase_exp % 4)

    # -- constructors -------------------------------------------------

    @staticmethod
    def identity(n: int) -> "PauliString":
        return PauliString(n, 0, 0, 0)

    @staticmethod
    def single(n: int, qubit: int, letter: str, phase_exp: int = 0) -> "PauliString":
        """Pauli acting as `letter` on one qubit and I elsewhere."""
        xb, zb = _LETTER_TO_BITS[letter]
        extra = 1 if letter == "Y" else 0
        return PauliString(n, xb << qubit, zb << qubit, phase_exp + extra)

    @staticmethod
    def from_letters(letters: str, phase_exp: int = 0) -> "PauliString":
        """Build from a string of I/X/Y/Z characters, char i acting on qubit i."""
        x = z = 0
        n_y = 0
        for q, ch in enumerate(letters):
            xb, zb = _LETTER_TO_BITS[ch]
            x |= xb << q
            z |= zb << q
            n_y += xb & zb
        return PauliString(len(letters), x, z, phase_exp + n_y)

    @staticmethod
    def from_text(text: str) -> "PauliString":
        """Parse the textual form, e.g. "-IXYZ" or "+iZZ"."""
        body = text.strip()
        sign_exp = 0
        for prefix, exp in (("+i", 1), ("-i", 3), ("i", 1), ("+", 0), ("-", 2)):
            if body.startswith(prefix):
                sign_exp = exp
                body = body[len(prefix):]
                break
        assert body and all(c in _LETTER_TO_BITS for c in body), f"bad Pauli text: {text!r}"
        return PauliString.from_letters(body, sign_exp)

    # -- views ---------------------------------------------------------

    def letter(self, qubit: int) -> str:
        return _BITS_TO_LETTER[((self.x_bits >> qubit) & 1, (self.z_bits >> qubit) & 1)]

    def letters(self) -> str:
        return "".join(self.letter(q) for q in range(self.n_qubits))

    def to_text(self) -> str:
        """Inverse of from_text; the Y letters absorb one factor of i each."""
        n_y = (self.x_bits & self.z_bits).bit_count()
        return _PHASE_PREFIX[(self.phase_exp - n_y) % 4] + self.letters()

    def __str__(self) -> str:
        return self.to_text()

    # -- algebra --------------------------------------------------------

    def multiply(self, other: "PauliString") -> "PauliString":
        """Exact group product self * other."""
        assert self.n_qubits == other.n_qubits
        # Moving other's X block past self's Z block flips a sign per overlap.
        phase = self.phase_exp + other.phase_exp + 2 * (self.z_bits & other.x_bits).bit_count()
        return PauliString(self.n_qubits, self.x_bits ^ other.x_bits,
                           self.z_bits ^ other.z_bits, phase)

    def __mul__(self, other: "PauliString") -> "PauliString":
        return self.multiply(other)

    def commutes(self, other: "PauliString") -> bool:
        """Symplectic inner product parity."""
        assert self.n_qubits == other.n_qubits
        anti = (self.x_bits & other.z_bits).bit_count() + (self.z_bits & other.x_bits).bit_count()
        return anti % 2 == 0

    def phase_free(self) -> "PauliString":
        """Same letters with a +1 phase; channel keys use this."""
        n_y = (self.x_bits & self.z_bits).bit_count()
        return PauliString(self.n_qubits, self.x_bits, self.z_bits, n_y)

    def weight(self) -> int:
        return (self.x_bits | self.z_bits).bit_count()

    def type_count(self) -> PauliTypeCount:
        y = self.x_bits & self.z_bits
        return PauliTypeCount((self.x_bits & ~y).bit_count(), y.bit_count(),
                              (self.z_bits & ~y).bit_count())

    def is_identity_letters(self) -> bool:
        return self.x_bits == 0 and self.z_bits == 0


def enumerate_paulis(n: int, max_weight: int | None = None) -> Iterator[PauliString]:
    """All phase-free n-qubit Paulis, lexicographic over (z_bits, x_bits).

    Guarded to small n; the full group has 4**n elements.
    """
    assert 0 < n <= 10, "enumeration is limited to n <= 10"
    for z, x in itertools.product(range(1 << n), repeat=2):
        p = PauliString(n, x, z, (x & z).bit_count())
        if max_weight is None or p.weight() <= max_weight:
            yield p
