"""Exact algebra of the n-qubit Pauli group.

An operator is stored as ``i**phase_exponent * X**x * Z**z`` applied
qubit-by-qubit, with ``x`` and ``z`` bit-vectors packed into integers
(first qubit = most significant bit, so the integer reads like the
observable string).  ``Y`` is encoded as ``iXZ``, which makes the
commutation test a two-term bit product and keeps all phases exact.

Observable strings follow the grammar ``["+"|"-"]["i"]{I|X|Y|Z}+``,
e.g. ``"IX"``, ``"-YY"``, ``"iXZ"``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np

_LETTER_TO_BITS = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
_BITS_TO_LETTER = {v: k for k, v in _LETTER_TO_BITS.items()}
_PHASE_PREFIX = {0: "", 1: "i", 2: "-", 3: "-i"}

# single-qubit matrices for X**x Z**z (phase handled separately)
_XZ_MATRICES = {
    (0, 0): np.eye(2, dtype=complex),
    (1, 0): np.array([[0, 1], [1, 0]], dtype=complex),
    (0, 1): np.array([[1, 0], [0, -1]], dtype=complex),
    (1, 1): np.array([[0, -1], [1, 0]], dtype=complex),  # XZ = -iY
}

DENSE_QUBIT_CAP = 4


@dataclass(frozen=True)
class PauliOperator:
    """i**phase_exponent * X**x_mask * Z**z_mask, one bit per qubit."""

    n_qubits: int
    x_mask: int
    z_mask: int
    phase_exponent: int = 0

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValueError("operator needs at least one qubit")
        limit = 1 << self.n_qubits
        if not (0 <= self.x_mask < limit and 0 <= self.z_mask < limit):
            raise ValueError("mask does not fit the declared qubit count")
        object.__setattr__(self, "phase_exponent", self.phase_exponent % 4)

    @property
    def is_identity(self) -> bool:
        return self.x_mask == 0 and self.z_mask == 0 and self.phase_exponent == 0

    @property
    def is_hermitian(self) -> bool:
        # (X^x Z^z)^dagger = (-1)^(x.z) X^x Z^z, so i^k X^x Z^z is Hermitian
        # iff k has the same parity as the XZ overlap
        return self.phase_exponent % 2 == (self.x_mask & self.z_mask).bit_count() % 2

    def phase_free(self) -> "PauliOperator":
        return PauliOperator(self.n_qubits, self.x_mask, self.z_mask, 0)

    def key(self) -> tuple[int, int]:
        """Phase-free identity of the observable (canonical sort key)."""
        return (self.x_mask, self.z_mask)

    def __str__(self) -> str:
        return format_observable(self)

    def __mul__(self, other: "PauliOperator") -> "PauliOperator":
        return multiply(self, other)


def parse(text: str) -> PauliOperator:
    """Parse an observable string such as "IX", "-YY" or "iXZ"."""
    if not isinstance(text, str) or not text:
        raise ValueError("empty observable string")
    pos = 0
    phase = 0
    if text[pos] in "+-":
        if text[pos] == "-":
            phase += 2
        pos += 1
    if pos < len(text) and text[pos] == "i":
        phase += 1
        pos += 1
    body = text[pos:]
    if not body:
        raise ValueError(f"observable {text!r} has no Pauli letters after position {pos}")
    x = z = 0
    for off, ch in enumerate(body):
        try:
            xb, zb = _LETTER_TO_BITS[ch]
        except KeyError:
            raise ValueError(
                f"bad character {ch!r} at position {pos + off} in observable {text!r}"
            ) from None
        x = (x << 1) | xb
        z = (z << 1) | zb
        if xb and zb:  # Y = iXZ
            phase += 1
    return PauliOperator(len(body), x, z, phase % 4)


def format_observable(op: PauliOperator) -> str:
    """Inverse of parse: sign/phase prefix followed by Pauli letters."""
    letters = []
    n_y = 0
    for q in range(op.n_qubits):
        shift = op.n_qubits - 1 - q
        bits = ((op.x_mask >> shift) & 1, (op.z_mask >> shift) & 1)
        if bits == (1, 1):
            n_y += 1
        letters.append(_BITS_TO_LETTER[bits])
    return _PHASE_PREFIX[(op.phase_exponent - n_y) % 4] + "".join(letters)


def _check_same_width(a: PauliOperator, b: PauliOperator):
    if a.n_qubits != b.n_qubits:
        raise ValueError(f"qubit count mismatch: {a.n_qubits} vs {b.n_qubits}")


def multiply(a: PauliOperator, b: PauliOperator) -> PauliOperator:
    """Group product with exact phase tracking.

    Moving Z factors of ``a`` past X factors of ``b`` costs a sign per
    overlapping qubit: (X^x1 Z^z1)(X^x2 Z^z2) = (-1)^(z1.x2) X^(x1+x2) Z^(z1+z2).
    """
    _check_same_width(a, b)
    swaps = (a.z_mask & b.x_mask).bit_count()
    return PauliOperator(
        a.n_qubits,
        a.x_mask ^ b.x_mask,
        a.z_mask ^ b.z_mask,
        (a.phase_exponent + b.phase_exponent + 2 * swaps) % 4,
    )


def commutes(a: PauliOperator, b: PauliOperator) -> bool:
    """True iff the symplectic form x_a.z_b + z_a.x_b vanishes mod 2."""
    _check_same_width(a, b)
    return ((a.x_mask & b.z_mask).bit_count() + (a.z_mask & b.x_mask).bit_count()) % 2 == 0


def identity(n_qubits: int) -> PauliOperator:
    return PauliOperator(n_qubits, 0, 0, 0)


def dense_matrix(op: PauliOperator) -> np.ndarray:
    """2^n x 2^n complex matrix of the operator (n capped at 4)."""
    if op.n_qubits > DENSE_QUBIT_CAP:
        raise ValueError(f"dense matrix capped at {DENSE_QUBIT_CAP} qubits, got {op.n_qubits}")
    factors = []
    for q in range(op.n_qubits):
        shift = op.n_qubits - 1 - q
        factors.append(_XZ_MATRICES[((op.x_mask >> shift) & 1, (op.z_mask >> shift) & 1)])
    mat = reduce(np.kron, factors)
    return (1j ** op.phase_exponent) * mat


def enumerate_observables(n_qubits: int) -> list[PauliOperator]:
    """All 4^n - 1 non-identity phase-free observables.

    Canonical order: lexicographic on (x_mask, z_mask) read as big-endian
    integers; censuses and reports rely on this order being stable.
    """
    if not 1 <= n_qubits <= 4:
        raise ValueError(f"qubit count {n_qubits} out of supported range 1..4")
    out = []
    for x in range(1 << n_qubits):
        for z in range(1 << n_qubits):
            if x == 0 and z == 0:
                continue
            out.append(PauliOperator(n_qubits, x, z, 0))
    return out
