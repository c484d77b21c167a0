"""Phase-free N-qubit Pauli chains stored as X/Z bitplanes.

A chain assigns one of {I, X, Y, Z} to each qubit. Qubit i carries the
X component iff x[i] == 1 and the Z component iff z[i] == 1, so
(0,0)=I, (1,0)=X, (0,1)=Z, (1,1)=Y. Global phases are dropped, which
makes composition a plain XOR of bitplanes and every chain self-inverse.

Qubits are indexed row-major over the code grid; bitplanes pack
little-endian into 64-bit words (qubit i -> word i//64, bit i%64).

The 128-bit content key of a chain is XOR-homomorphic (Zobrist style):
two lanes, each the XOR of a per-(plane, qubit) table entry for every
set bit, on top of a base value mixing in n_qubits. Table entries come
from fixed splitmix64 streams, so keys are reproducible across runs and
platforms, and composing with an operator shifts the key by a constant,
which lets samplers maintain keys incrementally.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from ._rng import mix64, splitmix64

PAULI_CHARS = "IXZY"  # indexed by x + 2z

# stream seeds for the key table: (lane, plane) -> splitmix64 start state
_KEY_STREAM_SEEDS = (
    (0x243F6A8885A308D3, 0x13198A2E03707344),  # lane 0: x plane, z plane
    (0xA4093822299F31D0, 0x082EFA98EC4E6C89),  # lane 1
)
_KEY_BASE_SEEDS = (0x452821E638D01377, 0xBE5466CF34E90C6C)


class PauliCounts(NamedTuple):
    n_x: int
    n_y: int
    n_z: int


@dataclass
class PauliChain:
    """One Pauli operator on n qubits, as two 0/1 bitplanes."""

    x: np.ndarray
    z: np.ndarray

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=np.uint8)
        self.z = np.asarray(self.z, dtype=np.uint8)
        if self.x.shape != self.z.shape or self.x.ndim != 1:
            raise ValueError("x and z bitplanes must be 1-D and equal length")

    @property
    def n_qubits(self) -> int:
        return self.x.shape[0]

    @classmethod
    def identity(cls, n_qubits: int) -> "PauliChain":
        return cls(np.zeros(n_qubits, dtype=np.uint8), np.zeros(n_qubits, dtype=np.uint8))

    @classmethod
    def from_string(cls, s: str) -> "PauliChain":
        """Parse a length-N string over {I, X, Y, Z} in qubit order."""
        idx = [PAULI_CHARS.index(ch) for ch in s.upper()]
        arr = np.array(idx, dtype=np.uint8)
        return cls(arr & 1, arr >> 1)

    @classmethod
    def from_sites(cls, n_qubits: int, sites: dict[int, str]) -> "PauliChain":
        """Chain with the given single-qubit Paulis, identity elsewhere."""
        c = cls.identity(n_qubits)
        for q, p in sites.items():
            k = PAULI_CHARS.index(p.upper())
            c.x[q] = k & 1
            c.z[q] = k >> 1
        return c

    def to_string(self) -> str:
        return "".join(PAULI_CHARS[k] for k in self.x + 2 * self.z)

    def copy(self) -> "PauliChain":
        return PauliChain(self.x.copy(), self.z.copy())

    def is_identity(self) -> bool:
        return not (self.x.any() or self.z.any())

    def __eq__(self, other) -> bool:
        if not isinstance(other, PauliChain):
            return NotImplemented
        return (
            self.n_qubits == other.n_qubits
            and np.array_equal(self.x, other.x)
            and np.array_equal(self.z, other.z)
        )

    __hash__ = None  # bitplanes are mutable arrays


def compose(a: PauliChain, b: PauliChain) -> PauliChain:
    """Product of two chains, phase dropped: XOR of both bitplanes."""
    if a.n_qubits != b.n_qubits:
        raise ValueError(f"size mismatch: {a.n_qubits} vs {b.n_qubits} qubits")
    return PauliChain(a.x ^ b.x, a.z ^ b.z)


def count_paulis(c: PauliChain) -> PauliCounts:
    """Number of X, Y and Z components of a chain."""
    both = c.x & c.z
    n_y = int(both.sum())
    n_x = int(c.x.sum()) - n_y
    n_z = int(c.z.sum()) - n_y
    return PauliCounts(n_x=n_x, n_y=n_y, n_z=n_z)


def anticommutes(a: PauliChain, b: PauliChain) -> int:
    """Symplectic product: 1 if the chains anticommute, else 0."""
    if a.n_qubits != b.n_qubits:
        raise ValueError(f"size mismatch: {a.n_qubits} vs {b.n_qubits} qubits")
    return int((int(np.dot(a.x, b.z)) + int(np.dot(a.z, b.x))) & 1)


def pack_bits(bits: np.ndarray) -> np.ndarray:
    """Pack a 0/1 array into little-endian uint64 words (bit i of word i//64)."""
    n = bits.shape[0]
    n_words = (n + 63) // 64
    padded = np.zeros(n_words * 64, dtype=np.uint8)
    padded[:n] = bits
    return np.packbits(padded, bitorder="little").view(np.dtype("<u8")).astype(np.uint64)


def unpack_bits(words: np.ndarray, n_qubits: int) -> np.ndarray:
    by = words.astype(np.dtype("<u8")).view(np.uint8)
    return np.unpackbits(by, bitorder="little")[:n_qubits].copy()


def pack_chain(c: PauliChain) -> tuple[np.ndarray, np.ndarray]:
    return pack_bits(c.x), pack_bits(c.z)


def unpack_chain(xw: np.ndarray, zw: np.ndarray, n_qubits: int) -> PauliChain:
    return PauliChain(unpack_bits(xw, n_qubits), unpack_bits(zw, n_qubits))


@lru_cache(maxsize=8)
def key_table(n_qubits: int) -> np.ndarray:
    """Per-(lane, plane, qubit) key contributions, shape (2, 2, n_qubits)."""
    table = np.empty((2, 2, n_qubits), dtype=np.uint64)
    for lane in range(2):
        for plane in range(2):
            state = _KEY_STREAM_SEEDS[lane][plane]
            for q in range(n_qubits):
                state, out = splitmix64(state)
                table[lane, plane, q] = out
    return table


def key_base(n_qubits: int) -> tuple[int, int]:
    """Key of the identity chain on n_qubits, per lane."""
    return (mix64(_KEY_BASE_SEEDS[0] ^ n_qubits), mix64(_KEY_BASE_SEEDS[1] ^ n_qubits))


def chain_key_lanes(c: PauliChain) -> tuple[int, int]:
    """The two 64-bit lanes of the chain content key."""
    table = key_table(c.n_qubits)
    lanes = []
    for lane in range(2):
        k = np.uint64(key_base(c.n_qubits)[lane])
        xsel = table[lane, 0][c.x.astype(bool)]
        zsel = table[lane, 1][c.z.astype(bool)]
        if xsel.size:
            k ^= np.bitwise_xor.reduce(xsel)
        if zsel.size:
            k ^= np.bitwise_xor.reduce(zsel)
        lanes.append(int(k))
    return lanes[0], lanes[1]


def chain_key(c: PauliChain) -> int:
    """Deterministic 128-bit content key of a chain.

    Pure function of (n_qubits, x bitplane, z bitplane) in canonical qubit
    order; equal chains always produce equal keys. Two independent 64-bit
    lanes make accidental collisions negligible at any realistic table
    size, and the XOR structure makes the key of compose(a, b) equal to
    key(a) ^ key(b) ^ key(identity) per lane.
    """
    hi, lo = chain_key_lanes(c)
    return (hi << 64) | lo


def key_delta_lanes(c: PauliChain) -> tuple[int, int]:
    """Per-lane XOR shift that composing with this chain applies to a key."""
    hi, lo = chain_key_lanes(c)
    base = key_base(c.n_qubits)
    return hi ^ base[0], lo ^ base[1]
