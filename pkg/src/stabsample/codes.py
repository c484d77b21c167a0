"""Rotated surface code and XZZX code on a d x d qubit grid.

Qubits are indexed row-major: qubit (r, c) -> r*d + c, rows top to bottom.
Plaquettes sit on the (d-1) x (d-1) grid of faces; face (r, c) touches
qubits (r,c), (r,c+1), (r+1,c), (r+1,c+1). Weight-2 boundary stabilizers
occupy alternating edge positions, which is forced by commutation with
the bulk pattern.

Rotated surface code: face (r, c) is all-X when r+c is odd, all-Z when
even; top/bottom boundary stabilizers are X-type, left/right are Z-type.
Logical X is the X string on the left edge (column 0), logical Z the Z
string on the top edge (row 0).

XZZX code: every face applies X on its NW/SE corners and Z on NE/SW;
each boundary stabilizer is the restriction of the missing neighbouring
face to real qubits (hence "complementary" to the adjacent bulk
plaquette). The edge logicals are mixed: logical X alternates Z,X,Z,...
down the left edge, logical Z alternates X,Z,X,... along the top edge.

Equivalence classes are read out against these fixed edge
representatives, never deformed ones.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from . import pauli
from ._kernels import scramble_kernel
from ._rng import TAG_SCRAMBLE, derive_seed
from .pauli import PauliChain

Syndrome = np.ndarray  # uint8 vector of length d^2 - 1, 1 = flagged generator


class CodeKind(enum.Enum):
    ROTATED_SURFACE = "rotated"
    XZZX = "xzzx"


class ClassLabel(enum.IntEnum):
    """Equivalence class of a chain; index encodes (x-bit, 2*z-bit).

    With this encoding the Klein four-group law is a plain XOR:
    class(compose(a, b)) == ClassLabel(a ^ b).
    """

    I = 0
    X = 1
    Z = 2
    Y = 3

    def __mul__(self, other: "ClassLabel") -> "ClassLabel":
        return ClassLabel(self.value ^ other.value)


CLASS_ORDER = (ClassLabel.I, ClassLabel.X, ClassLabel.Z, ClassLabel.Y)
# deterministic tie-break for equal class probabilities
TIE_PRIORITY = (ClassLabel.I, ClassLabel.Z, ClassLabel.X, ClassLabel.Y)


@dataclass
class CodeLayout:
    """Frozen geometry of one code instance plus precomputed kernel tables."""

    kind: CodeKind
    distance: int
    stabilizers: list[PauliChain]
    logical_x: PauliChain
    logical_z: PauliChain

    n_qubits: int = field(init=False)
    n_words: int = field(init=False)
    # syndrome matrices: bit i = stab_z_mat[i] . c.x + stab_x_mat[i] . c.z (mod 2)
    stab_x_mat: np.ndarray = field(init=False)
    stab_z_mat: np.ndarray = field(init=False)
    # padded generator supports (per-qubit view, used by the PT kernel)
    sup_q: np.ndarray = field(init=False)
    sup_cat: np.ndarray = field(init=False)
    sup_len: np.ndarray = field(init=False)
    # word-span view of the generators (hot kernels): generator i XORs
    # gen_xw[i]/gen_zw[i] into words gen_w0[i] .. gen_w0[i]+gen_nw[i]-1
    gen_w0: np.ndarray = field(init=False)
    gen_nw: np.ndarray = field(init=False)
    gen_xw: np.ndarray = field(init=False)
    gen_zw: np.ndarray = field(init=False)
    # per-generator content-key shifts (both lanes)
    gen_kd0: np.ndarray = field(init=False)
    gen_kd1: np.ndarray = field(init=False)
    # one chain per generator flipping exactly that generator
    destab_x: np.ndarray = field(init=False)
    destab_z: np.ndarray = field(init=False)
    # logical operator tables for class moves (X_L, Z_L, Y_L)
    log_q: np.ndarray = field(init=False)
    log_cat: np.ndarray = field(init=False)
    log_len: np.ndarray = field(init=False)
    log_class: np.ndarray = field(init=False)

    def __post_init__(self):
        d = self.distance
        self.n_qubits = d * d
        self.n_words = (self.n_qubits + 63) // 64
        n_stab = len(self.stabilizers)

        self.stab_x_mat = np.stack([s.x for s in self.stabilizers]).astype(np.int64)
        self.stab_z_mat = np.stack([s.z for s in self.stabilizers]).astype(np.int64)

        self.sup_q = np.full((n_stab, 4), -1, dtype=np.int64)
        self.sup_cat = np.zeros((n_stab, 4), dtype=np.uint8)
        self.sup_len = np.zeros(n_stab, dtype=np.int64)
        for i, s in enumerate(self.stabilizers):
            qubits = np.flatnonzero(s.x | s.z)
            self.sup_len[i] = len(qubits)
            for k, q in enumerate(qubits):
                self.sup_q[i, k] = q
                self.sup_cat[i, k] = s.x[q] + 2 * s.z[q]

        self._build_word_spans()
        self._build_destabilizers()
        self._build_logical_tables()
        self._validate()

    # -- construction helpers -------------------------------------------------

    def _build_word_spans(self):
        n_stab = len(self.stabilizers)
        words = [pauli.pack_chain(s) for s in self.stabilizers]
        spans = []
        for xw, zw in words:
            touched = np.flatnonzero(xw | zw)
            spans.append((int(touched[0]), int(touched[-1]) - int(touched[0]) + 1))
        max_span = max(nw for _, nw in spans)
        self.gen_w0 = np.array([w0 for w0, _ in spans], dtype=np.int64)
        self.gen_nw = np.array([nw for _, nw in spans], dtype=np.int64)
        self.gen_xw = np.zeros((n_stab, max_span), dtype=np.uint64)
        self.gen_zw = np.zeros((n_stab, max_span), dtype=np.uint64)
        for i, ((xw, zw), (w0, nw)) in enumerate(zip(words, spans)):
            self.gen_xw[i, :nw] = xw[w0:w0 + nw]
            self.gen_zw[i, :nw] = zw[w0:w0 + nw]
        deltas = [pauli.key_delta_lanes(s) for s in self.stabilizers]
        self.gen_kd0 = np.array([d[0] for d in deltas], dtype=np.uint64)
        self.gen_kd1 = np.array([d[1] for d in deltas], dtype=np.uint64)

    def _build_destabilizers(self):
        """Right-invert the syndrome map over GF(2).

        Solves M v = e_i for each generator i, where v = [c.x; c.z] and
        M = [stab_z | stab_x]; destabilizer i then flips exactly syndrome
        bit i. Requires (and thereby verifies) independent generators.
        """
        n = self.n_qubits
        m = len(self.stabilizers)
        M = np.concatenate([self.stab_z_mat, self.stab_x_mat], axis=1).astype(np.uint8) & 1
        aug = np.concatenate([M, np.eye(m, dtype=np.uint8)], axis=1)
        pivots = []
        row = 0
        for col in range(2 * n):
            hit = np.flatnonzero(aug[row:, col]) + row
            if len(hit) == 0:
                continue
            if hit[0] != row:
                aug[[row, hit[0]]] = aug[[hit[0], row]]
            others = np.flatnonzero(aug[:, col])
            others = others[others != row]
            aug[others] ^= aug[row]
            pivots.append(col)
            row += 1
            if row == m:
                break
        if row != m:
            raise ValueError("stabilizer generators are not independent")
        T = aug[:, 2 * n:]
        D = np.zeros((2 * n, m), dtype=np.uint8)
        for j, p in enumerate(pivots):
            D[p] = T[j]
        self.destab_x = D[:n].T.copy()  # row i: x bitplane of destabilizer i
        self.destab_z = D[n:].T.copy()
        check = (self.stab_z_mat @ self.destab_x.T + self.stab_x_mat @ self.destab_z.T) % 2
        if not np.array_equal(check, np.eye(m, dtype=np.int64)):
            raise AssertionError("destabilizer construction failed")

    def _build_logical_tables(self):
        logicals = [
            (ClassLabel.X, self.logical_x),
            (ClassLabel.Z, self.logical_z),
            (ClassLabel.Y, pauli.compose(self.logical_x, self.logical_z)),
        ]
        max_sup = max(int((l.x | l.z).sum()) for _, l in logicals)
        self.log_q = np.full((3, max_sup), -1, dtype=np.int64)
        self.log_cat = np.zeros((3, max_sup), dtype=np.uint8)
        self.log_len = np.zeros(3, dtype=np.int64)
        self.log_class = np.zeros(3, dtype=np.int64)
        for i, (label, l) in enumerate(logicals):
            qubits = np.flatnonzero(l.x | l.z)
            self.log_len[i] = len(qubits)
            self.log_class[i] = int(label)
            for k, q in enumerate(qubits):
                self.log_q[i, k] = q
                self.log_cat[i, k] = l.x[q] + 2 * l.z[q]

    def _validate(self):
        d = self.distance
        if len(self.stabilizers) != d * d - 1:
            raise AssertionError("wrong generator count")
        weights = self.sup_len
        if not np.all((weights == 2) | (weights == 4)):
            raise AssertionError("generator weights must be 2 or 4")
        # pairwise commutation, logicals commuting with the group,
        # logicals anticommuting with each other
        comm = (self.stab_z_mat @ self.stab_x_mat.T + self.stab_x_mat @ self.stab_z_mat.T) % 2
        if comm.any():
            raise AssertionError("generators do not all commute")
        for l in (self.logical_x, self.logical_z):
            if compute_syndrome(self, l).any():
                raise AssertionError("logical operator anticommutes with a generator")
        if pauli.anticommutes(self.logical_x, self.logical_z) != 1:
            raise AssertionError("edge logicals must anticommute")

    def logical(self, label: ClassLabel) -> PauliChain | None:
        """Representative chain for a class label (None for I)."""
        if label == ClassLabel.I:
            return None
        if label == ClassLabel.X:
            return self.logical_x
        if label == ClassLabel.Z:
            return self.logical_z
        return pauli.compose(self.logical_x, self.logical_z)


def _boundary_positions(d: int) -> dict[str, list[int]]:
    # forced by commutation with the bulk checkerboard / uniform pattern
    return {
        "top": [c for c in range(0, d - 1, 2)],
        "bottom": [c for c in range(1, d - 1, 2)],
        "left": [r for r in range(1, d - 1, 2)],
        "right": [r for r in range(0, d - 1, 2)],
    }


def _build_rotated(d: int) -> tuple[list[PauliChain], PauliChain, PauliChain]:
    n = d * d
    q = lambda r, c: r * d + c
    stabs = []
    for r in range(d - 1):
        for c in range(d - 1):
            p = "X" if (r + c) % 2 == 1 else "Z"
            stabs.append(
                PauliChain.from_sites(
                    n, {q(r, c): p, q(r, c + 1): p, q(r + 1, c): p, q(r + 1, c + 1): p}
                )
            )
    pos = _boundary_positions(d)
    for c in pos["top"]:
        stabs.append(PauliChain.from_sites(n, {q(0, c): "X", q(0, c + 1): "X"}))
    for c in pos["bottom"]:
        stabs.append(PauliChain.from_sites(n, {q(d - 1, c): "X", q(d - 1, c + 1): "X"}))
    for r in pos["left"]:
        stabs.append(PauliChain.from_sites(n, {q(r, 0): "Z", q(r + 1, 0): "Z"}))
    for r in pos["right"]:
        stabs.append(PauliChain.from_sites(n, {q(r, d - 1): "Z", q(r + 1, d - 1): "Z"}))
    logical_x = PauliChain.from_sites(n, {q(r, 0): "X" for r in range(d)})
    logical_z = PauliChain.from_sites(n, {q(0, c): "Z" for c in range(d)})
    return stabs, logical_x, logical_z


def _build_xzzx(d: int) -> tuple[list[PauliChain], PauliChain, PauliChain]:
    n = d * d
    q = lambda r, c: r * d + c
    stabs = []
    for r in range(d - 1):
        for c in range(d - 1):
            stabs.append(
                PauliChain.from_sites(
                    n,
                    {q(r, c): "X", q(r, c + 1): "Z", q(r + 1, c): "Z", q(r + 1, c + 1): "X"},
                )
            )
    pos = _boundary_positions(d)
    # each boundary pair takes the restriction of the missing virtual face
    for c in pos["top"]:
        stabs.append(PauliChain.from_sites(n, {q(0, c): "Z", q(0, c + 1): "X"}))
    for c in pos["bottom"]:
        stabs.append(PauliChain.from_sites(n, {q(d - 1, c): "X", q(d - 1, c + 1): "Z"}))
    for r in pos["left"]:
        stabs.append(PauliChain.from_sites(n, {q(r, 0): "Z", q(r + 1, 0): "X"}))
    for r in pos["right"]:
        stabs.append(PauliChain.from_sites(n, {q(r, d - 1): "X", q(r + 1, d - 1): "Z"}))
    logical_x = PauliChain.from_sites(n, {q(r, 0): ("Z" if r % 2 == 0 else "X") for r in range(d)})
    logical_z = PauliChain.from_sites(n, {q(0, c): ("X" if c % 2 == 0 else "Z") for c in range(d)})
    return stabs, logical_x, logical_z


def build_code(kind: CodeKind, d: int) -> CodeLayout:
    """Construct a distance-d layout; d must be odd and >= 3."""
    if d < 3 or d % 2 == 0:
        raise ValueError(f"invalid distance {d}: must be odd and >= 3")
    if kind == CodeKind.ROTATED_SURFACE:
        stabs, lx, lz = _build_rotated(d)
    elif kind == CodeKind.XZZX:
        stabs, lx, lz = _build_xzzx(d)
    else:
        raise ValueError(f"unknown code kind {kind!r}")
    return CodeLayout(kind=kind, distance=d, stabilizers=stabs, logical_x=lx, logical_z=lz)


def compute_syndrome(layout: CodeLayout, c: PauliChain) -> Syndrome:
    """Anticommutation bit of the chain with each generator."""
    if c.n_qubits != layout.n_qubits:
        raise ValueError(f"size mismatch: chain has {c.n_qubits} qubits, code {layout.n_qubits}")
    s = (layout.stab_z_mat @ c.x.astype(np.int64) + layout.stab_x_mat @ c.z.astype(np.int64)) % 2
    return s.astype(np.uint8)


def apply_stabilizer(layout: CodeLayout, c: PauliChain, index: int) -> PauliChain:
    """Compose the chain with generator `index` (syndrome and class preserved)."""
    if not 0 <= index < len(layout.stabilizers):
        raise IndexError(f"stabilizer index {index} out of range")
    return pauli.compose(c, layout.stabilizers[index])


def logical_class(layout: CodeLayout, c: PauliChain) -> ClassLabel:
    """Class label from anticommutation with the fixed edge representatives."""
    a_x = pauli.anticommutes(c, layout.logical_x)
    a_z = pauli.anticommutes(c, layout.logical_z)
    # anticommuting with Z_L only -> X, with X_L only -> Z, with both -> Y
    return ClassLabel(a_z + 2 * a_x)


def initial_chain(
    layout: CodeLayout,
    s: Syndrome,
    target: ClassLabel,
    rng: np.random.Generator,
) -> PauliChain:
    """Random chain with syndrome s in the target class.

    Deterministic part: compose the destabilizers of all flagged
    generators (giving some chain with syndrome s), then shift to the
    requested class with the edge logicals. A scramble of 10 d^2 random
    generator applications then removes any constructor bias.
    """
    s = np.asarray(s, dtype=np.uint8)
    if s.shape != (len(layout.stabilizers),):
        raise ValueError("syndrome length does not match layout")
    x = (s @ layout.destab_x) % 2
    z = (s @ layout.destab_z) % 2
    c = PauliChain(x.astype(np.uint8), z.astype(np.uint8))
    need = target * logical_class(layout, c)
    rep = layout.logical(need)
    if rep is not None:
        c = pauli.compose(c, rep)

    xw, zw = pauli.pack_chain(c)
    counts = _category_counts(c)
    seed = derive_seed(int(rng.integers(0, 2**63)), TAG_SCRAMBLE)
    scramble_kernel(
        xw, zw, counts, layout.gen_w0, layout.gen_nw, layout.gen_xw, layout.gen_zw,
        np.int64(10 * layout.n_qubits), np.uint64(seed),
    )
    return pauli.unpack_chain(xw, zw, layout.n_qubits)


def _category_counts(c: PauliChain) -> np.ndarray:
    """int64[4] counts of I/X/Z/Y sites, indexed by x + 2z."""
    cats = c.x + 2 * c.z
    counts = np.bincount(cats, minlength=4).astype(np.int64)
    return counts


def syndrome_to_string(s: Syndrome) -> str:
    return "".join("1" if b else "0" for b in s)


def syndrome_from_string(text: str) -> Syndrome:
    return np.array([1 if ch == "1" else 0 for ch in text], dtype=np.uint8)


def describe(layout: CodeLayout) -> str:
    """Human- and diff-friendly dump of the layout (for golden tests)."""
    lines = [
        f"kind: {layout.kind.value}",
        f"distance: {layout.distance}",
        f"qubits: {layout.n_qubits}",
        f"stabilizers: {len(layout.stabilizers)}",
    ]
    for i, st in enumerate(layout.stabilizers):
        sites = ",".join(
            f"{q}:{pauli.PAULI_CHARS[st.x[q] + 2 * st.z[q]]}"
            for q in np.flatnonzero(st.x | st.z)
        )
        lines.append(f"  g{i:03d} [{sites}] {st.to_string()}")
    lines.append(f"logical_x: {layout.logical_x.to_string()}")
    lines.append(f"logical_z: {layout.logical_z.to_string()}")
    return "\n".join(lines)
