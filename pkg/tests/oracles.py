"""Independent reference implementations used only by the tests.

Everything here works on Pauli strings ("IXZY" characters) with explicit
symbol tables and itertools enumeration, deliberately sharing no code
with the package's bitplane/kernel implementations.
"""

from __future__ import annotations

import itertools
import math

# product of two single-qubit Paulis, phase dropped
PAULI_PRODUCT = {
    ("I", "I"): "I", ("I", "X"): "X", ("I", "Y"): "Y", ("I", "Z"): "Z",
    ("X", "I"): "X", ("X", "X"): "I", ("X", "Y"): "Z", ("X", "Z"): "Y",
    ("Y", "I"): "Y", ("Y", "X"): "Z", ("Y", "Y"): "I", ("Y", "Z"): "X",
    ("Z", "I"): "Z", ("Z", "X"): "Y", ("Z", "Y"): "X", ("Z", "Z"): "I",
}


def compose_strings(a: str, b: str) -> str:
    assert len(a) == len(b)
    return "".join(PAULI_PRODUCT[(p, q)] for p, q in zip(a, b))


def counts_string(s: str) -> tuple[int, int, int]:
    return s.count("X"), s.count("Y"), s.count("Z")


def anticommute_strings(a: str, b: str) -> int:
    odd = 0
    for p, q in zip(a, b):
        if p != "I" and q != "I" and p != q:
            odd ^= 1
    return odd


def syndrome_strings(stabilizers: list[str], chain: str) -> tuple[int, ...]:
    return tuple(anticommute_strings(g, chain) for g in stabilizers)


def class_of_string(chain: str, logical_x: str, logical_z: str) -> str:
    a_x = anticommute_strings(chain, logical_x)
    a_z = anticommute_strings(chain, logical_z)
    return {(0, 0): "I", (0, 1): "X", (1, 0): "Z", (1, 1): "Y"}[(a_x, a_z)]


def effective_weight_string(chain: str, alpha_x: float, alpha_y: float) -> float:
    n_x, n_y, n_z = counts_string(chain)
    w = float(n_z)
    if n_x:
        w += math.inf if alpha_x == math.inf else alpha_x * n_x
    if n_y:
        w += math.inf if alpha_y == math.inf else alpha_y * n_y
    return w


def enumerate_class(stabilizers: list[str], seed_chain: str) -> set[str]:
    """All distinct chains reachable from seed_chain by stabilizer products."""
    chains = set()
    m = len(stabilizers)
    for bits in itertools.product((0, 1), repeat=m):
        c = seed_chain
        for g, on in zip(stabilizers, bits):
            if on:
                c = compose_strings(c, g)
        chains.add(c)
    return chains


def brute_force_class_data(
    stabilizers: list[str],
    logical_x: str,
    logical_z: str,
    seed_chain: str,
    alpha_x: float,
    alpha_y: float,
) -> dict[str, dict[float, int]]:
    """Exact weight histogram per class for the syndrome of seed_chain.

    Feasible only for small codes (2^m m-generator products per class).
    """
    logicals = {"I": "I" * len(seed_chain), "X": logical_x, "Z": logical_z,
                "Y": compose_strings(logical_x, logical_z)}
    out: dict[str, dict[float, int]] = {}
    for label, l in logicals.items():
        hist: dict[float, int] = {}
        for c in enumerate_class(stabilizers, compose_strings(seed_chain, l)):
            w = effective_weight_string(c, alpha_x, alpha_y)
            hist[w] = hist.get(w, 0) + 1
        cls = class_of_string(compose_strings(seed_chain, l), logical_x, logical_z)
        out[cls] = hist
    return out


def class_probabilities_exact(
    hists: dict[str, dict[float, int]], beta: float
) -> dict[str, float]:
    """Direct evaluation of P_E = sum N e^(-beta w) / total (small weights only)."""
    z = {}
    for label, hist in hists.items():
        z[label] = sum(n * math.exp(-beta * w) for w, n in hist.items() if w != math.inf)
    total = sum(z.values())
    return {label: v / total for label, v in z.items()}


def binomial_tail(d: int, p: float) -> float:
    """sum_{w=ceil(d/2)}^{d} C(d,w) p^w (1-p)^(d-w), evaluated directly."""
    return sum(
        math.comb(d, w) * p**w * (1 - p) ** (d - w) for w in range((d + 1) // 2, d + 1)
    )


def entropy_bits(qs) -> float:
    return -sum(q * math.log2(q) for q in qs if q > 0)
