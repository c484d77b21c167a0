"""Error-rate-agnostic noise parametrization.

A biased Pauli channel is described by the total rate p and two weight
exponents (alpha_x, alpha_y) >= 1 tying the X and Y rates to the Z rate:

    (p_z / (1-p))^alpha_x = p_x / (1-p)
    (p_z / (1-p))^alpha_y = p_y / (1-p)

Writing t = p_z/(1-p), a chain with counts (n_x, n_y, n_z) then has
relative probability t^w = exp(-beta w) with effective weight
w = n_z + alpha_x n_x + alpha_y n_y and beta = -ln t. Because w depends
only on the exponents, the set of lightest chains of a syndrome is
invariant under changes of the overall rate p: that invariance is what
the decoder exploits. alpha = 1 is depolarizing noise; alpha = inf is
pure phase-flip noise; independent X/Z flips correspond to alpha_x = 1,
alpha_y = 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .pauli import PauliChain, PauliCounts


@dataclass(frozen=True)
class NoiseParams:
    p: float
    alpha_x: float
    alpha_y: float
    p_x: float
    p_y: float
    p_z: float
    p_tilde_z: float
    beta: float

    @property
    def eta(self) -> float:
        """Bias ratio p_z / (p_x + p_y) (inf for pure phase noise)."""
        if self.p_x + self.p_y == 0.0:
            return math.inf
        return self.p_z / (self.p_x + self.p_y)


def _rate_term(t: float, a: float) -> float:
    """Relative rate t**a of a channel; an infinite exponent means the
    component is absent (rate 0) at every t."""
    if a == math.inf:
        return 0.0
    try:
        return t**a
    except OverflowError:
        return math.inf


def _validate_alphas(alpha_x: float, alpha_y: float):
    if not (alpha_x >= 1.0 and alpha_y >= 1.0):
        raise ValueError("weight exponents must be >= 1 (or inf)")


def noise_from_p_tilde_z(p_tilde_z: float, alpha_x: float, alpha_y: float) -> NoiseParams:
    """Build parameters directly from the relative Z rate t = p_z/(1-p)."""
    _validate_alphas(alpha_x, alpha_y)
    t = float(p_tilde_z)
    if t < 0.0:
        raise ValueError("p_tilde_z must be non-negative")
    p_tilde = t + _rate_term(t, alpha_x) + _rate_term(t, alpha_y)
    if not math.isfinite(p_tilde):
        raise ValueError(
            f"relative rates overflow at p_tilde_z={t} with exponents "
            f"({alpha_x}, {alpha_y}); no valid total rate exists"
        )
    p = p_tilde / (1.0 + p_tilde)
    one_minus_p = 1.0 - p
    beta = math.inf if t == 0.0 else -math.log(t)
    return NoiseParams(
        p=p,
        alpha_x=alpha_x,
        alpha_y=alpha_y,
        p_x=_rate_term(t, alpha_x) * one_minus_p,
        p_y=_rate_term(t, alpha_y) * one_minus_p,
        p_z=t * one_minus_p,
        p_tilde_z=t,
        beta=beta,
    )


def noise_from_alpha(p: float, alpha_x: float, alpha_y: float) -> NoiseParams:
    """Solve p/(1-p) = t + t^alpha_x + t^alpha_y for t, then fill in rates.

    The map is strictly increasing in t, so plain bisection on (0, p~]
    converges unconditionally; iterated to ~1e-16 relative so beta is
    accurate well past the 1e-12 contract.
    """
    _validate_alphas(alpha_x, alpha_y)
    if not 0.0 <= p < 1.0:
        raise ValueError(f"total error rate must be in [0, 1), got {p}")
    if p == 0.0:
        return noise_from_p_tilde_z(0.0, alpha_x, alpha_y)
    p_tilde = p / (1.0 - p)
    lo, hi = 0.0, p_tilde
    for _ in range(100):
        mid = 0.5 * (lo + hi)
        if mid + _rate_term(mid, alpha_x) + _rate_term(mid, alpha_y) < p_tilde:
            lo = mid
        else:
            hi = mid
    return noise_from_p_tilde_z(0.5 * (lo + hi), alpha_x, alpha_y)


def alpha_from_eta(p_tilde_z: float, eta: float) -> float:
    """Weight exponent matching a bias ratio eta at relative Z rate t:
    alpha = (ln t - ln 2 eta) / ln t."""
    if not 0.0 < p_tilde_z < 1.0:
        raise ValueError("p_tilde_z must lie in (0, 1) for a positive beta")
    if eta < 0.5:
        raise ValueError("bias eta must be >= 1/2")
    return (math.log(p_tilde_z) - math.log(2.0 * eta)) / math.log(p_tilde_z)


def noise_from_eta(p: float, eta: float) -> NoiseParams:
    """Convert the fixed-eta convention (p_x = p_y, eta = p_z/(p_x+p_y))."""
    if not 0.0 < p < 1.0:
        raise ValueError(f"total error rate must be in (0, 1), got {p}")
    if eta < 0.5:
        raise ValueError("bias eta must be >= 1/2")
    p_tilde = p / (1.0 - p)
    if eta == math.inf:
        return noise_from_p_tilde_z(p_tilde, math.inf, math.inf)
    t = p_tilde * eta / (eta + 1.0)
    alpha = alpha_from_eta(t, eta)
    return noise_from_p_tilde_z(t, alpha, alpha)


def uncorrelated_alpha_y(p: float) -> float:
    """Y exponent for independent bit- and phase-flip noise at rate p each.

    The Y rate is p^2 against single-flip rate p(1-p), so
    [p(1-p)/(1-p)^2]^alpha_y = p^2/(1-p)^2 gives alpha_y = 2 for every
    p in (0, 0.5); exposed to document the convention (there p is the
    independent flip rate, not the total rate).
    """
    if not 0.0 < p < 0.5:
        raise ValueError(f"independent flip rate must be in (0, 0.5), got {p}")
    return 2.0


def effective_weight(noise: NoiseParams, counts: PauliCounts) -> float:
    """w = n_z + alpha_x n_x + alpha_y n_y; inf when an alpha=inf count > 0.

    Depends only on the exponents and the counts, never on p.
    """
    w = float(counts.n_z)
    for a, n in ((noise.alpha_x, counts.n_x), (noise.alpha_y, counts.n_y)):
        if n == 0:
            continue
        if a == math.inf:
            return math.inf
        w += a * n
    return w


def sample_chain(noise: NoiseParams, n_qubits: int, rng: np.random.Generator) -> PauliChain:
    """Draw i.i.d. per-qubit Pauli errors: I with 1-p, else X/Y/Z with p_x/p_y/p_z."""
    r = rng.random(n_qubits)
    x = (r < noise.p_x + noise.p_y).astype(np.uint8)
    z = ((r >= noise.p_x) & (r < noise.p)).astype(np.uint8)
    return PauliChain(x, z)


def hashing_bound(alpha: float) -> float:
    """Total error rate where the four-outcome channel entropy reaches 1 bit.

    Above this rate a single encoded qubit cannot be protected, making it
    the optimality yardstick for threshold estimates. Solved by bisection
    on p in (0, 0.5] to 1e-9.
    """
    if alpha < 1.0:
        raise ValueError("alpha must be >= 1")

    def entropy_minus_one(p: float) -> float:
        n = noise_from_alpha(p, alpha, alpha)
        h = 0.0
        for q in (1.0 - p, n.p_x, n.p_y, n.p_z):
            if q > 0.0:
                h -= q * math.log2(q)
        return h - 1.0

    lo, hi = 1e-12, 0.5
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if entropy_minus_one(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def parse_alpha(value) -> float:
    """Config helper: accepts numbers or the string 'inf'."""
    if isinstance(value, str):
        if value.strip().lower() in ("inf", "infinity"):
            return math.inf
        return float(value)
    return float(value)
