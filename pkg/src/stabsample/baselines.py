"""Reference decoders: exhaustive maximum likelihood, the exact pure-Z
failure formula, and a parallel-tempering MCMC decoder.

The exhaustive decoder walks the complete stabilizer group (2^(d^2-1)
elements, so d <= 5) in Gray-code order from one consistent chain per
class, giving the exact chain count N_E(w) at every weight and therefore
exact class probabilities. It is the oracle the sampling decoders are
judged against at small distance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import pauli
from ._kernels import enumerate_group_kernel, pt_kernel
from ._rng import TAG_INITIAL_CHAIN, TAG_PT, derive_seed, generator
from .codes import (
    CLASS_ORDER,
    ClassLabel,
    CodeLayout,
    Syndrome,
    initial_chain,
    logical_class,
)
from .decoder import (
    ClassHistogram,
    Decision,
    Octet,
    _normalize_log,
    _log_partition,
    _trivial_decision,
    choose_class,
    class_probabilities,
    dominance_diagnostic,
)
from .noise import NoiseParams

_MAX_EXHAUSTIVE_GENERATORS = 24  # 2^24 group elements per class (d = 5)


def _seed_chain(layout: CodeLayout, s: Syndrome, target: ClassLabel) -> pauli.PauliChain:
    """Deterministic consistent chain in the target class (no scramble)."""
    s = np.asarray(s, dtype=np.uint8)
    x = (s @ layout.destab_x) % 2
    z = (s @ layout.destab_z) % 2
    c = pauli.PauliChain(x.astype(np.uint8), z.astype(np.uint8))
    need = target * logical_class(layout, c)
    rep = layout.logical(need)
    return c if rep is None else pauli.compose(c, rep)


def exact_mld(
    layout: CodeLayout, s: Syndrome, noise: NoiseParams
) -> tuple[np.ndarray, dict[ClassLabel, ClassHistogram]]:
    """Exact class probabilities and full weight histograms for small codes.

    Enumerates all 2^(N-1) stabilizer-group elements acting on one chain
    per class; each group element is reached via a single generator
    application thanks to Gray-code ordering.
    """
    n_gen = len(layout.stabilizers)
    if n_gen > _MAX_EXHAUSTIVE_GENERATORS:
        raise ValueError(
            f"exhaustive enumeration needs 2^{n_gen} group elements; "
            f"supported only up to distance 5"
        )
    side = layout.n_qubits + 1
    hists: dict[ClassLabel, ClassHistogram] = {}
    logz = np.full(4, -math.inf)
    for label in CLASS_ORDER:
        c0 = _seed_chain(layout, s, label)
        xw, zw = pauli.pack_chain(c0)
        counts = np.bincount(c0.x + 2 * c0.z, minlength=4).astype(np.int64)
        hist = np.zeros(side * side * side, dtype=np.int64)
        enumerate_group_kernel(
            xw, zw, counts, layout.gen_w0, layout.gen_nw, layout.gen_xw, layout.gen_zw,
            hist, np.int64(side),
        )
        entries: dict[float, int] = {}
        for flat in np.flatnonzero(hist):
            nx, rem = divmod(int(flat), side * side)
            ny, nz = divmod(rem, side)
            w = nz + _weight_term(noise.alpha_x, nx) + _weight_term(noise.alpha_y, ny)
            entries[w] = entries.get(w, 0) + int(hist[flat])
        hists[label] = ClassHistogram(label=label, entries=entries)
        logz[CLASS_ORDER.index(label)] = _log_partition(
            np.array(list(entries.keys())), np.array(list(entries.values())), noise.beta
        )
    if logz.max() == -math.inf:
        probs = class_probabilities(Octet.from_histograms(hists), noise, mode="ewd")
    else:
        probs = _normalize_log(logz)
    return probs, hists


def _weight_term(alpha: float, n: int) -> float:
    if n == 0:
        return 0.0
    return math.inf if alpha == math.inf else alpha * n


def exact_mld_decision(layout: CodeLayout, s: Syndrome, noise: NoiseParams) -> Decision:
    """exact_mld wrapped in the common Decision record."""
    probs, hists = exact_mld(layout, s, noise)
    dominance = {
        label: dominance_diagnostic(h, noise.beta) for label, h in hists.items() if h.entries
    }
    return Decision(
        chosen_class=choose_class(probs),
        probabilities=probs,
        octet=Octet.from_histograms(hists),
        dominance=dominance,
        histograms=hists,
        decoder="exact-mld",
    )


def pure_z_failure_rate(d: int, p: float) -> float:
    """Exact failure rate of the XZZX code under pure phase noise.

    Only one pure-Z operator (a diagonal string) commutes with every
    stabilizer, so each syndrome admits exactly two pure-Z chains and the
    optimal decoder loses exactly when the heavier one occurred:
    P_f = sum_{w=ceil(d/2)}^{d} C(d, w) p^w (1-p)^(d-w).
    """
    if d < 3 or d % 2 == 0:
        raise ValueError(f"invalid distance {d}: must be odd and >= 3")
    if not 0.0 <= p <= 0.5:
        raise ValueError(f"pure-Z rate must be in [0, 0.5], got {p}")
    return float(
        sum(math.comb(d, w) * p**w * (1.0 - p) ** (d - w) for w in range((d + 1) // 2, d + 1))
    )


@dataclass
class PTConfig:
    """Parallel-tempering schedule: layer 0 at the physical rate, top at
    relative Z rate 1 (beta 0), geometric in p_tilde_z between.

    tie_tolerance is the decision resolution: estimated class
    probabilities within it of the maximum count as tied and resolve by
    the fixed I > Z > X > Y priority, mirroring how exact ties resolve.
    Class-label samples are strongly autocorrelated (labels travel down
    the ladder through swaps), so this sits well above the naive binomial
    error at the default sweep count.
    """

    n_layers: int = 7
    steps_per_sweep: int | None = None  # None -> d^2 attempts per layer
    total_sweeps: int = 2000
    seed: int = 0
    tie_tolerance: float = 0.05

    def __post_init__(self):
        if self.n_layers < 2:
            raise ValueError("parallel tempering needs at least 2 layers")

    def resolve_steps(self, distance: int) -> int:
        return distance**2 if self.steps_per_sweep is None else self.steps_per_sweep


def mcmc_pt_decode(
    layout: CodeLayout,
    s: Syndrome,
    noise: NoiseParams,
    config: PTConfig,
    seed: int | None = None,
) -> Decision:
    """Parallel-tempering estimate of the most likely class.

    Every layer performs random-generator Metropolis moves at its own
    beta; the top layer (beta = 0) additionally proposes logical
    operators, always accepted there, which is what mixes the classes.
    Adjacent layers swap configurations with the standard replica-
    exchange rule, and P_E is the fraction of post-burn-in bottom-layer
    samples in class E. The first 10% of sweeps are discarded.
    """
    s = np.asarray(s, dtype=np.uint8)
    base_seed = config.seed if seed is None else seed
    if not s.any():
        return _trivial_decision("mcmc-pt", base_seed)
    if math.isinf(noise.alpha_x) or math.isinf(noise.alpha_y):
        raise ValueError("parallel tempering needs finite weight exponents")
    if not 0.0 < noise.p_tilde_z < 1.0:
        raise ValueError("parallel tempering needs 0 < p_tilde_z < 1 (beta > 0)")

    n_layers = config.n_layers
    # geometric in p_tilde_z  <=>  linear in beta, ending at beta = 0
    betas = noise.beta * (n_layers - 1 - np.arange(n_layers)) / (n_layers - 1)

    layer_xw = np.zeros((n_layers, layout.n_words), dtype=np.uint64)
    layer_zw = np.zeros((n_layers, layout.n_words), dtype=np.uint64)
    layer_counts = np.zeros((n_layers, 4), dtype=np.int64)
    layer_class = np.zeros(n_layers, dtype=np.int64)
    for ell in range(n_layers):
        label = CLASS_ORDER[ell % 4]
        rng = generator(derive_seed(base_seed, TAG_INITIAL_CHAIN, ell))
        c = initial_chain(layout, s, label, rng)
        xw, zw = pauli.pack_chain(c)
        layer_xw[ell] = xw
        layer_zw[ell] = zw
        layer_counts[ell] = np.bincount(c.x + 2 * c.z, minlength=4)
        layer_class[ell] = int(label)

    class_hits = np.zeros(4, dtype=np.int64)
    swap_attempts = np.zeros(n_layers - 1, dtype=np.int64)
    swap_accepts = np.zeros(n_layers - 1, dtype=np.int64)
    burn = config.total_sweeps // 10
    pt_kernel(
        layer_xw,
        layer_zw,
        layer_counts,
        layer_class,
        betas.astype(np.float64),
        layout.sup_q,
        layout.sup_cat,
        layout.sup_len,
        layout.log_q,
        layout.log_cat,
        layout.log_len,
        layout.log_class,
        float(noise.alpha_x),
        float(noise.alpha_y),
        np.int64(config.resolve_steps(layout.distance)),
        np.int64(config.total_sweeps),
        np.int64(burn),
        np.uint64(derive_seed(base_seed, TAG_PT)),
        class_hits,
        swap_attempts,
        swap_accepts,
    )

    total = class_hits.sum()
    probs = np.array([class_hits[int(l)] / total for l in CLASS_ORDER])
    return Decision(
        chosen_class=choose_class(probs, tolerance=config.tie_tolerance),
        probabilities=probs,
        octet=None,
        dominance={},
        decoder="mcmc-pt",
        sub_seed=base_seed,
    )
