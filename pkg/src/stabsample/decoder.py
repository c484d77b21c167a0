"""Decoding by effective weight and degeneracy of sampled unique chains.

For a given syndrome, each of the four equivalence classes is explored
independently with Metropolis moves (random generator applications) at a
sampling error rate p_sample that need not equal the physical rate:
since the effective weight of a chain depends only on the bias
exponents, the set of chains found is valid at every physical rate.
Unique chains are deduplicated through a content-key hash table that
stores (key -> weight) and never the chains themselves.

Class probabilities are then evaluated at the physical rate either from
the lightest observed chains only, P_E ~ N*_E exp(-beta w*_E) ("ewd"
mode, the eight numbers {w*_E, N*_E} per syndrome), or from all observed
chains, P_E ~ sum_w N_E(w) exp(-beta w) ("all" mode). All probability
arithmetic is done in log space so that huge weight exponents (e.g.
alpha = 10000) stay well-posed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Mapping

import numpy as np

from . import pauli
from ._kernels import WEIGHT_TOL, metropolis_kernel
from ._rng import TAG_INITIAL_CHAIN, TAG_METROPOLIS, derive_seed, generator
from .codes import (
    CLASS_ORDER,
    TIE_PRIORITY,
    ClassLabel,
    CodeLayout,
    Syndrome,
    compute_syndrome,
    initial_chain,
    logical_class,
)
from .noise import NoiseParams, noise_from_alpha
from .pauli import PauliChain


@dataclass
class SamplerConfig:
    """Exploration budget for one equivalence class.

    steps counts proposal attempts (accepted or not); None means the
    default budget of 25 d^5 attempts. The current chain is recorded at
    attempt 0 and after every record_stride-th attempt.
    """

    p_sample: float = 0.3
    steps: int | None = None
    record_stride: int = 5
    seed: int = 0

    def resolve_steps(self, distance: int) -> int:
        return 25 * distance**5 if self.steps is None else self.steps

    def __post_init__(self):
        if not 0.0 < self.p_sample < 1.0:
            raise ValueError("p_sample must be in (0, 1)")
        if self.record_stride < 1:
            raise ValueError("record_stride must be >= 1")
        if self.steps is not None and self.steps < self.record_stride:
            raise ValueError("steps must be >= record_stride")


@dataclass
class ClassHistogram:
    """Distinct-chain counts of one class, keyed by effective weight."""

    label: ClassLabel
    entries: dict[float, int]

    @property
    def total_unique(self) -> int:
        return sum(self.entries.values())

    @property
    def w_star(self) -> float:
        if not self.entries:
            raise ValueError("no observed chains in class histogram")
        return min(self.entries)

    @property
    def n_star(self) -> int:
        w0 = self.w_star
        return sum(n for w, n in self.entries.items() if w <= w0 + WEIGHT_TOL)


@dataclass
class Octet:
    """Minimal observed weight and its degeneracy per explored class."""

    w_star: dict[ClassLabel, float] = field(default_factory=dict)
    n_star: dict[ClassLabel, int] = field(default_factory=dict)

    @classmethod
    def from_histograms(cls, hists: Mapping[ClassLabel, "ClassHistogram"]) -> "Octet":
        o = cls()
        for label, h in hists.items():
            if h.entries:
                o.w_star[label] = h.w_star
                o.n_star[label] = h.n_star
        return o

    def as_flat(self) -> list[float]:
        """(w*, N*) pairs in I, X, Z, Y order; NaN for unexplored classes."""
        out = []
        for label in CLASS_ORDER:
            out.append(self.w_star.get(label, math.nan))
            out.append(float(self.n_star.get(label, 0)))
        return out


@dataclass
class Decision:
    """Outcome of decoding one syndrome."""

    chosen_class: ClassLabel
    probabilities: np.ndarray  # length 4, CLASS_ORDER, sums to 1
    octet: Octet | None
    dominance: dict[ClassLabel, float]
    histograms: dict[ClassLabel, ClassHistogram] | None = None
    decoder: str = "ewd"
    sub_seed: int | None = None

    def probability(self, label: ClassLabel) -> float:
        return float(self.probabilities[CLASS_ORDER.index(label)])

    def to_record(self, syndrome: Syndrome | None = None) -> dict:
        """JSON-line payload: the compact per-syndrome representation."""
        rec = {
            "decoder": self.decoder,
            "chosen": self.chosen_class.name,
            "p_class": {l.name: self.probability(l) for l in CLASS_ORDER},
            "octet": self.octet.as_flat() if self.octet is not None else None,
            "dominance": {l.name: v for l, v in self.dominance.items()},
        }
        if syndrome is not None:
            from .codes import syndrome_to_string

            rec["syndrome"] = syndrome_to_string(syndrome)
        if self.sub_seed is not None:
            rec["sub_seed"] = self.sub_seed
        return rec


@dataclass
class ExploreResult:
    """Raw outcome of one class exploration (weights of unique chains)."""

    label: ClassLabel
    weights: np.ndarray
    found_step: int  # attempt index at which target weight appeared, -1 if n/a
    chains: list[PauliChain] | None = None

    @property
    def w_star(self) -> float:
        return float(self.weights.min())

    @property
    def n_star(self) -> int:
        return int(np.count_nonzero(self.weights <= self.weights.min() + WEIGHT_TOL))

    def histogram(self) -> ClassHistogram:
        vals, counts = np.unique(self.weights, return_counts=True)
        return ClassHistogram(
            label=self.label, entries={float(w): int(n) for w, n in zip(vals, counts)}
        )


# reusable dedup-table buffers, keyed by capacity (per process)
_TABLE_CACHE: dict[int, tuple] = {}


def _get_table(capacity: int):
    buf = _TABLE_CACHE.get(capacity)
    if buf is None:
        buf = (
            np.zeros(capacity, dtype=np.uint64),
            np.zeros(capacity, dtype=np.uint64),
            np.zeros(capacity, dtype=np.float64),
            np.zeros(capacity, dtype=np.uint8),
        )
        _TABLE_CACHE[capacity] = buf
    else:
        buf[3][:] = 0  # stale keys/values are unreachable once unused
    return buf


@lru_cache(maxsize=64)
def _sampling_beta(p_sample: float, alpha_x: float, alpha_y: float) -> float:
    return noise_from_alpha(p_sample, alpha_x, alpha_y).beta


def _require_finite_alphas(noise: NoiseParams):
    if math.isinf(noise.alpha_x) or math.isinf(noise.alpha_y):
        raise ValueError(
            "chain sampling needs finite weight exponents; "
            "use a large finite alpha (e.g. 10000) for near-pure bias"
        )


def explore_class(
    layout: CodeLayout,
    noise: NoiseParams,
    config: SamplerConfig,
    start: PauliChain,
    seed: int,
    keep_chains: bool = False,
    target_weight: float | None = None,
    steps: int | None = None,
) -> ExploreResult:
    """Run the Metropolis kernel from a start chain; collect unique weights."""
    _require_finite_alphas(noise)
    n_steps = config.resolve_steps(layout.distance) if steps is None else steps
    beta_sample = _sampling_beta(config.p_sample, noise.alpha_x, noise.alpha_y)

    xw, zw = pauli.pack_chain(start)
    counts = np.bincount(start.x + 2 * start.z, minlength=4).astype(np.int64)

    max_records = n_steps // config.record_stride + 2
    capacity = 1 << max(8, (2 * max_records).bit_length())
    keys_hi, keys_lo, vals, used = _get_table(capacity)

    if keep_chains:
        store_x = np.zeros((capacity, layout.n_words), dtype=np.uint64)
        store_z = np.zeros((capacity, layout.n_words), dtype=np.uint64)
    else:
        store_x = np.zeros((0, 0), dtype=np.uint64)
        store_z = np.zeros((0, 0), dtype=np.uint64)

    key0, key1 = pauli.chain_key_lanes(start)
    found_step, _ = metropolis_kernel(
        xw,
        zw,
        counts,
        np.uint64(key0),
        np.uint64(key1),
        layout.gen_w0,
        layout.gen_nw,
        layout.gen_xw,
        layout.gen_zw,
        layout.gen_kd0,
        layout.gen_kd1,
        float(noise.alpha_x),
        float(noise.alpha_y),
        float(beta_sample),
        np.int64(n_steps),
        np.int64(config.record_stride),
        np.uint64(seed & (2**64 - 1)),
        keys_hi,
        keys_lo,
        vals,
        used,
        np.uint64(capacity - 1),
        -1.0 if target_weight is None else float(target_weight),
        store_x,
        store_z,
        keep_chains,
    )

    occupied = np.flatnonzero(used)
    weights = vals[occupied].copy()
    chains = None
    if keep_chains:
        chains = [
            pauli.unpack_chain(store_x[i], store_z[i], layout.n_qubits) for i in occupied
        ]
    label = logical_class(layout, start)
    return ExploreResult(label=label, weights=weights, found_step=int(found_step), chains=chains)


def metropolis_explore(
    layout: CodeLayout,
    noise: NoiseParams,
    config: SamplerConfig,
    start: PauliChain,
) -> ClassHistogram:
    """Explore the class of `start` and histogram unique chains by weight.

    explore_class exposes the richer result (raw weights, early-exit step,
    optional retained chains for validity checking)."""
    res = explore_class(layout, noise, config, start, seed=config.seed)
    return res.histogram()


def _log_partition(weights_or_entries, counts, beta: float) -> float:
    """log sum_i counts_i exp(-beta w_i), stable for beta up to inf."""
    w = np.asarray(weights_or_entries, dtype=np.float64)
    n = np.asarray(counts, dtype=np.float64)
    if beta == math.inf:
        finite = np.isfinite(w)
        if not finite.any():
            return -math.inf
        wmin = w[finite].min()
        if wmin > 0.0:
            return -math.inf  # every chain is suppressed; relative rule applies upstream
        sel = finite & (w <= wmin + WEIGHT_TOL)
        return float(np.log(n[sel].sum()))
    finite = np.isfinite(w)
    terms = np.full(w.shape, -math.inf)
    terms[finite] = np.log(n[finite]) - beta * w[finite]
    m = terms.max()
    if m == -math.inf:
        return -math.inf
    return float(m + np.log(np.exp(terms - m).sum()))


def _normalize_log(logz: np.ndarray) -> np.ndarray:
    m = logz.max()
    if m == -math.inf:
        raise ValueError("no class has observable probability mass")
    p = np.exp(logz - m)
    return p / p.sum()


def _octet_probabilities(octet: Octet, beta: float) -> np.ndarray:
    labels = [l for l in CLASS_ORDER if l in octet.w_star]
    if not labels:
        raise ValueError("empty octet")
    if beta == math.inf:
        # exact p -> 0 limit: lightest class wins, degeneracy splits ties
        w = np.array([octet.w_star[l] for l in labels])
        n = np.array([float(octet.n_star[l]) for l in labels])
        mask = w <= w.min() + WEIGHT_TOL
        p = np.where(mask, n, 0.0)
    else:
        logz = np.array(
            [math.log(octet.n_star[l]) - beta * octet.w_star[l] for l in labels]
        )
        p = np.exp(logz - logz.max())
    p = p / p.sum()
    out = np.zeros(4)
    for l, v in zip(labels, p):
        out[CLASS_ORDER.index(l)] = v
    return out


def class_probabilities(
    source: Octet | Mapping[ClassLabel, ClassHistogram],
    physical_noise: NoiseParams,
    mode: str = "ewd",
) -> np.ndarray:
    """Class probabilities at the physical rate, in I, X, Z, Y order.

    "ewd" uses only the lightest observed chains per class; "all" sums
    every observed chain. Only beta enters, so one histogram set serves
    any physical error rate.
    """
    if mode not in ("ewd", "all"):
        raise ValueError(f"unknown mode {mode!r}")
    beta = physical_noise.beta
    if isinstance(source, Octet):
        if mode == "all":
            raise ValueError("'all' mode needs full histograms, not an octet")
        return _octet_probabilities(source, beta)

    hists = {l: h for l, h in source.items() if h.entries}
    if not hists:
        raise ValueError("no observed chains in any class")
    if mode == "ewd":
        return _octet_probabilities(Octet.from_histograms(hists), beta)

    labels = [l for l in CLASS_ORDER if l in hists]
    logz = np.full(4, -math.inf)
    any_finite = False
    for l in labels:
        entries = hists[l].entries
        lz = _log_partition(list(entries.keys()), list(entries.values()), beta)
        logz[CLASS_ORDER.index(l)] = lz
        any_finite = any_finite or lz > -math.inf
    if not any_finite:
        # all observed chains infinitely suppressed: fall back to lightest rule
        return _octet_probabilities(Octet.from_histograms(hists), math.inf)
    return _normalize_log(logz)


def dominance_diagnostic(h: ClassHistogram, beta_physical: float) -> float:
    """Fraction of a class's observed mass carried by its lightest chains.

    Values near 1 mean the lightest-chain approximation is safe for this
    syndrome at this beta; low values flag that heavier chains matter.
    """
    if not h.entries:
        raise ValueError("no observed chains in class histogram")
    if beta_physical == math.inf:
        return 1.0
    w = np.array(list(h.entries.keys()))
    n = np.array(list(h.entries.values()), dtype=np.float64)
    total = _log_partition(w, n, beta_physical)
    if total == -math.inf:
        return 1.0
    wmin = w[np.isfinite(w)].min()
    sel = w <= wmin + WEIGHT_TOL
    top = _log_partition(w[sel], n[sel], beta_physical)
    return float(math.exp(top - total))


def _dominance_from_weights(weights: np.ndarray, beta: float) -> float:
    if beta == math.inf:
        return 1.0
    counts = np.ones_like(weights)
    total = _log_partition(weights, counts, beta)
    if total == -math.inf:
        return 1.0
    sel = weights <= weights.min() + WEIGHT_TOL
    top = _log_partition(weights[sel], counts[sel], beta)
    return float(math.exp(top - total))


def _trivial_decision(decoder: str, sub_seed: int | None) -> Decision:
    octet = Octet(w_star={ClassLabel.I: 0.0}, n_star={ClassLabel.I: 1})
    return Decision(
        chosen_class=ClassLabel.I,
        probabilities=np.array([1.0, 0.0, 0.0, 0.0]),
        octet=octet,
        dominance={ClassLabel.I: 1.0},
        decoder=decoder,
        sub_seed=sub_seed,
    )


def choose_class(probabilities: np.ndarray, tolerance: float = 0.0) -> ClassLabel:
    """Argmax with the fixed I > Z > X > Y tie order.

    A nonzero tolerance widens the tie set to probabilities within that
    distance of the maximum: Monte Carlo estimators use it so that
    statistically unresolved classes fall back to the same deterministic
    priority as exact ties do.
    """
    top = probabilities.max() - tolerance
    for label in TIE_PRIORITY:
        if probabilities[CLASS_ORDER.index(label)] >= top:
            return label
    raise AssertionError("unreachable: some class always attains the maximum")


def decode(
    layout: CodeLayout,
    s: Syndrome,
    physical_noise: NoiseParams,
    config: SamplerConfig,
    seed: int | None = None,
    mode: str = "ewd",
    retain_histograms: bool = False,
    explore_trivial: bool = False,
    steps: int | None = None,
) -> Decision:
    """Decode one syndrome: explore all four classes, then pick the argmax.

    A trivial (all-zero) syndrome short-circuits to class I unless
    explore_trivial is set. The per-class Metropolis and seeding streams
    are derived from `seed` (defaults to config.seed) and the class
    index, so results are independent of evaluation order.
    """
    s = np.asarray(s, dtype=np.uint8)
    base_seed = config.seed if seed is None else seed
    if not s.any() and not explore_trivial:
        return _trivial_decision("ewd" if mode == "ewd" else "all", base_seed)

    results: dict[ClassLabel, ExploreResult] = {}
    for idx, label in enumerate(CLASS_ORDER):
        rng = generator(derive_seed(base_seed, TAG_INITIAL_CHAIN, idx))
        start = initial_chain(layout, s, label, rng)
        results[label] = explore_class(
            layout,
            physical_noise,
            config,
            start,
            seed=derive_seed(base_seed, TAG_METROPOLIS, idx),
            steps=steps,
        )

    return _decision_from_results(results, physical_noise, mode, base_seed, retain_histograms)


def _decision_from_results(
    results: Mapping[ClassLabel, ExploreResult],
    physical_noise: NoiseParams,
    mode: str,
    sub_seed: int | None,
    retain_histograms: bool,
) -> Decision:
    beta = physical_noise.beta
    octet = Octet()
    logz = np.full(4, -math.inf)
    dominance: dict[ClassLabel, float] = {}
    for label, res in results.items():
        if res.weights.size == 0:
            continue
        octet.w_star[label] = res.w_star
        octet.n_star[label] = res.n_star
        dominance[label] = _dominance_from_weights(res.weights, beta)
        if mode == "all" and beta != math.inf:
            counts = np.ones_like(res.weights)
            logz[CLASS_ORDER.index(label)] = _log_partition(res.weights, counts, beta)

    if not octet.w_star:
        raise ValueError("no observed chains in any class")

    if mode == "ewd" or beta == math.inf:
        probs = _octet_probabilities(octet, beta)
    else:
        if logz.max() == -math.inf:
            probs = _octet_probabilities(octet, math.inf)
        else:
            probs = _normalize_log(logz)

    hists = None
    if retain_histograms:
        hists = {label: res.histogram() for label, res in results.items()}

    return Decision(
        chosen_class=choose_class(probs),
        probabilities=probs,
        octet=octet,
        dominance=dominance,
        histograms=hists,
        decoder="ewd" if mode == "ewd" else "all",
        sub_seed=sub_seed,
    )
