"""Benchmark harness: failure-rate curves, weight-fraction and
time-to-lightest-chain experiments, probability sweeps.

Every experiment is driven by one master seed. Per-syndrome work items
derive their sub-seeds from (master, tag, distance index, rate index,
syndrome index), so the number of workers never changes any result; rows
only ever aggregate per-syndrome outcomes that are independent of
scheduling. Workers are processes (STABSAMPLE_WORKERS or the `workers`
config key; default 1).
"""

from __future__ import annotations

import csv
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, asdict

import numpy as np

from ._rng import (
    TAG_SAMPLE_CHAIN,
    TAG_METROPOLIS,
    TAG_WEIGHTED_CHAIN,
    TAG_SCRAMBLE,
    derive_seed,
    generator,
)
from . import pauli
from .baselines import PTConfig, exact_mld_decision, mcmc_pt_decode
from .codes import (
    CLASS_ORDER,
    CodeKind,
    CodeLayout,
    build_code,
    compute_syndrome,
    logical_class,
)
from .decoder import Decision, SamplerConfig, decode, explore_class, class_probabilities
from .noise import NoiseParams, noise_from_alpha, noise_from_eta, parse_alpha
from .pauli import PauliChain

CSV_COLUMNS = [
    "decoder",
    "code",
    "d",
    "p",
    "alpha_x",
    "alpha_y",
    "n",
    "failures",
    "p_fail",
    "sigma",
    "seed",
]


def worker_count(explicit: int | None = None) -> int:
    if explicit is not None:
        return max(1, explicit)
    env = os.environ.get("STABSAMPLE_WORKERS")
    return max(1, int(env)) if env else 1


@dataclass
class ExperimentConfig:
    code: str = "xzzx"
    distances: list[int] = field(default_factory=lambda: [3])
    p_values: list[float] = field(default_factory=lambda: [0.1])
    alpha_x: float = 1.0
    alpha_y: float | None = None
    eta: float | None = None
    decoder: str = "ewd"
    n_syndromes: int = 1000
    seed: int = 0
    p_sample: float = 0.3
    p_sample_by_distance: dict[int, float] = field(default_factory=dict)
    steps: int | None = None
    record_stride: int = 5
    pt_layers: int = 7
    pt_sweeps: int = 2000
    pt_steps_per_sweep: int | None = None
    workers: int | None = None
    out: str | None = None
    decisions_out: str | None = None

    def __post_init__(self):
        self.validate()

    def validate(self):
        if self.code not in ("xzzx", "rotated"):
            raise ValueError(f"unknown code {self.code!r}")
        if self.decoder not in ("ewd", "all", "mcmc-pt", "exact-mld"):
            raise ValueError(f"unknown decoder {self.decoder!r}")
        if self.n_syndromes < 1:
            raise ValueError("n_syndromes must be >= 1")
        for d in self.distances:
            if d < 3 or d % 2 == 0:
                raise ValueError(f"invalid distance {d}: must be odd and >= 3")
        if self.eta is not None and self.alpha_y is not None:
            raise ValueError("give either eta or alpha exponents, not both")

    @property
    def kind(self) -> CodeKind:
        return CodeKind.XZZX if self.code == "xzzx" else CodeKind.ROTATED_SURFACE

    def noise_at(self, p: float) -> NoiseParams:
        if self.eta is not None:
            return noise_from_eta(p, self.eta)
        ax = parse_alpha(self.alpha_x)
        ay = ax if self.alpha_y is None else parse_alpha(self.alpha_y)
        return noise_from_alpha(p, ax, ay)

    def sampler_for(self, d: int) -> SamplerConfig:
        return SamplerConfig(
            p_sample=self.p_sample_by_distance.get(d, self.p_sample),
            steps=self.steps,
            record_stride=self.record_stride,
            seed=self.seed,
        )

    @classmethod
    def from_file(cls, path: str) -> "ExperimentConfig":
        with open(path) as f:
            raw = json.load(f)
        if "p_sample_by_distance" in raw:
            raw["p_sample_by_distance"] = {
                int(k): float(v) for k, v in raw["p_sample_by_distance"].items()
            }
        known = {f.name for f in cls.__dataclass_fields__.values()}  # type: ignore[attr-defined]
        unknown = set(raw) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**raw)


@dataclass
class FailurePoint:
    decoder: str
    code: str
    d: int
    p: float
    alpha_x: float
    alpha_y: float
    n: int
    failures: int
    seed: int

    @property
    def p_fail(self) -> float:
        return self.failures / self.n

    @property
    def sigma(self) -> float:
        return math.sqrt(self.p_fail * (1.0 - self.p_fail) / self.n)

    def as_row(self) -> list:
        return [
            self.decoder,
            self.code,
            self.d,
            self.p,
            self.alpha_x,
            self.alpha_y,
            self.n,
            self.failures,
            repr(self.p_fail),
            repr(self.sigma),
            self.seed,
        ]


def write_failure_csv(path: str, points: list[FailurePoint]):
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(CSV_COLUMNS)
        for pt in points:
            w.writerow(pt.as_row())


# -- per-worker state ---------------------------------------------------------

_WORKER: dict = {}


def _init_worker(config_dict: dict):
    cfg = ExperimentConfig(**config_dict)
    _WORKER["cfg"] = cfg
    _WORKER["layouts"] = {}


def _layout(cfg: ExperimentConfig, d: int) -> CodeLayout:
    layouts = _WORKER.setdefault("layouts", {})
    key = (cfg.code, d)
    if key not in layouts:
        layouts[key] = build_code(cfg.kind, d)
    return layouts[key]


def _decode_with(cfg: ExperimentConfig, layout, s, noise, sub_seed: int) -> Decision:
    if cfg.decoder in ("ewd", "all"):
        dec = decode(
            layout,
            s,
            noise,
            cfg.sampler_for(layout.distance),
            seed=sub_seed,
            mode=cfg.decoder,
        )
    elif cfg.decoder == "mcmc-pt":
        pt = PTConfig(
            n_layers=cfg.pt_layers,
            steps_per_sweep=cfg.pt_steps_per_sweep,
            total_sweeps=cfg.pt_sweeps,
            seed=cfg.seed,
        )
        dec = mcmc_pt_decode(layout, s, noise, pt, seed=sub_seed)
    else:
        dec = exact_mld_decision(layout, s, noise)
        dec.sub_seed = sub_seed
    return dec


def _failure_task(args: tuple) -> tuple[int, bool, dict]:
    """One syndrome: sample a chain, decode, compare classes."""
    d_idx, p_idx, i = args
    cfg: ExperimentConfig = _WORKER["cfg"]
    d = cfg.distances[d_idx]
    p = cfg.p_values[p_idx]
    layout = _layout(cfg, d)
    noise = cfg.noise_at(p)

    chain_seed = derive_seed(cfg.seed, TAG_SAMPLE_CHAIN, d_idx, p_idx, i)
    chain = _sample(noise, layout.n_qubits, chain_seed)
    s = compute_syndrome(layout, chain)
    true_class = logical_class(layout, chain)

    sub_seed = derive_seed(cfg.seed, TAG_METROPOLIS, d_idx, p_idx, i)
    dec = _decode_with(cfg, layout, s, noise, sub_seed)
    failed = dec.chosen_class != true_class
    record = dec.to_record(s)
    record.update({"d": d, "p": p, "index": i, "true_class": true_class.name})
    return i, failed, record


def _sample(noise: NoiseParams, n_qubits: int, seed: int) -> PauliChain:
    from .noise import sample_chain

    return sample_chain(noise, n_qubits, generator(seed))


def _run_tasks(cfg: ExperimentConfig, task_fn, tasks: list, workers: int):
    if workers <= 1:
        _init_worker(_config_dict(cfg))
        return [task_fn(t) for t in tasks]
    with ProcessPoolExecutor(
        max_workers=workers, initializer=_init_worker, initargs=(_config_dict(cfg),)
    ) as pool:
        chunk = max(1, len(tasks) // (workers * 16))
        return list(pool.map(task_fn, tasks, chunksize=chunk))


def _config_dict(cfg: ExperimentConfig) -> dict:
    return asdict(cfg)


def run_failure_rate(cfg: ExperimentConfig) -> list[FailurePoint]:
    """Logical failure rate per (d, p): the fraction of sampled chains not
    in the decoder's most likely class for their syndrome."""
    workers = worker_count(cfg.workers)
    points: list[FailurePoint] = []
    decisions_sink = open(cfg.decisions_out, "w") if cfg.decisions_out else None
    try:
        for d_idx, d in enumerate(cfg.distances):
            for p_idx, p in enumerate(cfg.p_values):
                tasks = [(d_idx, p_idx, i) for i in range(cfg.n_syndromes)]
                results = _run_tasks(cfg, _failure_task, tasks, workers)
                results.sort(key=lambda r: r[0])
                failures = sum(1 for _, failed, _ in results if failed)
                noise = cfg.noise_at(p)
                points.append(
                    FailurePoint(
                        decoder=cfg.decoder,
                        code=cfg.code,
                        d=d,
                        p=p,
                        alpha_x=noise.alpha_x,
                        alpha_y=noise.alpha_y,
                        n=cfg.n_syndromes,
                        failures=failures,
                        seed=cfg.seed,
                    )
                )
                if decisions_sink is not None:
                    for _, _, record in results:
                        decisions_sink.write(json.dumps(record) + "\n")
    finally:
        if decisions_sink is not None:
            decisions_sink.close()
    if cfg.out:
        write_failure_csv(cfg.out, points)
    return points


# -- weight-fraction experiment ----------------------------------------------


def _weighted_chain(layout: CodeLayout, n_errors: int, seed: int) -> PauliChain:
    """Uniformly random chain with exactly n_errors non-identity sites."""
    rng = generator(seed)
    sites = rng.choice(layout.n_qubits, size=n_errors, replace=False)
    cats = rng.integers(1, 4, size=n_errors)  # 1=X, 2=Z, 3=Y
    c = PauliChain.identity(layout.n_qubits)
    c.x[sites] = cats & 1
    c.z[sites] = cats >> 1
    return c


def _weight_fraction_task(args: tuple) -> tuple[int, bool]:
    i, d, steps, p_eval = args
    cfg: ExperimentConfig = _WORKER["cfg"]
    layout = _layout(cfg, d)
    noise = cfg.noise_at(p_eval)
    chain = _weighted_chain(layout, (d + 1) // 2, derive_seed(cfg.seed, TAG_WEIGHTED_CHAIN, i))
    s = compute_syndrome(layout, chain)
    true_class = logical_class(layout, chain)
    dec = decode(
        layout,
        s,
        noise,
        cfg.sampler_for(d),
        seed=derive_seed(cfg.seed, TAG_METROPOLIS, i),
        steps=steps,
    )
    return i, dec.chosen_class != true_class


@dataclass
class WeightFractionResult:
    d: int
    n_chains: int
    failures: int

    @property
    def fraction(self) -> float:
        return self.failures / self.n_chains

    @property
    def sigma(self) -> float:
        return math.sqrt(self.fraction * (1.0 - self.fraction) / self.n_chains)


def run_weight_fraction(
    kind: CodeKind,
    d: int,
    n_chains: int,
    seed: int,
    steps: int | None = None,
    p_eval: float = 1e-3,
    p_sample: float = 0.3,
    workers: int | None = None,
) -> WeightFractionResult:
    """Failure fraction of uniform weight-(d+1)/2 chains under depolarizing
    noise, decoded in the p -> 0 limit.

    These are the lightest chains that can fail at all, so the fraction
    fixes the leading low-p coefficient of the failure rate. p_eval sits
    far below every class-probability crossing at these sizes, making the
    decision equal to the (min w*, max N*) limit rule.
    """
    if d < 3 or d % 2 == 0:
        raise ValueError(f"invalid distance {d}: must be odd and >= 3")
    cfg = ExperimentConfig(
        code="xzzx" if kind == CodeKind.XZZX else "rotated",
        distances=[d],
        p_values=[p_eval],
        alpha_x=1.0,
        n_syndromes=n_chains,
        seed=seed,
        p_sample=p_sample,
    )
    tasks = [(i, d, steps, p_eval) for i in range(n_chains)]
    results = _run_tasks(cfg, _weight_fraction_task, tasks, worker_count(workers))
    failures = sum(1 for _, failed in results if failed)
    return WeightFractionResult(d=d, n_chains=n_chains, failures=failures)


# -- time-to-lightest-chain experiment ----------------------------------------


def _time_to_light_task(args: tuple) -> tuple[int, int]:
    i, d, step_budget, scramble_factor = args
    cfg: ExperimentConfig = _WORKER["cfg"]
    layout = _layout(cfg, d)
    noise = cfg.noise_at(0.1)  # depolarizing weights; p itself is irrelevant here
    target = (d - 1) // 2

    chain = _weighted_chain(layout, target, derive_seed(cfg.seed, TAG_WEIGHTED_CHAIN, i))
    s = compute_syndrome(layout, chain)
    base_class = logical_class(layout, chain)

    best = -1
    for idx, label in enumerate(CLASS_ORDER):
        rep = layout.logical(label * base_class)
        start = chain if rep is None else pauli.compose(chain, rep)
        start = _scrambled(layout, start, scramble_factor, derive_seed(cfg.seed, TAG_SCRAMBLE, i, idx))
        res = explore_class(
            layout,
            noise,
            cfg.sampler_for(d),
            start,
            seed=derive_seed(cfg.seed, TAG_METROPOLIS, i, idx),
            steps=step_budget,
            target_weight=float(target),
        )
        if res.found_step >= 0 and (best < 0 or res.found_step < best):
            best = res.found_step
    return i, best


def _scrambled(layout: CodeLayout, c: PauliChain, factor: int, seed: int) -> PauliChain:
    from ._kernels import scramble_kernel

    xw, zw = pauli.pack_chain(c)
    counts = np.bincount(c.x + 2 * c.z, minlength=4).astype(np.int64)
    scramble_kernel(
        xw, zw, counts, layout.gen_w0, layout.gen_nw, layout.gen_xw, layout.gen_zw,
        np.int64(factor * layout.n_qubits), np.uint64(seed),
    )
    return pauli.unpack_chain(xw, zw, layout.n_qubits)


@dataclass
class TimeToLightResult:
    d: int
    step_budget: int
    steps: list[int]  # -1 where the budget ran out

    @property
    def n_exhausted(self) -> int:
        return sum(1 for s in self.steps if s < 0)

    def percentile(self, q: float) -> float:
        """Order-statistic percentile; exhausted instances count as +inf."""
        vals = sorted(math.inf if s < 0 else float(s) for s in self.steps)
        rank = min(len(vals) - 1, max(0, math.ceil(q / 100.0 * len(vals)) - 1))
        return vals[rank]


def run_time_to_light(
    kind: CodeKind,
    d: int,
    n_instances: int,
    step_budget: int,
    seed: int,
    scramble_factor: int = 100,
    p_sample: float = 0.3,
    workers: int | None = None,
) -> TimeToLightResult:
    """Per-class Metropolis attempts needed to rediscover a planted
    minimal-weight chain.

    Each instance plants a random weight-(d-1)/2 chain, hides it by
    scrambling with scramble_factor * d^2 random generators (per class,
    after shifting into that class with a logical), and counts attempts
    until any class records a chain of the planted weight.
    """
    if d < 3 or d % 2 == 0:
        raise ValueError(f"invalid distance {d}: must be odd and >= 3")
    cfg = ExperimentConfig(
        code="xzzx" if kind == CodeKind.XZZX else "rotated",
        distances=[d],
        p_values=[0.1],
        alpha_x=1.0,
        n_syndromes=n_instances,
        seed=seed,
        p_sample=p_sample,
    )
    tasks = [(i, d, step_budget, scramble_factor) for i in range(n_instances)]
    results = _run_tasks(cfg, _time_to_light_task, tasks, worker_count(workers))
    results.sort(key=lambda r: r[0])
    return TimeToLightResult(d=d, step_budget=step_budget, steps=[s for _, s in results])


# -- probability sweeps --------------------------------------------------------


def run_probability_sweep(
    histograms,
    alpha_x: float,
    alpha_y: float,
    p_grid,
) -> list[dict]:
    """Re-evaluate class probabilities at each p from stored histograms.

    Pure post-processing: consumes no randomness and never touches the
    sampler, demonstrating the error-rate-agnostic property.
    """
    rows = []
    for p in p_grid:
        noise = noise_from_alpha(float(p), alpha_x, alpha_y)
        row = {"p": float(p)}
        for mode in ("ewd", "all"):
            probs = class_probabilities(histograms, noise, mode=mode)
            for label, value in zip(CLASS_ORDER, probs):
                row[f"{mode}_{label.name}"] = float(value)
        rows.append(row)
    return rows


def write_sweep_csv(path: str, rows: list[dict]):
    if not rows:
        raise ValueError("empty sweep")
    cols = list(rows[0].keys())
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(cols)
        for row in rows:
            w.writerow([repr(row[c]) if isinstance(row[c], float) else row[c] for c in cols])


def write_histogram_csv(path: str, histograms):
    """Per-class weight histogram rows (class, w, count)."""
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["class", "w", "count"])
        for label in CLASS_ORDER:
            h = histograms.get(label)
            if h is None:
                continue
            for weight in sorted(h.entries):
                w.writerow([label.name, repr(weight), h.entries[weight]])
