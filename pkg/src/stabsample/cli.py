"""Command-line entry points for the benchmark harness."""

from __future__ import annotations

import argparse
import csv
import json
import sys

import numpy as np

from ._rng import TAG_SAMPLE_CHAIN, derive_seed, generator
from .baselines import exact_mld_decision, pure_z_failure_rate
from .codes import CodeKind, build_code, compute_syndrome, describe, syndrome_from_string
from .decoder import SamplerConfig, decode
from .harness import (
    ExperimentConfig,
    run_failure_rate,
    run_probability_sweep,
    run_time_to_light,
    run_weight_fraction,
    worker_count,
    write_histogram_csv,
    write_sweep_csv,
)
from .noise import noise_from_alpha, parse_alpha, sample_chain


def _kind(name: str) -> CodeKind:
    return CodeKind.XZZX if name == "xzzx" else CodeKind.ROTATED_SURFACE


def _cmd_benchmark(args) -> int:
    if args.config:
        cfg = ExperimentConfig.from_file(args.config)
    else:
        cfg = ExperimentConfig()
    for key in ("seed", "p_sample", "steps", "decoder", "out", "workers"):
        val = getattr(args, key)
        if val is not None:
            setattr(cfg, key, val)
    if args.decisions_out is not None:
        cfg.decisions_out = args.decisions_out
    cfg.validate()
    points = run_failure_rate(cfg)
    for pt in points:
        print(
            f"{pt.decoder} {pt.code} d={pt.d} p={pt.p:g}: "
            f"p_fail={pt.p_fail:.6f} +- {pt.sigma:.6f} ({pt.failures}/{pt.n})"
        )
    if cfg.out:
        print(f"wrote {cfg.out}")
    return 0


def _cmd_weight_fraction(args) -> int:
    res = run_weight_fraction(
        _kind(args.kind),
        args.distance,
        args.n,
        args.seed,
        steps=args.steps,
        p_eval=args.p_eval,
        workers=args.workers,
    )
    print(
        f"weight-{(args.distance + 1) // 2} failure fraction d={args.distance}: "
        f"{res.fraction:.6f} +- {res.sigma:.6f} ({res.failures}/{res.n_chains})"
    )
    if args.out:
        with open(args.out, "w", newline="") as f:
            w = csv.writer(f)
            w.writerow(["code", "d", "n", "failures", "fraction", "sigma", "seed"])
            w.writerow(
                [args.kind, args.distance, res.n_chains, res.failures,
                 repr(res.fraction), repr(res.sigma), args.seed]
            )
        print(f"wrote {args.out}")
    return 0


def _cmd_time_to_light(args) -> int:
    res = run_time_to_light(
        _kind(args.kind),
        args.distance,
        args.n,
        args.budget,
        args.seed,
        scramble_factor=args.scramble_factor,
        workers=args.workers,
    )
    p50, p95 = res.percentile(50), res.percentile(95)
    print(
        f"time-to-light d={args.distance}: median={p50:g} p95={p95:g} attempts "
        f"({res.n_exhausted}/{len(res.steps)} exhausted at budget {args.budget})"
    )
    if args.out:
        with open(args.out, "w", newline="") as f:
            w = csv.writer(f)
            w.writerow(["code", "d", "instance", "steps", "budget", "seed"])
            for i, s in enumerate(res.steps):
                w.writerow([args.kind, args.distance, i, s, args.budget, args.seed])
        print(f"wrote {args.out}")
    return 0


def _cmd_sweep(args) -> int:
    layout = build_code(_kind(args.kind), args.distance)
    alpha_x = parse_alpha(args.alpha_x)
    alpha_y = alpha_x if args.alpha_y is None else parse_alpha(args.alpha_y)
    if args.syndrome:
        s = syndrome_from_string(args.syndrome)
    else:
        gen_noise = noise_from_alpha(args.p_gen, alpha_x, alpha_y)
        rng = generator(derive_seed(args.seed, TAG_SAMPLE_CHAIN))
        chain = sample_chain(gen_noise, layout.n_qubits, rng)
        s = compute_syndrome(layout, chain)
    sample_noise = noise_from_alpha(args.p_gen, alpha_x, alpha_y)
    cfg = SamplerConfig(p_sample=args.p_sample, steps=args.steps, seed=args.seed)
    dec = decode(layout, s, sample_noise, cfg, retain_histograms=True, explore_trivial=True)
    grid = np.linspace(args.p_min, args.p_max, args.points)
    rows = run_probability_sweep(dec.histograms, alpha_x, alpha_y, grid)
    write_sweep_csv(args.out, rows)
    print(f"wrote {args.out} ({len(rows)} grid points)")
    if args.hist_out:
        write_histogram_csv(args.hist_out, dec.histograms)
        print(f"wrote {args.hist_out}")
    return 0


def _cmd_oracle_check(args) -> int:
    layout = build_code(_kind(args.kind), args.distance)
    noise = noise_from_alpha(args.p, 1.0, 1.0)
    cfg = SamplerConfig(seed=args.seed)
    agree = 0
    for i in range(args.n):
        rng = generator(derive_seed(args.seed, TAG_SAMPLE_CHAIN, i))
        chain = sample_chain(noise, layout.n_qubits, rng)
        s = compute_syndrome(layout, chain)
        dec = decode(layout, s, noise, cfg, seed=derive_seed(args.seed, 0xC, i))
        ref = exact_mld_decision(layout, s, noise)
        agree += dec.chosen_class == ref.chosen_class
    frac = agree / args.n
    print(f"agreement with exhaustive decoder: {frac:.4f} ({agree}/{args.n})")
    return 0


def _cmd_codes(args) -> int:
    layout = build_code(_kind(args.kind), args.distance)
    print(describe(layout))
    return 0


def _cmd_pure_z(args) -> int:
    grid = np.arange(args.p_min, args.p_max + 1e-12, args.step)
    with open(args.out, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["d", "p", "p_fail"])
        for p in grid:
            w.writerow([args.distance, repr(float(p)), repr(pure_z_failure_rate(args.distance, float(p)))])
    print(f"wrote {args.out} ({len(grid)} points)")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="stabsample", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    b = sub.add_parser("benchmark", help="logical failure-rate curves")
    b.add_argument("--config", help="JSON experiment config file")
    b.add_argument("--seed", type=int, default=None)
    b.add_argument("--p-sample", dest="p_sample", type=float, default=None)
    b.add_argument("--steps", type=int, default=None)
    b.add_argument("--decoder", choices=["ewd", "all", "mcmc-pt", "exact-mld"], default=None)
    b.add_argument("--out", default=None)
    b.add_argument("--decisions-out", dest="decisions_out", default=None)
    b.add_argument("--workers", type=int, default=None)
    b.set_defaults(fn=_cmd_benchmark)

    wf = sub.add_parser("weight-fraction", help="failure fraction of weight-(d+1)/2 chains")
    wf.add_argument("--kind", choices=["xzzx", "rotated"], default="xzzx")
    wf.add_argument("--distance", type=int, required=True)
    wf.add_argument("--n", type=int, required=True)
    wf.add_argument("--seed", type=int, default=0)
    wf.add_argument("--steps", type=int, default=None)
    wf.add_argument("--p-eval", dest="p_eval", type=float, default=1e-3)
    wf.add_argument("--workers", type=int, default=None)
    wf.add_argument("--out", default=None)
    wf.set_defaults(fn=_cmd_weight_fraction)

    tl = sub.add_parser("time-to-light", help="attempts to rediscover a planted light chain")
    tl.add_argument("--kind", choices=["xzzx", "rotated"], default="xzzx")
    tl.add_argument("--distance", type=int, required=True)
    tl.add_argument("--n", type=int, required=True)
    tl.add_argument("--budget", type=int, required=True)
    tl.add_argument("--seed", type=int, default=0)
    tl.add_argument("--scramble-factor", dest="scramble_factor", type=int, default=100)
    tl.add_argument("--workers", type=int, default=None)
    tl.add_argument("--out", default=None)
    tl.set_defaults(fn=_cmd_time_to_light)

    sw = sub.add_parser("sweep", help="class probabilities vs p from one decoded syndrome")
    sw.add_argument("--kind", choices=["xzzx", "rotated"], default="xzzx")
    sw.add_argument("--distance", type=int, required=True)
    sw.add_argument("--p-gen", dest="p_gen", type=float, default=0.15)
    sw.add_argument("--alpha-x", dest="alpha_x", default="1")
    sw.add_argument("--alpha-y", dest="alpha_y", default=None)
    sw.add_argument("--syndrome", default=None, help="explicit 0/1 syndrome bits")
    sw.add_argument("--seed", type=int, default=0)
    sw.add_argument("--p-sample", dest="p_sample", type=float, default=0.3)
    sw.add_argument("--steps", type=int, default=None)
    sw.add_argument("--p-min", dest="p_min", type=float, default=0.01)
    sw.add_argument("--p-max", dest="p_max", type=float, default=0.4)
    sw.add_argument("--points", type=int, default=50)
    sw.add_argument("--out", required=True)
    sw.add_argument("--hist-out", dest="hist_out", default=None)
    sw.set_defaults(fn=_cmd_sweep)

    oc = sub.add_parser("oracle-check", help="agreement with the exhaustive decoder")
    oc.add_argument("--kind", choices=["xzzx", "rotated"], default="xzzx")
    oc.add_argument("--distance", type=int, default=3)
    oc.add_argument("--p", type=float, default=0.15)
    oc.add_argument("--n", type=int, default=2000)
    oc.add_argument("--seed", type=int, default=0)
    oc.set_defaults(fn=_cmd_oracle_check)

    cd = sub.add_parser("codes", help="inspect code layouts")
    cd_sub = cd.add_subparsers(dest="codes_command", required=True)
    dsc = cd_sub.add_parser("describe", help="dump stabilizers and logicals")
    dsc.add_argument("--kind", choices=["xzzx", "rotated"], required=True)
    dsc.add_argument("--distance", type=int, required=True)
    dsc.set_defaults(fn=_cmd_codes)

    pz = sub.add_parser("pure-z", help="analytic pure-phase-noise failure table")
    pz.add_argument("--distance", type=int, required=True)
    pz.add_argument("--p-min", dest="p_min", type=float, default=0.05)
    pz.add_argument("--p-max", dest="p_max", type=float, default=0.5)
    pz.add_argument("--step", type=float, default=0.05)
    pz.add_argument("--out", required=True)
    pz.set_defaults(fn=_cmd_pure_z)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
