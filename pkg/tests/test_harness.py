import csv
import json
import math
import os

import numpy as np
import pytest

from stabsample.codes import CLASS_ORDER, CodeKind, build_code, compute_syndrome
from stabsample.decoder import SamplerConfig, decode
from stabsample.harness import (
    CSV_COLUMNS,
    ExperimentConfig,
    FailurePoint,
    run_failure_rate,
    run_probability_sweep,
    run_time_to_light,
    run_weight_fraction,
    write_failure_csv,
    write_sweep_csv,
    _weighted_chain,
)
from stabsample.noise import noise_from_alpha, sample_chain


def small_config(**kw):
    base = dict(
        code="xzzx",
        distances=[3],
        p_values=[0.1],
        alpha_x=1.0,
        n_syndromes=200,
        seed=11,
    )
    base.update(kw)
    return ExperimentConfig(**base)


def test_config_validation():
    with pytest.raises(ValueError):
        ExperimentConfig(code="toric")
    with pytest.raises(ValueError):
        ExperimentConfig(distances=[4])
    with pytest.raises(ValueError):
        ExperimentConfig(decoder="mwpm")
    with pytest.raises(ValueError):
        ExperimentConfig(n_syndromes=0)
    with pytest.raises(ValueError):
        ExperimentConfig(eta=10.0, alpha_y=2.0)


def test_config_file_round_trip(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({
        "code": "rotated",
        "distances": [3, 5],
        "p_values": [0.1, 0.15],
        "alpha_x": "inf",
        "n_syndromes": 17,
        "seed": 3,
    }))
    cfg = ExperimentConfig.from_file(str(path))
    assert cfg.kind == CodeKind.ROTATED_SURFACE
    assert cfg.noise_at(0.1).p_z == pytest.approx(0.1)
    path.write_text(json.dumps({"unknown_key": 1}))
    with pytest.raises(ValueError, match="unknown config keys"):
        ExperimentConfig.from_file(str(path))


def test_config_eta_key():
    cfg = small_config(eta=18.3, alpha_y=None)
    n = cfg.noise_at(0.3)
    assert n.eta == pytest.approx(18.3, rel=1e-9)


def test_failure_point_sigma():
    pt = FailurePoint("ewd", "xzzx", 3, 0.1, 1.0, 1.0, n=400, failures=30, seed=1)
    assert pt.p_fail == pytest.approx(0.075)
    assert pt.sigma == pytest.approx(math.sqrt(0.075 * 0.925 / 400))


def test_run_failure_rate_p_zero():
    cfg = small_config(p_values=[0.0], n_syndromes=50)
    (pt,) = run_failure_rate(cfg)
    assert pt.failures == 0
    assert pt.p_fail == 0.0


def test_run_failure_rate_worker_independence(tmp_path):
    out1 = tmp_path / "a.csv"
    out2 = tmp_path / "b.csv"
    cfg1 = small_config(n_syndromes=60, workers=1, out=str(out1))
    cfg2 = small_config(n_syndromes=60, workers=2, out=str(out2))
    p1 = run_failure_rate(cfg1)
    p2 = run_failure_rate(cfg2)
    assert p1[0].failures == p2[0].failures
    assert out1.read_bytes() == out2.read_bytes()  # byte-identical CSV


def test_run_failure_rate_replay_byte_identical(tmp_path):
    out1 = tmp_path / "a.csv"
    out2 = tmp_path / "b.csv"
    run_failure_rate(small_config(n_syndromes=40, out=str(out1)))
    run_failure_rate(small_config(n_syndromes=40, out=str(out2)))
    assert out1.read_bytes() == out2.read_bytes()


def test_run_failure_rate_decisions_log(tmp_path):
    path = tmp_path / "dec.jsonl"
    cfg = small_config(n_syndromes=25, decisions_out=str(path))
    run_failure_rate(cfg)
    lines = [json.loads(l) for l in path.read_text().splitlines()]
    assert len(lines) == 25
    assert [r["index"] for r in lines] == list(range(25))
    for rec in lines:
        assert set(rec["p_class"]) == {"I", "X", "Z", "Y"}
        assert abs(sum(rec["p_class"].values()) - 1.0) < 1e-9
        assert "sub_seed" in rec and "syndrome" in rec


def test_run_failure_rate_against_exact_decoder():
    # EWD failure counts track the exhaustive decoder's on the same chains
    cfg_ewd = small_config(n_syndromes=300, p_values=[0.12])
    cfg_ref = small_config(n_syndromes=300, p_values=[0.12], decoder="exact-mld")
    (ewd,) = run_failure_rate(cfg_ewd)
    (ref,) = run_failure_rate(cfg_ref)
    assert abs(ewd.p_fail - ref.p_fail) <= 0.02


def test_csv_schema(tmp_path):
    path = tmp_path / "out.csv"
    pts = [FailurePoint("ewd", "xzzx", 3, 0.1, 1.0, 1.0, 10, 1, seed=5)]
    write_failure_csv(str(path), pts)
    with open(path) as f:
        rows = list(csv.reader(f))
    assert rows[0] == CSV_COLUMNS
    assert rows[1][0] == "ewd"
    assert float(rows[1][8]) == pytest.approx(0.1)


def test_weighted_chain_properties():
    lay = build_code(CodeKind.XZZX, 5)
    seen = set()
    for i in range(50):
        c = _weighted_chain(lay, 3, seed=i)
        assert int(((c.x | c.z) != 0).sum()) == 3
        seen.add(c.to_string())
    assert len(seen) > 40  # draws are spread out


def test_run_weight_fraction_d3_matches_exact_oracle():
    # exact fraction over all weight-2 chains is 120/324 (exhaustive MLD)
    res = run_weight_fraction(CodeKind.XZZX, 3, 4000, seed=12)
    exact = 120 / 324
    assert abs(res.fraction - exact) <= 3 * res.sigma


def test_run_weight_fraction_rejects_even_d():
    with pytest.raises(ValueError):
        run_weight_fraction(CodeKind.XZZX, 4, 10, seed=0)


def test_run_time_to_light_d3():
    res = run_time_to_light(CodeKind.XZZX, 3, 300, step_budget=25 * 3**5, seed=5)
    found = [s for s in res.steps if s >= 0]
    assert len(found) / len(res.steps) >= 0.99
    assert res.percentile(50) <= res.percentile(95)


def test_run_time_to_light_flags_exhausted():
    # a tiny budget cannot reach the planted weight from a deep scramble
    res = run_time_to_light(CodeKind.XZZX, 5, 40, step_budget=10, seed=6)
    assert res.n_exhausted > 0
    assert res.percentile(95) == math.inf


def test_time_to_light_found_weight_is_target():
    # stopping condition: the recorded minimal weight equals the plant
    from stabsample.decoder import explore_class
    from stabsample.codes import initial_chain, logical_class

    lay = build_code(CodeKind.XZZX, 3)
    noise = noise_from_alpha(0.1, 1.0, 1.0)
    rng = np.random.Generator(np.random.PCG64(8))
    for i in range(20):
        chain = _weighted_chain(lay, 1, seed=100 + i)
        s = compute_syndrome(lay, chain)
        start = initial_chain(lay, s, logical_class(lay, chain), rng)
        res = explore_class(lay, noise, SamplerConfig(seed=3), start, seed=i,
                            steps=25 * 3**5, target_weight=1.0)
        assert res.found_step >= 0
        assert res.w_star == 1.0


def test_run_probability_sweep_consumes_no_rng():
    lay = build_code(CodeKind.XZZX, 5)
    noise = noise_from_alpha(0.15, 1.0, 1.0)
    chain = sample_chain(noise, 25, np.random.Generator(np.random.PCG64(3)))
    s = compute_syndrome(lay, chain)
    dec = decode(lay, s, noise, SamplerConfig(seed=4), retain_histograms=True)
    state_before = np.random.get_state()[1].copy()
    rows = run_probability_sweep(dec.histograms, 1.0, 1.0, np.linspace(0.01, 0.3, 20))
    assert np.array_equal(np.random.get_state()[1], state_before)
    for row in rows:
        assert sum(row[f"ewd_{l.name}"] for l in CLASS_ORDER) == pytest.approx(1.0, abs=1e-12)
        assert sum(row[f"all_{l.name}"] for l in CLASS_ORDER) == pytest.approx(1.0, abs=1e-12)


def test_sweep_trivial_syndrome_identity_dominates():
    lay = build_code(CodeKind.XZZX, 3)
    noise = noise_from_alpha(0.15, 1.0, 1.0)
    dec = decode(lay, np.zeros(8, dtype=np.uint8), noise, SamplerConfig(seed=5),
                 retain_histograms=True, explore_trivial=True)
    rows = run_probability_sweep(dec.histograms, 1.0, 1.0, np.linspace(0.02, 0.4, 12))
    for row in rows:
        others = [row["ewd_X"], row["ewd_Z"], row["ewd_Y"]]
        assert row["ewd_I"] > max(others)


def test_write_sweep_csv_empty_rejected(tmp_path):
    with pytest.raises(ValueError):
        write_sweep_csv(str(tmp_path / "x.csv"), [])


def test_code_equivalence_depolarizing_quick():
    # paired chains, small n: the two codes agree well within noise
    results = {}
    for code in ("xzzx", "rotated"):
        cfg = ExperimentConfig(
            code=code, distances=[3], p_values=[0.12], alpha_x=1.0,
            n_syndromes=1500, seed=21, decoder="exact-mld",
        )
        (pt,) = run_failure_rate(cfg)
        results[code] = pt
    a, b = results["xzzx"], results["rotated"]
    sigma = math.sqrt(a.sigma**2 + b.sigma**2)
    assert abs(a.p_fail - b.p_fail) <= 2 * sigma
