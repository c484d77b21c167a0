"""Monte Carlo chain sampling and decoding for topological stabilizer codes."""

from .codes import (
    CLASS_ORDER,
    ClassLabel,
    CodeKind,
    CodeLayout,
    apply_stabilizer,
    build_code,
    compute_syndrome,
    initial_chain,
    logical_class,
)
from .decoder import (
    ClassHistogram,
    Decision,
    Octet,
    SamplerConfig,
    class_probabilities,
    decode,
    dominance_diagnostic,
    metropolis_explore,
)
from .baselines import PTConfig, exact_mld, mcmc_pt_decode, pure_z_failure_rate
from .noise import (
    NoiseParams,
    alpha_from_eta,
    effective_weight,
    hashing_bound,
    noise_from_alpha,
    noise_from_eta,
    noise_from_p_tilde_z,
    sample_chain,
    uncorrelated_alpha_y,
)
from .pauli import PauliChain, PauliCounts, chain_key, compose, count_paulis

__all__ = [
    "CLASS_ORDER",
    "ClassHistogram",
    "ClassLabel",
    "CodeKind",
    "CodeLayout",
    "Decision",
    "NoiseParams",
    "Octet",
    "PTConfig",
    "PauliChain",
    "PauliCounts",
    "SamplerConfig",
    "alpha_from_eta",
    "apply_stabilizer",
    "build_code",
    "chain_key",
    "class_probabilities",
    "compose",
    "compute_syndrome",
    "count_paulis",
    "decode",
    "dominance_diagnostic",
    "effective_weight",
    "exact_mld",
    "hashing_bound",
    "initial_chain",
    "logical_class",
    "mcmc_pt_decode",
    "metropolis_explore",
    "noise_from_alpha",
    "noise_from_eta",
    "noise_from_p_tilde_z",
    "pure_z_failure_rate",
    "sample_chain",
    "uncorrelated_alpha_y",
]
