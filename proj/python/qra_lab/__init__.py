"""Python bindings for the qra reservoir autoencoder core."""

from ._core import (
    ConfigError,
    DataError,
    IoError,
    NoiseProfile,
    als_single_c,
    apply_shot_noise,
    compute_d_aug,
    encode,
    feature_dimension,
    generate_key,
    noise_parameter_count,
    paired_t_test,
    ridge_solve,
    run_sequence,
    run_spec,
    two_phase,
    validate,
    wilcoxon_signed_rank,
)

__all__ = [
    "ConfigError",
    "DataError",
    "IoError",
    "NoiseProfile",
    "als_single_c",
    "apply_shot_noise",
    "compute_d_aug",
    "encode",
    "feature_dimension",
    "generate_key",
    "noise_parameter_count",
    "paired_t_test",
    "ridge_solve",
    "run_sequence",
    "run_spec",
    "two_phase",
    "validate",
    "wilcoxon_signed_rank",
]
