"""Amyloid-beta and tau spreading with neuron health on brain graphs."""

from ._proteograph import (
    ArgumentError,
    ConfigError,
    Error,
    Graph,
    IsolatedVertexError,
    ParseError,
    StateCorruptionError,
    StepSizeError,
    __version__,
    amyloid_source,
    apply_laplacian,
    case_names,
    coalescence_terms,
    generate_synthetic,
    initial_density,
    load_edge_csv,
    load_graphml,
    malfunction_mean,
    preset_config,
    seed_profile,
    simulate,
)

__all__ = [
    "ArgumentError",
    "ConfigError",
    "Error",
    "Graph",
    "IsolatedVertexError",
    "ParseError",
    "StateCorruptionError",
    "StepSizeError",
    "__version__",
    "amyloid_source",
    "apply_laplacian",
    "case_names",
    "coalescence_terms",
    "generate_synthetic",
    "initial_density",
    "load_edge_csv",
    "load_graphml",
    "malfunction_mean",
    "preset_config",
    "seed_profile",
    "simulate",
]
