"""Tensor network-formation solver: Python bindings of the C++ core.

Scalar fields are ``(N, N)`` float arrays indexed ``[i, j]`` with ``i`` along
x. Tensor fields are ``(3, N, N)`` arrays holding ``c11, c12, c22``.
"""

from ._core import (
    ConfigError,
    Error,
    ModelParams,
    SourceSpec,
    __version__,
    assemble,
    asymmetry,
    asymmetry_tensor,
    build_source,
    condition_number,
    energy,
    error_richardson,
    error_wasserstein,
    flux_magnitude,
    initial_condition,
    parse_config,
    principal_eigen,
    simulate,
    solve_pressure,
    wasserstein_1d,
)

__all__ = [
    "ConfigError",
    "Error",
    "ModelParams",
    "SourceSpec",
    "__version__",
    "assemble",
    "asymmetry",
    "asymmetry_tensor",
    "build_source",
    "condition_number",
    "energy",
    "error_richardson",
    "error_wasserstein",
    "flux_magnitude",
    "initial_condition",
    "parse_config",
    "principal_eigen",
    "simulate",
    "solve_pressure",
    "wasserstein_1d",
]
