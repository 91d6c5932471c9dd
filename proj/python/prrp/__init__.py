"""LU factorization with panel rank revealing pivoting."""

from ._prrp import (
    DimensionError,
    NumericalError,
    ParseError,
    UnsupportedFamilyError,
    block_pairwise,
    block_parallel,
    calu,
    caluprrp,
    families,
    flops_luprrp,
    generate,
    gepp,
    growth_bound_caluprrp,
    growth_bound_luprrp,
    luprrp,
    optimal_layout,
    perf_model,
    presets,
    run,
    run_preset,
    strong_rrqr,
)

__all__ = [
    "DimensionError",
    "NumericalError",
    "ParseError",
    "UnsupportedFamilyError",
    "block_pairwise",
    "block_parallel",
    "calu",
    "caluprrp",
    "families",
    "flops_luprrp",
    "generate",
    "gepp",
    "growth_bound_caluprrp",
    "growth_bound_luprrp",
    "luprrp",
    "optimal_layout",
    "perf_model",
    "presets",
    "run",
    "run_preset",
    "strong_rrqr",
]
