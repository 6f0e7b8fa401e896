"""Sparse Markov graph learning with monotone triangular transport maps."""

from ._sing import (
    IoError,
    NumericalError,
    __version__,
    delta_star,
    estimate_precision,
    gen_gaussian,
    gen_modified_rademacher,
    gen_stochastic_volatility,
    grid_precision,
    induced_graph,
    n_star_from_rho,
    run_sing,
)

__all__ = [
    "IoError",
    "NumericalError",
    "__version__",
    "delta_star",
    "estimate_precision",
    "gen_gaussian",
    "gen_modified_rademacher",
    "gen_stochastic_volatility",
    "grid_precision",
    "induced_graph",
    "n_star_from_rho",
    "run_sing",
]
