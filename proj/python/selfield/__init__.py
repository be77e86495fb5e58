"""Self-consistent hydrogen model: shooting and variational solvers."""

from ._selfield import (
    __version__,
    field_self_energy,
    laguerre,
    linear_epsilon,
    rhs,
    series_start,
    solve,
    variational,
)

__all__ = [
    "__version__",
    "field_self_energy",
    "laguerre",
    "linear_epsilon",
    "rhs",
    "series_start",
    "solve",
    "variational",
]
