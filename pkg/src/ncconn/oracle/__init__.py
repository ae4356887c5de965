from .koszul import (
    ModeError,
    christoffel_symbols,
    classical_curvature_oracle,
    classical_riemann,
    koszul_oracle,
)
from .solver import ALL_CONSTRAINTS, BIMODULE, HERMITIAN, TORSION, ConnectionSpace, fits_box, solve_connection_space

__all__ = [
    "ALL_CONSTRAINTS",
    "BIMODULE",
    "HERMITIAN",
    "TORSION",
    "ConnectionSpace",
    "ModeError",
    "christoffel_symbols",
    "classical_curvature_oracle",
    "classical_riemann",
    "fits_box",
    "koszul_oracle",
    "solve_connection_space",
]
