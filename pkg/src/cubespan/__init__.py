"""Box points of rational lattices, their linear span, and the character
sums that control it."""

from .lattice import (
    CubePoint,
    LatticeSpec,
    QuotientGroup,
    ResourceLimitError,
    build_quotient,
    cube_points,
    h_star,
    negate_point,
    simplex_dual_lattice,
)
from .span import (
    coordinate_classes,
    iota_kappa,
    relation_system,
    sebo_check,
    span_dimension,
    vanishing_functionals,
    verify_terminal_lemma,
)

__version__ = "0.1.0"

__all__ = [
    "CubePoint",
    "LatticeSpec",
    "QuotientGroup",
    "ResourceLimitError",
    "build_quotient",
    "coordinate_classes",
    "cube_points",
    "h_star",
    "iota_kappa",
    "negate_point",
    "relation_system",
    "sebo_check",
    "simplex_dual_lattice",
    "span_dimension",
    "vanishing_functionals",
    "verify_terminal_lemma",
]
