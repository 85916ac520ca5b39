"""Crossing-or-witness certificates for covers of discrete boxes.

Also provides finite, fixed-scale checks from coarse geometry: entourages,
E-chains, E-boxes and cover multiplicity.
"""

from .box import BoxShape, CellSet, cheb_dist, enumerate_unit_cubes, on_face, set_diameter, unit_neighbors
from .coarse import (
    AbstractCover,
    Entourage,
    GroundSet,
    PermutationAction,
    chain_component,
    compose,
    cover_multiplicity,
    finitary_bound,
    group_entourage,
    is_e_chain,
    is_uniformly_bounded,
    product_entourage,
)
from .dichotomy import (
    Cover,
    Crossing,
    Witness,
    brute_force_report,
    chain_components,
    connects_opposite_faces,
    hex_corollary_check,
    unit_multiplicity,
    verify_certificate,
)
from .errors import Check, InternalContradiction, InvalidInputError, ResourceLimitError

__version__ = "0.1.0"

__all__ = [
    "AbstractCover", "BoxShape", "CellSet", "Check", "Cover", "Crossing", "Entourage", "GroundSet",
    "InternalContradiction", "InvalidInputError", "PermutationAction", "ResourceLimitError", "Witness",
    "brute_force_report", "chain_component", "chain_components", "cheb_dist", "compose",
    "connects_opposite_faces", "cover_multiplicity", "enumerate_unit_cubes", "finitary_bound",
    "group_entourage", "hex_corollary_check", "is_e_chain", "is_uniformly_bounded", "on_face",
    "product_entourage", "set_diameter", "unit_multiplicity", "unit_neighbors", "verify_certificate",
]
