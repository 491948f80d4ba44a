"""
Propositional structures of k-box no-signaling models and the exact analysis
of their state spaces.
"""

from .algebra import CellSpace, EffectStructure, Proposition, StructureKind, even_subsets_logic
from .box_model import BoxInput, BoxSpec, binary_spec, build_one_box_logic, load_box_spec
from .box_product import generate_effect_algebra, generate_orthoposet, localized_elements
from .errors import BoxLogicError

__all__ = [
    "BoxInput",
    "BoxLogicError",
    "BoxSpec",
    "CellSpace",
    "EffectStructure",
    "Proposition",
    "StructureKind",
    "binary_spec",
    "build_one_box_logic",
    "even_subsets_logic",
    "generate_effect_algebra",
    "generate_orthoposet",
    "load_box_spec",
    "localized_elements",
]
