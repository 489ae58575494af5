"""Homotopy transfer: A-infinity, L-infinity, C-infinity and multicomplex structures."""

from .linfinity import (LInfinityStructure, antisymmetrize_linfinity, check_linfinity_relations,
                        check_shuffle_vanishing)
from .massey import FormalityReport, MasseyError, MasseyResult, formality_report, massey_triple
from .multicomplex import (Bicomplex, Multicomplex, check_dinfinity_relations, load_bicomplex,
                           second_page_agrees, staircase_bicomplex, transfer_multicomplex,
                           zigzag_d2)
from .structures import (AInfinityMorphism, AInfinityStructure, DgAlgebra, RelationReport,
                         StructureError, check_ainfinity_relations, check_morphism_relations,
                         compose_morphisms, load_dga)
from .transfer import (build_iota_morphism, transfer_ainfinity, transfer_with_morphism,
                       tree_sum_transfer)

__all__ = [
    "AInfinityMorphism", "AInfinityStructure", "Bicomplex", "DgAlgebra", "FormalityReport",
    "LInfinityStructure", "MasseyError", "MasseyResult", "Multicomplex", "RelationReport",
    "StructureError", "antisymmetrize_linfinity", "build_iota_morphism",
    "check_ainfinity_relations", "check_dinfinity_relations", "check_linfinity_relations",
    "check_morphism_relations", "check_shuffle_vanishing", "compose_morphisms",
    "formality_report", "load_bicomplex", "load_dga", "massey_triple", "second_page_agrees",
    "staircase_bicomplex", "transfer_ainfinity", "transfer_multicomplex", "transfer_with_morphism",
    "tree_sum_transfer", "zigzag_d2",
]
