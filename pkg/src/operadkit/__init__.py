"""Quadratic operads, the rewriting method for Koszulness, Koszul duality and
homotopy transfer of A-infinity, L-infinity and multicomplex structures, all
over the rationals."""

from .kernels import BACKEND
from .koszul_dual import koszul_dual_presentation
from .presentation import Presentation, parse_presentation, preset
from .rewriting import RewriteSystem, check_confluence, enumerate_pbw_basis, reduce_normal_form

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "Presentation", "RewriteSystem", "check_confluence", "enumerate_pbw_basis",
    "koszul_dual_presentation", "parse_presentation", "preset", "reduce_normal_form",
]
