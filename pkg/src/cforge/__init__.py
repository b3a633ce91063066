"""Exact computations with bounded complexes of projectives over bound
quiver algebras: decomposition, left enlargements and the degreewise types
of irreducible chain maps."""
from ._kernels import BACKEND
from .algebra import Algebra, ProjMorphism, compose
from .complexes import (ChainMap, Complex, chain_map_space, direct_sum, homotopy_category_hom,
                        is_retraction, is_section, mapping_cone, shift)
from .decomposition import are_isomorphic, decompose, is_indecomposable
from .enlargements import (DiagonalComplex, build_left_enlargement, candidate_Z0,
                           diagonal_indecomposability, diagonalize, diagonalize_all, summand_test)
from .classification import (check_F_shape, classify_method, entry_type, factor_through, split_common,
                             verify_nonirreducible_witness)
from .problem import load_problem, parse_problem

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "Algebra", "ProjMorphism", "compose", "ChainMap", "Complex", "chain_map_space",
    "direct_sum", "homotopy_category_hom", "is_retraction", "is_section", "mapping_cone", "shift",
    "are_isomorphic", "decompose", "is_indecomposable", "DiagonalComplex", "build_left_enlargement",
    "candidate_Z0", "diagonal_indecomposability", "diagonalize", "diagonalize_all", "summand_test",
    "check_F_shape", "classify_method", "entry_type", "factor_through", "split_common",
    "verify_nonirreducible_witness", "load_problem", "parse_problem",
]
