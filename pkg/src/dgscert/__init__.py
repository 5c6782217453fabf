"""Exact certificates for graphs determined by their generalized spectrum."""

__version__ = "0.1.0"

from .certify import Kind, LevelBound, Verdict, certify, find_t0, level_bound, null_vector_check, phi_shifted
from .certify import snf_profile_check, theorem1_check
from .cospectral import RroMatrix, generalized_cospectral, level, level_divisibility_check, recover_q, verify_q_action
from .graph import Graph, adjacency, are_isomorphic, complement, emit_graph6, parse_graph6
from .linalg import CharPoly, IntMatrix, RatMatrix, SnfDecomposition, charpoly, det, nullspace_mod_p, rank_mod_p
from .linalg import rat_inverse, snf
from .walk import annihilator_poly, bar_walk_matrix, hat_walk_matrix, m_matrix_even, shifted_walk_matrix, walk_matrix

__all__ = [
    "CharPoly", "Graph", "IntMatrix", "Kind", "LevelBound", "RatMatrix", "RroMatrix", "SnfDecomposition",
    "Verdict", "adjacency", "annihilator_poly", "are_isomorphic", "bar_walk_matrix", "certify", "charpoly",
    "complement", "det", "emit_graph6", "find_t0", "generalized_cospectral", "hat_walk_matrix", "level",
    "level_bound", "level_divisibility_check", "m_matrix_even", "null_vector_check", "nullspace_mod_p",
    "parse_graph6", "phi_shifted", "rank_mod_p", "rat_inverse", "recover_q", "shifted_walk_matrix", "snf",
    "snf_profile_check", "theorem1_check", "verify_q_action", "walk_matrix",
]
