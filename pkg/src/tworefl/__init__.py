"""Exact lattice tools for bounding 2-reflective lattices of signature (2, n)."""

from .discform import discriminant_form, milgram_signature, pi_L
from .lattice import GramLattice, load_lattice, parse_lattice
from .pipeline import Config, classify
from .pool import compute_a_n, compute_b_n, construct_generic_K
from .weilrep import borcherds_obstruction, build_weilrep

__all__ = [
    "Config",
    "GramLattice",
    "borcherds_obstruction",
    "build_weilrep",
    "classify",
    "compute_a_n",
    "compute_b_n",
    "construct_generic_K",
    "discriminant_form",
    "load_lattice",
    "milgram_signature",
    "parse_lattice",
    "pi_L",
]
