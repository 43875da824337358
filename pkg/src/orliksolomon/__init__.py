"""Orlik-Solomon models for chromatic configuration spaces and hyperplane arrangements."""
from .exactfield import GF2, QQ, get_field
from .graph import SimpleGraph, bond_lattice, chromatic_poly_dc, chromatic_poly_mobius, complete_graph
from .laurent import LaurentPoly2
from .manifold import ManifoldData, manifold_from_json
from .osalg import OSAlgebra, build_os
from .oscomplex import E2Page, OSComplex, build_complex, e2_ring, homology
from .poset import RankedPoset
from .presheaf import diagonal_presheaf, skyscraper, validate

__version__ = "0.1.0"
