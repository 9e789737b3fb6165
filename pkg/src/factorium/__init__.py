"""Finite universal algebra: congruences, direct decompositions, central
elements, first-order formulas and games, Mal'cev families."""
from importlib.resources import files

from .algebra import (Algebra, AlgebraError, ElementMap, ProductAlgebra, Signature, check_homomorphism,
                      direct_product, find_isomorphism, is_isomorphism, is_partial_isomorphism,
                      load_algebra, parse_algebra, quotient, subalgebra)
from .congruence import Cg, Congruence, all_congruences, compose, join, kernel, meet
from .factorization import (ZeroOneSpec, central_report, check_bfc, check_determining_property,
                            complementary_pairs, decompose, factor_pairs, is_factor_pair)
from .gallery import build_D, build_L, gallery, parse_gallery_name, product_L
from .terms import compile_term, enumerate_terms, eval_term, parse_term


def data_path(name: str):
    """Path of a bundled data file (L2.json, semilattice_chain.json, ...)."""
    return files(__package__) / "data" / name
