"""Exact computations around integer triples, dihedral groups and their lattices."""
from .arith import cyclotomic_poly, factorize, h_double_prime_structure, smith_normal_form
from .cyclo import CycloNumber, RationalAngle, angle_sum_condition, product_condition
from .dihedral import DihedralElement, involution_triple
from .lattice import AffineElement, generation_witnesses, standard_generators, verify_generation
from .reps import build_faithful_rep, rational_inventory
from .triples import Triple, check_condition_C, count_reduced, enumerate_reduced, solve_condition_D

__all__ = [
    "cyclotomic_poly",
    "factorize",
    "h_double_prime_structure",
    "smith_normal_form",
    "CycloNumber",
    "RationalAngle",
    "angle_sum_condition",
    "product_condition",
    "DihedralElement",
    "involution_triple",
    "AffineElement",
    "generation_witnesses",
    "standard_generators",
    "verify_generation",
    "build_faithful_rep",
    "rational_inventory",
    "Triple",
    "check_condition_C",
    "count_reduced",
    "enumerate_reduced",
    "solve_condition_D",
]

__version__ = "0.1.0"
