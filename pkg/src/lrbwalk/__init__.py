"""Exact random walks on left-regular bands.

Semigroups come from real and complexified hyperplane arrangements, ordered
set partitions (shelves and libraries) and interval greedoids.  Spectra are
predicted from the support lattice and checked against exact oracles.
"""

from .poset import DomainError, FiniteLattice, FinitePoset, StructureError
from .lrb import LrbSemigroup, build_support, verify_lrb
from .weights import WeightDistribution
from .spectral import (brown_spectrum, charpoly_check, diagonalizability_check, simulate,
                       stationary_distribution, transition_matrix)

__all__ = ["DomainError", "FiniteLattice", "FinitePoset", "StructureError", "LrbSemigroup",
           "build_support", "verify_lrb", "WeightDistribution", "brown_spectrum",
           "charpoly_check", "diagonalizability_check", "simulate", "stationary_distribution",
           "transition_matrix"]

__version__ = "0.1.0"
