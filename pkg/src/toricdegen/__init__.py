"""Semistable toric degenerations of Calabi-Yau complete intersections.

Exact lattice geometry, Clemens' complex of the central fibre and the
symbolic checks behind the maximal-unipotent-monodromy criterion.
"""

from .lattice import IntMatrix, LatticePolytope, Cone, smith_normal_form, polar_dual, lattice_points
from .laurent import LaurentPolynomial
from .toric import Fan, TorusDivisor, Section, build_projective_fan
from .degeneration import FamilySpec, Partition, Component, projective_ci_family
from .clemens import CellComplex, homology, max_jordan_block_count

__version__ = "0.1.0"
