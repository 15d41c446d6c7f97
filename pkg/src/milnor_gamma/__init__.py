"""Exact period vectors, intersection forms and Gamma-integral structures for ADE singularities."""

from .exactnum import CyclotomicNumber, GammaMonomial, gamma_reflect
from .rootdata import dual_group_data, singularity_data
from .periods import cycle, catalog_cycles, intersection, monodromy, psi, simple_root_basis
from .lattice import enumerate_roots, gram, lattice_equal, smith_normal_form
from .ktheory import ch_gamma, k_basis, mir_map, verify_theorem1
from .oracle import numeric_psi_check, quadrature

__version__ = "0.1.0"

__all__ = [
    "CyclotomicNumber",
    "GammaMonomial",
    "gamma_reflect",
    "dual_group_data",
    "singularity_data",
    "cycle",
    "catalog_cycles",
    "intersection",
    "monodromy",
    "psi",
    "simple_root_basis",
    "enumerate_roots",
    "gram",
    "lattice_equal",
    "smith_normal_form",
    "ch_gamma",
    "k_basis",
    "mir_map",
    "verify_theorem1",
    "numeric_psi_check",
    "quadrature",
]
