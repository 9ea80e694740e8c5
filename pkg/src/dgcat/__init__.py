"""Exact computations with finitely presented dg categories."""

from .linalg import GF, QQ, Field, Matrix, Subspace, image_basis, kernel_basis, quotient_data, row_reduce, solve
from .complexes import ChainMap, Complex, cohomology, cone, hom_complex, is_contractible, is_null_homotopic, \
    is_quasi_iso, shift
from .category import DgCategory, DgFunctor, disc, h0, opposite, sphere, tensor, unit_category, \
    validate_category, validate_functor, z0
from .algebra import Algebra, AlgModule, Quiver, path_algebra
from .quotient import DrinfeldQuotient, quotient_cohomology, quotient_hom
from .gamma import gamma_algebra, gamma_cohomology, stratifying_check, tor_oracle
from .workspace import parse_workspace, emit_workspace

__version__ = "0.1.0"
