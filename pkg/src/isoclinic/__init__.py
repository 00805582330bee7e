"""Canonical angles, isoclinic subspaces and Knill-Laflamme checks."""

from .errors import DegeneracyError, DomainError, FactorizationError, PreconditionError
from .matcore import Tolerance
from .numrange import hermitian_rank_k_range, pair_symmetry_check, projection_witness
from .qec import ErrorModel, converse_check, extract_isoclinic_family, kl_check, rotate_model
from .subspaces import (
    OrthProjection,
    Subspace,
    canonical_angles,
    family_isoclinic_check,
    isoclinic_check,
    make_isoclinic_pair,
    ratio_probe,
    subspace_from_columns,
)

__version__ = "0.1.0"
