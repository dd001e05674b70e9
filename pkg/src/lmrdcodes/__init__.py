"""Constant dimension codes that contain lifted maximum rank distance codes.

Finite-field arithmetic, subspaces in canonical form, Gabidulin codes,
code constructions and verification, upper bounds, and the randomised and
orbit-based extension searches.
"""

__version__ = "0.1.0"

from . import kernels  # noqa: E402
from .bounds import (  # noqa: E402
    AqResolver,
    BoundReport,
    Params,
    classify_region,
    optimal_cy,
    partial_spread,
    prop0_bound,
    prop1_bound,
    prop2_bound,
    resolve_aq_upper,
    singleton,
    st_cap,
)
from .cdc import Cdc, echelon_ferrers, family_6_3l, family_6l, lemma4_coverage_check, lift, st_profile, verify_cdc  # noqa: E402
from .gf import Field, FieldElement, field_new  # noqa: E402
from .linalg import FqMatrix, PivotVector, Subspace, subspace_distance, subspace_from_rows  # noqa: E402
from .qcomb import mu, q_binomial  # noqa: E402
from .rankmetric import RankCode, block_compose, gabidulin  # noqa: E402

__all__ = [
    "AqResolver",
    "BoundReport",
    "Cdc",
    "Field",
    "FieldElement",
    "FqMatrix",
    "Params",
    "PivotVector",
    "RankCode",
    "Subspace",
    "block_compose",
    "classify_region",
    "echelon_ferrers",
    "family_6_3l",
    "family_6l",
    "field_new",
    "gabidulin",
    "kernels",
    "lemma4_coverage_check",
    "lift",
    "mu",
    "optimal_cy",
    "partial_spread",
    "prop0_bound",
    "prop1_bound",
    "prop2_bound",
    "q_binomial",
    "resolve_aq_upper",
    "singleton",
    "st_cap",
    "st_profile",
    "subspace_distance",
    "subspace_from_rows",
    "verify_cdc",
]
