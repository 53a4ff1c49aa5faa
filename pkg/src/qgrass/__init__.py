"""Exact Euler characteristics of quiver Grassmannians and Hall products for
tree and band modules."""

from .errors import QGrassError
from .quiver import (
    Arrow,
    BandTerm,
    ModuleExpr,
    Quiver,
    TreeTerm,
    Winding,
    classify_quiver,
    fiber_dims,
    validate_band,
    validate_module,
    validate_quiver,
    validate_winding,
    winding_canonical_form,
    windings_isomorphic,
)
from .euler import (
    band_formula,
    band_recursion_oracle,
    euler,
    euler_band,
    euler_flag_module,
    euler_flag_tree,
    euler_module,
    euler_tree,
    kronecker_band_flag,
)
from .gradings import (
    Grading,
    fixed_point_count,
    refine_until_injective,
    refine_winding,
    separating_grading,
    validate_nice,
)
from .hall import (
    HallFunction,
    coproduct_splittings,
    defect,
    evaluate,
    indicator_dim_sum,
    product_evaluate,
)
from .string_algebra import (
    StringAlgebra,
    enumerate_bands,
    enumerate_strings,
    validate_string_algebra,
)

__version__ = "0.1.0"
