"""strata: intersection (co)homology of triangulated pseudomanifolds.

Exact computation over Z, Q and Z/p of intersection homology, tame
intersection homology and blown-up intersection cohomology for finite
filtered simplicial complexes with general perversities, together with
Poincare duality checks via cap product with the fundamental class.
"""

from .blowup import BlowupComplex, blowup_complex
from .chain_algebra import (
    GF,
    HomologySummary,
    PresentedComplex,
    Q,
    Ring,
    SparseMatrix,
    Z,
    homology,
    invariant_factors,
    kernel_basis,
    parse_ring,
    rank,
    saturated_submodule_basis,
    smith_normal_form,
)
from .constructions import (
    LIBRARY_NAMES,
    build_recipe,
    cone,
    library,
    manifold,
    product_circle,
    sphere,
    suspension,
)
from .duality import (
    DualityDegree,
    DualityReport,
    GroupPresentation,
    MissingLink,
    NonOrientable,
    NotPseudomanifold,
    PairingMatrix,
    WittReport,
    dual_complex,
    duality,
    duality_map,
    fundamental_cycle,
    is_witt,
    orient,
    pairing,
)
from .filtered_complex import FilteredComplex, Stratum
from .intersection_chains import (
    intersection_complex,
    is_allowable,
    regular_boundary_matrix,
    tame_complex,
)
from .perversity import (
    GMPerversity,
    Perversity,
    StratumPerversity,
    constant,
    lower_middle,
    parse_perversity,
    top,
    upper_middle,
    zero,
)
from .products import (
    cap,
    chi_ambient,
    cup,
    unit_cochain,
    verify_product_identities,
)

__version__ = "0.1.0"

__all__ = [
    "BlowupComplex",
    "DualityDegree",
    "DualityReport",
    "FilteredComplex",
    "GF",
    "GMPerversity",
    "GroupPresentation",
    "HomologySummary",
    "LIBRARY_NAMES",
    "MissingLink",
    "NonOrientable",
    "NotPseudomanifold",
    "PairingMatrix",
    "Perversity",
    "PresentedComplex",
    "Q",
    "Ring",
    "SparseMatrix",
    "Stratum",
    "StratumPerversity",
    "WittReport",
    "Z",
    "blowup_complex",
    "build_recipe",
    "cap",
    "chi_ambient",
    "cone",
    "constant",
    "cup",
    "dual_complex",
    "duality",
    "duality_map",
    "fundamental_cycle",
    "homology",
    "intersection_complex",
    "invariant_factors",
    "is_allowable",
    "is_witt",
    "kernel_basis",
    "library",
    "lower_middle",
    "manifold",
    "orient",
    "pairing",
    "parse_perversity",
    "parse_ring",
    "product_circle",
    "rank",
    "regular_boundary_matrix",
    "saturated_submodule_basis",
    "smith_normal_form",
    "sphere",
    "suspension",
    "tame_complex",
    "top",
    "unit_cochain",
    "upper_middle",
    "verify_product_identities",
    "zero",
]
