"""Allowability, the intersection chain complex, and the tame complex.

A k-simplex is allowable for a perversity p when, for every singular stratum
S that its closure meets, the dimension of its part inside the skeleton of
S's level is at most k - codim(S) + p(S). The classical intersection complex
consists of the allowable chains with allowable boundary; the tame complex
keeps only regular simplices and replaces the boundary by its regular part,
which makes the construction work for perversities outside the classical
range (where allowable chains may have entirely singular faces that the
classical complex cannot absorb).
"""

from __future__ import annotations

from .chain_algebra import (
    AmbientSubcomplex,
    Ring,
    SparseMatrix,
    kernel_basis,
)
from .filtered_complex import FilteredComplex
from .perversity import Perversity


def perverse_degree(X: FilteredComplex, simplex, codim: int):
    """dim of the part of the simplex in X_{n-codim}; -inf when empty."""
    return X.join_decomposition(simplex).perverse_degree(codim)


def is_allowable(X: FilteredComplex, simplex, p: Perversity) -> bool:
    """Check the allowability bound against every met singular stratum.

    Strata whose closure the simplex misses contribute -inf on the left of
    the bound and never obstruct; the regular stratum gives dim <= dim.
    """
    jd = X.join_decomposition(simplex)
    k = jd.dim
    for S in X.met_strata(simplex):
        if S.is_regular:
            continue
        if jd.perverse_degree(S.codim) > k - S.codim + p.value(S):
            return False
    return True


def allowable_simplices(X: FilteredComplex, p: Perversity) -> dict:
    """Degree -> sorted list of column indices of the allowable simplices."""
    out = {}
    for k in range(X.dim + 1):
        out[k] = [j for j, s in enumerate(X.simplices(k))
                  if is_allowable(X, s, p)]
    return out


def boundary_split(X: FilteredComplex, simplex) -> tuple[dict, dict]:
    """The boundary chain split into its regular and singular parts.

    Signs are the alternating face signs of the canonical vertex order; the
    two returned chains (simplex -> coefficient) sum to the full boundary.
    """
    simplex = tuple(simplex)
    regular: dict = {}
    singular: dict = {}
    for i in range(len(simplex)):
        face = simplex[:i] + simplex[i + 1:]
        if not face:
            continue
        part = regular if X.is_regular_simplex(face) else singular
        part[face] = part.get(face, 0) + (-1) ** i
    return regular, singular


def regular_boundary_matrix(X: FilteredComplex, k: int) -> SparseMatrix:
    """Full boundary with the rows of non-regular faces zeroed out."""
    full = X.boundary_matrix(k)
    keep = [i for i, s in enumerate(X.simplices(k - 1))
            if X.is_regular_simplex(s)]
    keep_set = set(keep)
    out = SparseMatrix(full.nrows, full.ncols)
    for j, col in enumerate(full.cols):
        out.cols[j] = {i: v for i, v in col.items() if i in keep_set}
    return out


def constrained_subcomplex(ambient_dims, ambient_d, generator_cols,
                           allowed_rows, ring,
                           raising: bool = False) -> AmbientSubcomplex:
    """Chains supported on generator columns whose image avoids forbidden rows.

    Per degree k this is the kernel of the ambient differential restricted
    to the generator columns and to the rows of disallowed target basis
    elements (degree k-1, or k+1 when ``raising``), a saturated lattice over
    Z and a plain kernel over a field.
    """
    basis = {}
    for k in sorted(generator_cols):
        cols = generator_cols[k]
        dk = ambient_d.get(k)
        if dk is None or not cols:
            basis[k] = [{j: 1} for j in cols]
            continue
        target = k + 1 if raising else k - 1
        forbidden = [i for i in range(dk.nrows)
                     if i not in allowed_rows.get(target, set())]
        restricted = dk.restrict(forbidden, cols)
        kernel = kernel_basis(restricted, ring)
        basis[k] = [{cols[j]: c for j, c in vec.items()} for vec in kernel]
    return AmbientSubcomplex(
        ambient_dims=ambient_dims,
        ambient_d=ambient_d,
        basis=basis,
        ring=ring,
        raising=raising,
    )


def intersection_complex(X: FilteredComplex, p: Perversity,
                         ring: Ring) -> AmbientSubcomplex:
    """The classical complex: allowable chains with allowable boundary."""
    allowed = allowable_simplices(X, p)
    ambient_d = {k: X.boundary_matrix(k) for k in range(1, X.dim + 1)}
    return constrained_subcomplex(
        ambient_dims={k: len(X.simplices(k)) for k in range(X.dim + 1)},
        ambient_d=ambient_d,
        generator_cols=allowed,
        allowed_rows={k: set(v) for k, v in allowed.items()},
        ring=ring,
    )


def tame_complex(X: FilteredComplex, p: Perversity,
                 ring: Ring) -> AmbientSubcomplex:
    """Regular allowable chains whose regular boundary is allowable.

    The differential is the regular part of the boundary; it squares to
    zero because every face of a non-regular simplex is again non-regular,
    so dropping singular faces once drops them for good.
    """
    allowed = allowable_simplices(X, p)
    regular_allowed = {
        k: [j for j in allowed[k]
            if X.is_regular_simplex(X.simplices(k)[j])]
        for k in allowed
    }
    ambient_d = {k: regular_boundary_matrix(X, k) for k in range(1, X.dim + 1)}
    return constrained_subcomplex(
        ambient_dims={k: len(X.simplices(k)) for k in range(X.dim + 1)},
        ambient_d=ambient_d,
        generator_cols=regular_allowed,
        allowed_rows={k: set(v) for k, v in allowed.items()},
        ring=ring,
    )
