"""Builders for filtered complexes.

Cones and suspensions put fresh apex vertices at level 0 and shift the base
levels up by one; the product with a circle uses the staircase prism
triangulation and also shifts levels by one so that the filtration invariant
dim X_i <= i keeps holding (strata codimensions are preserved either way).

The manifold library provides sphere(n), a 7-vertex torus, and real
projective spaces built as antipodal quotients of barycentrically subdivided
cross-polytope boundaries, then shrunk by edge contractions that satisfy the
link condition (so each contraction preserves the PL homeomorphism type).
Links of singular strata are attached by the constructions: cone and
suspension apexes get the base as link, and products with a circle inherit
the links of the factor.
"""

from __future__ import annotations

import itertools
import re

from .chain_algebra import PresentedComplex, Ring, homology
from .filtered_complex import FilteredComplex


def chain_complex(X: FilteredComplex) -> PresentedComplex:
    """The full simplicial chain complex of X in the canonical bases."""
    dims = {k: len(X.simplices(k)) for k in range(X.dim + 1)}
    d = {k: X.boundary_matrix(k) for k in range(1, X.dim + 1)}
    return PresentedComplex(dims=dims, d=d,
                            labels={k: list(X.simplices(k)) for k in dims})


def simplicial_homology(X: FilteredComplex, ring: Ring):
    """Ordinary simplicial homology, ignoring the filtration."""
    return homology(chain_complex(X), ring)


# ---------------------------------------------------------------------------
# manifolds (trivial filtration: every vertex at the top level)


def manifold(facets) -> FilteredComplex:
    """Complex with all vertices at level = dimension of the largest facet."""
    n = max(len(f) for f in facets) - 1
    levels = {v: n for f in facets for v in f}
    return FilteredComplex(n, levels, facets)


def sphere(n: int) -> FilteredComplex:
    """Boundary of the (n+1)-simplex."""
    if n < 0:
        raise ValueError("sphere dimension must be >= 0")
    verts = list(range(n + 2))
    return manifold(list(itertools.combinations(verts, n + 1)))


def torus() -> FilteredComplex:
    """The cyclic 7-vertex triangulation of the 2-torus."""
    facets = []
    for i in range(7):
        facets.append(((i) % 7, (i + 1) % 7, (i + 3) % 7))
        facets.append(((i) % 7, (i + 2) % 7, (i + 3) % 7))
    return manifold(facets)


def cross_polytope_boundary(d: int) -> FilteredComplex:
    """Boundary of the d-dimensional cross-polytope; vertices +-1..+-d."""
    facets = []
    for signs in itertools.product((1, -1), repeat=d):
        facets.append(tuple(s * (i + 1) for i, s in enumerate(signs)))
    return manifold(facets)


def barycentric_subdivision(X: FilteredComplex) -> FilteredComplex:
    """Barycentric subdivision of a trivially filtered complex.

    Vertices of the subdivision are the faces of X (as sorted tuples);
    facets are the maximal chains of faces ordered by inclusion.
    """
    facets = []

    def chains(simplex):
        # all maximal chains of proper faces ending at this simplex
        if len(simplex) == 1:
            return [[simplex]]
        out = []
        for i in range(len(simplex)):
            face = simplex[:i] + simplex[i + 1:]
            out.extend(chain + [simplex] for chain in chains(face))
        return out

    for facet in X.facets():
        facets.extend(tuple(map(tuple, c)) for c in chains(facet))
    return manifold(facets)


def antipodal_quotient(X: FilteredComplex) -> FilteredComplex:
    """Quotient by the map negating every coordinate of a face-tuple vertex.

    The input is a barycentric subdivision of a centrally symmetric complex
    whose original vertices are nonzero integers +-i; no face contains an
    antipodal vertex pair, so the action is free on the subdivision and no
    simplex shares a vertex orbit with its antipode. Each facet then maps
    injectively and the quotient complex triangulates the quotient space.
    """

    def antipode(face):
        return tuple(sorted(-v for v in face))

    def rep(face):
        return min(face, antipode(face))

    facets = set()
    for facet in X.facets():
        image = tuple(sorted(rep(v) for v in facet))
        if len(set(image)) != len(image):
            raise AssertionError("antipodal action not free on this complex")
        facets.add(image)
    return manifold(sorted(facets))


def _star_index(X: FilteredComplex) -> dict:
    idx: dict = {}
    for s in X.all_simplices():
        for v in s:
            idx.setdefault(v, []).append(s)
    return idx


def _vertex_link(idx: dict, u) -> frozenset:
    return frozenset(tuple(w for w in s if w != u)
                     for s in idx[u] if len(s) > 1)


def _edge_link(idx: dict, u, v) -> frozenset:
    return frozenset(tuple(w for w in s if w != u and w != v)
                     for s in idx[u] if v in s and len(s) > 2)


def contract_small(X: FilteredComplex) -> FilteredComplex:
    """Shrink a trivially filtered manifold triangulation by edge contractions.

    An edge uv is contracted only when lk(u) & lk(v) == lk(uv), which keeps
    the PL homeomorphism type. Edges are tried in canonical order and the
    scan restarts after each contraction, so the result is deterministic.
    """
    while True:
        idx = _star_index(X)
        for edge in X.simplices(1):
            u, v = edge
            lk_u = _vertex_link(idx, u)
            lk_v = _vertex_link(idx, v)
            lk_uv = _edge_link(idx, u, v)
            if lk_u & lk_v == lk_uv:
                facets = []
                for f in X.facets():
                    g = tuple(u if w == v else w for w in f)
                    if len(set(g)) == len(g):
                        facets.append(g)
                X = manifold(facets)
                break
        else:
            return X


def relabel_ints(X: FilteredComplex) -> FilteredComplex:
    """Rename vertices to 0, 1, ... following the canonical vertex order."""
    table = {v: i for i, v in enumerate(X.vertices)}
    levels = {table[v]: X.level_of[v] for v in X.vertices}
    facets = [tuple(table[v] for v in f) for f in X.facets()]
    return FilteredComplex(X.formal_dim, levels, facets,
                           links=X.stratum_links or None)


def real_projective_space(d: int) -> FilteredComplex:
    """RP^d as the antipodal quotient of sd(boundary of the (d+1)-cross-polytope),
    contracted to a small triangulation."""
    sd = barycentric_subdivision(cross_polytope_boundary(d + 1))
    return relabel_ints(contract_small(antipodal_quotient(sd)))


def rp2() -> FilteredComplex:
    return _cached("rp2", lambda: real_projective_space(2))


def rp3() -> FilteredComplex:
    return _cached("rp3", lambda: real_projective_space(3))


# ---------------------------------------------------------------------------
# cones, suspensions, products


def _fresh(label: str, taken) -> str:
    while label in taken:
        label = label + "*"
    return label


def _inherit_links(new: FilteredComplex, X: FilteredComplex, shift: int,
                   links: dict) -> None:
    """Copy the base's stratum links onto the shifted strata of the result.

    Every stratum of the result at level >= shift projects to a single
    stratum of X (connectivity is preserved by cones, suspensions and
    products); the projection goes through any vertex of top level whose
    base preimage is known to the caller via new.level_of bookkeeping.
    """
    if not X.stratum_links:
        return
    for st in new.singular_strata():
        if st.level < shift:
            continue
        # find a base vertex of the stratum's own level
        for s in st.simplices:
            for w in s:
                if new.level_of[w] == st.level:
                    v = new._base_vertex[w]  # set by the constructions
                    base_st = X.stratum_of((v,))
                    link = X.stratum_links.get(base_st.key)
                    if link is not None:
                        links[st.key] = link
                    break
            else:
                continue
            break


def cone(X: FilteredComplex, apex=None) -> FilteredComplex:
    """Simplicial cone: fresh apex at level 0, base levels shifted up by 1."""
    apex = apex if apex is not None else _fresh("c", set(X.vertices))
    levels = {apex: 0}
    levels.update({v: X.level_of[v] + 1 for v in X.vertices})
    facets = [(apex,) + f for f in X.facets()]
    out = FilteredComplex(X.formal_dim + 1, levels, facets)
    out._base_vertex = {v: v for v in X.vertices}
    links = {out.stratum_of((apex,)).key: X}
    _inherit_links(out, X, 1, links)
    out.stratum_links = links
    return out


def suspension(X: FilteredComplex) -> FilteredComplex:
    """Two fresh apexes N, S at level 0; base levels shifted up by 1."""
    taken = set(X.vertices)
    north = _fresh("N", taken)
    south = _fresh("S", taken)
    levels = {north: 0, south: 0}
    levels.update({v: X.level_of[v] + 1 for v in X.vertices})
    facets = [(north,) + f for f in X.facets()]
    facets += [(south,) + f for f in X.facets()]
    out = FilteredComplex(X.formal_dim + 1, levels, facets)
    out._base_vertex = {v: v for v in X.vertices}
    links = {
        out.stratum_of((north,)).key: X,
        out.stratum_of((south,)).key: X,
    }
    _inherit_links(out, X, 1, links)
    out.stratum_links = links
    return out


def product_circle(X: FilteredComplex, m: int = 3) -> FilteredComplex:
    """X x S^1 with an m-gon circle, staircase prism triangulation.

    Vertices are labeled "v@j". Levels shift by one: the circle direction
    adds a dimension to every stratum while codimensions stay fixed, and
    the skeleton invariant dim X_i <= i survives the shift.
    """
    if m < 3:
        raise ValueError("the circle factor needs at least 3 vertices")

    def lab(v, j):
        return f"{v}@{j}"

    levels = {lab(v, j): X.level_of[v] + 1
              for v in X.vertices for j in range(m)}
    facets = []
    for f in X.facets():
        d = len(f) - 1
        for j in range(m):
            a, b = j, (j + 1) % m
            for t in range(d + 1):
                prism = tuple(lab(f[i], a) for i in range(t + 1)) + \
                    tuple(lab(f[i], b) for i in range(t, d + 1))
                facets.append(prism)
    out = FilteredComplex(X.formal_dim + 1, levels, facets)
    out._base_vertex = {lab(v, j): v for v in X.vertices for j in range(m)}
    links: dict = {}
    _inherit_links(out, X, 1, links)
    out.stratum_links = links
    return out


# ---------------------------------------------------------------------------
# library and recipes

_library_cache: dict = {}


def _cached(key, builder):
    if key not in _library_cache:
        _library_cache[key] = builder()
    return _library_cache[key]


def library(name: str) -> FilteredComplex:
    """Reference spaces by name.

    sphere(n), torus, rp2, rp3, sigma_rp2 (suspension of rp2), sigma_rp3,
    cone_rp2. thom_ts2 is not shipped: it needs a simplicial model of the
    bundle projection from rp3 to the 2-sphere, which is out of scope.
    """
    name = name.strip()
    match = re.fullmatch(r"sphere\((\d+)\)", name)
    if match:
        return _cached(name, lambda: sphere(int(match.group(1))))
    if name == "torus":
        return _cached(name, torus)
    if name == "rp2":
        return rp2()
    if name == "rp3":
        return rp3()
    if name == "sigma_rp2":
        return _cached(name, lambda: suspension(rp2()))
    if name == "sigma_rp3":
        return _cached(name, lambda: suspension(rp3()))
    if name == "cone_rp2":
        return _cached(name, lambda: cone(rp2()))
    if name == "thom_ts2":
        raise NotImplementedError(
            "thom_ts2 requires a simplicial bundle model that is not shipped")
    raise ValueError(f"unknown library space {name!r}")


LIBRARY_NAMES = ["sphere(1)", "sphere(2)", "sphere(3)", "torus", "rp2", "rp3",
                 "sigma_rp2", "sigma_rp3", "cone_rp2"]


def build_recipe(text: str) -> FilteredComplex:
    """Parse and build "cone(rp2)", "suspension(sphere(2))",
    "product_circle(sigma_rp2, 4)" and friends; bare names hit the library."""
    text = text.strip()
    match = re.fullmatch(r"(cone|suspension|product_circle)\((.*)\)", text,
                         re.DOTALL)
    if not match:
        return library(text)
    op, inner = match.group(1), match.group(2).strip()
    args = _split_args(inner)
    if op == "cone":
        (base,) = args
        return cone(build_recipe(base))
    if op == "suspension":
        (base,) = args
        return suspension(build_recipe(base))
    base = build_recipe(args[0])
    m = int(args[1]) if len(args) > 1 else 3
    return product_circle(base, m)


def _split_args(text: str) -> list[str]:
    args, depth, start = [], 0, 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            args.append(text[start:i].strip())
            start = i + 1
    args.append(text[start:].strip())
    return [a for a in args if a]
