"""Blown-up cochain complexes of filtered simplicial complexes.

The local model over one regular join decomposition D_0 * ... * D_n is the
tensor product of the simplicial cochain complexes of the cones cD_0, ...,
cD_{n-1} and of D_n itself. A basis element assigns to each level i < n a
cone face (F_i, eps_i), where eps_i = 1 cones off F_i (the bare apex when
F_i is empty) and eps_i = 0 keeps the plain face, and to the top level a
nonempty face F_n. Its degree is the sum of dim F_i + eps_i.

A global cochain assigns a local element to every regular simplex so that
restriction to every regular codimension-1 face agrees. Restriction of a
dual basis element either keeps it (when its support lies in the face) or
kills it, so the compatibility kernel has a canonical basis: one class per
pair (regular simplex pi, eps vector), the class of the element whose
faces fill all of pi. Every host containing pi carries the same
coefficient, since any two regular hosts of a support are connected
through regular codimension-1 steps. This presentation makes the global
complex a finite complex of free modules whose differential is the signed
transpose of a cell-style boundary operator.

The coboundary dualizes the boundary factor by factor: a coface arising
in a factor of degree p picks up (-1)^(p+1) on top of its boundary
incidence, and the factors combine with the usual left-degree rule. For a
single factor this is (delta f)(c) = (-1)^(|f|+1) f(boundary c). The
rescale leaves cohomology untouched and is the convention for which the
cap product satisfies the Leibniz rule on the nose.
"""

from __future__ import annotations

import itertools
import weakref
from typing import Iterable

from .chain_algebra import AmbientSubcomplex, Ring, SparseMatrix
from .filtered_complex import NEG_INF, FilteredComplex
from .intersection_chains import constrained_subcomplex
from .perversity import Perversity

# an element is a tuple over levels 0..n of (face vertices, eps); the top
# level always carries eps = 0 and a nonempty face
BlownElement = tuple


def element_degree(element: BlownElement) -> int:
    return sum(len(face) - 1 + eps for face, eps in element)


def element_perverse_degree(element: BlownElement, codim: int):
    """Perverse degree along a stratum of the given codimension.

    -inf when the level n - codim factor is coned off; otherwise the total
    degree of the factors above that level.
    """
    n = len(element) - 1
    s = n - codim
    face, eps = element[s]
    if eps == 1:
        return NEG_INF
    return sum(len(f) - 1 + e for f, e in element[s + 1:])


def cochain_perverse_degree(items: Iterable[BlownElement], codim: int):
    """Max of the element perverse degrees; -inf for the zero cochain."""
    best = NEG_INF
    for element in items:
        value = element_perverse_degree(element, codim)
        if value != NEG_INF and value > best:
            best = value
    return best


def local_basis(factors) -> dict:
    """All tensor basis elements over the given per-level vertex tuples.

    factors lists the level vertex tuples D_0..D_n (the last nonempty).
    Returns degree -> elements in a deterministic order.
    """
    n = len(factors) - 1
    per_level = []
    for i, verts in enumerate(factors):
        options = []
        if i < n:
            options.append(((), 1))
        for r in range(1, len(verts) + 1):
            for face in itertools.combinations(verts, r):
                options.append((face, 0))
                if i < n:
                    options.append((face, 1))
        per_level.append(options)
    out: dict = {}
    for element in itertools.product(*per_level):
        out.setdefault(element_degree(element), []).append(element)
    return out


def _replace(element: BlownElement, i: int, part) -> BlownElement:
    return element[:i] + (part,) + element[i + 1:]


def element_boundary_terms(element: BlownElement) -> list:
    """Chain-level faces of a tensor cell as (coeff, face, factor) triples.

    Koszul signs accumulate by left degree; within a cone factor the apex
    sits after the face vertices, so removing it contributes the sign
    (-1)^(number of face vertices). Each face arises from exactly one
    factor, reported so dualizing can use that factor's degree.
    """
    n = len(element) - 1
    out = []
    sign_left = 1
    for i, (face, eps) in enumerate(element):
        if i < n and eps == 1 and face:
            out.append((sign_left * (-1) ** len(face),
                        _replace(element, i, (face, 0)), i))
        for t in range(len(face)):
            if len(face) == 1 and (i == n or eps == 0):
                continue
            out.append((sign_left * (-1) ** t,
                        _replace(element, i, (face[:t] + face[t + 1:], eps)), i))
        sign_left *= (-1) ** (len(face) - 1 + eps)
    return out


def element_boundary(element: BlownElement) -> dict:
    """Chain-level faces of a tensor cell, with Koszul signs by left degree."""
    return {key: coeff for coeff, key, _ in element_boundary_terms(element)}


def local_coboundary(element: BlownElement, factors) -> dict:
    """Factor-signed coboundary: cofaces weighted by boundary incidence.

    A coface in factor i picks up (-1)^(p_i + 1) beyond its incidence
    coefficient, where p_i is the element's degree in that factor; cone
    flips (F, 0) -> (F, 1) therefore carry the plain left sign.
    """
    n = len(element) - 1
    out: dict = {}
    sign_left = 1
    for i, (face, eps) in enumerate(element):
        factor_sign = (-1) ** (len(face) - 1 + eps + 1)
        for v in factors[i]:
            if v in face:
                continue
            pos = sum(1 for w in face if factors[i].index(w) < factors[i].index(v))
            grown = tuple(sorted(face + (v,), key=factors[i].index))
            key = _replace(element, i, (grown, eps))
            out[key] = out.get(key, 0) + sign_left * factor_sign * (-1) ** pos
        if i < n and eps == 0:
            key = _replace(element, i, (face, 1))
            out[key] = out.get(key, 0) + sign_left
        sign_left *= (-1) ** (len(face) - 1 + eps)
    return {k: c for k, c in out.items() if c}


class BlowupComplex:
    """Global blown-up cochain complex of a filtered complex.

    Cells are pairs (pi, eps): a regular simplex together with one cone
    marker per level below the top (forced to 1 where pi misses the
    level). The coboundary matrices are built once and shared by every
    perversity and ring.
    """

    def __init__(self, X: FilteredComplex):
        self.X = X
        self.n = X.n
        self._parts_cache: dict = {}
        cells: dict = {}
        for k in range(X.dim + 1):
            for pi in X.regular_simplices(k):
                parts = self.partition(pi)
                free = [i for i in range(self.n) if parts[i]]
                for bits in itertools.product((0, 1), repeat=len(free)):
                    eps = [1] * self.n
                    for i, b in zip(free, bits):
                        eps[i] = b
                    cell = (pi, tuple(eps))
                    cells.setdefault(self._cell_degree(parts, eps), []).append(cell)
        pos = X.vertex_pos
        self.cells = {
            k: sorted(v, key=lambda c: ([pos[u] for u in c[0]], c[1]))
            for k, v in cells.items()
        }
        self.index = {cell: (k, j) for k, group in self.cells.items()
                      for j, cell in enumerate(group)}
        self._delta: dict = {}
        self._star_met: dict | None = None

    # -- cells ------------------------------------------------------------

    def degrees(self) -> list[int]:
        return sorted(self.cells)

    def dims(self) -> dict:
        return {k: len(self.cells[k]) for k in self.degrees()}

    def partition(self, simplex: tuple) -> list[tuple]:
        """Vertices of a simplex grouped by level, in canonical order."""
        if simplex not in self._parts_cache:
            parts: list = [[] for _ in range(self.n + 1)]
            for v in simplex:
                parts[self.X.level_of[v]].append(v)
            self._parts_cache[simplex] = [tuple(p) for p in parts]
        return self._parts_cache[simplex]

    def _cell_degree(self, parts, eps) -> int:
        return (sum(len(parts[i]) - 1 + eps[i] for i in range(self.n))
                + len(parts[self.n]) - 1)

    def cell_element(self, cell) -> BlownElement:
        """The tensor basis element a cell stands for, inside pi itself."""
        pi, eps = cell
        parts = self.partition(pi)
        return tuple((parts[i], eps[i]) for i in range(self.n)) + (
            (parts[self.n], 0),)

    def cell_degree(self, cell) -> int:
        pi, eps = cell
        return self._cell_degree(self.partition(pi), eps)

    def cell_boundary(self, cell) -> dict:
        """Faces of a cell in class coordinates."""
        out: dict = {}
        for element, coeff in element_boundary(self.cell_element(cell)).items():
            pi = tuple(v for face, _ in element for v in face)
            eps = tuple(e for _, e in element[:-1])
            out[(pi, eps)] = coeff
        return out

    def delta(self, k: int) -> SparseMatrix:
        """Coboundary from degree k: the transposed boundary of the degree
        k+1 cells, each entry signed by (-1)^(p+1) for the degree p of the
        face in the factor the two cells differ in."""
        if k not in self._delta:
            rows = self.cells.get(k + 1, [])
            entries = []
            for r, cell in enumerate(rows):
                for coeff, element, i in element_boundary_terms(
                        self.cell_element(cell)):
                    pi = tuple(v for face, _ in element for v in face)
                    eps = tuple(e for _, e in element[:-1])
                    sign = (-1) ** (len(element[i][0]) + element[i][1])
                    entries.append(
                        (r, self.index[(pi, eps)][1], sign * coeff))
            self._delta[k] = SparseMatrix.from_entries(
                len(rows), len(self.cells.get(k, [])), entries)
        return self._delta[k]

    def top_cell_index(self, sigma: tuple) -> int:
        """Column of the class pairing with the full blown-up chain of a
        regular simplex (all levels coned off)."""
        return self.index[(sigma, (1,) * self.n)][1]

    # -- perversity -------------------------------------------------------

    def star_met_strata(self, simplex: tuple) -> frozenset:
        """Keys of the singular strata met by some simplex containing this
        one; the perverse degree bound for a class applies exactly to
        these strata."""
        if self._star_met is None:
            star: dict = {}
            for tau in self.X.all_simplices():
                met = [S.key for S in self.X.met_strata(tau)
                       if not S.is_regular]
                if not met:
                    continue
                for r in range(1, len(tau) + 1):
                    for sub in itertools.combinations(tau, r):
                        star.setdefault(sub, set()).update(met)
            self._star_met = {s: frozenset(v) for s, v in star.items()}
        return self._star_met.get(simplex, frozenset())

    def cell_perverse_degree(self, cell, codim: int):
        pi, eps = cell
        s = self.n - codim
        parts = self.partition(pi)
        if not parts[s] or eps[s] == 1:
            return NEG_INF
        return (sum(len(parts[i]) - 1 + eps[i] for i in range(s + 1, self.n))
                + len(parts[self.n]) - 1)

    def allowable_cells(self, p: Perversity) -> dict:
        """Degree -> columns of the cells obeying every stratum bound."""
        out: dict = {}
        for k in self.degrees():
            keep = []
            for j, cell in enumerate(self.cells[k]):
                for key in self.star_met_strata(cell[0]):
                    S = self.X.stratum_by_key(*key)
                    if self.cell_perverse_degree(cell, S.codim) > p.value(S):
                        break
                else:
                    keep.append(j)
            out[k] = keep
        return out

    # -- complexes ---------------------------------------------------------

    def _ambient(self) -> tuple[dict, dict]:
        dims = self.dims()
        top = max(dims)
        deltas = {k: self.delta(k) for k in range(top)}
        return dims, deltas

    def full_complex(self, ring: Ring) -> AmbientSubcomplex:
        """The whole blown-up complex (no perversity constraint)."""
        dims, deltas = self._ambient()
        everything = {k: list(range(dims[k])) for k in dims}
        return constrained_subcomplex(dims, deltas, everything, everything,
                                      ring, raising=True)

    def subcomplex(self, p: Perversity, ring: Ring) -> AmbientSubcomplex:
        """Cochains allowable for p whose coboundary is also allowable."""
        allowed = self.allowable_cells(p)
        dims, deltas = self._ambient()
        return constrained_subcomplex(
            dims, deltas, allowed,
            {k: set(v) for k, v in allowed.items()}, ring, raising=True)


_CACHE: "weakref.WeakKeyDictionary[FilteredComplex, BlowupComplex]"
_CACHE = weakref.WeakKeyDictionary()


def blowup_complex(X: FilteredComplex) -> BlowupComplex:
    """Shared BlowupComplex per space: the coboundary matrices are reused
    across perversities and rings."""
    if X not in _CACHE:
        _CACHE[X] = BlowupComplex(X)
    return _CACHE[X]


def blown_up_complex(X: FilteredComplex, p: Perversity,
                     ring: Ring) -> AmbientSubcomplex:
    """The perverse blown-up cochain complex of a filtered complex."""
    return blowup_complex(X).subcomplex(p, ring)
