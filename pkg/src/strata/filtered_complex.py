"""Finite simplicial complexes filtered by vertex levels.

A filtered complex of formal dimension n assigns every vertex a level in
[0, n]; the subcomplex X_i is spanned by the vertices of level <= i and must
have geometric dimension <= i, with at least one vertex at level n. Strata
are the connected components of the simplices whose maximal vertex level is
exactly i; the regular strata are those at level n.

Simplices are stored as tuples in the canonical vertex order (level first,
then vertex id), which fixes boundary signs and the join decomposition
sigma = Delta_0 * Delta_1 * ... * Delta_n by level.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations

from .chain_algebra import SparseMatrix

NEG_INF = float("-inf")


class NonSimplicial(ValueError):
    """A simplex repeats a vertex."""


class DimensionViolation(ValueError):
    """Some X_i has dimension exceeding i, or a level is out of range."""


class EmptyRegularPart(ValueError):
    """No vertex sits at the top filtration level."""


def _vertex_sort_key(v):
    """Total order on vertex ids; ints first numerically, then the rest."""
    if isinstance(v, bool) or not isinstance(v, int):
        return (1, str(v))
    return (0, v)


@dataclass(frozen=True)
class Stratum:
    """A connected component of the level-i part of the filtration."""

    level: int
    index: int
    codim: int
    simplices: frozenset

    @property
    def is_regular(self) -> bool:
        return self.codim == 0

    @property
    def dim(self) -> int:
        return self.level

    @property
    def key(self) -> tuple[int, int]:
        return (self.level, self.index)

    def __repr__(self):
        kind = "regular" if self.is_regular else f"codim {self.codim}"
        return f"Stratum(level={self.level}, index={self.index}, {kind}, {len(self.simplices)} simplices)"


@dataclass(frozen=True)
class JoinDecomposition:
    """Per-level dimensions (d_0, ..., d_n) of a simplex, d_i = |Delta_i| - 1."""

    counts: tuple[int, ...]

    @property
    def dim(self) -> int:
        return sum(d + 1 for d in self.counts) - 1

    @property
    def is_regular(self) -> bool:
        return self.counts[-1] >= 0

    def prefix_dim(self, level: int) -> int | float:
        """Dimension of the sub-join Delta_0 * ... * Delta_level.

        This is the dimension of the intersection with X_level; returns
        -inf when no vertex sits at level <= level.
        """
        if level < 0:
            return NEG_INF
        total = sum(d + 1 for d in self.counts[: level + 1])
        return total - 1 if total else NEG_INF

    def perverse_degree(self, codim: int) -> int | float:
        """Dimension of the part of the simplex in X_{n - codim}."""
        n = len(self.counts) - 1
        if codim <= 0:
            return self.dim
        return self.prefix_dim(n - codim)


class FilteredComplex:
    """Immutable filtered simplicial complex with canonical orderings."""

    def __init__(self, formal_dim: int, levels: dict, facets, orientations=None,
                 links=None):
        """Build and validate from facets (faces are generated).

        levels maps vertex id to its filtration level. orientations is an
        optional map from top simplices (any vertex order) to +1 or -1.
        links optionally maps a singular stratum key (level, index) to the
        FilteredComplex of its link, used by Witt space checks.
        """
        if formal_dim < 0:
            raise DimensionViolation("formal dimension must be >= 0")
        self.formal_dim = int(formal_dim)
        self.level_of = dict(levels)
        for v, lev in self.level_of.items():
            if not 0 <= lev <= self.formal_dim:
                raise DimensionViolation(
                    f"vertex {v!r} has level {lev}, outside [0, {self.formal_dim}]")
        if not any(lev == self.formal_dim for lev in self.level_of.values()):
            raise EmptyRegularPart(
                f"no vertex has level {self.formal_dim}")

        order = sorted(self.level_of, key=lambda v: (self.level_of[v],
                                                     _vertex_sort_key(v)))
        self.vertices = tuple(order)
        self.vertex_pos = {v: i for i, v in enumerate(order)}

        simplices: set[tuple] = set()
        for facet in facets:
            facet = list(facet)
            if len(set(facet)) != len(facet):
                raise NonSimplicial(f"repeated vertex in {facet}")
            for v in facet:
                if v not in self.level_of:
                    raise KeyError(f"facet vertex {v!r} has no level")
            canon = tuple(sorted(facet, key=self.vertex_pos.__getitem__))
            for k in range(1, len(canon) + 1):
                simplices.update(combinations(canon, k))
        # vertices always present even if no facet listed them
        simplices.update((v,) for v in order)

        self._by_dim: dict[int, list[tuple]] = {}
        for s in simplices:
            self._by_dim.setdefault(len(s) - 1, []).append(s)
        for k in self._by_dim:
            self._by_dim[k].sort(key=lambda s: tuple(self.vertex_pos[v] for v in s))
        self._index = {
            s: i for k in self._by_dim for i, s in enumerate(self._by_dim[k])
        }

        # dim X_i <= i holds iff in every simplex (level-sorted) the j-th
        # vertex has level >= j
        for s in simplices:
            for j, v in enumerate(s):
                if self.level_of[v] < j:
                    raise DimensionViolation(
                        f"simplex {s} puts {j + 1} vertices at level <= "
                        f"{self.level_of[v]} < {j}")

        self.orientations = None
        if orientations:
            self.orientations = {}
            for simplex, sign in (orientations.items()
                                  if isinstance(orientations, dict)
                                  else orientations):
                canon, parity = self.canonical(simplex)
                self.orientations[canon] = sign * parity
        self.stratum_links = dict(links) if links else {}

    # -- basic queries -----------------------------------------------------

    @property
    def n(self) -> int:
        return self.formal_dim

    @cached_property
    def dim(self) -> int:
        return max(self._by_dim)

    def simplices(self, k: int) -> list[tuple]:
        """Degree-k simplices in canonical order."""
        return self._by_dim.get(k, [])

    def all_simplices(self):
        for k in sorted(self._by_dim):
            yield from self._by_dim[k]

    def index(self, simplex: tuple) -> int:
        return self._index[simplex]

    def __contains__(self, simplex) -> bool:
        return tuple(simplex) in self._index

    def canonical(self, simplex) -> tuple[tuple, int]:
        """Canonically ordered tuple and the sign of the sorting permutation."""
        seq = list(simplex)
        canon = sorted(seq, key=self.vertex_pos.__getitem__)
        sign = 1
        for i in range(len(seq)):
            for j in range(i + 1, len(seq)):
                a, b = self.vertex_pos[seq[i]], self.vertex_pos[seq[j]]
                if a > b:
                    sign = -sign
        return tuple(canon), sign

    def max_level(self, simplex: tuple) -> int:
        return self.level_of[simplex[-1]]

    def join_decomposition(self, simplex) -> JoinDecomposition:
        counts = [0] * (self.formal_dim + 1)
        for v in simplex:
            counts[self.level_of[v]] += 1
        return JoinDecomposition(tuple(c - 1 for c in counts))

    def is_regular_simplex(self, simplex: tuple) -> bool:
        return self.level_of[simplex[-1]] == self.formal_dim

    def regular_simplices(self, k: int) -> list[tuple]:
        return [s for s in self.simplices(k) if self.is_regular_simplex(s)]

    # -- strata ------------------------------------------------------------

    @cached_property
    def strata(self) -> list[Stratum]:
        """All strata, sorted by (level, component index).

        Two simplices of maximal level i are in the same stratum when they
        are connected through shared faces that again have maximal level i,
        which for vertex filtrations means a shared level-i vertex.
        """
        by_level: dict[int, list[tuple]] = {}
        for s in self._index:
            by_level.setdefault(self.max_level(s), []).append(s)
        out = []
        for level in sorted(by_level):
            group = sorted(by_level[level],
                           key=lambda s: (len(s), tuple(self.vertex_pos[v] for v in s)))
            parent = {s: s for s in group}

            def find(x):
                while parent[x] != x:
                    parent[x] = parent[parent[x]]
                    x = parent[x]
                return x

            # union via shared top-level vertices
            by_vertex: dict = {}
            for s in group:
                for v in s:
                    if self.level_of[v] == level:
                        if v in by_vertex:
                            ra, rb = find(by_vertex[v]), find(s)
                            if ra != rb:
                                parent[rb] = ra
                        else:
                            by_vertex[v] = s
            components: dict = {}
            for s in group:
                components.setdefault(find(s), []).append(s)
            # deterministic ids: order components by their least simplex
            keyed = sorted(
                components.values(),
                key=lambda ss: min((len(s), tuple(self.vertex_pos[v] for v in s))
                                   for s in ss),
            )
            for idx, simps in enumerate(keyed):
                out.append(Stratum(level, idx, self.formal_dim - level,
                                   frozenset(simps)))
        return out

    @cached_property
    def _stratum_of(self) -> dict:
        table = {}
        for st in self.strata:
            for s in st.simplices:
                table[s] = st
        return table

    def stratum_of(self, simplex: tuple) -> Stratum:
        return self._stratum_of[simplex]

    def stratum_by_key(self, level: int, index: int) -> Stratum:
        for st in self.strata:
            if st.level == level and st.index == index:
                return st
        raise KeyError(f"no stratum at level {level} with index {index}")

    def singular_strata(self) -> list[Stratum]:
        return [st for st in self.strata if not st.is_regular]

    def met_strata(self, simplex: tuple) -> list[Stratum]:
        """Strata met by the simplex: one for each nonempty join factor.

        The sub-join Delta_0 * ... * Delta_i is the face of the simplex on
        the vertices of level <= i; when Delta_i is nonempty its maximal
        level is exactly i and its stratum is the level-i stratum met.
        """
        out = []
        prefix = []
        last_level = None
        for v in simplex:
            prefix.append(v)
            last_level = self.level_of[v]
            # peek: emit when the next vertex has a strictly larger level
            out.append((last_level, tuple(prefix)))
        seen_levels = {}
        for level, face in out:
            seen_levels[level] = face  # last prefix at this level wins
        return [self._stratum_of[face] for _, face in sorted(seen_levels.items())]

    # -- boundary ----------------------------------------------------------

    def boundary_matrix(self, k: int) -> SparseMatrix:
        """Simplicial boundary C_k -> C_{k-1} in the canonical bases."""
        rows = self.simplices(k - 1)
        cols = self.simplices(k)
        mat = SparseMatrix(len(rows), len(cols))
        if k <= 0:
            return mat
        for j, s in enumerate(cols):
            for i in range(len(s)):
                face = s[:i] + s[i + 1:]
                mat.cols[j][self._index[face]] = (-1) ** i
        return mat

    def facets(self) -> list[tuple]:
        """Maximal simplices in canonical order."""
        non_maximal = set()
        for s in self._index:
            if len(s) >= 2:
                for i in range(len(s)):
                    non_maximal.add(s[:i] + s[i + 1:])
        return [s for k in sorted(self._by_dim)
                for s in self._by_dim[k] if s not in non_maximal]

    def f_vector(self) -> list[int]:
        return [len(self.simplices(k)) for k in range(self.dim + 1)]

    # -- serialization -----------------------------------------------------

    def to_json(self) -> dict:
        data = {
            "formal_dim": self.formal_dim,
            "vertices": [
                {"id": v, "level": self.level_of[v]} for v in self.vertices
            ],
            "simplices": [list(s) for s in self.facets()],
        }
        if self.orientations:
            data["orientations"] = [
                {"simplex": list(s), "sign": sign}
                for s, sign in sorted(self.orientations.items(),
                                      key=lambda kv: [self.vertex_pos[v] for v in kv[0]])
            ]
        if self.stratum_links:
            data["links"] = {
                f"{level},{index}": link.to_json()
                for (level, index), link in sorted(self.stratum_links.items())
            }
        return data

    @classmethod
    def from_json(cls, data: dict) -> "FilteredComplex":
        levels = {entry["id"]: entry["level"] for entry in data["vertices"]}
        formal_dim = data.get("formal_dim")
        if formal_dim is None:
            formal_dim = max(levels.values(), default=0)
        orientations = None
        if "orientations" in data:
            orientations = [(tuple(e["simplex"]), e["sign"])
                            for e in data["orientations"]]
        links = None
        if "links" in data:
            links = {}
            for key, sub in data["links"].items():
                level_s, index_s = key.split(",")
                links[(int(level_s), int(index_s))] = cls.from_json(sub)
        return cls(formal_dim, levels, data["simplices"],
                   orientations=orientations, links=links)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def loads(cls, text: str) -> "FilteredComplex":
        return cls.from_json(json.loads(text))

    def __repr__(self):
        return (f"FilteredComplex(n={self.formal_dim}, dim={self.dim}, "
                f"{len(self.vertices)} vertices, "
                f"{sum(len(v) for v in self._by_dim.values())} simplices)")
