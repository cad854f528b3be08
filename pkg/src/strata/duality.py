"""Orientation, fundamental class, the duality map, and the cup pairing.

On a closed oriented triangulated pseudomanifold the signed sum of the top
simplices is a cycle of the tame complex for the zero perversity, and capping
allowable cochain classes with it lands in tame intersection homology of the
complementary degree. This module constructs the orientation by coherence
traversal of the dual graph, presents the homology of both sides exactly over
Z, Q or F_p, writes the cap map in those presentations, decides whether it is
an isomorphism, and evaluates the cup-product pairing this map induces on
torsion-free quotients. It also runs the vanishing test on stratum links that
characterizes Witt spaces.

Homology presentations avoid basis-change bookkeeping: generators are the
integral cycles of a subcomplex (a saturated lattice in ambient coordinates),
relations express the incoming boundaries in generator coordinates, and the
group is the cokernel of the relation matrix. A map between two such
cokernels is an isomorphism over Z exactly when the abstract groups agree and
the map is surjective, surjectivity being readable off the invariant factors
of the generator images stacked next to the target relations.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction

from .blowup import BlowupComplex, blowup_complex
from .chain_algebra import (
    AmbientSubcomplex,
    ColumnSolver,
    HomologySummary,
    LatticeMembership,
    PresentedComplex,
    Ring,
    SparseMatrix,
    Z,
    dense_det,
    invariant_factors,
    kernel_basis,
    smith_normal_form,
    vec_add_scaled,
    vec_mod,
)
from .filtered_complex import FilteredComplex
from .intersection_chains import is_allowable, tame_complex
from .perversity import Perversity, lower_middle, zero
from .products import cap_local, cup

__all__ = [
    "NonOrientable",
    "NotPseudomanifold",
    "MissingLink",
    "orient",
    "fundamental_cycle",
    "GroupPresentation",
    "dual_complex",
    "cap_matrices",
    "DualityDegree",
    "DualityReport",
    "duality",
    "duality_map",
    "PairingMatrix",
    "pairing",
    "WittStratumReport",
    "WittReport",
    "is_witt",
]


class NotPseudomanifold(ValueError):
    """The complex is not pure or some codimension-one face is not shared
    by exactly two top simplices."""


class NonOrientable(ValueError):
    """No coherent orientation of the regular part exists over the ring."""


class MissingLink(KeyError):
    """A stratum needs its link for a Witt check and none is on record."""


# ---------------------------------------------------------------------------
# orientation and fundamental cycle


def orient(X: FilteredComplex, ring: Ring = Z) -> dict:
    """Coherent orientation of the top simplices, as a map simplex -> +-1.

    Checks that X is a closed pseudomanifold: pure of its formal dimension
    and with every codimension-one face shared by exactly two top simplices.
    Coherence (induced boundary orientations cancel) is propagated through
    faces of the regular part only; relative signs between components of the
    regular part follow the canonical simplex order, each component's first
    top simplex getting +1. Supplied orientations on the complex are
    validated instead of recomputed. Over F_2 every closed pseudomanifold is
    orientable and the all-ones orientation is returned.
    """
    n = X.formal_dim
    tops = X.simplices(n)
    if not tops:
        raise NotPseudomanifold(f"no simplices of dimension {n}")
    for k in range(n - 1, -1, -1):
        covered = set()
        for tau in X.simplices(k + 1):
            for i in range(len(tau)):
                covered.add(tau[:i] + tau[i + 1:])
        for s in X.simplices(k):
            if s not in covered:
                raise NotPseudomanifold(
                    f"not pure: {s} is not a face of any {k + 1}-simplex")
    incidence: dict[tuple, list] = {}
    for j, s in enumerate(tops):
        for i in range(len(s)):
            incidence.setdefault(s[:i] + s[i + 1:], []).append((j, (-1) ** i))
    for f, hits in incidence.items():
        if len(hits) != 2:
            raise NotPseudomanifold(
                f"face {f} lies in {len(hits)} top simplices, expected 2")

    supplied = None
    if X.orientations:
        supplied = []
        for s in tops:
            sign = X.orientations.get(s)
            if sign not in (1, -1):
                raise ValueError(
                    f"supplied orientation misses the top simplex {s}")
            supplied.append(sign)

    if ring.kind == "Fp" and ring.p == 2:
        if supplied is not None:
            return {s: sign for s, sign in zip(tops, supplied)}
        return {s: 1 for s in tops}

    neighbors: dict[int, list] = {j: [] for j in range(len(tops))}
    for f, ((j1, e1), (j2, e2)) in incidence.items():
        if not X.is_regular_simplex(f):
            continue
        rel = -e1 * e2  # sign(j2) = rel * sign(j1) makes the face cancel
        neighbors[j1].append((j2, rel))
        neighbors[j2].append((j1, rel))

    if supplied is not None:
        for j1, hood in neighbors.items():
            for j2, rel in hood:
                if supplied[j2] != rel * supplied[j1]:
                    raise NonOrientable(
                        "supplied orientation is not coherent between "
                        f"{tops[j1]} and {tops[j2]}")
        return {s: sign for s, sign in zip(tops, supplied)}

    signs: dict[int, int] = {}
    for seed in range(len(tops)):
        if seed in signs:
            continue
        signs[seed] = 1
        stack = [seed]
        while stack:
            j1 = stack.pop()
            for j2, rel in neighbors[j1]:
                want = rel * signs[j1]
                have = signs.get(j2)
                if have is None:
                    signs[j2] = want
                    stack.append(j2)
                elif have != want:
                    raise NonOrientable(
                        "orientation traversal contradicts itself between "
                        f"{tops[j1]} and {tops[j2]}")
    return {s: signs[j] for j, s in enumerate(tops)}


def fundamental_cycle(X: FilteredComplex, orientation: dict | None = None,
                      ring: Ring = Z) -> dict:
    """The signed sum of the top simplices, as a map simplex -> +-1.

    The result is a cycle of the tame complex for the zero perversity: each
    top simplex is allowable (its part in any skeleton obeys the dimension
    bound with slack zero) and the regular part of the boundary cancels by
    coherence of the orientation. Both facts are rechecked here.
    """
    if orientation is None:
        orientation = orient(X, ring)
    allow = zero()
    for s in orientation:
        if not is_allowable(X, s, allow):
            raise AssertionError(
                f"top simplex {s} violates the zero-perversity bound")
    boundary: dict = {}
    for s, sign in orientation.items():
        for i in range(len(s)):
            f = s[:i] + s[i + 1:]
            if X.is_regular_simplex(f):
                boundary[f] = boundary.get(f, 0) + sign * (-1) ** i
    p = ring.p if ring.kind == "Fp" else None
    for f, c in boundary.items():
        if (c % p if p else c):
            raise AssertionError(
                f"regular boundary does not cancel on face {f}")
    return dict(orientation)


def _cycle_vector(X: FilteredComplex, chain: dict) -> dict:
    """Simplex-keyed chain rewritten over ambient column indices."""
    return {X.index(s): c for s, c in chain.items() if c}


# ---------------------------------------------------------------------------
# homology presentations


def _field_echelon(matrix: SparseMatrix, ring: Ring) -> dict:
    """Column echelon pivots over Q or F_p: map pivot row -> reduced column.

    Each pivot column is normalized to 1 at its pivot row and supported on
    rows >= the pivot row, so pivot rows strictly increase while a column is
    reduced and the elimination terminates. len of the result is the rank.
    """
    p = ring.p if ring.kind == "Fp" else None
    piv: dict[int, dict] = {}
    for j in range(matrix.ncols):
        if p is None:
            col = {i: Fraction(v) for i, v in matrix.cols[j].items() if v}
        else:
            col = vec_mod(matrix.cols[j], p)
        while col:
            r = min(col)
            pivot = piv.get(r)
            if pivot is None:
                if p is None:
                    inv = Fraction(1) / col[r]
                    piv[r] = {i: v * inv for i, v in col.items()}
                else:
                    inv = pow(col[r], p - 2, p)
                    piv[r] = {i: (v * inv) % p for i, v in col.items()
                              if (v * inv) % p}
                break
            f = -col.pop(r)
            for i, v in pivot.items():
                if i == r:
                    continue
                w = col.get(i, 0) + f * v
                if p is not None:
                    w %= p
                if w:
                    col[i] = w
                else:
                    col.pop(i, None)
    return piv


def _in_span(matrix: SparseMatrix, vec: dict, ring: Ring) -> bool:
    """Whether vec lies in the column span (lattice span over Z)."""
    if ring.kind == "Z":
        member = LatticeMembership(matrix)
        return member.contains(vec)
    stacked = SparseMatrix(matrix.nrows, matrix.ncols + 1,
                           [dict(c) for c in matrix.cols] + [dict(vec)])
    return len(_field_echelon(stacked, ring)) == len(_field_echelon(matrix, ring))


class GroupPresentation:
    """Homology of one degree of a subcomplex, as a cokernel of relations.

    ``gens`` holds the ambient coordinates of a basis of the cycles of the
    given degree (a saturated lattice over Z), ``relations`` the incoming
    boundaries written in generator coordinates; the group is the cokernel.
    Free ranks and torsion come from the invariant factors of the relations
    over Z and from the rank over a field.
    """

    def __init__(self, complex: AmbientSubcomplex, degree: int):
        self.degree = degree
        self.ring = complex.ring
        B = complex.basis_matrix(degree)
        cycles = kernel_basis(complex.image(degree), self.ring) \
            if B.ncols else []
        self.gens = SparseMatrix(B.nrows, len(cycles),
                                 [B.matvec(v) for v in cycles])
        self._solver = ColumnSolver(self.gens, self.ring) if cycles else None
        inc = degree - 1 if complex.raising else degree + 1
        incoming = complex.image(inc)
        cols = []
        for j in range(incoming.ncols):
            col = incoming.cols[j]
            if not col:
                cols.append({})
                continue
            sol = self._solver.solve(col) if self._solver else None
            if sol is None:
                raise AssertionError(
                    f"a boundary in degree {degree} is not a cycle combination")
            cols.append(sol)
        self.relations = SparseMatrix(len(cycles), len(cols), cols)
        if self.ring.is_field:
            self._rel_rank = len(_field_echelon(self.relations, self.ring))
            self.torsion: tuple[int, ...] = ()
        else:
            factors = invariant_factors(self.relations)
            self._rel_rank = len(factors)
            self.torsion = tuple(d for d in factors if d > 1)
        self.free_rank = len(cycles) - self._rel_rank
        self._free_reps: list[dict] | None = None

    @property
    def ngens(self) -> int:
        return self.gens.ncols

    def summary(self) -> HomologySummary:
        return HomologySummary(self.degree, self.free_rank, self.torsion)

    def group(self) -> str:
        return self.summary().group()

    def class_coords(self, vec: dict) -> dict:
        """Generator coordinates of a cycle given in ambient coordinates."""
        vec = {i: c for i, c in vec.items() if c}
        if not vec:
            return {}
        if self._solver is None:
            raise AssertionError("nonzero vector in a degree with no cycles")
        sol = self._solver.solve(vec)
        if sol is None:
            raise AssertionError("vector is not a cycle of the subcomplex")
        return sol

    def free_quotient_reps(self) -> list[dict]:
        """Ambient cycles whose classes form a basis of the free quotient.

        Over Z the Smith form of the relations changes generators so that
        the diagonal entries act one by one; the generators matched with
        zero diagonal entries represent the free part. Over a field the
        complement of the pivot rows of the relations does the same job.
        """
        if self._free_reps is None:
            g = self.ngens
            if self.free_rank == 0:
                combos: list[dict] = []
            elif self._rel_rank == 0:
                combos = [{i: 1} for i in range(g)]
            elif self.ring.is_field:
                pivots = _field_echelon(self.relations, self.ring)
                combos = [{i: 1} for i in range(g) if i not in pivots]
            else:
                U, D, _ = smith_normal_form(self.relations)
                combos = [
                    {t: U[t][i] for t in range(g) if U[t][i]}
                    for i in range(self._rel_rank, g)
                ]
            self._free_reps = [self.gens.matvec(c) for c in combos]
        return self._free_reps


def _is_isomorphism(G: SparseMatrix, src: GroupPresentation,
                    tgt: GroupPresentation) -> bool:
    """Whether the cokernel map with generator-image matrix G is bijective.

    The abstract groups must agree; the map is then bijective iff it is
    surjective, i.e. the images together with the target relations span the
    whole target generator module (all invariant factors 1 over Z, full
    rank over a field). Finitely generated modules over these rings admit
    no proper surjective self-maps, so surjectivity forces injectivity.
    """
    ring = src.ring
    if (src.free_rank, src.torsion) != (tgt.free_rank, tgt.torsion):
        return False
    stacked = SparseMatrix(
        tgt.ngens, G.ncols + tgt.relations.ncols,
        [dict(c) for c in G.cols] + [dict(c) for c in tgt.relations.cols])
    if ring.is_field:
        return len(_field_echelon(stacked, ring)) == tgt.ngens
    factors = invariant_factors(stacked)
    return len(factors) == tgt.ngens and all(d == 1 for d in factors)


def dual_complex(presented: PresentedComplex, ring: Ring) -> AmbientSubcomplex:
    """The R-linear dual of a presented chain complex, as a raising complex.

    Dualizing transposes each differential and flips its direction: the
    coboundary out of dual degree k-1 is the transpose of the boundary into
    chain degree k-1. Basis vectors stay the standard ones.
    """
    dims = dict(presented.dims)
    deltas = {k - 1: dk.transpose() for k, dk in presented.d.items()}
    return AmbientSubcomplex(
        ambient_dims=dims,
        ambient_d=deltas,
        basis={q: [{j: 1} for j in range(nq)] for q, nq in dims.items()},
        ring=ring,
        raising=True,
    )


# ---------------------------------------------------------------------------
# the duality map


def cap_matrices(bc: BlowupComplex, gvec: dict) -> dict:
    """Matrices of capping with a fixed top-degree chain, one per degree.

    Entry (row, col) of the degree-k matrix is the coefficient with which
    the ambient (n-k)-simplex of the row appears in (cell of the column)
    capped against the chain. Building all degrees at once only walks the
    sub-simplices of the supporting top simplices.
    """
    X = bc.X
    n = X.formal_dim
    tops = X.simplices(n)
    entries: dict[int, list] = {k: [] for k in bc.degrees()}
    for js, weight in gvec.items():
        sigma = tops[js]
        parts = bc.partition(sigma)
        for r in range(1, len(sigma) + 1):
            for pi in itertools.combinations(sigma, r):
                pparts = bc.partition(pi)
                if not pparts[bc.n]:
                    continue
                free = [i for i in range(bc.n) if pparts[i]]
                for bits in itertools.product((0, 1), repeat=len(free)):
                    eps = [1] * bc.n
                    for i, b in zip(free, bits):
                        eps[i] = b
                    cell = (pi, tuple(eps))
                    k, jc = bc.index[cell]
                    hit = cap_local(bc.cell_element(cell), parts)
                    if hit is None:
                        continue
                    sign, face = hit
                    entries[k].append((X.index(face), jc, sign * weight))
    return {
        k: SparseMatrix.from_entries(
            len(X.simplices(n - k)), len(bc.cells.get(k, [])), lst)
        for k, lst in entries.items()
    }


@dataclass
class DualityDegree:
    """The cap map out of one cohomological degree, in class coordinates."""

    degree: int
    source: GroupPresentation
    target: GroupPresentation
    matrix: SparseMatrix
    iso: bool

    def __str__(self):
        verdict = "iso" if self.iso else "NOT iso"
        return (f"degree {self.degree}: {self.source.group()} -> "
                f"{self.target.group()} ({verdict})")


@dataclass
class DualityReport:
    """Cap with the fundamental class across all degrees."""

    ring: Ring
    dim: int
    degrees: list[DualityDegree]
    iso: bool

    def __str__(self):
        lines = [str(d) for d in self.degrees]
        lines.append(f"duality over {self.ring}: "
                     + ("isomorphism" if self.iso else "FAILS"))
        return "\n".join(lines)


def _degree_map(caps, cochains, chains, k, n, ring,
                check_representatives, rng):
    src = GroupPresentation(cochains, k)
    tgt = GroupPresentation(chains, n - k)
    cap_k = caps.get(k)
    cols = []
    for i in range(src.ngens):
        image = cap_k.matvec(src.gens.cols[i]) if cap_k is not None else {}
        cols.append(tgt.class_coords(image))
    G = SparseMatrix(tgt.ngens, src.ngens, cols)
    if check_representatives and src.ngens and cap_k is not None:
        coboundaries = cochains.image(k - 1)
        if coboundaries.ncols:
            for i in range(src.ngens):
                perturbed = dict(src.gens.cols[i])
                for j in range(coboundaries.ncols):
                    vec_add_scaled(perturbed, coboundaries.cols[j],
                                   rng.randint(-2, 2))
                moved = tgt.class_coords(cap_k.matvec(perturbed))
                diff = dict(moved)
                vec_add_scaled(diff, G.cols[i], -1)
                if diff and not _in_span(tgt.relations, diff, ring):
                    raise AssertionError(
                        f"degree {k} cap map depends on the representative")
    return DualityDegree(k, src, tgt, G, _is_isomorphism(G, src, tgt))


def duality(X: FilteredComplex, p: Perversity, ring: Ring = Z,
            gamma: dict | None = None, check_representatives: bool = False,
            seed: int = 0) -> DualityReport:
    """Cap with the fundamental class in every degree, with iso verdicts.

    ``gamma`` defaults to the fundamental cycle of a freshly built coherent
    orientation. With ``check_representatives`` every generator is also
    capped after adding a random coboundary of an allowable cochain; the
    class coordinates must move by a relation, anything else raises.
    """
    bc = blowup_complex(X)
    if gamma is None:
        gamma = fundamental_cycle(X, ring=ring)
    gvec = _cycle_vector(X, gamma)
    n = X.formal_dim
    caps = cap_matrices(bc, gvec)
    cochains = bc.subcomplex(p, ring)
    chains = tame_complex(X, p, ring)
    rng = random.Random(seed)
    degrees = [
        _degree_map(caps, cochains, chains, k, n, ring,
                    check_representatives, rng)
        for k in range(n + 1)
    ]
    return DualityReport(ring, n, degrees, all(d.iso for d in degrees))


def duality_map(X: FilteredComplex, p: Perversity, ring: Ring = Z,
                k: int = 0, gamma: dict | None = None,
                check_representative: bool = False,
                seed: int = 0) -> DualityDegree:
    """Cap with the fundamental class out of a single cohomological degree."""
    bc = blowup_complex(X)
    if gamma is None:
        gamma = fundamental_cycle(X, ring=ring)
    gvec = _cycle_vector(X, gamma)
    caps = cap_matrices(bc, gvec)
    cochains = bc.subcomplex(p, ring)
    chains = tame_complex(X, p, ring)
    return _degree_map(caps, cochains, chains, k, X.formal_dim, ring,
                       check_representative, random.Random(seed))


# ---------------------------------------------------------------------------
# the cup pairing


def augmentation(chain: dict):
    """Sum of the coefficients of a degree-zero chain."""
    return sum(chain.values())


@dataclass
class PairingMatrix:
    """Cup-product pairing between complementary free quotients.

    Rows follow the free-quotient basis in the given degree and perversity,
    columns the complementary ones; the entry is the augmentation of the cup
    of the two representatives capped with the fundamental class. The
    determinant is reported for square matrices; nondegenerate means square
    with nonvanishing determinant and unimodular means the determinant is a
    unit of the ring.
    """

    degree: int
    codegree: int
    ring: Ring
    row_group: str
    col_group: str
    entries: list[list[int]]
    det: int | None
    square: bool
    nondegenerate: bool
    unimodular: bool

    def __str__(self):
        body = "\n".join("  " + " ".join(f"{v:4d}" for v in row)
                         for row in self.entries) or "  (empty)"
        flags = []
        if self.nondegenerate:
            flags.append("nondegenerate")
        if self.unimodular:
            flags.append("unimodular")
        head = (f"pairing k={self.degree} vs {self.codegree} over {self.ring}"
                f" det={self.det} {' '.join(flags)}")
        return head + "\n" + body


def pairing(X: FilteredComplex, p: Perversity, k: int, ring: Ring = Z,
            gamma: dict | None = None,
            q: Perversity | None = None) -> PairingMatrix:
    """Cup-product pairing of degree k against the complementary data.

    Pairs the free quotient of the degree-k cohomology for ``p`` with the
    free quotient in degree n-k for the perversity ``q``, which defaults to
    the complement of ``p``; the cup of two representatives is a cocycle of
    full degree whose cap with the fundamental class is a zero-chain, and
    the augmentation of that chain is the matrix entry. Nondegeneracy is
    only promised for the complementary pairing.
    """
    bc = blowup_complex(X)
    n = X.formal_dim
    if gamma is None:
        gamma = fundamental_cycle(X, ring=ring)
    gvec = _cycle_vector(X, gamma)
    if q is None:
        q = p.complement()
    rows_pres = GroupPresentation(bc.subcomplex(p, ring), k)
    cols_pres = GroupPresentation(bc.subcomplex(q, ring), n - k)
    row_reps = rows_pres.free_quotient_reps()
    col_reps = cols_pres.free_quotient_reps()
    caps = cap_matrices(bc, gvec)
    cap_n = caps.get(n)
    entries = []
    for wa in row_reps:
        row = []
        for wb in col_reps:
            fused = cup(bc, k, wa, n - k, wb)
            point = cap_n.matvec(fused) if cap_n is not None else {}
            value = augmentation(point)
            if ring.kind == "Fp":
                value %= ring.p
            row.append(value)
        entries.append(row)
    square = len(row_reps) == len(col_reps)
    det = None
    if square:
        det = dense_det(entries)
        if ring.kind == "Fp":
            det %= ring.p
    nondegenerate = bool(square and det)
    unimodular = bool(square and (det in (1, -1) if ring.kind == "Z"
                                  else det))
    return PairingMatrix(
        degree=k, codegree=n - k, ring=ring,
        row_group=f"Z^{rows_pres.free_rank}" if ring.kind == "Z"
        else f"rank {rows_pres.free_rank}",
        col_group=f"Z^{cols_pres.free_rank}" if ring.kind == "Z"
        else f"rank {cols_pres.free_rank}",
        entries=entries, det=det, square=square,
        nondegenerate=nondegenerate, unimodular=unimodular)


# ---------------------------------------------------------------------------
# Witt spaces


@dataclass
class WittStratumReport:
    """Outcome of the link test on one singular stratum."""

    stratum: tuple[int, int]
    codim: int
    applies: bool
    link_dim: int | None
    middle_homology: str | None
    ok: bool


@dataclass
class WittReport:
    """Per-stratum middle-homology link test results."""

    ring: Ring
    strata: list[WittStratumReport]

    @property
    def is_witt(self) -> bool:
        return all(row.ok for row in self.strata)

    def __bool__(self) -> bool:
        return self.is_witt

    def __str__(self):
        lines = []
        for row in self.strata:
            if not row.applies:
                lines.append(f"stratum {row.stratum} codim {row.codim}: "
                             "even codimension, nothing to check")
            else:
                verdict = "ok" if row.ok else "obstructed"
                lines.append(
                    f"stratum {row.stratum} codim {row.codim}: link middle "
                    f"homology {row.middle_homology} ({verdict})")
        lines.append(f"Witt over {self.ring}: {self.is_witt}")
        return "\n".join(lines)


def is_witt(X: FilteredComplex, ring: Ring = Z) -> WittReport:
    """Middle-perversity link test for every odd-codimension stratum.

    A stratum of even codimension passes vacuously. For odd codimension the
    recorded link must have vanishing lower-middle-perversity tame homology
    in its middle degree; a stratum without a recorded link raises
    MissingLink since links are supplied by the constructions, not derived.
    """
    rows = []
    for S in X.singular_strata():
        if S.codim % 2 == 0:
            rows.append(WittStratumReport(S.key, S.codim, False, None, None,
                                          True))
            continue
        link = X.stratum_links.get(S.key)
        if link is None:
            raise MissingLink(
                f"stratum {S.key} has odd codimension {S.codim} "
                "and no recorded link")
        d = link.dim
        if d % 2:
            raise ValueError(
                f"link of stratum {S.key} has odd dimension {d}, "
                "its middle degree is undefined")
        middle = d // 2
        groups = {h.degree: h
                  for h in tame_complex(link, lower_middle(), ring).homology()}
        h = groups.get(middle, HomologySummary(middle, 0))
        ok = h.free_rank == 0 and not h.torsion
        rows.append(WittStratumReport(S.key, S.codim, True, d, h.group(), ok))
    return WittReport(ring, rows)
