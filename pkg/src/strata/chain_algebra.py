"""Exact linear algebra over Z, Q and Z/p, plus homology of presented complexes.

Everything here works with arbitrary-precision Python ints. Matrices are kept
sparse (list of column dicts) because boundary and coboundary matrices of
simplicial complexes are incidence-like: a handful of small entries per column.

The three coefficient rings are represented by :class:`Ring`. Over Z the
routines produce lattice bases (saturated, so subquotients come out with the
correct torsion); over Q the integral computations are reused since the
matrices handled by this package always have integer entries; over Z/p a plain
mod-p elimination is used.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from heapq import heapify, heappop, heappush
from math import gcd


# ---------------------------------------------------------------------------
# coefficient rings


@dataclass(frozen=True)
class Ring:
    """Coefficient ring: Z, Q, or the prime field F_p."""

    kind: str  # "Z", "Q" or "Fp"
    p: int | None = None

    def __post_init__(self):
        if self.kind not in ("Z", "Q", "Fp"):
            raise ValueError(f"unknown ring kind {self.kind!r}")
        if self.kind == "Fp":
            if self.p is None or self.p < 2:
                raise ValueError("Fp needs a prime p >= 2")
            for d in range(2, int(self.p**0.5) + 1):
                if self.p % d == 0:
                    raise ValueError(f"{self.p} is not prime")

    @property
    def is_field(self) -> bool:
        return self.kind != "Z"

    def __str__(self):
        return {"Z": "Z", "Q": "Q"}.get(self.kind, f"F{self.p}")


Z = Ring("Z")
Q = Ring("Q")


def GF(p: int) -> Ring:
    return Ring("Fp", p)


def parse_ring(text: str) -> Ring:
    """Parse "Z", "Q", "F2", "F13", ... into a Ring."""
    text = text.strip()
    if text == "Z":
        return Z
    if text == "Q":
        return Q
    if text.startswith("F"):
        return GF(int(text[1:]))
    raise ValueError(f"cannot parse ring {text!r} (expected Z, Q or Fp)")


# ---------------------------------------------------------------------------
# sparse vectors and matrices

# A sparse vector is a dict {index: nonzero int}. Helpers below keep the
# invariant that no zero values are stored.


def vec_add_scaled(target: dict, source: dict, c: int) -> None:
    """target += c * source, in place."""
    if c == 0:
        return
    for i, v in source.items():
        w = target.get(i, 0) + c * v
        if w:
            target[i] = w
        else:
            target.pop(i, None)


def vec_scale(v: dict, c: int) -> dict:
    if c == 0:
        return {}
    return {i: c * x for i, x in v.items()}


def vec_mod(v: dict, p: int) -> dict:
    out = {}
    for i, x in v.items():
        r = x % p
        if r:
            out[i] = r
    return out


class SparseMatrix:
    """Integer matrix stored as a list of column dicts {row: value}."""

    __slots__ = ("nrows", "ncols", "cols")

    def __init__(self, nrows: int, ncols: int, cols: list[dict] | None = None):
        self.nrows = nrows
        self.ncols = ncols
        self.cols = cols if cols is not None else [{} for _ in range(ncols)]

    @classmethod
    def from_entries(cls, nrows, ncols, entries):
        m = cls(nrows, ncols)
        for i, j, v in entries:
            if v:
                w = m.cols[j].get(i, 0) + v
                if w:
                    m.cols[j][i] = w
                else:
                    m.cols[j].pop(i, None)
        return m

    @classmethod
    def from_dense(cls, rows: list[list[int]]):
        nrows = len(rows)
        ncols = len(rows[0]) if nrows else 0
        m = cls(nrows, ncols)
        for i, row in enumerate(rows):
            for j, v in enumerate(row):
                if v:
                    m.cols[j][i] = v
        return m

    def to_dense(self) -> list[list[int]]:
        out = [[0] * self.ncols for _ in range(self.nrows)]
        for j, col in enumerate(self.cols):
            for i, v in col.items():
                out[i][j] = v
        return out

    def column(self, j: int) -> dict:
        return dict(self.cols[j])

    def entries(self):
        for j, col in enumerate(self.cols):
            for i, v in col.items():
                yield i, j, v

    def transpose(self) -> "SparseMatrix":
        t = SparseMatrix(self.ncols, self.nrows)
        for i, j, v in self.entries():
            t.cols[i][j] = v
        return t

    def matvec(self, x: dict) -> dict:
        """Matrix times sparse column vector."""
        out: dict = {}
        for j, c in x.items():
            vec_add_scaled(out, self.cols[j], c)
        return out

    def matmat(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch")
        out = SparseMatrix(self.nrows, other.ncols)
        for j in range(other.ncols):
            out.cols[j] = self.matvec(other.cols[j])
        return out

    def submatrix_cols(self, col_ids: list[int]) -> "SparseMatrix":
        return SparseMatrix(self.nrows, len(col_ids),
                            [dict(self.cols[j]) for j in col_ids])

    def restrict(self, row_ids: list[int], col_ids: list[int]) -> "SparseMatrix":
        rmap = {r: i for i, r in enumerate(row_ids)}
        cols = []
        for j in col_ids:
            cols.append({rmap[i]: v for i, v in self.cols[j].items() if i in rmap})
        return SparseMatrix(len(row_ids), len(col_ids), cols)

    def is_zero(self) -> bool:
        return all(not c for c in self.cols)

    def __eq__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return (self.nrows, self.ncols) == (other.nrows, other.ncols) and \
            all(a == b for a, b in zip(self.cols, other.cols))

    def __repr__(self):
        return f"SparseMatrix({self.nrows}x{self.ncols}, {sum(len(c) for c in self.cols)} entries)"


def columns_from_vectors(nrows: int, vectors: list[dict]) -> SparseMatrix:
    return SparseMatrix(nrows, len(vectors), [dict(v) for v in vectors])


# ---------------------------------------------------------------------------
# elimination cores


def _kernel_int(cols: list[dict], nrows: int) -> list[dict]:
    """Basis of the integer kernel of the matrix with the given columns.

    Column-style Hermite reduction: walk the rows, and for each row combine
    the active columns by the Euclidean algorithm until at most one of them
    is nonzero there; that column retires. Columns still active at the end
    are zero on every row, and since all operations are unimodular the
    recorded column combinations form a lattice basis of the kernel
    (automatically saturated).
    """
    work = [dict(c) for c in cols]
    combo = [{j: 1} for j in range(len(work))]
    # rows_to_cols: row -> set of column ids with a nonzero entry there
    rows_to_cols: dict[int, set] = {}
    for j, col in enumerate(work):
        for i in col:
            rows_to_cols.setdefault(i, set()).add(j)

    def combine(dst: int, src: int, q: int):
        """column dst -= q * column src, keeping the row index in sync."""
        if q == 0:
            return
        col_d = work[dst]
        for i, v in work[src].items():
            w = col_d.get(i, 0) - q * v
            if w:
                if i not in col_d:
                    rows_to_cols.setdefault(i, set()).add(dst)
                col_d[i] = w
            else:
                if i in col_d:
                    del col_d[i]
                    rows_to_cols[i].discard(dst)
        vec_add_scaled(combo[dst], combo[src], -q)

    active_set = set(range(len(work)))
    heap = [(len(s), r) for r, s in rows_to_cols.items()]
    heapify(heap)
    done = set()
    while heap:
        # pick the currently sparsest unprocessed row to limit fill-in;
        # stale heap entries are refreshed lazily
        k, r = heappop(heap)
        if r in done:
            continue
        cur = len(rows_to_cols.get(r, ()))
        if cur > k:
            heappush(heap, (cur, r))
            continue
        done.add(r)
        js = [j for j in rows_to_cols.get(r, ()) if j in active_set]
        if not js:
            continue
        while len(js) > 1:
            js.sort(key=lambda j: abs(work[j][r]))
            piv = js[0]
            a = work[piv][r]
            rest = []
            for j in js[1:]:
                combine(j, piv, work[j][r] // a)
                if work[j].get(r):
                    rest.append(j)
            js = [piv] + rest
        # retire the surviving column; later rows never touch it again, so
        # active columns stay zero at every processed row
        active_set.discard(js[0])
    out = []
    for j in sorted(active_set):
        if work[j]:
            raise AssertionError("active column not annihilated")
        out.append(combo[j])
    return out


def _kernel_modp(cols: list[dict], nrows: int, p: int) -> list[dict]:
    """Basis of the kernel over F_p, Gaussian elimination on columns."""
    work = [vec_mod(c, p) for c in cols]
    n = len(work)
    # augmented identity part records the column combinations
    combo = [{j: 1} for j in range(n)]
    pivot_of_row: dict[int, int] = {}
    for j in range(n):
        col = work[j]
        while col:
            r = min(col)
            if r in pivot_of_row:
                k = pivot_of_row[r]
                factor = (-col[r] * pow(work[k][r], p - 2, p)) % p
                vec_add_scaled(col, work[k], factor)
                col = vec_mod(col, p)
                work[j] = col
                vec_add_scaled(combo[j], combo[k], factor)
                combo[j] = vec_mod(combo[j], p)
            else:
                pivot_of_row[r] = j
                break
    return [combo[j] for j in range(n) if not work[j]]


def kernel_basis(matrix: SparseMatrix, ring: Ring) -> list[dict]:
    """Basis of {x : Mx = 0} over the ring, as sparse coefficient vectors.

    Over Z the basis spans the full integer kernel lattice (saturated). Over
    Q the integer basis is returned, it spans the rational kernel. Over F_p
    the matrix is reduced mod p first.
    """
    if ring.kind == "Fp":
        return _kernel_modp(matrix.cols, matrix.nrows, ring.p)
    return _kernel_int(matrix.cols, matrix.nrows)


def rank(matrix: SparseMatrix, ring: Ring) -> int:
    """Rank over the fraction field (Z and Q agree) or over F_p."""
    if ring.kind == "Fp":
        return matrix.ncols - len(_kernel_modp(matrix.cols, matrix.nrows, ring.p))
    return matrix.ncols - len(_kernel_int(matrix.cols, matrix.nrows))


def invariant_factors(matrix: SparseMatrix) -> list[int]:
    """Nonzero invariant factors d_1 | d_2 | ... of an integer matrix.

    Diagonalizes by elementary row and column operations without tracking
    transforms, then repairs the divisibility chain pairwise (diag(a, b) is
    equivalent to diag(gcd(a, b), lcm(a, b))).
    """
    cols = [dict(c) for c in matrix.cols]
    rows: dict[int, set] = {}
    live_cols = set()
    for j, c in enumerate(cols):
        if c:
            live_cols.add(j)
        for i in c.items():
            rows.setdefault(i[0], set()).add(j)

    def col_addmul(dst, src, q):
        if q == 0:
            return
        for i, v in cols[src].items():
            w = cols[dst].get(i, 0) - q * v
            if w:
                if i not in cols[dst]:
                    rows.setdefault(i, set()).add(dst)
                cols[dst][i] = w
            else:
                del cols[dst][i]
                rows[i].discard(dst)
        if cols[dst]:
            live_cols.add(dst)
        else:
            live_cols.discard(dst)

    def row_addmul(dst, src, q):
        if q == 0:
            return
        for j in list(rows.get(src, ())):
            v = cols[j].get(src)
            if v is None:
                rows[src].discard(j)
                continue
            w = cols[j].get(dst, 0) - q * v
            if w:
                if dst not in cols[j]:
                    rows.setdefault(dst, set()).add(j)
                cols[j][dst] = w
            else:
                del cols[j][dst]
                rows[dst].discard(j)
            if not cols[j]:
                live_cols.discard(j)

    diagonal = []
    while live_cols:
        # pick the entry with the smallest absolute value, preferring sparse
        # rows and columns to limit fill-in
        best = None
        for j in live_cols:
            for i, v in cols[j].items():
                key = (abs(v), len(rows.get(i, ())) * len(cols[j]))
                if best is None or key < best[0]:
                    best = (key, i, j)
                    if abs(v) == 1 and key[1] <= 4:
                        break
            else:
                continue
            break
        _, pi, pj = best
        # clear the pivot row and column; Euclidean remainders become the new
        # pivot, so |pivot| strictly decreases and the loop terminates
        while True:
            a = cols[pj][pi]
            for i in [i for i in list(cols[pj]) if i != pi]:
                row_addmul(i, pi, cols[pj][i] // a)
            leftovers = [(abs(v), i) for i, v in cols[pj].items() if i != pi]
            if leftovers:
                pi = min(leftovers)[1]
                continue
            for j in list(rows.get(pi, ())):
                if j != pj and pi in cols[j]:
                    col_addmul(j, pj, cols[j][pi] // a)
            leftovers = [(abs(cols[j][pi]), j) for j in rows.get(pi, ())
                         if j != pj and pi in cols[j]]
            if leftovers:
                pj = min(leftovers)[1]
                continue
            break
        diagonal.append(abs(cols[pj][pi]))
        for i in list(cols[pj]):
            rows[i].discard(pj)
        cols[pj] = {}
        live_cols.discard(pj)

    # repair divisibility: diag(a, b) is equivalent to diag(gcd, lcm), and
    # once every pair divides in order the list is an ascending chain
    diagonal = [d for d in diagonal if d]
    changed = True
    while changed:
        changed = False
        for i in range(len(diagonal)):
            for j in range(i + 1, len(diagonal)):
                a, b = diagonal[i], diagonal[j]
                if b % a:
                    g = gcd(a, b)
                    diagonal[i], diagonal[j] = g, a * b // g
                    changed = True
    return diagonal


# ---------------------------------------------------------------------------
# Smith normal form with transforms (dense, for moderate sizes)


def smith_normal_form(matrix) -> tuple[list[list[int]], list[list[int]], list[list[int]]]:
    """Smith normal form with unimodular transforms: M = U * D * V.

    Accepts a dense list-of-rows or a SparseMatrix; returns dense (U, D, V)
    with D diagonal, nonnegative, each diagonal entry dividing the next, and
    U, V unimodular. Pivoting is deterministic: smallest absolute value wins,
    ties broken by position.
    """
    if isinstance(matrix, SparseMatrix):
        d = matrix.to_dense()
    else:
        d = [list(r) for r in matrix]
    m = len(d)
    n = len(d[0]) if m else 0
    # maintain M = U * D * V: a row op E on D (D <- E D) is compensated by
    # U <- U E^{-1} (a column op on U); symmetrically for column ops and V.
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def row_addmul(i, k, q):  # D[i] -= q * D[k], U col k += q * U col i
        if q == 0:
            return
        Di, Dk = d[i], d[k]
        for j in range(n):
            Di[j] -= q * Dk[j]
        for r in range(m):
            U[r][k] += q * U[r][i]

    def col_addmul(j, k, q):  # D col j -= q * D col k, V row k += q * V row j
        if q == 0:
            return
        for i in range(m):
            d[i][j] -= q * d[i][k]
        Vk, Vj = V[k], V[j]
        for c in range(n):
            Vk[c] += q * Vj[c]

    def row_swap(i, k):
        d[i], d[k] = d[k], d[i]
        for r in range(m):
            U[r][i], U[r][k] = U[r][k], U[r][i]

    def col_swap(j, k):
        for i in range(m):
            d[i][j], d[i][k] = d[i][k], d[i][j]
        V[j], V[k] = V[k], V[j]

    def row_negate(i):
        d[i] = [-x for x in d[i]]
        for r in range(m):
            U[r][i] = -U[r][i]

    t = 0
    while True:
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if d[i][j]:
                    key = abs(d[i][j])
                    if best is None or key < best[0]:
                        best = (key, i, j)
        if best is None:
            break
        _, bi, bj = best
        row_swap(t, bi)
        col_swap(t, bj)
        while True:
            # clear column t with row ops
            again = False
            for i in range(t + 1, m):
                if d[i][t]:
                    q = d[i][t] // d[t][t]
                    row_addmul(i, t, q)
                    if d[i][t]:
                        row_swap(t, i)  # smaller remainder becomes the pivot
                        again = True
            if again:
                continue
            for j in range(t + 1, n):
                if d[t][j]:
                    q = d[t][j] // d[t][t]
                    col_addmul(j, t, q)
                    if d[t][j]:
                        col_swap(t, j)
                        again = True
            if not again:
                break
        if d[t][t] < 0:
            row_negate(t)
        t += 1

    # repair the divisibility chain: if d_t does not divide d_s (t < s), fold
    # column s into column t and rediagonalize the 2x2 block
    fixed = False
    while not fixed:
        fixed = True
        for a in range(t):
            for b in range(a + 1, t):
                if d[b][b] % d[a][a]:
                    fixed = False
                    col_addmul(a, b, -1)  # column a gains d[b][b] at row b
                    # now rows a, b and cols a, b hold [[da, 0], [db, db]]
                    while d[b][a] or d[a][b]:
                        if d[b][a]:
                            q = d[b][a] // d[a][a]
                            row_addmul(b, a, q)
                            if d[b][a]:
                                row_swap(a, b)
                        if d[a][b]:
                            q = d[a][b] // d[a][a]
                            col_addmul(b, a, q)
                            if d[a][b]:
                                col_swap(a, b)
                    if d[a][a] < 0:
                        row_negate(a)
                    if d[b][b] < 0:
                        row_negate(b)
    return U, d, V


def dense_matmul(A: list[list[int]], B: list[list[int]]) -> list[list[int]]:
    n, k = len(A), len(B)
    m = len(B[0]) if k else 0
    out = [[0] * m for _ in range(n)]
    for i in range(n):
        Ai = A[i]
        Oi = out[i]
        for t in range(k):
            a = Ai[t]
            if a:
                Bt = B[t]
                for j in range(m):
                    Oi[j] += a * Bt[j]
    return out


def dense_det(A: list[list[int]]) -> int:
    """Determinant by fraction-free (Bareiss) elimination."""
    a = [list(r) for r in A]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


# ---------------------------------------------------------------------------
# solving and lattice membership


class ColumnSolver:
    """Solve B y = t repeatedly for a fixed matrix B with independent columns.

    Over Z and Q the elimination runs in exact rational arithmetic; over Z the
    solution is verified to be integral (targets are expected to lie in the
    column lattice). Over F_p everything is reduced mod p.
    """

    def __init__(self, B: SparseMatrix, ring: Ring):
        self.ring = ring
        self.ncols = B.ncols
        self.nrows = B.nrows
        p = ring.p if ring.kind == "Fp" else None
        # columns in reduced form plus the combination that produced them
        self.reduced: list[dict] = []
        self.combos: list[dict] = []
        self.pivots: list[tuple[int, object]] = []  # (row, value)
        self.pivot_rows: dict[int, int] = {}  # row -> index into self.reduced
        for j in range(B.ncols):
            col = {i: Fraction(v) for i, v in B.cols[j].items()} if p is None \
                else vec_mod(B.cols[j], p)
            combo = {j: Fraction(1)} if p is None else {j: 1}
            col, combo = self._reduce(col, combo)
            if not col:
                raise ValueError("columns are linearly dependent")
            r = min(col)
            self.pivot_rows[r] = len(self.reduced)
            self.pivots.append((r, col[r]))
            self.reduced.append(col)
            self.combos.append(combo)

    def _reduce(self, col, combo):
        p = self.ring.p if self.ring.kind == "Fp" else None
        while col:
            r = min(col)
            k = self.pivot_rows.get(r)
            if k is None:
                break
            pv = self.reduced[k][r]
            if p is None:
                f = -col[r] / pv
                for i, v in self.reduced[k].items():
                    w = col.get(i, 0) + f * v
                    if w:
                        col[i] = w
                    else:
                        col.pop(i, None)
                for i, v in self.combos[k].items():
                    w = combo.get(i, 0) + f * v
                    if w:
                        combo[i] = w
                    else:
                        combo.pop(i, None)
            else:
                f = (-col[r] * pow(pv, p - 2, p)) % p
                vec_add_scaled(col, self.reduced[k], f)
                col = vec_mod(col, p)
                vec_add_scaled(combo, self.combos[k], f)
                combo = vec_mod(combo, p)
        return col, combo

    def solve(self, target: dict) -> dict | None:
        """Coefficients y with B y = target, or None if target not in span."""
        p = self.ring.p if self.ring.kind == "Fp" else None
        if p is None:
            col = {i: Fraction(v) for i, v in target.items()}
            combo: dict = {}
        else:
            col = vec_mod(target, p)
            combo = {}
        col, combo = self._reduce(col, combo)
        if col:
            return None
        if p is None:
            out = {}
            for j, v in combo.items():
                y = -v
                if self.ring.kind == "Z":
                    if y.denominator != 1:
                        return None
                    out[j] = int(y)
                else:
                    out[j] = y
                if out[j] == 0:
                    del out[j]
            return out
        return {j: (-v) % p for j, v in combo.items() if (-v) % p}


class LatticeMembership:
    """Membership tests x in span_Z(columns) via a column Hermite form."""

    def __init__(self, B: SparseMatrix):
        self.echelon: list[dict] = []  # columns with distinct minimal rows
        self.pivot_rows: dict[int, int] = {}
        for j in range(B.ncols):
            self.add(dict(B.cols[j]))

    def add(self, col: dict) -> None:
        while col:
            r = min(col)
            k = self.pivot_rows.get(r)
            if k is None:
                self.pivot_rows[r] = len(self.echelon)
                self.echelon.append(col)
                return
            a = self.echelon[k][r]
            b = col[r]
            if b % a == 0:
                vec_add_scaled(col, self.echelon[k], -(b // a))
            else:
                # replace the pivot by the gcd combination
                g = gcd(a, b)
                x, y = _xgcd(a, b)
                new = {}
                for i in set(self.echelon[k]) | set(col):
                    v = x * self.echelon[k].get(i, 0) + y * col.get(i, 0)
                    if v:
                        new[i] = v
                old = self.echelon[k]
                self.echelon[k] = new
                vec_add_scaled(col, new, -(b // g))
                col2 = dict(old)
                vec_add_scaled(col2, new, -(a // g))
                # both leftovers are zero at row r now; keep reducing them
                self.add(col2)

    def contains(self, vec: dict) -> bool:
        col = dict(vec)
        while col:
            r = min(col)
            k = self.pivot_rows.get(r)
            if k is None:
                return False
            a = self.echelon[k][r]
            if col[r] % a:
                return False
            vec_add_scaled(col, self.echelon[k], -(col[r] // a))
        return True


def _xgcd(a: int, b: int) -> tuple[int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return x0, y0


def saturated_submodule_basis(A: SparseMatrix, M: SparseMatrix,
                              B: SparseMatrix) -> list[dict]:
    """Basis of {x in span_Z(A) : M x in span_Z(B)}, as ambient vectors.

    A and B are column matrices spanning sublattices of Z^n and Z^m, M is an
    integer matrix Z^n -> Z^m. The result is a lattice basis of the stated
    subgroup of Z^n; when B is saturated the subgroup is saturated in span(A).
    """
    MA = M.matmat(A)
    stacked = SparseMatrix(M.nrows, A.ncols + B.ncols)
    for j in range(A.ncols):
        stacked.cols[j] = dict(MA.cols[j])
    for j in range(B.ncols):
        stacked.cols[A.ncols + j] = vec_scale(B.cols[j], -1)
    ker = _kernel_int(stacked.cols, stacked.nrows)
    # project kernel vectors to their A-coefficients and rebase
    proj = [{i: v for i, v in k.items() if i < A.ncols} for k in ker]
    proj = [p for p in proj if p]
    basis = _lattice_basis(proj)
    return [A.matvec(y) for y in basis]


def _lattice_basis(vectors: list[dict]) -> list[dict]:
    """Reduce spanning vectors of a lattice to a basis (column Hermite)."""
    mem = LatticeMembership(SparseMatrix(0, 0))
    for v in vectors:
        mem.add(dict(v))
    return [c for c in mem.echelon if c]


# ---------------------------------------------------------------------------
# homology of presented complexes


@dataclass(frozen=True)
class HomologySummary:
    """Homology (or cohomology) in one degree: free rank plus torsion."""

    degree: int
    free_rank: int
    torsion: tuple[int, ...] = ()

    def group(self) -> str:
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z/{d}" for d in self.torsion)
        return " + ".join(parts) if parts else "0"

    def __str__(self):
        return f"H_{self.degree} = {self.group()}"


@dataclass
class PresentedComplex:
    """A finitely generated free chain complex with explicit matrices.

    ``dims[k]`` is the rank in degree k, ``d[k]`` the matrix of the
    differential C_k -> C_{k-1} (columns indexed by degree-k generators).
    Cohomological complexes are stored the same way after reindexing by the
    caller; only the matrices matter here.
    """

    dims: dict[int, int] = field(default_factory=dict)
    d: dict[int, SparseMatrix] = field(default_factory=dict)
    labels: dict[int, list] = field(default_factory=dict)
    ring: "Ring | None" = None

    def check_dd_zero(self) -> None:
        """Entries of complexes over F_p are stored as residues, so the
        composite only has to vanish mod p there."""
        modulus = self.ring.p if self.ring and self.ring.kind == "Fp" else 0
        for k, dk in self.d.items():
            up = self.d.get(k + 1)
            if up is None:
                continue
            product = dk.matmat(up)
            zero = (all(v % modulus == 0 for _, _, v in product.entries())
                    if modulus else product.is_zero())
            if not zero:
                raise AssertionError(f"d_{k} . d_{k + 1} != 0")

    def degrees(self) -> list[int]:
        return sorted(self.dims)


class AmbientSubcomplex:
    """A subcomplex presented by lattice bases inside an ambient free complex.

    ``ambient_d[k]`` is the ambient differential out of degree k (lowering
    for chain complexes, raising when ``raising`` is set). ``basis[k]`` lists
    the degree-k generators as sparse vectors in ambient coordinates; over Z
    each degree's basis spans a saturated sublattice that the differential
    maps into the neighboring one.

    Homology is computed without basis-change bookkeeping: ranks come from
    the ambient images d * B, and over Z the torsion of H_k equals the
    invariant factors of the incoming image as an ambient matrix, because
    the cycle lattice is saturated in the ambient lattice and elementary
    divisors of a sublattice agree with those taken inside any saturated
    overlattice.
    """

    def __init__(self, ambient_dims: dict, ambient_d: dict, basis: dict,
                 ring: Ring, raising: bool = False):
        self.ambient_dims = ambient_dims
        self.ambient_d = ambient_d
        self.basis = {k: list(v) for k, v in basis.items()}
        self.ring = ring
        self.raising = raising
        self._image_cache: dict = {}
        self._rank_cache: dict = {}

    def degrees(self) -> list[int]:
        return sorted(self.basis)

    def dims(self) -> dict:
        return {k: len(self.basis[k]) for k in self.degrees()}

    def basis_matrix(self, k: int) -> SparseMatrix:
        return columns_from_vectors(self.ambient_dims.get(k, 0),
                                    self.basis.get(k, []))

    def image(self, k: int) -> SparseMatrix:
        """Ambient coordinates of the differential applied to the k-basis."""
        if k not in self._image_cache:
            target = k + 1 if self.raising else k - 1
            dk = self.ambient_d.get(k)
            vecs = self.basis.get(k, [])
            if dk is None:
                mat = SparseMatrix(self.ambient_dims.get(target, 0), len(vecs))
            else:
                mat = SparseMatrix(dk.nrows, len(vecs),
                                   [dk.matvec(v) for v in vecs])
            self._image_cache[k] = mat
        return self._image_cache[k]

    def _rank(self, k: int) -> int:
        if k not in self._rank_cache:
            if k not in self.basis or not self.basis[k]:
                self._rank_cache[k] = 0
            else:
                self._rank_cache[k] = rank(self.image(k), self.ring)
        return self._rank_cache[k]

    def homology(self) -> list[HomologySummary]:
        out = []
        for k in self.degrees():
            inc = k - 1 if self.raising else k + 1
            free = len(self.basis[k]) - self._rank(k) - self._rank(inc)
            torsion: tuple[int, ...] = ()
            if self.ring.kind == "Z" and self._rank(inc):
                torsion = tuple(d for d in invariant_factors(self.image(inc))
                                if d > 1)
            out.append(HomologySummary(k, free, torsion))
        return out

    def presented(self) -> PresentedComplex:
        """Explicit matrices of the induced differential in the given bases.

        Solving is exact; over Z the solutions are integral because each
        basis spans a saturated lattice containing the relevant image.
        """
        dims = self.dims()
        d: dict[int, SparseMatrix] = {}
        solvers: dict[int, ColumnSolver] = {}
        for k in self.degrees():
            target = k + 1 if self.raising else k - 1
            nrows = dims.get(target, 0)
            img = self.image(k)
            cols = []
            for j in range(img.ncols):
                col = img.cols[j]
                if not col:
                    cols.append({})
                    continue
                if target not in solvers:
                    if nrows == 0:
                        raise AssertionError(
                            f"degree {k} image nonzero but degree {target} empty")
                    solvers[target] = ColumnSolver(self.basis_matrix(target),
                                                   self.ring)
                sol = solvers[target].solve(col)
                if sol is None:
                    raise AssertionError(
                        f"differential leaves the subcomplex at degree {k}")
                cols.append(sol)
            d[k] = SparseMatrix(nrows, len(cols), cols)
        if self.raising:
            # reindex as a lowering complex: degree q becomes top - q
            top = max(dims) if dims else 0
            return PresentedComplex(dims={top - q: n for q, n in dims.items()},
                                    d={top - q: d[q] for q in d},
                                    ring=self.ring)
        return PresentedComplex(dims=dims, d=d, ring=self.ring)


def homology(complex: PresentedComplex, ring: Ring) -> list[HomologySummary]:
    """Homology of a presented complex over Z, Q or F_p.

    Over Z the torsion in degree k is read off the invariant factors of
    d_{k+1}: the kernel of d_k is a saturated sublattice of C_k containing
    im d_{k+1}, so Z^{n_k} / im d_{k+1} splits as H_k plus a free part and
    both quotients have the same torsion. Over a field only ranks matter.
    """
    out = []
    ranks: dict[int, int] = {}
    for k in complex.degrees():
        dk = complex.d.get(k)
        if dk is not None and complex.dims[k]:
            ranks[k] = rank(dk, ring)
        else:
            ranks[k] = 0
    for k in complex.degrees():
        n = complex.dims[k]
        rk = ranks.get(k, 0)
        rk1 = ranks.get(k + 1, 0)
        free = n - rk - rk1
        torsion: tuple[int, ...] = ()
        if ring.kind == "Z":
            up = complex.d.get(k + 1)
            if up is not None and rk1:
                torsion = tuple(d for d in invariant_factors(up) if d > 1)
        elif ring.kind == "Fp":
            # over F_p ranks are already mod p, no extra torsion bookkeeping
            pass
        out.append(HomologySummary(k, free, torsion))
    return out
