"""Cup and cap products on blown-up cochains, and the comparison map.

Local formulas act on tensor basis elements over one host decomposition
(faces of cone factors, apex-last vertex order; the same tuples serve as
chain and cochain indices). Global products act on class coordinates: a
degree-k cochain is a sparse vector over the degree-k cells of a
BlowupComplex, a degree-m chain is a sparse vector over the ambient
simplices of the space, so cap results plug directly into the tame
intersection machinery.

Signs: the factor cup carries (-1)^(|F| |G|), tensor products interchange
with (-1)^(sum over factor pairs in reversed order), and the tilde cap
carries the nu exponent weighting each host factor size against the total
cochain degree above it.
"""

from __future__ import annotations

import random

from .blowup import BlowupComplex, blowup_complex
from .filtered_complex import NEG_INF
from .intersection_chains import regular_boundary_matrix


# ---------------------------------------------------------------------------
# local products


def cup_local(a, b):
    """Factor-wise front/back cup of two tensor basis elements.

    Returns (sign, element) or None when some factor pair is incompatible
    (the last vertex of the left face must be the first of the right one;
    on cone factors the apex counts as the last vertex of a coned face).
    """
    n = len(a) - 1
    fused = []
    for i in range(n + 1):
        face, eps = a[i]
        other, eps2 = b[i]
        if eps == 1:
            # left factor ends at the apex: right must start there
            if other:
                return None
            fused.append((face, 1))
        elif face and other and face[-1] == other[0]:
            fused.append((face + other[1:], eps2))
        else:
            return None
    dega = [len(f) - 1 + e for f, e in a]
    degb = [len(g) - 1 + e for g, e in b]
    exponent = sum(dega[i] * degb[i] for i in range(n + 1))
    exponent += sum(dega[i] * degb[j] for i in range(n + 1) for j in range(i))
    return (-1) ** exponent, tuple(fused)


def cap_simplex(front, part):
    """Back face [e_r..e_m] of a simplex when front = [e_0..e_r], else None."""
    r = len(front)
    if r and front == part[:r]:
        return part[r - 1:]
    return None


def fundamental_chain(parts):
    """Top chain of the blown-up host: every level below the top coned
    off (apex last), the top level as is."""
    n = len(parts) - 1
    return tuple((parts[i], 1) for i in range(n)) + ((parts[n], 0),)


def nu_exponent(element, parts):
    """Interchange exponent of the tilde cap against the host's
    fundamental chain: each factor size weighs the cochain degree above."""
    n = len(element) - 1
    degrees = [len(f) - 1 + e for f, e in element]
    return sum(len(parts[j]) * sum(degrees[j + 1:]) for j in range(n))


def tilde_cap(element, chain):
    """Cap a tensor cochain element with a tensor chain element.

    Each factor caps classically inside its cone (a coned face (G, 1) has
    the apex last, so its back faces keep the apex and its only front face
    containing the apex is the whole cone). Returns (sign, chain element)
    or None when some factor cap vanishes; the sign interchanges each
    chain factor degree with the cochain degrees above it.
    """
    out = []
    for (face, eps), (host, eta) in zip(element, chain):
        if eta == 0:
            if eps == 1:
                return None
            back = cap_simplex(face, host)
            if back is None:
                return None
            out.append((back, 0))
        elif eps == 0:
            back = cap_simplex(face, host)
            if back is None:
                return None
            out.append((back, 1))
        else:
            if face != host:
                return None
            out.append(((), 1))
    cdeg = [len(host) - 1 + eta for host, eta in chain]
    fdeg = [len(f) - 1 + e for f, e in element]
    nu = sum(cdeg[j] * sum(fdeg[j + 1:]) for j in range(len(element) - 1))
    return (-1) ** nu, tuple(out)


def mu_blowdown(element):
    """Blowdown of a tensor chain element to a face of the host, or None.

    Joins the factors up to the first one that is not coned off, provided
    everything above carries no dimension.
    """
    ell = next(j for j, (_, e) in enumerate(element) if e == 0)
    total = sum(len(f) - 1 + e for f, e in element)
    join = tuple(v for f, _ in element[:ell + 1] for v in f)
    if total != len(join) - 1:
        return None
    return join


def cap_local(element, parts):
    """Local intersection cap: blowdown of the tilde cap against the
    host's fundamental chain. (sign, face) or None; the face always meets
    the top level, so it is regular."""
    hit = tilde_cap(element, fundamental_chain(parts))
    if hit is None:
        return None
    sign, chain = hit
    face = mu_blowdown(chain)
    if face is None:
        return None
    return sign, face


# ---------------------------------------------------------------------------
# global products on class coordinates


def cup(bc: BlowupComplex, k1: int, omega: dict, k2: int, eta: dict) -> dict:
    """Componentwise cup of two global cochains, in class coordinates.

    The support of a fused element is the union of the two supports, so the
    result coefficient can be read off inside the fused support itself; a
    pair without a common host contributes nowhere.
    """
    X = bc.X
    cells1 = bc.cells.get(k1, [])
    cells2 = bc.cells.get(k2, [])
    out: dict = {}
    for j1, c1 in omega.items():
        a = bc.cell_element(cells1[j1])
        for j2, c2 in eta.items():
            hit = cup_local(a, bc.cell_element(cells2[j2]))
            if hit is None:
                continue
            sign, fused = hit
            support = tuple(v for f, _ in fused for v in f)
            if support not in X:
                continue
            eps = tuple(e for _, e in fused[:-1])
            j = bc.index[(support, eps)][1]
            out[j] = out.get(j, 0) + sign * c1 * c2
    return {j: c for j, c in out.items() if c}


def unit_cochain(bc: BlowupComplex) -> dict:
    """The degree-0 cochain equal to 1 on every vertex of every blown-up
    host: coefficient 1 on every degree-0 class."""
    return {j: 1 for j in range(len(bc.cells.get(0, [])))}


def cap(bc: BlowupComplex, k: int, omega: dict, m: int, xi: dict) -> dict:
    """Global cap of a degree-k cochain with a degree-m chain.

    xi is a sparse vector over the ambient degree-m simplices; non-regular
    simplices cap to zero. Returns a sparse vector over the ambient
    degree-(m-k) simplices.
    """
    if k > m:
        return {}
    X = bc.X
    hosts = X.simplices(m)
    target = {s: j for j, s in enumerate(X.simplices(m - k))}
    cells = bc.cells.get(k, [])
    out: dict = {}
    for js, weight in xi.items():
        sigma = hosts[js]
        if not X.is_regular_simplex(sigma):
            continue
        parts = bc.partition(sigma)
        vertices = set(sigma)
        for jc, coeff in omega.items():
            cell = cells[jc]
            if not set(cell[0]) <= vertices:
                continue
            hit = cap_local(bc.cell_element(cell), parts)
            if hit is None:
                continue
            sign, face = hit
            j = target[face]
            out[j] = out.get(j, 0) + sign * weight * coeff
    return {j: c for j, c in out.items() if c}


# ---------------------------------------------------------------------------
# comparison with the dual tame complex


def chain_orientation_sign(parts) -> int:
    """Coherent orientation of a host's fundamental chain.

    Removing a vertex from a host must match the ambient face incidence
    against the blown-up coboundary; that forces the relative sign
    (-1)^(sum of level-size products over level pairs, plus the number of
    vertices below the top level). Hosts inside one level get +1, so the
    comparison map stays the identity on a manifold.
    """
    lens = [len(p) for p in parts]
    pairs = sum(lens[j] * lens[i]
                for j in range(len(lens)) for i in range(j + 1, len(lens)))
    return (-1) ** (pairs + sum(lens[:-1]))


def chi_ambient(bc: BlowupComplex, k: int, omega: dict) -> dict:
    """The comparison functional as ambient simplex coefficients.

    Evaluating a global cochain on the oriented fundamental chain of a
    regular simplex extracts its coefficient on the class with every cone
    marker set, times the orientation sign; the resulting functional on
    tame chains is the dot product with these coefficients. It intertwines
    the blown-up coboundary with (delta f)(xi) = (-1)^(k+1) f(d xi) on
    functionals of allowable cochains evaluated against tame chains of the
    complementary perversity.
    """
    X = bc.X
    ones = (1,) * bc.n
    out = {}
    for j, sigma in enumerate(X.simplices(k)):
        if not X.is_regular_simplex(sigma):
            continue
        spot = bc.index.get((sigma, ones))
        if spot is None:
            continue
        value = omega.get(spot[1], 0)
        if value:
            out[j] = chain_orientation_sign(bc.partition(sigma)) * value
    return out


def cochain_stratum_degree(bc: BlowupComplex, vec: dict, k: int, stratum):
    """Perverse degree of a global cochain along one singular stratum: the
    max of the cell degrees over support cells whose simplex meets the
    stratum closure-to-closure."""
    best = NEG_INF
    cells = bc.cells.get(k, [])
    for j, c in vec.items():
        if not c:
            continue
        cell = cells[j]
        if stratum.key not in bc.star_met_strata(cell[0]):
            continue
        value = bc.cell_perverse_degree(cell, stratum.codim)
        if value is not NEG_INF and value > best:
            best = value
    return best


# ---------------------------------------------------------------------------
# randomized verification


def _vdiff(a: dict, b: dict) -> dict:
    out = dict(a)
    for j, c in b.items():
        out[j] = out.get(j, 0) - c
    return {j: c for j, c in out.items() if c}


def _random_vec(n: int, rng: random.Random, density: float = 0.5) -> dict:
    return {j: rng.choice([-2, -1, 1, 2]) for j in range(n)
            if rng.random() < density}


def verify_product_identities(X, trials: int = 200, seed: int = 0) -> dict:
    """Stress the product layer on one space with random inputs.

    Each trial draws cochain degrees k, l with k + l <= dim X, a chain
    degree m in [k + l, dim X], random cochains over the degree-k and
    degree-l cells, a third random cochain of complementary degree, and a
    random ambient chain, then checks four identities exactly:

    * coboundary_rule: d(w cap x) = (delta w) cap x + (-1)^k w cap (d x),
      with d the boundary truncated to regular simplices;
    * adjunction: (w cup e) cap x = (-1)^(kl) e cap (w cap x);
    * associativity: (w cup e) cup f = w cup (e cup f);
    * unit: the unit cochain caps to the identity on chains supported on
      regular simplices.

    Returns a report dict with per-identity run and failure counts; the
    "failures" total is 0 exactly when every check passed.
    """
    bc = blowup_complex(X)
    rng = random.Random(seed)
    dim = X.dim
    degrees = [k for k in bc.degrees() if k <= dim]
    checks = {name: {"runs": 0, "failures": 0}
              for name in ("coboundary_rule", "adjunction", "associativity",
                           "unit")}

    def record(name, ok):
        checks[name]["runs"] += 1
        if not ok:
            checks[name]["failures"] += 1

    done = 0
    while done < trials:
        k = rng.choice(degrees)
        l = rng.choice(degrees)
        if k + l > dim:
            continue
        done += 1
        m = rng.randint(k + l, dim)
        omega = _random_vec(len(bc.cells[k]), rng)
        eta = _random_vec(len(bc.cells[l]), rng)
        xi = _random_vec(len(X.simplices(m)), rng)

        capped = cap(bc, k, omega, m, xi)
        lhs = (regular_boundary_matrix(X, m - k).matvec(capped)
               if m > k else {})
        rhs = {}
        if k + 1 in bc.cells:
            rhs = cap(bc, k + 1, bc.delta(k).matvec(omega), m, xi)
        if m - 1 >= k:
            inner = regular_boundary_matrix(X, m).matvec(xi)
            sign = (-1) ** k
            for j, c in cap(bc, k, omega, m - 1, inner).items():
                rhs[j] = rhs.get(j, 0) + sign * c
        record("coboundary_rule", not _vdiff(lhs, rhs))

        left = cap(bc, k + l, cup(bc, k, omega, l, eta), m, xi)
        right = cap(bc, l, eta, m - k, capped)
        sign = (-1) ** (k * l)
        record("adjunction",
               left == {j: sign * c for j, c in right.items()})

        rest = [j for j in degrees if k + l + j <= dim]
        k3 = rng.choice(rest) if rest else 0
        theta = _random_vec(len(bc.cells[k3]), rng)
        assoc_left = cup(bc, k + l, cup(bc, k, omega, l, eta), k3, theta)
        assoc_right = cup(bc, k, omega, l + k3, cup(bc, l, eta, k3, theta))
        record("associativity", not _vdiff(assoc_left, assoc_right))

        regular = {j: c for j, c in xi.items()
                   if X.is_regular_simplex(X.simplices(m)[j])}
        record("unit", cap(bc, 0, unit_cochain(bc), m, regular) == regular)

    return {
        "trials": trials,
        "dim": dim,
        "checks": checks,
        "failures": sum(c["failures"] for c in checks.values()),
    }
