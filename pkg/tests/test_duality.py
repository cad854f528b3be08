"""Orientation, fundamental class, cap duality, cup pairing, Witt checks."""

import itertools
import random

import pytest

from strata.blowup import blowup_complex
from strata.chain_algebra import GF, Q, Z
from strata.constructions import build_recipe, library, product_circle
from strata.duality import (
    GroupPresentation,
    MissingLink,
    NonOrientable,
    NotPseudomanifold,
    augmentation,
    cap_matrices,
    duality,
    duality_map,
    fundamental_cycle,
    is_witt,
    orient,
    pairing,
)
from strata.filtered_complex import FilteredComplex
from strata.intersection_chains import intersection_complex, tame_complex
from strata.perversity import StratumPerversity, constant, lower_middle, top, zero
from strata.products import cap, cup

F2 = GF(2)


def cycle_vector(X, chain):
    return {X.index(s): c for s, c in chain.items()}


def group_table(summaries):
    return {h.degree: h.group() for h in summaries}


@pytest.fixture(scope="module")
def sphere2():
    return build_recipe("sphere(2)")


@pytest.fixture(scope="module")
def sigma_rp3():
    return library("sigma_rp3")


@pytest.fixture(scope="module")
def sigma_rp2():
    return library("sigma_rp2")


@pytest.fixture(scope="module")
def sus_circle():
    return build_recipe("suspension(sphere(1))")


# -- orientation ---------------------------------------------------------


def test_orient_boundary_tetrahedron_alternates(sphere2):
    assert orient(sphere2) == {
        (0, 1, 2): 1,
        (0, 1, 3): -1,
        (0, 2, 3): 1,
        (1, 2, 3): -1,
    }


def test_orient_rp2_is_nonorientable():
    with pytest.raises(NonOrientable):
        orient(library("rp2"))


def test_orient_rp2_over_f2_is_all_ones():
    signs = orient(library("rp2"), F2)
    assert set(signs.values()) == {1}
    assert len(signs) == len(library("rp2").simplices(2))


def test_orient_suspended_rp3_succeeds(sigma_rp3):
    signs = orient(sigma_rp3)
    assert set(signs.values()) <= {1, -1}
    assert len(signs) == len(sigma_rp3.simplices(4))


def test_orient_suspended_rp2_is_nonorientable(sigma_rp2):
    for ring in (Z, Q, GF(3)):
        with pytest.raises(NonOrientable):
            orient(sigma_rp2, ring)


def test_orient_rejects_open_surface():
    disk = FilteredComplex(2, {v: 2 for v in "abc"}, [("a", "b", "c")])
    with pytest.raises(NotPseudomanifold):
        orient(disk)


def test_orient_rejects_impure_complex():
    X = FilteredComplex(2, {v: 2 for v in "abcde"},
                        [("a", "b", "c"), ("d", "e")])
    with pytest.raises(NotPseudomanifold):
        orient(X)


def test_orient_validates_supplied_orientation():
    base = library("torus")
    signs = orient(base)
    levels = dict(base.level_of)
    good = FilteredComplex(2, levels, base.facets(), orientations=signs)
    assert orient(good) == signs

    flipped = dict(signs)
    first = next(iter(flipped))
    flipped[first] = -flipped[first]
    bad = FilteredComplex(2, levels, base.facets(), orientations=flipped)
    with pytest.raises(NonOrientable):
        orient(bad)


# -- fundamental cycle ---------------------------------------------------


def test_fundamental_cycle_sphere_has_zero_boundary(sphere2):
    gamma = fundamental_cycle(sphere2)
    sums = {}
    for s, sign in gamma.items():
        for i in range(3):
            face = s[:i] + s[i + 1:]
            sums[face] = sums.get(face, 0) + sign * (-1) ** i
    assert all(v == 0 for v in sums.values())


def test_fundamental_cycle_generates_torus_top_homology():
    X = library("torus")
    gamma = fundamental_cycle(X)
    pres = GroupPresentation(tame_complex(X, zero(), Z), 2)
    assert pres.free_rank == 1 and pres.torsion == ()
    coords = pres.class_coords(cycle_vector(X, gamma))
    assert sorted(coords.values()) in ([1], [-1])


def test_fundamental_cycle_of_suspension_is_tame_cycle(sigma_rp3):
    gamma = fundamental_cycle(sigma_rp3)
    assert set(gamma.values()) <= {1, -1}
    assert len(gamma) == len(sigma_rp3.simplices(4))


def test_fundamental_cycle_mod_two_on_nonorientable(sigma_rp2):
    gamma = fundamental_cycle(sigma_rp2, ring=F2)
    assert set(gamma.values()) == {1}


# -- cap matrices agree with the direct product -----------------------------


def test_cap_matrices_match_direct_cap(sus_circle):
    X = sus_circle
    bc = blowup_complex(X)
    gvec = cycle_vector(X, fundamental_cycle(X))
    caps = cap_matrices(bc, gvec)
    rng = random.Random(7)
    n = X.formal_dim
    for k in bc.degrees():
        cells = bc.cells.get(k, [])
        if not cells or k > n:
            continue
        omega = {j: rng.randint(-2, 2) for j in range(len(cells))}
        omega = {j: c for j, c in omega.items() if c}
        assert caps[k].matvec(omega) == cap(bc, k, omega, n, gvec)


# -- duality -------------------------------------------------------------


def test_duality_classical_sphere(sphere2):
    for ring in (Z, Q, F2):
        report = duality(sphere2, zero(), ring, check_representatives=True)
        assert report.iso
        assert [d.source.group() for d in report.degrees] == ["Z", "0", "Z"]
        assert [d.target.group() for d in report.degrees] == ["Z", "0", "Z"]


def test_duality_suspended_rp3_with_middle_values(sigma_rp3):
    report = duality(sigma_rp3, constant(1), Z)
    assert report.iso
    by_degree = {d.degree: d for d in report.degrees}
    assert by_degree[3].target.group() == "Z/2"  # homology degree 1
    assert by_degree[2].target.group() == "0"    # homology degree 2
    assert by_degree[0].target.group() == "Z"
    assert by_degree[4].target.group() == "Z"


def test_duality_suspension_sweep_all_rings(sus_circle):
    keys = [S.key for S in sus_circle.singular_strata()]
    for a, b in itertools.product(range(-2, 3), repeat=2):
        p = StratumPerversity({keys[0]: a, keys[1]: b})
        for ring in (Z, Q, F2):
            assert duality(sus_circle, p, ring).iso, (a, b, ring)


def test_duality_representative_independence(sus_circle):
    for v in range(-2, 3):
        report = duality(sus_circle, constant(v), Z,
                         check_representatives=True, seed=v + 5)
        assert report.iso


def test_duality_high_perversity_targets_tame_not_classical(sigma_rp2):
    with pytest.raises(NonOrientable):
        duality(sigma_rp2, constant(5), Z)
    report = duality(sigma_rp2, constant(5), F2, check_representatives=True)
    assert report.iso
    tame = group_table(tame_complex(sigma_rp2, constant(5), F2).homology())
    classical = group_table(
        intersection_complex(sigma_rp2, constant(5), F2).homology())
    assert tame != classical
    assert {d.degree: d.target.group() for d in report.degrees} == {
        k: tame.get(3 - k, "0") for k in range(4)
    }


def test_duality_map_single_degree_matches_report(sigma_rp3):
    report = duality(sigma_rp3, constant(1), Z)
    single = duality_map(sigma_rp3, constant(1), Z, 3)
    assert single.iso == report.degrees[3].iso
    assert single.matrix == report.degrees[3].matrix


# -- pairing -------------------------------------------------------------


def test_pairing_product_of_sphere_and_circle_is_unimodular():
    X = product_circle(build_recipe("sphere(2)"))
    for k in range(4):
        pm = pairing(X, zero(), k, Z)
        assert pm.square and pm.entries and pm.nondegenerate and pm.unimodular


def test_pairing_empty_is_vacuously_nondegenerate(sphere2):
    pm = pairing(sphere2, zero(), 1, Z)
    assert pm.entries == [] and pm.det == 1
    assert pm.square and pm.nondegenerate and pm.unimodular


def test_pairing_factors_through_duality(sigma_rp3):
    X = sigma_rp3
    bc = blowup_complex(X)
    n = X.formal_dim
    gamma = fundamental_cycle(X)
    gvec = cycle_vector(X, gamma)
    caps = cap_matrices(bc, gvec)
    p = lower_middle()
    q = p.complement()
    full = duality(X, top(), Z, gamma=gamma)
    deg_n = full.degrees[n]
    for k in (0, n):
        rows = GroupPresentation(bc.subcomplex(p, Z), k)
        cols = GroupPresentation(bc.subcomplex(q, Z), n - k)
        matrix = pairing(X, p, k, Z, gamma=gamma)
        for i, wa in enumerate(rows.free_quotient_reps()):
            for j, wb in enumerate(cols.free_quotient_reps()):
                fused = cup(bc, k, wa, n - k, wb)
                coords = deg_n.source.class_coords(fused)
                mapped = deg_n.matrix.matvec(coords)
                rep = {}
                for g, c in mapped.items():
                    for row, v in deg_n.target.gens.cols[g].items():
                        rep[row] = rep.get(row, 0) + c * v
                assert matrix.entries[i][j] == augmentation(rep)


def test_pairing_graded_commutativity_over_q():
    for name in ("suspension(sphere(1))", "sigma_rp3"):
        X = build_recipe(name) if "(" in name else library(name)
        n = X.formal_dim
        p = constant(1 if name == "sigma_rp3" else 0)
        q = p.complement()
        for k in range(n + 1):
            left = pairing(X, p, k, Q).entries
            right = pairing(X, q, n - k, Q).entries
            sign = (-1) ** (k * (n - k))
            transposed = [[sign * right[j][i] for j in range(len(right))]
                          for i in range(len(right[0]) if right else 0)]
            assert left == transposed or (not left and not transposed)


def test_pairing_middle_perversity_on_witt_space(sigma_rp3):
    for k in range(5):
        pm = pairing(sigma_rp3, lower_middle(), k, Z)
        assert pm.square and pm.nondegenerate, k


# -- Witt spaces ---------------------------------------------------------


def test_witt_even_codimension_is_vacuous(sigma_rp3):
    report = is_witt(sigma_rp3, Z)
    assert report.is_witt and bool(report)
    assert all(not row.applies and row.codim == 4 for row in report.strata)


def test_witt_depends_on_the_ring(sigma_rp2):
    over_z = is_witt(sigma_rp2, Z)
    assert not over_z.is_witt
    assert {row.middle_homology for row in over_z.strata} == {"Z/2"}
    over_q = is_witt(sigma_rp2, Q)
    assert over_q.is_witt
    assert {row.middle_homology for row in over_q.strata} == {"0"}


def test_witt_manifold_has_no_strata_to_check():
    report = is_witt(library("torus"), Z)
    assert report.is_witt and report.strata == []


def test_witt_missing_link_raises():
    base = library("cone_rp2")
    stripped = FilteredComplex(base.formal_dim, dict(base.level_of),
                               base.facets())
    assert stripped.stratum_links == {}
    with pytest.raises(MissingLink):
        is_witt(stripped, Z)
