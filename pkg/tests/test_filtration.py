"""Filtered complex construction, validation, strata and join decompositions."""

import pytest

from strata.chain_algebra import Z
from strata.constructions import (
    chain_complex,
    cone,
    rp2,
    sphere,
    suspension,
)
from strata.filtered_complex import (
    NEG_INF,
    DimensionViolation,
    EmptyRegularPart,
    FilteredComplex,
    NonSimplicial,
)


def tiny_suspension():
    """Suspension of 3 points on a circle: S^2 with two marked points."""
    return suspension(sphere(1))


class TestBuild:
    def test_trivial_filtration_sphere(self):
        X = sphere(2)
        assert X.formal_dim == 2
        assert X.dim == 2
        assert len(X.strata) == 1
        assert X.strata[0].is_regular

    def test_faces_generated_and_sorted(self):
        X = FilteredComplex(1, {3: 1, 1: 1, 2: 1}, [(3, 1), (1, 2)])
        assert X.simplices(0) == [(1,), (2,), (3,)]
        assert X.simplices(1) == [(1, 2), (1, 3)]

    def test_vertex_order_level_first(self):
        X = suspension(sphere(1))
        # apexes are level 0 and come first; base levels shift up to 2
        assert set(X.vertices[:2]) == {"N", "S"}
        assert all(X.level_of[v] == 2 for v in X.vertices[2:])

    def test_repeated_vertex_rejected(self):
        with pytest.raises(NonSimplicial):
            FilteredComplex(1, {0: 1, 1: 1}, [(0, 0)])

    def test_level_out_of_range(self):
        with pytest.raises(DimensionViolation):
            FilteredComplex(1, {0: 2, 1: 1}, [(0, 1)])

    def test_no_top_level_vertex(self):
        with pytest.raises(EmptyRegularPart):
            FilteredComplex(2, {0: 0, 1: 1, 2: 1}, [(0, 1), (1, 2)])

    def test_skeleton_dimension_violation(self):
        # an edge between two level-0 vertices puts a 1-simplex in X_0
        with pytest.raises(DimensionViolation):
            FilteredComplex(1, {0: 0, 1: 0, 2: 1}, [(0, 1), (1, 2)])

    def test_missing_level(self):
        with pytest.raises(KeyError):
            FilteredComplex(1, {0: 1}, [(0, 5)])


class TestStrata:
    def test_suspension_strata(self):
        X = tiny_suspension()
        keys = [(s.level, s.index, s.codim) for s in X.strata]
        assert keys == [(0, 0, 2), (0, 1, 2), (2, 0, 0)]
        north = X.stratum_by_key(0, 0)
        assert north.simplices == {("N",)}
        assert not north.is_regular
        assert X.strata[2].is_regular

    def test_partition(self):
        X = suspension(rp2())
        seen = set()
        for st in X.strata:
            assert seen.isdisjoint(st.simplices)
            seen.update(st.simplices)
        assert seen == set(X.all_simplices())

    def test_cone_strata(self):
        X = cone(rp2())
        assert [(s.level, s.codim) for s in X.strata] == [(0, 3), (3, 0)]

    def test_two_components_same_level(self):
        # a square with two level-0 corners: each level splits in two
        X = FilteredComplex(
            1,
            {"a": 0, "b": 0, 0: 1, 1: 1},
            [("a", 0), (0, "b"), ("b", 1), (1, "a")],
        )
        assert [(s.level, s.index) for s in X.strata] == [
            (0, 0), (0, 1), (1, 0), (1, 1)]
        # the level-1 components are joined through their level-1 vertex
        assert {("a", 0), ("b", 0), (0,)} in [set(s.simplices) for s in X.strata]

    def test_met_strata(self):
        X = tiny_suspension()
        apex_edge = next(s for s in X.simplices(1) if s[0] == "N")
        met = X.met_strata(apex_edge)
        assert [(s.level, s.index) for s in met] == [(0, 0), (2, 0)]
        regular_edge = next(
            s for s in X.simplices(1) if X.level_of[s[0]] == 2)
        met = X.met_strata(regular_edge)
        assert [(s.level, s.index) for s in met] == [(2, 0)]


class TestJoinDecomposition:
    def test_counts(self):
        X = suspension(rp2())
        simplex = next(s for s in X.simplices(2) if s[0] == "N")
        jd = X.join_decomposition(simplex)
        assert jd.counts == (0, -1, -1, 1)
        assert jd.dim == 2
        assert jd.is_regular

    def test_all_regular(self):
        X = sphere(2)
        for s in X.simplices(2):
            jd = X.join_decomposition(s)
            assert jd.counts == (-1, -1, 2)
            assert jd.is_regular

    def test_perverse_degree(self):
        X = suspension(rp2())
        simplex = next(s for s in X.simplices(2) if s[0] == "N")
        jd = X.join_decomposition(simplex)
        # the part of the simplex in X_0 is the apex: dimension 0
        assert jd.perverse_degree(3) == 0
        assert jd.perverse_degree(0) == 2
        regular = next(s for s in X.simplices(2) if X.level_of[s[0]] == 3)
        assert X.join_decomposition(regular).perverse_degree(3) == NEG_INF

    def test_nonregular(self):
        X = tiny_suspension()
        jd = X.join_decomposition(("N",))
        assert not jd.is_regular
        assert jd.dim == 0


class TestBoundary:
    def test_dd_zero(self):
        for X in (sphere(2), tiny_suspension(), cone(sphere(1))):
            chain_complex(X).check_dd_zero()

    def test_signs(self):
        X = FilteredComplex(2, {0: 2, 1: 2, 2: 2}, [(0, 1, 2)])
        d = X.boundary_matrix(2)
        col = d.column(0)
        edges = X.simplices(1)
        assert col[edges.index((1, 2))] == 1
        assert col[edges.index((0, 2))] == -1
        assert col[edges.index((0, 1))] == 1

    def test_canonical_parity(self):
        X = sphere(2)
        canon, sign = X.canonical((2, 0, 1))
        assert canon == (0, 1, 2)
        assert sign == 1
        canon, sign = X.canonical((1, 0, 2))
        assert sign == -1


class TestSerialization:
    def test_roundtrip(self):
        X = suspension(rp2())
        Y = FilteredComplex.loads(X.dumps())
        assert Y.dumps() == X.dumps()
        assert Y.formal_dim == X.formal_dim
        assert set(Y.all_simplices()) == set(X.all_simplices())
        assert list(Y.stratum_links) == list(X.stratum_links)

    def test_formal_dim_inferred(self):
        X = FilteredComplex.from_json(
            {"vertices": [{"id": 0, "level": 1}, {"id": 1, "level": 1}],
             "simplices": [[0, 1]]})
        assert X.formal_dim == 1

    def test_orientations_roundtrip(self):
        X = FilteredComplex(
            1, {0: 1, 1: 1, 2: 1},
            [(0, 1), (1, 2), (0, 2)],
            orientations=[((0, 1), 1), ((1, 2), 1), ((2, 0), 1)],
        )
        # (2, 0) is stored canonically as (0, 2) with flipped sign
        assert X.orientations[(0, 2)] == -1
        Y = FilteredComplex.loads(X.dumps())
        assert Y.orientations == X.orientations


class TestFacets:
    def test_facets_maximal(self):
        X = sphere(2)
        assert X.facets() == X.simplices(2)
        Y = FilteredComplex(1, {0: 1, 1: 1, 2: 1}, [(0, 1), (2,)])
        assert Y.facets() == [(2,), (0, 1)]
