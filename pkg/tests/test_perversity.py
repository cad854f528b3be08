"""Perversity values, arithmetic, comparison and serialization."""

import pytest

from strata import perversity as pv
from strata.constructions import product_circle, rp2, rp3, sphere, suspension
from strata.perversity import (
    GMPerversity,
    StratumPerversity,
    UnknownStratum,
    parse_perversity,
)


def sigma_rp2():
    return suspension(rp2())


class TestPresets:
    def test_values_on_codim3(self):
        X = sigma_rp2()
        S = X.stratum_by_key(0, 0)
        assert pv.zero().value(S) == 0
        assert pv.top().value(S) == 1
        assert pv.lower_middle().value(S) == 0
        assert pv.upper_middle().value(S) == 1

    def test_values_on_codim4(self):
        X = suspension(rp3())
        S = X.stratum_by_key(0, 0)
        assert pv.top().value(S) == 2
        assert pv.lower_middle().value(S) == 1
        assert pv.upper_middle().value(S) == 1

    def test_regular_always_zero(self):
        X = sigma_rp2()
        reg = X.strata[-1]
        assert reg.is_regular
        for p in (pv.zero(), pv.top(), pv.constant(17)):
            assert p.value(reg) == 0

    def test_codim_one(self):
        # a point at the top of an interval: codim 1 stratum
        X = pv.FilteredComplex(1, {"w": 0, 0: 1, 1: 1}, [("w", 0), (0, 1)])
        S = X.stratum_by_key(0, 0)
        assert S.codim == 1
        assert pv.top().value(S) == -1
        assert pv.zero().value(S) == 0


class TestGMTable:
    def test_lookup(self):
        X = suspension(rp3())
        p = GMPerversity([0, 1, 1])
        assert p.value(X.stratum_by_key(0, 0)) == 1

    def test_growth_enforced(self):
        with pytest.raises(ValueError):
            GMPerversity([0, 2])
        with pytest.raises(ValueError):
            GMPerversity([0, 1, 0])
        with pytest.raises(ValueError):
            GMPerversity([1])

    def test_out_of_table(self):
        X = suspension(rp3())  # codim 4 strata
        with pytest.raises(UnknownStratum):
            GMPerversity([0, 1]).value(X.stratum_by_key(0, 0))

    def test_codim_one_refused(self):
        X = pv.FilteredComplex(1, {"w": 0, 0: 1, 1: 1}, [("w", 0), (0, 1)])
        with pytest.raises(UnknownStratum):
            GMPerversity([0]).value(X.stratum_by_key(0, 0))


class TestStratumMap:
    def test_values_and_missing(self):
        X = sigma_rp2()
        p = StratumPerversity({(0, 0): 5, (0, 1): -2})
        assert p.value(X.stratum_by_key(0, 0)) == 5
        assert p.value(X.stratum_by_key(0, 1)) == -2
        q = StratumPerversity({(0, 0): 1})
        with pytest.raises(UnknownStratum):
            q.value(X.stratum_by_key(0, 1))

    def test_materialize(self):
        X = sigma_rp2()
        m = pv.top().materialize(X)
        assert m.values == {(0, 0): 1, (0, 1): 1}


class TestArithmetic:
    def test_complement_involution(self):
        X = suspension(rp3())
        p = StratumPerversity({(0, 0): 3, (0, 1): -1})
        dd = p.complement().complement()
        assert dd.eq_on(p, X)

    def test_complement_of_zero_is_top(self):
        X = sigma_rp2()
        assert pv.zero().complement().eq_on(pv.top(), X)

    def test_middle_complements(self):
        for X in (sigma_rp2(), suspension(rp3())):
            assert pv.lower_middle().complement().eq_on(pv.upper_middle(), X)
            assert (pv.lower_middle() + pv.upper_middle()).eq_on(pv.top(), X)

    def test_complement_on_codim4(self):
        X = suspension(rp3())
        S = X.stratum_by_key(0, 0)
        assert pv.lower_middle().complement().value(S) == 1

    def test_leq(self):
        X = sigma_rp2()
        assert pv.zero().leq(pv.top(), X)
        assert not StratumPerversity({(0, 0): 3, (0, 1): 0}).leq(pv.top(), X)

    def test_signature(self):
        X = sigma_rp2()
        assert pv.top().signature(X) == (((0, 0), 1), ((0, 1), 1))


class TestParse:
    def test_presets(self):
        for name in ("zero", "top", "lower-middle", "upper-middle"):
            assert parse_perversity(name).to_json() == {"preset": name}

    def test_constant(self):
        X = sigma_rp2()
        p = parse_perversity("2")
        assert p.value(X.stratum_by_key(0, 0)) == 2

    def test_json_forms(self):
        p = parse_perversity('{"gm": [0, 1]}')
        assert isinstance(p, GMPerversity)
        q = parse_perversity('{"strata": [{"level": 0, "id": 0, "value": 4}]}')
        assert isinstance(q, StratumPerversity)
        assert q.values == {(0, 0): 4}
        assert pv.from_json(q.to_json()).values == q.values

    def test_bad_input(self):
        with pytest.raises(ValueError):
            parse_perversity("middling")


class TestProductStrata:
    def test_product_keeps_codim(self):
        X = product_circle(sigma_rp2(), 3)
        sing = X.singular_strata()
        assert [s.codim for s in sing] == [3, 3]
        assert pv.top().value(sing[0]) == 1
