"""Moduli classes, the limiting constant, and convergence reports."""

import logging
from fractions import Fraction

import pytest

from toricurves.grothendieck import (
    MINUS_INFINITY,
    L,
    ONE,
    ZERO,
    LaurentClass,
    SeriesCap,
)
from toricurves.toric import fan_product, picard_data
from toricurves.moduli import (
    DegreeVector,
    ErrorReport,
    JetCondition,
    constrained_main_term,
    convergence_report,
    expected_dimension_check,
    hom_class,
    normalized_hom_class,
    open_curve_config_series,
    pattern_config_class,
    pattern_config_series,
    tamagawa,
)
from toricurves import oracle


class TestDegreeVector:
    def test_of_accepts_sequences_and_itself(self):
        dv = DegreeVector.of([1, 2, 0])
        assert dv.entries == (1, 2, 0)
        assert DegreeVector.of(dv) is dv

    def test_totals(self):
        dv = DegreeVector.of((3, 1, 2))
        assert dv.total == 6
        assert dv.minimum == 1
        assert list(dv) == [3, 1, 2]
        assert len(dv) == 3

    def test_rejects_negative_entries(self):
        with pytest.raises(ValueError):
            DegreeVector.of((1, -1))


class TestConfigClasses:
    def test_disjoint_point_pairs_on_the_line(self, p1):
        assert pattern_config_class(p1, (1, 1)) == L**2 + L

    def test_disjoint_divisor_pairs_degree_two(self, p1):
        # checked by hand over F_2: 24 disjoint pairs of degree-2 divisors
        got = pattern_config_class(p1, (2, 2))
        assert got == L**4 + L**3
        assert got.evaluate(2) == 24

    def test_empty_degree_gives_one(self, p2):
        assert pattern_config_class(p2, (0, 0, 0)) == ONE

    def test_arity_mismatch(self, p2):
        with pytest.raises(ValueError):
            pattern_config_class(p2, (1, 1))

    def test_series_matches_per_degree_classes(self, p1xp1):
        cap = SeriesCap.box_cap((2, 2, 2, 2), total=4)
        series = pattern_config_series(p1xp1, cap)
        for e, value in series.items():
            assert value == pattern_config_class(p1xp1, e), e

    @pytest.mark.parametrize("s", [0, 1, 2])
    def test_dense_route_agrees(self, p1, p2, s):
        """The avoidance-indicator route and the factored route compute
        the same configuration series."""
        for fan, box in ((p1, (3, 3)), (p2, (2, 2, 2))):
            cap = SeriesCap.box_cap(box)
            a = pattern_config_series(fan, cap, s)
            b = open_curve_config_series(fan, cap, s)
            assert a.coeffs == b.coeffs, (fan.nrays, s)

    def test_specializes_to_point_counts(self, p2, bl1p2):
        for fan, e, p in ((p2, (1, 1, 1), 2), (p2, (2, 2, 2), 3),
                          (bl1p2, (1, 1, 1, 2), 3)):
            predicted = pattern_config_class(fan, e).evaluate(p)
            assert predicted == oracle.ff_pattern_count(p, fan, e), (e, p)


class TestHomClasses:
    def test_line_to_line_degree_one(self, p1):
        assert hom_class(p1, (1, 1)) == L**3 - L

    def test_degree_zero_maps_are_torus_points(self, p1, p2, p1xp1):
        assert hom_class(p1, (0, 0)) == L - ONE
        assert hom_class(p2, (0, 0, 0)) == (L - ONE) ** 2
        assert hom_class(p1xp1, (0, 0, 0, 0)) == (L - ONE) ** 2

    def test_plane_degree_one(self, p2):
        want = (L - ONE) ** 2 * L * (L + ONE) * (L + 2 * ONE)
        assert hom_class(p2, (1, 1, 1)) == want
        assert want.evaluate(3) == 240

    def test_off_cone_is_zero_with_warning(self, p2, caplog):
        with caplog.at_level(logging.WARNING, logger="toricurves.moduli"):
            assert hom_class(p2, (1, 0, 1)) == ZERO
        assert any("dual effective cone" in r.message for r in caplog.records)

    def test_normalized_line_is_stationary(self, p1):
        for d in range(1, 7):
            got = normalized_hom_class(p1, (d, d))
            assert got == L - LaurentClass.lefschetz(-1), d

    def test_normalized_plane_degree_one(self, p2):
        got = normalized_hom_class(p2, (1, 1, 1))
        assert got == LaurentClass({2: 1, 1: 1, 0: -3, -1: -1, -2: 2})

    def test_expected_dimension(self, p1, p2, bl1p2, dp6):
        assert expected_dimension_check(p1, (2, 2))
        assert expected_dimension_check(p2, (1, 1, 1))
        assert expected_dimension_check(bl1p2, (1, 1, 1, 2))
        assert expected_dimension_check(dp6, (1, 1, 1, 1, 1, 1))
        # empty moduli space off the cone: dimension check fails honestly
        assert not expected_dimension_check(p2, (2, 1, 1))

    def test_product_fans_multiply(self, p1):
        square = fan_product(p1, p1)
        for d in ((1, 1), (2, 2), (1, 2)):
            da, db = (d[0], d[0]), (d[1], d[1])
            want = hom_class(p1, da) * hom_class(p1, db)
            assert hom_class(square, da + db) == want, d


class TestTamagawa:
    def test_line_constant_is_exact(self, p1):
        tau = tamagawa(p1, 6)
        assert tau.known == L - LaurentClass.lefschetz(-1)
        assert tau.floor == -2

    def test_plane_constant(self, p2):
        tau = tamagawa(p2, 12)
        limit = (L**2 + L + ONE) * (ONE - LaurentClass.lefschetz(-2))
        assert tau.known == limit.truncate_below(tau.floor)
        assert tau.floor == -4

    def test_floor_tracks_truncation_order(self, fans):
        for name, fan in fans.items():
            for E in (0, 4, 9):
                tau = tamagawa(fan, E)
                assert tau.floor == 1 - ((E + 2) // 2) + fan.dim, (name, E)

    def test_product_constant_multiplies(self, p1):
        square = fan_product(p1, p1)
        tau_sq = tamagawa(square, 8)
        tau_line = tamagawa(p1, 8)
        prod = tau_line * tau_line
        floor = max(tau_sq.floor, prod.floor)
        assert tau_sq.truncate(floor).known == prod.truncate(floor).known


class TestConvergenceReports:
    def test_line_reports_exact_agreement(self, p1):
        rep = convergence_report(p1, (3, 3), 8)
        assert rep.status == "pass" and rep.passed
        assert rep.delta_dim is MINUS_INFINITY
        doc = rep.to_json()
        assert doc["delta_dim"] is None
        assert doc["status"] == "pass"

    def test_plane_degree_one(self, p2):
        rep = convergence_report(p2, (1, 1, 1), 12)
        assert rep.status == "pass"
        assert rep.delta_dim == 0
        assert rep.bound == Fraction(7, 4)
        doc = rep.to_json()
        assert doc["bound"] == "7/4"
        assert doc["degree"] == [1, 1, 1]

    def test_error_shrinks_along_diagonal(self, p2):
        dims = []
        for k in (1, 2, 3, 4):
            rep = convergence_report(p2, (k, k, k), 12)
            assert rep.status == "pass", k
            dims.append(rep.delta_dim)
        assert all(a >= b for a, b in zip(dims, dims[1:]))

    def test_coarse_truncation_is_inconclusive(self, p2):
        rep = convergence_report(p2, (1, 1, 1), 0)
        assert rep.status == "inconclusive"
        assert not rep.passed
        assert rep.to_json()["status"] == "inconclusive"

    def test_off_cone_degree_rejected(self, p2):
        with pytest.raises(ValueError):
            convergence_report(p2, (1, 1, 0), 8)


class TestJetCondition:
    def test_point_canonicalization(self):
        jc = JetCondition((((2, 4), 1), ((0, 3), 0)), ONE, 0)
        assert jc.points == (((1, 2), 1), ((0, 1), 0))
        assert jc.npoints == 2
        assert jc.length == 3

    def test_negative_coordinates_normalize(self):
        jc = JetCondition.torus_point((-1, 5), 2)
        assert jc.points == (((1, -5), 2),)

    def test_repeated_points_rejected(self):
        with pytest.raises(ValueError):
            JetCondition((((1, 2), 0), ((2, 4), 1)), ONE, 0)

    def test_degenerate_point_rejected(self):
        with pytest.raises(ValueError):
            JetCondition.torus_point((0, 0), 0)

    def test_negative_order_rejected(self):
        with pytest.raises(ValueError):
            JetCondition.torus_point((1, 1), -1)

    def test_w_class_type_enforced(self):
        with pytest.raises(ValueError):
            JetCondition((((1, 0), 0),), 1, 0)

    def test_validate_against_dimension_budget(self, p2):
        bad = JetCondition((((1, 0), 0),), ONE, 5)
        with pytest.raises(ValueError):
            bad.validate_against(p2)
        JetCondition.full_jets(p2, [((1, 0), 1)]).validate_against(p2)

    def test_json_shape(self):
        jc = JetCondition.torus_point((1, 3), 1)
        doc = jc.to_json()
        assert doc["points"] == [{"point": [1, 3], "order": 1}]
        assert doc["W_dim"] == 0
        assert LaurentClass.from_json(doc["W_class"]) == ONE


class TestConstrainedMainTerm:
    def test_no_points_reduces_to_tamagawa(self, p1, p2):
        for fan, E in ((p1, 8), (p2, 10)):
            got = constrained_main_term(fan, JetCondition.empty(), E)
            tau = tamagawa(fan, E)
            assert got.known == tau.known and got.floor == tau.floor

    @pytest.mark.parametrize("order", [0, 1])
    def test_full_jets_impose_nothing(self, p1, p2, order):
        """Allowing the entire jet space at a marked point leaves the
        limiting constant unchanged."""
        for fan, E in ((p1, 8), (p2, 12)):
            jc = JetCondition.full_jets(fan, [((1, 1), order)])
            got = constrained_main_term(fan, jc, E)
            tau = tamagawa(fan, E)
            assert got.known == tau.known, (fan.nrays, order)
            assert got.floor == tau.floor

    def test_single_torus_jet_main_term(self, p2):
        jc = JetCondition.torus_point((1, 1), 0)
        got = constrained_main_term(p2, jc, 16)
        # the correction factor (1 - L^-1) L^-2 has dimension -2, so the
        # floor drops from 1 - 9 + 2 to -8
        assert got.floor == -8
        assert got.known == ONE - LaurentClass.lefschetz(-2)
        assert got.known.evaluate(3) == Fraction(8, 9)

    def test_rejects_overweight_condition(self, p2):
        bad = JetCondition((((1, 1), 0),), ONE, 9)
        with pytest.raises(ValueError):
            constrained_main_term(p2, bad, 6)


class TestConstrainedDimensionCheck:
    def test_single_point_trend(self, p1):
        jc = JetCondition.torus_point((1, 1), 0)
        assert expected_dimension_check(p1, (1, 1), jc)

    def test_rejects_nontrivial_targets(self, p1):
        two_points = JetCondition(
            (((1, 0), 0), ((0, 1), 0)), ONE, 0
        )
        with pytest.raises(ValueError):
            expected_dimension_check(p1, (1, 1), two_points)
        fat = JetCondition.full_jets(p1, [((1, 1), 0)])
        with pytest.raises(ValueError):
            expected_dimension_check(p1, (1, 1), fat)
