import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qir.channels import monitor
from qir.entropies import cond_entropy, irreality, uncertainty
from qir.errors import ConfigError, DimensionMismatch
from qir.relations import (
    RELATIONS,
    check_combined_ur,
    check_constraint1,
    check_constraint2,
    check_irreality_ur,
    check_memory_ur,
    check_mixed_ur,
    check_monitor_bound,
    evaluate_relations,
    mu_bound,
    mu_overlap,
    reality_change,
    report_slack,
)
from qir.states import (
    computational_basis,
    fourier_basis,
    haar_random_pure,
    max_entangled,
    max_mixed,
    random_basis,
    random_mixed,
    werner,
)

LN2 = math.log(2.0)


def random_config(i, d_a=2, d_b=2):
    state = random_mixed(d_a, d_b, d_a * d_b, (600, i))
    x = random_basis(d_a, (601, i))
    y = random_basis(d_a, (602, i))
    return state, x, y


class TestMuBound:
    def test_same_basis(self):
        x = computational_basis(3)
        assert mu_overlap(x, x) == 1.0
        assert abs(mu_bound(x, x)) <= 1e-12

    def test_fourier_pair_values(self):
        for d in (2, 3, 5):
            x, y = computational_basis(d), fourier_basis(d)
            assert abs(mu_overlap(x, y) - 1 / math.sqrt(d)) <= 1e-12
            assert abs(mu_bound(x, y) - math.log(d)) <= 1e-10

    def test_matches_exhaustive_scan(self):
        x, y = random_basis(2, 1), random_basis(2, 2)
        best = max(
            abs(np.vdot(x.column(i), y.column(j))) for i in range(2) for j in range(2)
        )
        assert abs(mu_overlap(x, y) - best) <= 1e-15

    def test_symmetry(self):
        for i in range(10):
            x, y = random_basis(3, (610, i)), random_basis(3, (611, i))
            assert abs(mu_bound(x, y) - mu_bound(y, x)) <= 1e-12

    def test_range(self):
        for i in range(10):
            x, y = random_basis(4, (620, i)), random_basis(4, (621, i))
            c = mu_overlap(x, y)
            assert 1 / 2 - 1e-12 <= c <= 1 + 1e-12
            assert -1e-9 <= mu_bound(x, y) <= math.log(4) + 1e-9

    def test_dim_mismatch(self):
        with pytest.raises(DimensionMismatch):
            mu_overlap(computational_basis(2), computational_basis(3))


class TestNamedCases:
    """Both saturating configurations, checked against every relation."""

    def setup_method(self):
        self.x = computational_basis(2)
        self.y = fourier_basis(2)
        self.bell = max_entangled(2)
        self.mixed = max_mixed(2, 2)

    def test_memory_ur_saturates(self):
        r = check_memory_ur(self.x, self.y, self.bell)
        assert abs(r.lhs) <= 1e-9 and abs(r.rhs) <= 1e-9 and abs(r.slack) <= 1e-9
        r = check_memory_ur(self.x, self.y, self.mixed)
        assert abs(r.lhs - 2 * LN2) <= 1e-9 and abs(r.slack) <= 1e-9

    def test_constraint1_values(self):
        r = check_constraint1(self.x, self.bell)
        assert r.residual <= 1e-9 and r.holds
        r = check_constraint1(self.x, self.mixed)
        assert r.residual <= 1e-9

    def test_constraint2_values(self):
        r = check_constraint2(self.x, self.y, self.bell)
        assert r.residual <= 1e-9
        # both sides equal H(A|B) = -ln 2 on the maximally entangled state
        assert abs(cond_entropy(self.bell) + LN2) <= 1e-9

    def test_constraint2_same_observable(self):
        state, x, _ = random_config(21, 3, 2)
        assert check_constraint2(x, x, state).residual <= 1e-12

    def test_mixed_ur_saturates(self):
        r1, r2 = check_mixed_ur(self.x, self.y, self.bell)
        assert abs(r1.lhs - LN2) <= 1e-9 and abs(r1.slack) <= 1e-9
        assert abs(r1.lhs - r2.lhs) <= 1e-9
        r1, _ = check_mixed_ur(self.x, self.y, self.mixed)
        assert abs(r1.slack) <= 1e-9

    def test_irreality_ur_saturates(self):
        r = check_irreality_ur(self.x, self.y, self.bell)
        assert abs(r.lhs - 2 * LN2) <= 1e-9 and abs(r.slack) <= 1e-9
        r = check_irreality_ur(self.x, self.y, self.mixed)
        assert abs(r.lhs) <= 1e-9 and abs(r.slack) <= 1e-9

    def test_combined_ur_saturates_both_cases(self):
        for state in (self.bell, self.mixed):
            r = check_combined_ur(self.x, self.y, state)
            assert abs(r.slack) <= 1e-9
            assert abs(r.rhs - 2 * LN2) <= 1e-9

    def test_monitor_bound_fully_complementary(self):
        for eps in (0.0, 0.3, 1.0):
            r = check_monitor_bound(self.x, self.y, eps, self.bell)
            # irreality stays pinned at ln 2 when q is maximal and H(Y|B) = 0
            assert abs(r.lhs - LN2) <= 1e-9 and abs(r.slack) <= 1e-9

    def test_monitor_bound_eps_zero_reduces_to_mixed_ur(self):
        state, x, y = random_config(3)
        r_mon = check_monitor_bound(x, y, 0.0, state)
        r_mix, _ = check_mixed_ur(x, y, state)
        assert abs(r_mon.lhs - r_mix.lhs) <= 1e-12
        assert r_mon.rhs == r_mix.rhs


class TestWernerCase:
    def test_constraint1_werner_values(self):
        x = computational_basis(2)
        r = check_constraint1(x, werner(0.5))
        assert r.residual <= 1e-9
        assert abs(irreality(x, werner(0.5)) - 0.181939) <= 1e-6

    def test_irreality_ur_nonnegative(self):
        r = check_irreality_ur(computational_basis(2), fourier_basis(2), werner(0.5))
        assert r.slack >= -1e-9


class TestRandomCampaignProperties:
    def test_identities_hold_on_random_triples(self):
        for i in range(100):
            state, x, y = random_config(i, 3, 2)
            assert check_constraint1(x, state).residual <= 1e-9
            assert check_constraint2(x, y, state).residual <= 1e-9

    def test_inequalities_hold_on_random_triples(self):
        rng = np.random.default_rng(5)
        for i in range(100):
            state, x, y = random_config(i)
            assert check_memory_ur(x, y, state).slack >= -1e-9
            r1, r2 = check_mixed_ur(x, y, state)
            assert r1.slack >= -1e-9 and r2.slack >= -1e-9
            assert abs(r1.lhs - r2.lhs) <= 1e-9
            assert check_irreality_ur(x, y, state).slack >= -1e-9
            assert check_combined_ur(x, y, state).slack >= -1e-9
            assert check_monitor_bound(x, y, float(rng.uniform()), state).slack >= -1e-9

    def test_slack_additivity(self):
        # the four-term bound is the sum of the memory and irreality bounds
        for i in range(50):
            state, x, y = random_config(i, 3, 3)
            s5 = check_memory_ur(x, y, state).slack
            s10 = check_irreality_ur(x, y, state).slack
            s11 = check_combined_ur(x, y, state).slack
            assert abs(s11 - (s5 + s10)) <= 1e-9

    def test_uncertainty_below_irreality_implies_entanglement(self):
        found = 0
        for i in range(200):
            state = haar_random_pure(2, 2, (700, i))
            x = random_basis(2, (701, i))
            if uncertainty(x, state) < irreality(x, state) - 1e-9:
                found += 1
                assert cond_entropy(state) < 0
        assert found > 0

    def test_pure_state_triples(self):
        for i in range(50):
            state = haar_random_pure(3, 2, (710, i))
            x, y = random_basis(3, (711, i)), random_basis(3, (712, i))
            assert check_combined_ur(x, y, state).slack >= -1e-9


class TestRealityChange:
    def test_no_change(self):
        state = werner(0.5)
        assert reality_change(computational_basis(2), state, state) == 0.0

    def test_full_realization_in_own_basis(self):
        x = computational_basis(2)
        bell = max_entangled(2)
        realized = monitor(x, 1.0, bell)
        assert abs(reality_change(x, bell, realized) - LN2) <= 1e-9

    def test_complementary_monitoring_keeps_reality(self):
        x, y = computational_basis(2), fourier_basis(2)
        bell = max_entangled(2)
        for eps in (0.2, 0.6, 1.0):
            assert abs(reality_change(x, bell, monitor(y, eps, bell))) <= 1e-9

    def test_upper_bound_under_monitoring(self):
        rng = np.random.default_rng(7)
        for i in range(50):
            state, x, y = random_config(i)
            eps = float(rng.uniform())
            delta = reality_change(x, state, monitor(y, eps, state))
            upper = irreality(x, state) + uncertainty(y, state) - mu_bound(x, y)
            assert delta <= upper + 1e-9

    def test_nonnegative_under_own_monitoring(self):
        # the lower bound delta >= 0 is provable only when Y = X; the
        # cross-observable version has counterexamples (test below)
        rng = np.random.default_rng(8)
        for i in range(50):
            state, x, _ = random_config(i)
            eps = float(rng.uniform())
            assert reality_change(x, state, monitor(x, eps, state)) >= -1e-9

    def test_cross_monitoring_can_destroy_reality(self):
        from qir.states import BipartiteState, ObservableBasis

        state = BipartiteState(2, 1, np.diag([1.0, 0.0]))
        x = computational_basis(2)
        a, b = math.cos(math.pi / 8), math.sin(math.pi / 8)
        y = ObservableBasis(2, np.array([[a, -b], [b, a]]))
        delta = reality_change(x, state, monitor(y, 1.0, state))
        assert delta < -0.14  # reality strictly drops; -0.145840 nats

    def test_dim_mismatch(self):
        with pytest.raises(DimensionMismatch):
            reality_change(computational_basis(2), max_mixed(2, 2), max_mixed(2, 3))


class TestRegistry:
    def test_known_names_and_kinds(self):
        assert set(RELATIONS) == {"eq5", "eq7", "eq8", "eq9", "eq10", "eq11", "eq16"}
        assert RELATIONS["eq7"].kind == "identity"
        assert RELATIONS["eq16"].needs_eps

    def test_evaluate_matches_individual_checks(self):
        state, x, y = random_config(11)
        reports = evaluate_relations(tuple(RELATIONS), x, y, state, eps=0.4)
        assert reports["eq5"].slack == check_memory_ur(x, y, state).slack
        assert reports["eq7"].residual == check_constraint1(x, state).residual
        assert reports["eq8"].residual == check_constraint2(x, y, state).residual
        assert reports["eq9"].slack == check_mixed_ur(x, y, state)[0].slack
        assert reports["eq10"].slack == check_irreality_ur(x, y, state).slack
        assert reports["eq11"].slack == check_combined_ur(x, y, state).slack
        assert abs(reports["eq16"].slack - check_monitor_bound(x, y, 0.4, state).slack) <= 1e-12

    def test_report_slack_sign_convention(self):
        state, x, y = random_config(12)
        reports = evaluate_relations(("eq5", "eq7"), x, y, state)
        assert report_slack(reports["eq5"]) == reports["eq5"].slack
        assert report_slack(reports["eq7"]) == -reports["eq7"].residual

    def test_unknown_relation_rejected(self):
        state, x, y = random_config(13)
        with pytest.raises(ConfigError):
            evaluate_relations(("eq99",), x, y, state)

    def test_eq16_requires_eps(self):
        state, x, y = random_config(14)
        with pytest.raises(ConfigError):
            evaluate_relations(("eq16",), x, y, state)

    @settings(max_examples=20, deadline=None)
    @given(seed=st.integers(0, 10_000))
    def test_report_fields_consistent(self, seed):
        state, x, y = random_config(seed)
        r = check_combined_ur(x, y, state)
        assert r.slack == r.lhs - r.rhs
        assert r.satisfied == (r.slack >= -r.tol)
