import itertools
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from greensched.errors import ConfigError, DomainError
from greensched.forecast import parse_forecast_csv
from greensched.scheduling import (BuildingProfile, DailySchedule,
                                   SchedulerConfig, build_schedule,
                                   compute_ehp_hours, compute_re_share,
                                   compute_share_increase, select_on_hours)

from conftest import read_fixture, reading

BIMODAL = [0.2] * 8 + [0.6] * 8 + [0.2] * 8


def brute_force_best_mean(shares, k):
    """Exhaustive top-k oracle: max mean share over all C(24,k) subsets."""
    return max(sum(shares[i] for i in combo) / k
               for combo in itertools.combinations(range(24), k))


# -- compute_ehp_hours ------------------------------------------------


class TestComputeEhpHours:
    def test_zero_demand_floors_at_min(self, cfg):
        assert compute_ehp_hours(reading(20), 1.0, cfg) == 2

    def test_maximal_demand_hits_max(self, cfg):
        assert compute_ehp_hours(reading(0), 0.0, cfg) == 12

    def test_hand_evaluated_midpoint(self, cfg):
        # |14-20|/20 = 0.3; (0.5*0.3 + 0.5*0.4)/1 = 0.35; ceil(12*0.35) = 5
        assert compute_ehp_hours(reading(14), 0.6, cfg) == 5

    def test_invalid_config_rejected(self):
        with pytest.raises(ConfigError):
            SchedulerConfig(alpha=0.0, beta=0.0)
        with pytest.raises(ConfigError):
            SchedulerConfig(min_ehp_hours=10, max_ehp_hours=5)

    def test_out_of_range_blc_rejected(self, cfg):
        with pytest.raises(DomainError):
            compute_ehp_hours(reading(10), 1.5, cfg)

    @given(temp=st.floats(0, 40), blc=st.floats(0, 1),
           alpha=st.floats(0, 1), beta=st.floats(0.01, 1),
           min_h=st.integers(0, 24), max_h=st.integers(0, 24))
    def test_bounds_property(self, temp, blc, alpha, beta, min_h, max_h):
        if min_h > max_h:
            min_h, max_h = max_h, min_h
        cfg = SchedulerConfig(alpha=alpha, beta=beta, min_ehp_hours=min_h,
                              max_ehp_hours=max_h)
        assert min_h <= compute_ehp_hours(reading(temp), blc, cfg) <= max_h

    @given(blc=st.floats(0, 1), t1=st.floats(0, 40), t2=st.floats(0, 40))
    def test_monotone_in_temperature_gap(self, blc, t1, t2):
        cfg = SchedulerConfig()
        if abs(t1 - 20) > abs(t2 - 20):
            t1, t2 = t2, t1
        assert (compute_ehp_hours(reading(t1), blc, cfg)
                <= compute_ehp_hours(reading(t2), blc, cfg))

    @given(temp=st.floats(0, 40), b1=st.floats(0, 1), b2=st.floats(0, 1))
    def test_monotone_in_blc(self, temp, b1, b2):
        cfg = SchedulerConfig()
        lo, hi = min(b1, b2), max(b1, b2)
        assert (compute_ehp_hours(reading(temp), hi, cfg)
                <= compute_ehp_hours(reading(temp), lo, cfg))


# -- compute_re_share -------------------------------------------------


class TestComputeReShare:
    def test_zero_renewables(self):
        assert compute_re_share(0, 100) == 0.0

    def test_all_renewable(self):
        assert compute_re_share(120, 120) == 1.0

    def test_direct_division(self):
        assert compute_re_share(30, 120) == 0.25

    def test_zero_aggregate_rejected(self):
        with pytest.raises(DomainError):
            compute_re_share(10, 0)

    def test_re_above_agg_rejected(self):
        with pytest.raises(DomainError):
            compute_re_share(120, 100)


# -- select_on_hours --------------------------------------------------


class TestSelectOnHours:
    def test_full_day(self):
        assert all(select_on_hours([0.3] * 24, 24))

    def test_constant_shares_earliest_hours_win(self):
        on = select_on_hours([0.4] * 24, 3)
        assert [i for i, f in enumerate(on) if f] == [0, 1, 2]

    def test_bimodal_top4(self):
        on = select_on_hours(BIMODAL, 4)
        assert [i for i, f in enumerate(on) if f] == [8, 9, 10, 11]
        # confirmed optimal by the exhaustive oracle
        assert sum(s for s, f in zip(BIMODAL, on) if f) / 4 == pytest.approx(
            brute_force_best_mean(BIMODAL, 4), abs=1e-12)

    def test_wrong_length_rejected(self):
        with pytest.raises(DomainError):
            select_on_hours([0.1] * 23, 3)

    @settings(max_examples=100, deadline=None)
    @given(shares=st.lists(st.floats(0, 1), min_size=24, max_size=24),
           k=st.integers(1, 4))
    def test_optimality_against_enumeration(self, shares, k):
        on = select_on_hours(shares, k)
        selected_mean = sum(s for s, f in zip(shares, on) if f) / k
        assert selected_mean >= brute_force_best_mean(shares, k) - 1e-12

    @given(shares=st.lists(st.floats(0, 1), min_size=24, max_size=24),
           k=st.integers(0, 24), factor=st.floats(0.01, 100))
    def test_scale_invariance_of_selection(self, shares, k, factor):
        scaled = [s * factor for s in shares]
        assert select_on_hours(shares, k) == select_on_hours(scaled, k)


# -- compute_share_increase -------------------------------------------


class TestComputeShareIncrease:
    def test_flat_profile_no_improvement(self):
        on = select_on_hours([0.4] * 24, 6)
        assert compute_share_increase([0.4] * 24, on) == pytest.approx(0.0)

    def test_bimodal_hand_value(self):
        shares = [0.6] * 8 + [0.2] * 16
        on = select_on_hours(shares, 8)
        # selected mean 0.6, overall (8*0.6 + 16*0.2)/24 = 1/3 -> +0.8
        assert compute_share_increase(shares, on) == pytest.approx(0.8)

    def test_no_operated_hours_rejected(self):
        with pytest.raises(DomainError):
            compute_share_increase([0.3] * 24, [False] * 24)

    def test_all_zero_shares_rejected(self):
        with pytest.raises(DomainError):
            compute_share_increase([0.0] * 24, [True] * 24)

    @given(shares=st.lists(st.floats(0.001, 1), min_size=24, max_size=24),
           k=st.integers(1, 24))
    def test_top_k_never_hurts(self, shares, k):
        on = select_on_hours(shares, k)
        assert compute_share_increase(shares, on) >= -1e-12


# -- build_schedule ---------------------------------------------------


def _bimodal_forecast():
    return parse_forecast_csv(read_fixture("bimodal.csv"))[1]


def _profile(blc=0.6):
    return BuildingProfile(id="b1", desired_temp_c=20, construction_year=1995,
                           living_space_m2=400, has_basement=True,
                           roof_insulated=False, blc=blc)


class TestBuildSchedule:
    def test_degenerate_zero_hours(self):
        cfg = SchedulerConfig(min_ehp_hours=0, max_ehp_hours=0)
        s = build_schedule(_profile(), reading(14), _bimodal_forecast(), cfg)
        assert s.ehp_hours == 0 and not any(s.slots)

    def test_forced_full_day(self):
        cfg = SchedulerConfig(min_ehp_hours=24, max_ehp_hours=24)
        s = build_schedule(_profile(), reading(14), _bimodal_forecast(), cfg)
        assert s.ehp_hours == 24 and all(s.slots)

    def test_composed_derived_example(self, cfg):
        s = build_schedule(_profile(0.6), reading(14), _bimodal_forecast(), cfg)
        assert s.ehp_hours == 5
        assert [i for i, f in enumerate(s.slots) if f] == [8, 9, 10, 11, 12]
        assert s.slot_string() == "........#####..........."

    def test_deterministic_digest(self, cfg):
        fc = _bimodal_forecast()
        s1 = build_schedule(_profile(), reading(14), fc, cfg)
        s2 = build_schedule(_profile(), reading(14), fc, cfg)
        assert s1 == s2 and s1.digest() == s2.digest()
        assert s1.forecast_digest == fc.digest

    def test_invariants_enforced_on_construction(self, cfg):
        fc = _bimodal_forecast()
        s = build_schedule(_profile(), reading(14), fc, cfg)
        with pytest.raises(DomainError):
            DailySchedule(building_id=s.building_id, date=s.date,
                          slots=s.slots, ehp_hours=s.ehp_hours + 1,
                          config_snapshot=cfg, forecast_digest="")
