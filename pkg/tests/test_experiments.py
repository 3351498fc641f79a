"""Sweep bookkeeping: composition draws, synthesized rosters, suite structure."""

import pytest

from mlt.agents import MALICIOUS
from mlt.experiments import (
    ABLATION,
    COUNT_SWEEP,
    ESTIMATOR_COMPARE,
    FULL,
    ExperimentSpec,
    _composition,
    _synth_roster,
    _variant,
    run_experiment_suite,
)

from conftest import make_provider, make_scenario

REPS = 40  # enough replications for structure checks without slowing the suite


@pytest.fixture
def base(session, promise):
    provider = make_provider(promise, honesty_gap=0.2, jitter_rel=0.1)
    return make_scenario(session, provider, query_time=5400.0, seed=71)


class TestSpecValidation:
    def test_defaults_are_valid(self):
        ExperimentSpec(ABLATION)

    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(kind="drift-sweep"),
            dict(kind=ABLATION, replications=0),
            dict(kind=ABLATION, reporters=0),
            dict(kind=ABLATION, reporters=65),
            dict(kind=ESTIMATOR_COMPARE, reporters=1),
            dict(kind=ABLATION, adversary_frac=1.2),
            dict(kind=ABLATION, adversary_fracs=(0.0, -0.1)),
            dict(kind=ABLATION, trust_range=(0.0, 0.9)),
            dict(kind=ABLATION, trust_range=(0.9, 0.2)),
            dict(kind=ABLATION, trust_range=(0.2, 1.1)),
            dict(kind=ABLATION, malicious_strategy="stealthy"),
        ],
    )
    def test_bad_specs_rejected(self, kwargs):
        with pytest.raises(ValueError):
            ExperimentSpec(**kwargs)


class TestComposition:
    def test_same_rep_same_draws(self):
        spec = ExperimentSpec(COUNT_SWEEP)
        a = _composition(7, 3, spec)
        b = _composition(7, 3, spec)
        assert a[0] == b[0]
        assert (a[1] == b[1]).all()
        assert a[2] == b[2]

    def test_different_reps_differ(self):
        spec = ExperimentSpec(COUNT_SWEEP)
        assert _composition(7, 0, spec)[2] != _composition(7, 1, spec)[2]

    def test_target_respects_trust_range(self):
        spec = ExperimentSpec(COUNT_SWEEP, trust_range=(0.4, 0.6))
        for rep in range(50):
            target, _, _ = _composition(7, rep, spec)
            assert 0.4 <= target <= 0.6


class TestSynthRoster:
    def test_slots_alternate_groups(self):
        _, flags, _ = _composition(7, 0, ExperimentSpec(COUNT_SWEEP))
        bystanders, consumers = _synth_roster(COUNT_SWEEP, 5400.0, 5, flags, 0.0, "random")
        assert [b.id for b in bystanders] == ["b00", "b01", "b02"]
        assert [c.id for c in consumers] == ["c00", "c01"]

    def test_smaller_roster_is_a_prefix(self):
        # slot schedules depend only on the slot index, so adding a reporter
        # leaves every existing reporter untouched
        _, flags, _ = _composition(7, 0, ExperimentSpec(COUNT_SWEEP))
        small = _synth_roster(COUNT_SWEEP, 5400.0, 6, flags, 0.25, "random")
        large = _synth_roster(COUNT_SWEEP, 5400.0, 7, flags, 0.25, "random")
        assert large[0][: len(small[0])] == small[0]
        assert large[1][: len(small[1])] == small[1]

    def test_adversary_flags_follow_fraction(self):
        _, flags, _ = _composition(7, 0, ExperimentSpec(COUNT_SWEEP))
        all_honest = _synth_roster(COUNT_SWEEP, 5400.0, 8, flags, 0.0, "random")
        all_bad = _synth_roster(COUNT_SWEEP, 5400.0, 8, flags, 1.0, "random")
        roster = [r.profile.kind for group in all_honest for r in group]
        assert set(roster) == {"honest"}
        roster = [r.profile.kind for group in all_bad for r in group]
        assert set(roster) == {MALICIOUS}

    def test_rosters_fit_inside_the_query_window(self, base):
        _, flags, _ = _composition(7, 0, ExperimentSpec(COUNT_SWEEP))
        for kind in (COUNT_SWEEP, ESTIMATOR_COMPARE):
            bystanders, consumers = _synth_roster(kind, 5400.0, 16, flags, 0.5, "random")
            for b in bystanders:
                assert b.schedule.last_offset <= 5400.0
            for c in consumers:
                assert c.usage.usage_end <= 5400.0


class TestVariant:
    def test_vary_provider_overrides_gap(self, base):
        spec = ExperimentSpec(COUNT_SWEEP, trust_range=(0.4, 0.6))
        scenario = _variant(base, spec, COUNT_SWEEP, 4, 0.0, rep=0)
        target, _, _ = _composition(base.seed, 0, spec)
        assert scenario.provider.honesty_gap == pytest.approx(1.0 - target)

    def test_fixed_provider_keeps_gap(self, base):
        spec = ExperimentSpec(ABLATION, vary_provider=False)
        scenario = _variant(base, spec, ABLATION, 4, 0.0, rep=0)
        assert scenario.provider.honesty_gap == base.provider.honesty_gap

    def test_full_kind_keeps_the_scenario_roster(self, base, session, promise, honest):
        from mlt.simulator import Bystander
        from mlt.agents import ProbeSchedule

        roster = make_scenario(
            session,
            make_provider(promise, honesty_gap=0.2, jitter_rel=0.1),
            bystanders=[Bystander("b00", honest, ProbeSchedule(600.0, 600.0, 2))],
            seed=71,
        )
        spec = ExperimentSpec(FULL)
        scenario = _variant(roster, spec, FULL, 1, 0.0, rep=0)
        assert scenario.bystanders == roster.bystanders
        assert scenario.consumers == roster.consumers


class TestSuite:
    def test_ablation_rows(self, base):
        spec = ExperimentSpec(ABLATION, replications=REPS, reporters=6,
                              adversary_fracs=(0.0, 0.25))
        results = run_experiment_suite(base, spec)
        keys = [(r.config["adversary_frac"], r.config["credibility"]) for r in results]
        assert keys == [(0.0, "on"), (0.0, "off"), (0.25, "on"), (0.25, "off")]
        for r in results:
            assert r.n_samples == REPS
            assert r.config["reporters"] == 6
            assert r.config["seed"] == base.seed

    def test_count_sweep_rows(self, base):
        spec = ExperimentSpec(COUNT_SWEEP, replications=REPS, reporters=4)
        results = run_experiment_suite(base, spec)
        assert [r.config["reporters"] for r in results] == [1, 2, 3, 4]
        assert all(r.config["adversary_frac"] == 0.25 for r in results)

    def test_estimator_rows(self, base):
        spec = ExperimentSpec(ESTIMATOR_COMPARE, replications=REPS, reporters=4,
                              adversary_frac=0.0)
        results = run_experiment_suite(base, spec)
        assert [r.config["estimator"] for r in results] == ["instantaneous", "accumulated"]

    def test_full_uses_declared_roster(self, session, promise, honest):
        from mlt.agents import ProbeSchedule, ReporterProfile
        from mlt.simulator import Bystander, Consumer, ConsumerUsage

        malicious = ReporterProfile("malicious", malicious_strategy="random")
        scenario = make_scenario(
            session,
            make_provider(promise, honesty_gap=0.2, jitter_rel=0.1),
            bystanders=[
                Bystander("b00", honest, ProbeSchedule(600.0, 600.0, 2)),
                Bystander("b01", malicious, ProbeSchedule(900.0, 600.0, 2)),
            ],
            consumers=[
                Consumer("c00", honest, ConsumerUsage(0.0, 3600.0, 600.0)),
                Consumer("c01", honest, ConsumerUsage(300.0, 3900.0, 600.0)),
            ],
            seed=5,
        )
        results = run_experiment_suite(scenario, ExperimentSpec(FULL, replications=REPS))
        assert len(results) == 1
        assert results[0].config["reporters"] == 4
        assert results[0].config["adversary_frac"] == 0.25

    def test_suite_is_deterministic(self, base):
        spec = ExperimentSpec(ABLATION, replications=REPS, reporters=4)
        a = run_experiment_suite(base, spec)
        b = run_experiment_suite(base, spec)
        assert [r.accuracy for r in a] == [r.accuracy for r in b]
        assert [r.counts for r in a] == [r.counts for r in b]

    def test_parallel_matches_serial(self, base):
        spec = ExperimentSpec(COUNT_SWEEP, replications=REPS, reporters=2)
        serial = run_experiment_suite(base, spec, jobs=1)
        parallel = run_experiment_suite(base, spec, jobs=2)
        assert [r.counts for r in serial] == [r.counts for r in parallel]

    def test_jobs_must_be_positive(self, base):
        with pytest.raises(ValueError):
            run_experiment_suite(base, ExperimentSpec(ABLATION, replications=1), jobs=0)
