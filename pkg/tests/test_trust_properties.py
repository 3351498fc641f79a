"""Property-based checks for the trust math.

Strategies build small random report pools; the properties assert range,
normalization, monotonicity, and equivalence facts that hold for any input.
"""

import math

from hypothesis import given, settings
from hypothesis import strategies as st

from mlt.session import AttributeSchema, AttributeSpec, PerformanceVector
from mlt.trust import (
    AccumulatedReport,
    AggregationParams,
    InstantaneousReport,
    aggregate,
    aggregate_basic,
    coverage_weights,
    credibilities,
    freshness_weights,
    instantaneous_trust,
    update_accumulated,
)

unit = st.floats(min_value=0.0, max_value=1.0, allow_nan=False)
positive = st.floats(min_value=1e-3, max_value=1e6, allow_nan=False)


def _schema(n):
    return AttributeSchema(tuple(AttributeSpec(f"a{i}") for i in range(n)))


@st.composite
def observation_promise(draw):
    n = draw(st.integers(min_value=1, max_value=6))
    schema = _schema(n)
    promised = draw(st.lists(positive, min_size=n, max_size=n))
    observed = draw(
        st.lists(st.floats(min_value=0.0, max_value=2e6, allow_nan=False), min_size=n, max_size=n)
    )
    return PerformanceVector(tuple(observed), schema), PerformanceVector(tuple(promised), schema)


@st.composite
def report_pool(draw, max_each=5, min_total=1):
    n_c = draw(st.integers(min_value=0, max_value=max_each))
    n_b = draw(st.integers(min_value=max(0, min_total - n_c), max_value=max_each))
    consumers = [
        AccumulatedReport(f"c{i:02d}", draw(unit), draw(positive))
        for i in range(n_c)
    ]
    bystanders = [
        InstantaneousReport(f"b{i:02d}", draw(unit), draw(positive))
        for i in range(n_b)
    ]
    return consumers, bystanders


@given(observation_promise())
def test_instantaneous_trust_in_unit_interval(pair):
    observation, promise = pair
    assert 0.0 <= instantaneous_trust(observation, promise) <= 1.0


@given(observation_promise())
def test_instantaneous_trust_full_when_overdelivering(pair):
    observation, promise = pair
    schema = observation.schema
    boosted = PerformanceVector(
        tuple(max(o, p) for o, p in zip(observation.values, promise.values)), schema
    )
    assert instantaneous_trust(boosted, promise) == 1.0


@given(observation_promise(), st.integers(min_value=0, max_value=5))
def test_instantaneous_trust_monotone_per_attribute(pair, idx):
    observation, promise = pair
    i = idx % len(observation)
    raised = list(observation.values)
    raised[i] = raised[i] * 2.0 + 1.0
    better = PerformanceVector(tuple(raised), observation.schema)
    assert instantaneous_trust(better, promise) >= instantaneous_trust(observation, promise)


@given(unit, unit, unit)
def test_update_accumulated_is_convex(prev, inst, alpha):
    out = update_accumulated(prev, inst, alpha)
    lo, hi = min(prev, inst), max(prev, inst)
    assert lo - 1e-12 <= out <= hi + 1e-12


@given(unit, unit, st.floats(min_value=0.0, max_value=0.99))
def test_update_accumulated_converges_to_constant_input(start, target, alpha):
    acc = start
    for _ in range(200):
        acc = update_accumulated(acc, target, alpha)
    assert abs(acc - target) < 1e-2 + (1.0 - (1.0 - alpha)) ** 200


@given(report_pool(min_total=1))
def test_group_weights_normalize_and_stay_nonnegative(pool):
    consumers, bystanders = pool
    if consumers:
        w = coverage_weights(consumers)
        assert all(x >= 0 for x in w)
        assert math.isclose(sum(w), 1.0, rel_tol=1e-9)
    if bystanders:
        w, _ = freshness_weights(bystanders)
        assert all(x >= 0 for x in w)
        assert math.isclose(sum(w), 1.0, rel_tol=1e-9)


@given(st.lists(unit, min_size=1, max_size=12), st.randoms(use_true_random=False))
def test_weights_are_permutation_equivariant(trusts, rnd):
    reports = [InstantaneousReport(f"b{i:02d}", t, 10.0 * (i + 1)) for i, t in enumerate(trusts)]
    shuffled = list(reports)
    rnd.shuffle(shuffled)
    base, _ = freshness_weights(reports)
    moved, _ = freshness_weights(shuffled)
    by_id = dict(zip((r.reporter_id for r in shuffled), moved))
    for report, weight in zip(reports, base):
        assert math.isclose(by_id[report.reporter_id], weight, rel_tol=1e-12)


@given(st.lists(unit, min_size=1, max_size=12))
def test_credibilities_in_unit_interval(values):
    creds = credibilities(values)
    assert all(0.0 <= c <= 1.0 for c in creds)


@given(st.lists(unit, min_size=1, max_size=12))
def test_value_at_pool_mean_has_full_credibility(values):
    mean = sum(values) / len(values)
    padded = values + [mean]
    # appending the mean moves the mean toward itself, so recompute
    new_mean = sum(padded) / len(padded)
    creds = credibilities(padded)
    assert creds[-1] == 1.0 - abs(mean - new_mean)


@given(report_pool())
def test_normalized_aggregate_stays_in_unit_interval(pool):
    consumers, bystanders = pool
    out = aggregate(consumers, bystanders, AggregationParams(mode="normalized"))
    assert -1e-12 <= out.overall <= 1.0 + 1e-12


@given(report_pool(), st.floats(min_value=0.0, max_value=1.0))
def test_normalized_never_below_verbatim(pool, beta):
    # per-group weight mass sum(cred * weight) <= 1, so dividing by it
    # can only raise a nonnegative group term
    consumers, bystanders = pool
    verbatim = aggregate(consumers, bystanders, AggregationParams(beta=beta, mode="verbatim"))
    normalized = aggregate(consumers, bystanders, AggregationParams(beta=beta, mode="normalized"))
    assert normalized.overall >= verbatim.overall - 1e-12


@given(st.integers(min_value=0, max_value=5), st.integers(min_value=0, max_value=5), unit)
def test_unanimous_crowd_scores_its_value_when_normalized(n_c, n_b, value):
    if n_c + n_b == 0:
        return
    consumers = [AccumulatedReport(f"c{i:02d}", value, 100.0 * (i + 1)) for i in range(n_c)]
    bystanders = [InstantaneousReport(f"b{i:02d}", value, 50.0 * (i + 1)) for i in range(n_b)]
    out = aggregate(consumers, bystanders, AggregationParams(mode="normalized"))
    assert math.isclose(out.overall, value, abs_tol=1e-12)


@given(report_pool())
@settings(max_examples=200)
def test_plain_mean_recovered_with_everything_forced(pool):
    consumers, bystanders = pool
    share = len(consumers) / (len(consumers) + len(bystanders))
    out = aggregate(
        consumers,
        bystanders,
        AggregationParams(beta=share, mode="verbatim"),
        use_credibility=False,
        uniform_weights=True,
    )
    assert math.isclose(out.overall, aggregate_basic(consumers, bystanders), abs_tol=1e-12)


@given(report_pool(min_total=2), unit)
def test_single_outlier_influence_is_bounded(pool, outlier_value):
    # swapping one report for an arbitrary value keeps the aggregate inside
    # the unit interval, so its influence can never exceed the full range
    consumers, bystanders = pool
    if not bystanders:
        return
    params = AggregationParams(mode="normalized")
    base = aggregate(consumers, bystanders, params)
    moved_reports = [
        InstantaneousReport(bystanders[0].reporter_id, outlier_value, bystanders[0].timestamp_offset)
    ] + bystanders[1:]
    moved = aggregate(consumers, moved_reports, params)
    assert abs(moved.overall - base.overall) <= 1.0
