"""Event-driven session simulator.

A scenario pins down one service session, the provider's true behaviour, a
roster of bystanders and consumers, aggregation parameters, the query time,
and a master seed.  Running it executes every probe and usage-sampling event
up to the query time, then aggregates the collected reports.

Every agent owns a private random stream spawned from the master seed, and
draws from it in chronological order.  Agents therefore never share state,
results are bit-reproducible for a fixed seed, and shrinking the query time
only ever removes events, it never changes the ones that remain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .agents import (
    ProbeSchedule,
    ProviderProfile,
    ReporterProfile,
    noise_free_performance,
    observe,
    sample_true_performance,
)
from .session import ServiceSession
from .trust import (
    AccumulatedReport,
    AggregationParams,
    InstantaneousReport,
    TrustBreakdown,
    aggregate,
    instantaneous_trust,
    update_accumulated,
)

PROBE = "probe"
SAMPLE = "sample"
ACCUMULATE = "accumulate"

_TIME_EPS = 1e-9  # guards float dust when comparing event offsets to bounds


@dataclass(frozen=True)
class ConsumerUsage:
    """A consumer's usage window and how often it samples inside it."""

    usage_start: float
    usage_end: float
    sample_interval: float

    def __post_init__(self):
        if self.usage_start < 0:
            raise ValueError(f"usage_start must be >= 0, got {self.usage_start}")
        if self.usage_end <= self.usage_start:
            raise ValueError("usage_end must come after usage_start")
        if self.sample_interval <= 0:
            raise ValueError(f"sample_interval must be positive, got {self.sample_interval}")


@dataclass(frozen=True)
class Bystander:
    id: str
    profile: ReporterProfile
    schedule: ProbeSchedule


@dataclass(frozen=True)
class Consumer:
    id: str
    profile: ReporterProfile
    usage: ConsumerUsage


def schedule_violation(duration: float, schedule: ProbeSchedule) -> str | None:
    """Message when a probe schedule does not fit a session of this duration."""
    if schedule.last_offset > duration + _TIME_EPS:
        return (
            f"last probe at offset {schedule.last_offset:g} falls outside "
            f"the session (duration {duration:g})"
        )
    return None


def usage_violation(duration: float, usage: ConsumerUsage) -> str | None:
    """Message when a usage window does not fit a session of this duration."""
    if usage.usage_end > duration + _TIME_EPS:
        return (
            f"usage_end {usage.usage_end:g} falls outside the session "
            f"(duration {duration:g})"
        )
    return None


@dataclass(frozen=True)
class Scenario:
    """Everything needed to run one simulated session, including the seed."""

    session: ServiceSession
    provider: ProviderProfile
    bystanders: tuple[Bystander, ...]
    consumers: tuple[Consumer, ...]
    params: AggregationParams = AggregationParams()
    query_time: float = 0.0
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "bystanders", tuple(self.bystanders))
        object.__setattr__(self, "consumers", tuple(self.consumers))
        duration = self.session.duration
        if not 0.0 < self.query_time <= duration + _TIME_EPS:
            raise ValueError(
                f"query_time must lie in (0, {duration:g}], got {self.query_time}"
            )
        if not isinstance(self.seed, int) or self.seed < 0:
            raise ValueError(f"seed must be a non-negative integer, got {self.seed!r}")
        if self.provider.promise != self.session.promise:
            raise ValueError("provider promise does not match the session promise")
        ids = [b.id for b in self.bystanders] + [c.id for c in self.consumers]
        if len(set(ids)) != len(ids):
            raise ValueError("reporter ids must be unique across the scenario")
        for b in self.bystanders:
            msg = schedule_violation(duration, b.schedule)
            if msg:
                raise ValueError(f"bystander {b.id!r}: {msg}")
        for c in self.consumers:
            msg = usage_violation(duration, c.usage)
            if msg:
                raise ValueError(f"consumer {c.id!r}: {msg}")


@dataclass(frozen=True)
class TraceEvent:
    offset: float
    reporter_id: str
    kind: str  # probe | sample | accumulate
    value: float


@dataclass(frozen=True)
class SessionTrace:
    """Full record of one simulated session run.

    events is time-ordered, ties broken by reporter id (a consumer's sample
    precedes the accumulate it feeds).  The report tuples are the evidence
    collected at query time, and final_breakdown is their aggregate under the
    scenario's params.  ground_truth_trust scores the provider's noise-free
    mean performance against the promise.
    """

    events: tuple[TraceEvent, ...]
    final_breakdown: TrustBreakdown
    ground_truth_trust: float
    consumer_reports: tuple[AccumulatedReport, ...]
    bystander_reports: tuple[InstantaneousReport, ...]


def _probe_times(schedule: ProbeSchedule, limit: float) -> list[float]:
    times = []
    for k in range(schedule.count):
        t = schedule.first_offset + k * schedule.interval
        if t > limit + _TIME_EPS:
            break
        times.append(t)
    return times


def _sample_times(usage: ConsumerUsage, limit: float) -> list[float]:
    end = min(usage.usage_end, limit)
    if usage.usage_start >= limit:
        return []
    n = int(math.floor((end - usage.usage_start) / usage.sample_interval + _TIME_EPS))
    return [usage.usage_start + m * usage.sample_interval for m in range(n + 1)]


def run_scenario(scenario: Scenario) -> SessionTrace:
    """Simulate one session up to query_time and aggregate what was reported."""
    session = scenario.session
    provider = scenario.provider
    q = scenario.query_time

    root = np.random.SeedSequence(scenario.seed)
    streams = root.spawn(len(scenario.bystanders) + len(scenario.consumers))

    events: list[TraceEvent] = []
    bystander_reports: list[InstantaneousReport] = []
    consumer_reports: list[AccumulatedReport] = []

    for i, b in enumerate(scenario.bystanders):
        rng = np.random.default_rng(streams[i])
        last: tuple[float, float] | None = None
        for t in _probe_times(b.schedule, q):
            observed = sample_true_performance(provider, t, rng)
            true_trust = instantaneous_trust(observed, session.promise)
            reported = observe(b.profile, true_trust, rng)
            events.append(TraceEvent(t, b.id, PROBE, reported))
            last = (t, reported)
        if last is not None:
            bystander_reports.append(InstantaneousReport(b.id, last[1], last[0]))

    for j, c in enumerate(scenario.consumers):
        rng = np.random.default_rng(streams[len(scenario.bystanders) + j])
        acc: float | None = None
        count = 0
        for t in _sample_times(c.usage, q):
            observed = sample_true_performance(provider, t, rng)
            true_trust = instantaneous_trust(observed, session.promise)
            reported = observe(c.profile, true_trust, rng)
            events.append(TraceEvent(t, c.id, SAMPLE, reported))
            # the first sample seeds the EWMA, later ones fold into it
            acc = reported if acc is None else update_accumulated(acc, reported, scenario.params.alpha)
            events.append(TraceEvent(t, c.id, ACCUMULATE, acc))
            count += 1
        if acc is not None:
            coverage = min(q, c.usage.usage_end) - c.usage.usage_start
            consumer_reports.append(AccumulatedReport(c.id, acc, coverage, count))

    events.sort(key=lambda e: (e.offset, e.reporter_id))

    breakdown = aggregate(consumer_reports, bystander_reports, scenario.params)
    truth = instantaneous_trust(noise_free_performance(provider), session.promise)

    return SessionTrace(
        events=tuple(events),
        final_breakdown=breakdown,
        ground_truth_trust=truth,
        consumer_reports=tuple(consumer_reports),
        bystander_reports=tuple(bystander_reports),
    )


def run_replications(scenario: Scenario, n: int) -> list[SessionTrace]:
    """Run n independent copies of a scenario, seeded seed, seed+1, ..."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return [run_scenario(replace(scenario, seed=scenario.seed + i)) for i in range(n)]
