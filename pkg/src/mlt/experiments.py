"""Experiment sweeps over simulated sessions.

Each replication draws a fresh provider quality (uniform over a target trust
range, realized through the honesty gap) and a fresh adversary assignment
(each reporter slot turns malicious with the sweep's adversary probability),
then simulates one session and classifies the aggregated trust against the
ground-truth level.

Replication draws depend only on (scenario seed, replication index), never on
the sweep point.  Sweep points therefore share providers and adversary flags,
and the roster for N reporters is a strict prefix of the roster for N+1, which
keeps count-sweep curves free of between-point sampling noise.

Except for the "full" kind, rosters are synthesized: even slots are
bystanders, odd slots are consumers, with fixed per-slot schedules spread
over the session.  "full" runs the scenario's own roster as configured.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from multiprocessing import Pool

import numpy as np

from .agents import HONEST, INVERTED, MALICIOUS, RANDOM, ProbeSchedule, ReporterProfile
from .evaluation import ExperimentResult, Thresholds, TrustLevel, classify, score
from .simulator import Bystander, Consumer, ConsumerUsage, Scenario, run_scenario
from .trust import NORMALIZED, aggregate

ABLATION = "ablation"
COUNT_SWEEP = "count-sweep"
ESTIMATOR_COMPARE = "estimator-compare"
FULL = "full"
KINDS = (ABLATION, COUNT_SWEEP, ESTIMATOR_COMPARE, FULL)

_COMP_TAG = 9137   # stream tag separating composition draws from agent streams
_MAX_SLOTS = 64    # composition always draws this many adversary flags

_HONEST_PROFILE = ReporterProfile(HONEST)


@dataclass(frozen=True)
class ExperimentSpec:
    """What to sweep and how hard to hammer it."""

    kind: str
    replications: int = 1000
    reporters: int = 10
    adversary_frac: float = 0.25
    adversary_fracs: tuple[float, ...] = (0.0, 0.25)
    trust_range: tuple[float, float] = (0.05, 0.95)
    malicious_strategy: str = RANDOM
    thresholds: Thresholds = Thresholds()
    vary_provider: bool = True

    def __post_init__(self):
        object.__setattr__(self, "adversary_fracs", tuple(self.adversary_fracs))
        object.__setattr__(self, "trust_range", tuple(self.trust_range))
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")
        if self.replications < 1:
            raise ValueError("replications must be >= 1")
        if not 1 <= self.reporters <= _MAX_SLOTS:
            raise ValueError(f"reporters must be in [1, {_MAX_SLOTS}]")
        if self.kind == ESTIMATOR_COMPARE and self.reporters < 2:
            raise ValueError("estimator-compare needs at least one bystander and one consumer")
        for f in (self.adversary_frac, *self.adversary_fracs):
            if not 0.0 <= f <= 1.0:
                raise ValueError(f"adversary fraction must be in [0, 1], got {f}")
        lo, hi = self.trust_range
        if not 0.0 < lo < hi <= 1.0:
            raise ValueError(f"trust_range must satisfy 0 < lo < hi <= 1, got {self.trust_range}")
        if self.malicious_strategy not in (RANDOM, INVERTED):
            raise ValueError(f"unknown malicious_strategy {self.malicious_strategy!r}")


def _composition(seed: int, rep: int, spec: ExperimentSpec):
    """Per-replication draws shared by every sweep point: quality, flags, seed."""
    rng = np.random.default_rng(np.random.SeedSequence((seed, _COMP_TAG, rep)))
    lo, hi = spec.trust_range
    target = lo + (hi - lo) * rng.random()
    flags = rng.random(_MAX_SLOTS)
    scenario_seed = int(rng.integers(0, 2**63))
    return target, flags, scenario_seed


def _slot_profile(flag: float, frac: float, strategy: str) -> ReporterProfile:
    if flag < frac:
        return ReporterProfile(MALICIOUS, malicious_strategy=strategy)
    return _HONEST_PROFILE


def _synth_roster(kind, query_time, n_slots, flags, frac, strategy):
    """Fixed per-slot rosters; slot i's schedule never depends on n_slots."""
    q = query_time
    bystanders = []
    consumers = []
    for slot in range(n_slots):
        profile = _slot_profile(flags[slot], frac, strategy)
        j = slot // 2
        if slot % 2 == 0:
            if kind == ESTIMATOR_COMPARE:
                # late probes, so instantaneous evidence reflects end-of-session drift
                sched = ProbeSchedule(q * (0.60 + 0.03 * (j % 6)), q * 0.10, 3)
            else:
                sched = ProbeSchedule(q * (0.10 + 0.03 * (j % 8)), q * 0.22, 4)
            bystanders.append(Bystander(f"b{j:02d}", profile, sched))
        else:
            if kind == ESTIMATOR_COMPARE:
                usage = ConsumerUsage(q * 0.03 * (j % 4), q * (0.45 + 0.03 * (j % 4)), q * 0.05)
            else:
                usage = ConsumerUsage(q * 0.04 * (j % 4), q * (0.70 + 0.06 * (j % 5)), q * 0.05)
            consumers.append(Consumer(f"c{j:02d}", profile, usage))
    return tuple(bystanders), tuple(consumers)


def _variant(base: Scenario, spec: ExperimentSpec, kind: str, n_reporters: int,
             frac: float, rep: int) -> Scenario:
    target, flags, scenario_seed = _composition(base.seed, rep, spec)
    provider = base.provider
    if spec.vary_provider:
        provider = replace(provider, honesty_gap=1.0 - target)
    if kind == FULL:
        bystanders, consumers = base.bystanders, base.consumers
    else:
        bystanders, consumers = _synth_roster(
            kind, base.query_time, n_reporters, flags, frac, spec.malicious_strategy
        )
    return replace(
        base,
        provider=provider,
        bystanders=bystanders,
        consumers=consumers,
        seed=scenario_seed,
    )


def _classify_clamped(overall: float, thresholds: Thresholds) -> TrustLevel:
    return classify(min(1.0, max(0.0, overall)), thresholds)


def _rep_outcome(args) -> tuple[TrustLevel, dict[str, TrustLevel]]:
    """Simulate one replication and classify it under every arm of the point."""
    base, spec, kind, n_reporters, frac, rep = args
    scenario = _variant(base, spec, kind, n_reporters, frac, rep)
    trace = run_scenario(scenario)
    th = spec.thresholds
    actual = _classify_clamped(trace.ground_truth_trust, th)
    pnorm = replace(scenario.params, mode=NORMALIZED)
    cr, br = trace.consumer_reports, trace.bystander_reports
    preds: dict[str, TrustLevel] = {}
    if kind == ABLATION:
        preds["on"] = _classify_clamped(aggregate(cr, br, pnorm).overall, th)
        preds["off"] = _classify_clamped(
            aggregate(cr, br, pnorm, use_credibility=False).overall, th
        )
    elif kind == ESTIMATOR_COMPARE:
        preds["instantaneous"] = _classify_clamped(aggregate((), br, pnorm).overall, th)
        preds["accumulated"] = _classify_clamped(aggregate(cr, (), pnorm).overall, th)
    else:
        preds["on"] = _classify_clamped(aggregate(cr, br, pnorm).overall, th)
    return actual, preds


def _run_point(base, spec, kind, n_reporters, frac, jobs):
    args = [(base, spec, kind, n_reporters, frac, rep) for rep in range(spec.replications)]
    if jobs > 1 and len(args) > 1:
        with Pool(processes=jobs) as pool:
            return pool.map(_rep_outcome, args, chunksize=max(1, len(args) // (jobs * 4)))
    return [_rep_outcome(a) for a in args]


def _declared_adversary_frac(scenario: Scenario) -> float:
    roster = [b.profile for b in scenario.bystanders] + [c.profile for c in scenario.consumers]
    if not roster:
        return 0.0
    return sum(1 for p in roster if p.kind == MALICIOUS) / len(roster)


def run_experiment_suite(base_scenario: Scenario, spec: ExperimentSpec,
                         jobs: int = 1) -> list[ExperimentResult]:
    """Run one experiment sweep and return a scored result per sweep point and arm."""
    if jobs < 1:
        raise ValueError("jobs must be >= 1")
    kind = spec.kind

    # (n_reporters, adversary_frac, arm names) per sweep point
    if kind == ABLATION:
        points = [(spec.reporters, f, ("on", "off")) for f in spec.adversary_fracs]
    elif kind == COUNT_SWEEP:
        points = [(n, spec.adversary_frac, ("on",)) for n in range(1, spec.reporters + 1)]
    elif kind == ESTIMATOR_COMPARE:
        points = [(spec.reporters, spec.adversary_frac, ("instantaneous", "accumulated"))]
    else:
        n = len(base_scenario.bystanders) + len(base_scenario.consumers)
        points = [(n, _declared_adversary_frac(base_scenario), ("on",))]

    results = []
    for n_reporters, frac, arms in points:
        outcomes = _run_point(base_scenario, spec, kind, n_reporters, frac, jobs)
        actual = [a for a, _ in outcomes]
        for arm in arms:
            predicted = [preds[arm] for _, preds in outcomes]
            config = {
                "kind": kind,
                "reporters": n_reporters,
                "adversary_frac": frac,
                "replications": spec.replications,
                "seed": base_scenario.seed,
            }
            if kind == ABLATION:
                config["credibility"] = arm
            elif kind == ESTIMATOR_COMPARE:
                config["estimator"] = arm
            results.append(score(predicted, actual, config))
    return results
