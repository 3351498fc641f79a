"""Scenario files: strict JSON in, validated Scenario out.

Files are self-describing (a schema_version field) and strictly checked:
unknown fields anywhere in the document are rejected so typos fail loudly
instead of silently falling back to defaults.

Structural problems (bad JSON, wrong types, unknown or missing fields) raise
ConfigError.  Structurally sound documents whose contents break a domain
invariant (a probe schedule past the session end, a zero promise element)
raise plain ValueError from the model constructors; collect_violations
gathers those per component instead of stopping at the first.
"""

from __future__ import annotations

import json

from .agents import AttributeGenerator, ProbeSchedule, ProviderProfile, ReporterProfile
from .evaluation import Thresholds
from .session import (
    CONTINUOUS,
    ORDINAL,
    AttributeSchema,
    AttributeSpec,
    ServiceSession,
    numerize,
)
from .simulator import (
    Bystander,
    Consumer,
    ConsumerUsage,
    Scenario,
    schedule_violation,
    usage_violation,
)
from .trust import AggregationParams

SCHEMA_VERSION = 1


class ConfigError(ValueError):
    """The document is malformed: bad JSON, wrong types, unknown fields."""


def _check_obj(d, path, required=(), optional=()):
    if not isinstance(d, dict):
        raise ConfigError(f"{path}: expected an object")
    unknown = sorted(set(d) - set(required) - set(optional))
    if unknown:
        raise ConfigError(f"{path}: unknown field(s): {', '.join(unknown)}")
    missing = sorted(k for k in required if k not in d)
    if missing:
        raise ConfigError(f"{path}: missing field(s): {', '.join(missing)}")


def _num(d, path, key, default=None):
    if key not in d:
        return default
    v = d[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"{path}.{key}: expected a number, got {v!r}")
    return float(v)


def _int(d, path, key, default=None):
    if key not in d:
        return default
    v = d[key]
    if isinstance(v, bool) or not isinstance(v, int):
        raise ConfigError(f"{path}.{key}: expected an integer, got {v!r}")
    return v


def _str(d, path, key, default=None):
    if key not in d:
        return default
    v = d[key]
    if not isinstance(v, str):
        raise ConfigError(f"{path}.{key}: expected a string, got {v!r}")
    return v


def _list(d, path, key):
    v = d.get(key)
    if not isinstance(v, list):
        raise ConfigError(f"{path}.{key}: expected a list")
    return v


def _attribute(d, path):
    _check_obj(d, path, required=("name",), optional=("kind", "unit", "levels", "base"))
    kind = _str(d, path, "kind", CONTINUOUS)
    levels = d.get("levels", [])
    if not isinstance(levels, list) or not all(isinstance(s, str) for s in levels):
        raise ConfigError(f"{path}.levels: expected a list of strings")
    return AttributeSpec(
        name=_str(d, path, "name"),
        kind=kind,
        unit=_str(d, path, "unit", ""),
        ordinal_levels=tuple(levels),
        ordinal_base=_int(d, path, "base", 1),
    )


def _session(d):
    path = "session"
    _check_obj(
        d,
        path,
        required=(
            "id", "location", "start_time", "end_time",
            "provider_id", "service_type", "attributes", "promise",
        ),
    )
    loc = _list(d, path, "location")
    if len(loc) != 2 or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in loc):
        raise ConfigError(f"{path}.location: expected [latitude, longitude]")
    schema = AttributeSchema(
        tuple(_attribute(a, f"{path}.attributes[{i}]") for i, a in enumerate(_list(d, path, "attributes")))
    )
    promise_raw = _list(d, path, "promise")
    for i, entry in enumerate(promise_raw):
        if isinstance(entry, bool) or not isinstance(entry, (int, float, str)):
            raise ConfigError(f"{path}.promise[{i}]: expected a number or level label")
    return ServiceSession(
        id=_str(d, path, "id"),
        location=(float(loc[0]), float(loc[1])),
        start_time=_num(d, path, "start_time"),
        end_time=_num(d, path, "end_time"),
        provider_id=_str(d, path, "provider_id"),
        service_type=_str(d, path, "service_type"),
        promise=numerize(schema, promise_raw),
        schema=schema,
    )


def _provider(d, session):
    path = "provider"
    _check_obj(d, path, required=("attributes",), optional=("honesty_gap",))
    gens = []
    for i, g in enumerate(_list(d, path, "attributes")):
        gpath = f"{path}.attributes[{i}]"
        _check_obj(g, gpath, required=("mean",), optional=("jitter_stddev", "drift_per_hour"))
        gens.append(
            AttributeGenerator(
                mean=_num(g, gpath, "mean"),
                jitter_stddev=_num(g, gpath, "jitter_stddev", 0.0),
                drift_per_hour=_num(g, gpath, "drift_per_hour", 0.0),
            )
        )
    return ProviderProfile(
        promise=session.promise,
        attributes=tuple(gens),
        honesty_gap=_num(d, path, "honesty_gap", 0.0),
    )


def _reporter(d, path):
    _check_obj(d, path, required=("kind",), optional=("bias_offset", "strategy"))
    return ReporterProfile(
        kind=_str(d, path, "kind"),
        bias_offset=_num(d, path, "bias_offset", 0.0),
        malicious_strategy=_str(d, path, "strategy", None),
    )


def _bystander(d, i):
    path = f"bystanders[{i}]"
    _check_obj(d, path, required=("reporter", "schedule"), optional=("id",))
    spath = f"{path}.schedule"
    s = d["schedule"]
    _check_obj(s, spath, required=("first_offset", "interval", "count"))
    return Bystander(
        id=_str(d, path, "id", f"b{i:02d}"),
        profile=_reporter(d["reporter"], f"{path}.reporter"),
        schedule=ProbeSchedule(
            first_offset=_num(s, spath, "first_offset"),
            interval=_num(s, spath, "interval"),
            count=_int(s, spath, "count"),
        ),
    )


def _consumer(d, i):
    path = f"consumers[{i}]"
    _check_obj(
        d, path,
        required=("reporter", "usage_start", "usage_end", "sample_interval"),
        optional=("id",),
    )
    return Consumer(
        id=_str(d, path, "id", f"c{i:02d}"),
        profile=_reporter(d["reporter"], f"{path}.reporter"),
        usage=ConsumerUsage(
            usage_start=_num(d, path, "usage_start"),
            usage_end=_num(d, path, "usage_end"),
            sample_interval=_num(d, path, "sample_interval"),
        ),
    )


def _params(d):
    if d is None:
        return AggregationParams()
    path = "params"
    _check_obj(d, path, optional=("alpha", "beta", "mode"))
    return AggregationParams(
        alpha=_num(d, path, "alpha", AggregationParams.alpha),
        beta=_num(d, path, "beta", AggregationParams.beta),
        mode=_str(d, path, "mode", AggregationParams.mode),
    )


def _thresholds(v):
    if v is None:
        return Thresholds()
    if not isinstance(v, list) or len(v) != 2:
        raise ConfigError("thresholds: expected [low_cut, high_cut]")
    for x in v:
        if isinstance(x, bool) or not isinstance(x, (int, float)):
            raise ConfigError("thresholds: expected [low_cut, high_cut] as numbers")
    return Thresholds(float(v[0]), float(v[1]))


_TOP_REQUIRED = ("schema_version", "session", "provider", "bystanders", "consumers", "query_time", "seed")
_TOP_OPTIONAL = ("params", "thresholds")


def _check_top(doc):
    _check_obj(doc, "$", required=_TOP_REQUIRED, optional=_TOP_OPTIONAL)
    version = _int(doc, "$", "schema_version")
    if version != SCHEMA_VERSION:
        raise ConfigError(f"$.schema_version: expected {SCHEMA_VERSION}, got {version}")
    _list(doc, "$", "bystanders")
    _list(doc, "$", "consumers")


def parse_scenario(doc) -> tuple[Scenario, Thresholds]:
    """Build a Scenario (plus classification thresholds) from a parsed document."""
    _check_top(doc)
    session = _session(doc["session"])
    provider = _provider(doc["provider"], session)
    bystanders = tuple(_bystander(b, i) for i, b in enumerate(doc["bystanders"]))
    consumers = tuple(_consumer(c, i) for i, c in enumerate(doc["consumers"]))
    scenario = Scenario(
        session=session,
        provider=provider,
        bystanders=bystanders,
        consumers=consumers,
        params=_params(doc.get("params")),
        query_time=_num(doc, "$", "query_time"),
        seed=_int(doc, "$", "seed"),
    )
    return scenario, _thresholds(doc.get("thresholds"))


def collect_violations(doc) -> list[str]:
    """List every domain-invariant violation in a structurally valid document.

    Structural problems still raise ConfigError; this function only softens
    the domain checks, reporting one message per broken component so a user
    can fix a file in one pass.
    """
    _check_top(doc)
    violations: list[str] = []

    session = None
    try:
        session = _session(doc["session"])
    except ConfigError:
        raise
    except ValueError as e:
        violations.append(f"session: {e}")

    if session is not None:
        try:
            _provider(doc["provider"], session)
        except ConfigError:
            raise
        except ValueError as e:
            violations.append(f"provider: {e}")

    bystanders = []
    for i, b in enumerate(doc["bystanders"]):
        try:
            bystanders.append(_bystander(b, i))
        except ConfigError:
            raise
        except ValueError as e:
            violations.append(f"bystander {i}: {e}")

    consumers = []
    for i, c in enumerate(doc["consumers"]):
        try:
            consumers.append(_consumer(c, i))
        except ConfigError:
            raise
        except ValueError as e:
            violations.append(f"consumer {i}: {e}")

    try:
        _params(doc.get("params"))
    except ConfigError:
        raise
    except ValueError as e:
        violations.append(f"params: {e}")

    try:
        _thresholds(doc.get("thresholds"))
    except ConfigError:
        raise
    except ValueError as e:
        violations.append(f"thresholds: {e}")

    seed = _int(doc, "$", "seed")
    if seed < 0:
        violations.append(f"seed: must be a non-negative integer, got {seed}")

    if session is not None:
        duration = session.duration
        query_time = _num(doc, "$", "query_time")
        if not 0.0 < query_time <= duration:
            violations.append(
                f"query_time: must lie in (0, {duration:g}], got {query_time:g}"
            )
        for b in bystanders:
            msg = schedule_violation(duration, b.schedule)
            if msg:
                violations.append(f"bystander {b.id!r}: {msg}")
        for c in consumers:
            msg = usage_violation(duration, c.usage)
            if msg:
                violations.append(f"consumer {c.id!r}: {msg}")

    ids = [b.id for b in bystanders] + [c.id for c in consumers]
    if len(set(ids)) != len(ids):
        violations.append("reporters: ids must be unique across the scenario")

    return violations


def load_scenario_file(path) -> tuple[Scenario, Thresholds]:
    """Read, check, and build a scenario from a JSON file."""
    doc = read_document(path)
    return parse_scenario(doc)


def read_document(path) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"scenario file not found: {path}") from None
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path}: not valid JSON ({e})") from None
