"""Service sessions, attribute schemas, and performance vectors.

A crowdsourced IoT service (a WiFi hotspot, a shared sensor feed, ...) is
offered inside a bounded area for a bounded time window.  The provider
advertises a promise over a fixed attribute schema, and anyone observing the
service measures the same attributes, so promise and observation are directly
comparable, element by element.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

EARTH_RADIUS_M = 6371000.0  # mean Earth radius, spherical model

CONTINUOUS = "continuous"
ORDINAL = "ordinal"


@dataclass(frozen=True)
class AttributeSpec:
    """One measurable service attribute.  Higher values are always better."""

    name: str
    kind: str = CONTINUOUS
    unit: str = ""
    ordinal_levels: tuple[str, ...] = ()
    ordinal_base: int = 1
    higher_is_better: bool = True

    def __post_init__(self):
        object.__setattr__(self, "ordinal_levels", tuple(self.ordinal_levels))
        if not self.name:
            raise ValueError("attribute name must be non-empty")
        if self.kind not in (CONTINUOUS, ORDINAL):
            raise ValueError(f"attribute {self.name!r}: unknown kind {self.kind!r}")
        if not self.higher_is_better:
            # Lower-is-better attributes (latency and the like) would need an
            # inverted ratio; they are rejected rather than silently mishandled.
            raise ValueError(
                f"attribute {self.name!r}: lower-is-better attributes are not supported"
            )
        if self.kind == ORDINAL:
            if len(self.ordinal_levels) < 2:
                raise ValueError(f"attribute {self.name!r}: need at least 2 ordinal levels")
            if len(set(self.ordinal_levels)) != len(self.ordinal_levels):
                raise ValueError(f"attribute {self.name!r}: duplicate ordinal levels")
            if self.ordinal_base < 0:
                raise ValueError(f"attribute {self.name!r}: ordinal_base must be >= 0")
            # ordinal_base defaults to 1 so the lowest level never numerizes to
            # zero.  Base 0 stays available as an explicit opt-in, but a promise
            # sitting on that zero level is rejected wherever it would be divided.
        elif self.ordinal_levels:
            raise ValueError(f"attribute {self.name!r}: continuous attributes take no levels")

    @property
    def level_range(self) -> tuple[int, int]:
        """Inclusive numeric range of a numerized ordinal attribute."""
        if self.kind != ORDINAL:
            raise ValueError(f"attribute {self.name!r} is not ordinal")
        return self.ordinal_base, self.ordinal_base + len(self.ordinal_levels) - 1


@dataclass(frozen=True)
class AttributeSchema:
    """Ordered collection of attribute specs shared by promise and observations."""

    attributes: tuple[AttributeSpec, ...]

    def __post_init__(self):
        object.__setattr__(self, "attributes", tuple(self.attributes))
        if not self.attributes:
            raise ValueError("schema needs at least one attribute")
        names = [a.name for a in self.attributes]
        if len(set(names)) != len(names):
            raise ValueError("attribute names must be unique")

    def __len__(self) -> int:
        return len(self.attributes)


@dataclass(frozen=True)
class PerformanceVector:
    """Numeric attribute values conforming to a schema."""

    values: tuple[float, ...]
    schema: AttributeSchema

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        if len(self.values) != len(self.schema):
            raise ValueError(
                f"expected {len(self.schema)} values, got {len(self.values)}"
            )
        for spec, v in zip(self.schema.attributes, self.values):
            if math.isnan(v) or math.isinf(v):
                raise ValueError(f"attribute {spec.name!r}: value must be finite")
            if v < 0:
                raise ValueError(f"attribute {spec.name!r}: value must be >= 0, got {v}")
            if spec.kind == ORDINAL:
                lo, hi = spec.level_range
                if not v.is_integer() or not lo <= v <= hi:
                    raise ValueError(
                        f"attribute {spec.name!r}: {v} is not a numerized level in [{lo}, {hi}]"
                    )

    def __len__(self) -> int:
        return len(self.values)


def numerize(schema: AttributeSchema, raw: list) -> PerformanceVector:
    """Turn raw attribute readings into a numeric performance vector.

    Continuous entries pass through unchanged; ordinal entries must be level
    labels and map to their level index plus the attribute's ordinal_base.
    """
    if len(raw) != len(schema):
        raise ValueError(f"expected {len(schema)} entries, got {len(raw)}")
    values = []
    for spec, entry in zip(schema.attributes, raw):
        if spec.kind == ORDINAL:
            if not isinstance(entry, str):
                raise ValueError(
                    f"attribute {spec.name!r}: expected an ordinal label, got {entry!r}"
                )
            try:
                idx = spec.ordinal_levels.index(entry)
            except ValueError:
                raise ValueError(
                    f"attribute {spec.name!r}: unknown level {entry!r}, "
                    f"expected one of {list(spec.ordinal_levels)}"
                ) from None
            values.append(float(spec.ordinal_base + idx))
        else:
            if isinstance(entry, bool) or not isinstance(entry, (int, float)):
                raise ValueError(
                    f"attribute {spec.name!r}: expected a number, got {entry!r}"
                )
            if entry < 0:
                raise ValueError(f"attribute {spec.name!r}: value must be >= 0, got {entry}")
            values.append(float(entry))
    return PerformanceVector(tuple(values), schema)


@dataclass(frozen=True)
class ServiceSession:
    """A single bounded offering of a service: where, when, and what was promised.

    Timestamps are in seconds.  start_time and end_time are absolute; report
    timestamps elsewhere in the library are offsets from start_time.
    """

    id: str
    location: tuple[float, float]  # (latitude, longitude) in degrees
    start_time: float
    end_time: float
    provider_id: str
    service_type: str
    promise: PerformanceVector
    schema: AttributeSchema

    def __post_init__(self):
        if not self.id:
            raise ValueError("session id must be non-empty")
        lat, lon = self.location
        if not -90.0 <= lat <= 90.0 or not -180.0 <= lon <= 180.0:
            raise ValueError(f"session {self.id!r}: location {self.location} out of range")
        if not self.start_time < self.end_time:
            raise ValueError(f"session {self.id!r}: start_time must precede end_time")
        if self.promise.schema != self.schema:
            raise ValueError(f"session {self.id!r}: promise does not conform to the schema")
        for spec, v in zip(self.schema.attributes, self.promise.values):
            if v == 0:
                # A zero promise element makes the observed/promised ratio
                # undefined, so it can never be part of a valid promise.
                raise ValueError(
                    f"session {self.id!r}: promised value for {spec.name!r} is 0, "
                    "which makes the observed-to-promised ratio undefined"
                )

    @property
    def duration(self) -> float:
        return self.end_time - self.start_time


def haversine_m(a: tuple[float, float], b: tuple[float, float]) -> float:
    """Great-circle distance in meters between two (lat, lon) points in degrees."""
    lat1, lon1 = math.radians(a[0]), math.radians(a[1])
    lat2, lon2 = math.radians(b[0]), math.radians(b[1])
    dlat = lat2 - lat1
    dlon = lon2 - lon1
    h = math.sin(dlat / 2.0) ** 2 + math.cos(lat1) * math.cos(lat2) * math.sin(dlon / 2.0) ** 2
    return 2.0 * EARTH_RADIUS_M * math.asin(min(1.0, math.sqrt(h)))


def session_contains(
    session: ServiceSession,
    time: float,
    location: tuple[float, float],
    radius_m: float,
) -> bool:
    """True when an absolute time and a location fall inside the session.

    Both boundaries are inclusive: the session start and end instants count as
    inside, and so does a point exactly radius_m away from the session center.
    """
    if radius_m <= 0:
        raise ValueError(f"radius_m must be positive, got {radius_m}")
    if not session.start_time <= time <= session.end_time:
        return False
    return haversine_m(session.location, location) <= radius_m
