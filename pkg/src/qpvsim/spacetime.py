"""Exact 1+1D Minkowski geometry in natural units (c = 1).

Events are (x, t) pairs with metric signature (+, -) on (t, x): the squared
interval between a and b is (t_b - t_a)**2 - (x_b - x_a)**2. All protocol
timing in the simulator reduces to light-speed transit along the x axis, so
every operation here is closed-form arithmetic; TAU_GEO absorbs float noise
on light-cone boundaries.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

# Boundary tolerance for light-cone comparisons. Linear in coordinates, not in
# the squared interval, so it composes with the transit arithmetic used by the
# scheduler (times and positions are order-1 numbers).
TAU_GEO = 1e-9


class SeparationClass(Enum):
    TIMELIKE = "timelike"
    LIGHTLIKE = "lightlike"
    SPACELIKE = "spacelike"


@dataclass(frozen=True)
class Event:
    """A point of 1+1D spacetime. Coordinates must be finite."""

    x: float
    t: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x) and math.isfinite(self.t)):
            raise ValueError(f"event coordinates must be finite, got ({self.x}, {self.t})")


def squared_interval(a: Event, b: Event) -> float:
    """Squared invariant interval (t_b - t_a)**2 - (x_b - x_a)**2, exact arithmetic."""
    return (b.t - a.t) ** 2 - (b.x - a.x) ** 2


def classify(a: Event, b: Event) -> SeparationClass:
    """Timelike / lightlike / spacelike separation of two events.

    Lightlike wins inside the TAU_GEO band around the cone (coincident events
    are lightlike: a degenerate null ray).
    """
    dt = abs(b.t - a.t)
    dx = abs(b.x - a.x)
    if abs(dt - dx) <= TAU_GEO:
        return SeparationClass.LIGHTLIKE
    if dt > dx:
        return SeparationClass.TIMELIKE
    return SeparationClass.SPACELIKE


def causally_precedes(a: Event, b: Event) -> bool:
    """True iff b lies in the closed future light cone of a.

    The cone boundary counts: a signal at light speed connects the events.
    An event precedes itself (coincident events are mutually lightlike).
    The single inequality keeps the TAU_GEO tolerance uniform, so boundary
    apexes that wobble a few ulps below a = b are still ordered.
    """
    return (b.t - a.t) >= abs(b.x - a.x) - TAU_GEO


def earliest_common_future(a: Event, b: Event) -> Event:
    """Apex of the intersection of the two future cones.

    If one event already lies in the other's future cone the later event is
    the apex. Otherwise (spacelike separation) the apex is where the
    right-going ray from the left event meets the left-going ray from the
    right event. In 1+1D the common causal future is exactly the future cone
    of the returned event.
    """
    if causally_precedes(a, b):
        return b
    if causally_precedes(b, a):
        return a
    if a.x > b.x:
        a, b = b, a
    return Event(x=(a.x + b.x + b.t - a.t) / 2, t=(a.t + b.t + b.x - a.x) / 2)


def exchange_completion_times(a: Event, b: Event) -> tuple[Event, Event]:
    """Earliest events on each party's worldline where the other's light-speed
    message arrives, for two spacelike-separated emission events.

    Returns (q_a, q_b) with q_a on a's worldline. Non-spacelike input is
    rejected: the exchange is degenerate when one emission can already see
    the other.
    """
    if classify(a, b) is not SeparationClass.SPACELIKE:
        raise ValueError("exchange_completion_times requires spacelike-separated events")
    dx = abs(b.x - a.x)
    q_a = Event(x=a.x, t=max(a.t, b.t + dx))
    q_b = Event(x=b.x, t=max(b.t, a.t + dx))
    return q_a, q_b


@dataclass(frozen=True)
class Geometry:
    """Verifier/prover placement on the line.

    V1 sits at x_v1, V2 at x_v2 (x_v1 < x_v2). The honest prover position is
    x_p = (x_v2 - x_v1) / 2 with challenge transit time t_p = (x_p - x_v1) / c.
    Dishonest provers sit at x_p -+ delta and intercept the flying challenges
    at t_p - delta. delta must keep both interceptors strictly between the
    verifiers and the prover point: 0 < delta < x_p - x_v1.
    """

    x_v1: float = 0.0
    x_v2: float = 2.0
    delta: float = 0.1

    def __post_init__(self) -> None:
        for name in ("x_v1", "x_v2", "delta"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if not self.x_v1 < self.x_v2:
            raise ValueError(f"x_v1 must be < x_v2, got {self.x_v1} >= {self.x_v2}")
        if not (0 < self.delta < self.x_p - self.x_v1):
            raise ValueError(
                f"delta must satisfy 0 < delta < x_p - x_v1 = {self.x_p - self.x_v1}, got {self.delta}"
            )

    @property
    def x_p(self) -> float:
        return (self.x_v2 - self.x_v1) / 2

    @property
    def t_p(self) -> float:
        # c = 1: challenge emitted at (x_v1, 0) reaches x_p at t_p.
        return self.x_p - self.x_v1

    @property
    def x_p1(self) -> float:
        return self.x_p - self.delta

    @property
    def x_p2(self) -> float:
        return self.x_p + self.delta

    @property
    def deadline(self) -> float:
        """Verifier reply deadline: both verifiers expect the answer by 2 t_p."""
        return 2 * self.t_p

    def prover_point(self) -> Event:
        return Event(x=self.x_p, t=self.t_p)

    def interception_events(self) -> tuple[Event, Event]:
        """Where the flying challenges cross the dishonest worldlines."""
        t = self.t_p - self.delta
        return Event(self.x_p1, t), Event(self.x_p2, t)


@dataclass(frozen=True)
class Hypersurface:
    """A constant-time (spacelike) or null hypersurface of 1+1D spacetime.

    Spacelike: the set {t = value}. Null: the light ray through `origin`
    running in `direction` (+1 rightward, -1 leftward).
    """

    kind: str  # "spacelike" | "null"
    value: float = 0.0
    origin: Event | None = None
    direction: int = 1

    def __post_init__(self) -> None:
        if self.kind not in ("spacelike", "null"):
            raise ValueError(f"unknown hypersurface kind {self.kind!r}")
        if self.kind == "null":
            if self.origin is None:
                raise ValueError("null hypersurface needs an origin event")
            if self.direction not in (-1, 1):
                raise ValueError("direction must be +1 or -1")

    def contains(self, e: Event) -> bool:
        if self.kind == "spacelike":
            return abs(e.t - self.value) <= TAU_GEO
        assert self.origin is not None
        return abs((e.t - self.origin.t) - self.direction * (e.x - self.origin.x)) <= TAU_GEO


def theorem1_insecure(g: Geometry, interception_a: Event, interception_b: Event) -> bool:
    """Insecurity predicate: the honest prover point (x_p, t_p) lies in the
    common causal future of both interception events, so two colluding
    parties can assemble the honest answer there in time."""
    p = g.prover_point()
    return causally_precedes(interception_a, p) and causally_precedes(interception_b, p)


@dataclass(frozen=True)
class TheoremPredicates:
    """Geometric security predicates for one scheme layout.

    theorem2: the extraction event sits at the earliest common future of the
        two encode events (cone-apex extraction).
    theorem3: neither interception causally precedes the extraction event.
    theorem4: encode events and extraction event lie on one spacelike
        hypersurface (equal t within TAU_GEO) and are mutually spacelike.
    """

    theorem2: bool
    theorem3: bool
    theorem4: bool


def theorem234_predicates(
    g: Geometry,
    encode_events: tuple[Event, Event],
    extract_event: Event,
    interceptions: tuple[Event, Event],
) -> TheoremPredicates:
    enc_a, enc_b = encode_events
    apex = earliest_common_future(enc_a, enc_b)
    t2 = abs(apex.x - extract_event.x) <= TAU_GEO and abs(apex.t - extract_event.t) <= TAU_GEO

    t3 = not causally_precedes(interceptions[0], extract_event) and not causally_precedes(
        interceptions[1], extract_event
    )

    points = (enc_a, enc_b, extract_event)
    same_t = all(abs(p.t - extract_event.t) <= TAU_GEO for p in points)
    mutually_spacelike = all(
        classify(points[i], points[j]) is SeparationClass.SPACELIKE
        for i in range(3)
        for j in range(i + 1, 3)
    )
    t4 = same_t and mutually_spacelike

    return TheoremPredicates(theorem2=t2, theorem3=t3, theorem4=t4)
