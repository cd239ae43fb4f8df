"""Discrete-event execution of position-verification rounds.

One Round object runs one protocol round on a shared stage: actors sit at
fixed positions on the line, classical and quantum messages travel at light
speed (c = 1), local computation takes zero simulated time, and every
action appends a trace record. The scheduler refuses to construct a message
that would outrun light; that is a hard CausalityViolation, distinct from
configuration errors.

Scheme choreography for honest rounds lives here; adversary choreography
lives in qpvsim.adversary and is wired in by run_round when the scenario
names a strategy. Verifier behavior is identical either way: only the
challenge recipients change (the interceptors sit in the beam path).
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable

import numpy as np

from . import quantum
from .quantum import Basis, BellOutcome, StateVector
from .spacetime import TAU_GEO, Event, Geometry, earliest_common_future


class ActorId(Enum):
    V1 = "V1"
    V2 = "V2"
    P = "P"
    P1 = "P1"
    P2 = "P2"


@dataclass(frozen=True)
class Actor:
    id: ActorId
    x: float
    honest: bool = True


class Scheme(Enum):
    TYPE_I = "type_i"
    TYPE_II = "type_ii"
    TELEPORT_MEASURE = "teleport_measure"
    TELEPORT_SWAP = "teleport_swap"


TELEPORT_SCHEMES = (Scheme.TELEPORT_MEASURE, Scheme.TELEPORT_SWAP)


class RecordKind(Enum):
    PREPARE = "prepare"
    SEND = "send"
    RECEIVE = "receive"
    BSM = "bsm"
    MEASURE = "measure"
    REPLY = "reply"
    VERDICT = "verdict"


@dataclass(frozen=True)
class TraceRecord:
    t: float
    x: float
    actor: ActorId
    kind: RecordKind
    detail: str

    def sort_key(self) -> tuple:
        return (self.t, self.x, self.actor.value, self.kind.value)

    def render(self, round_index: int) -> str:
        return (
            f"{round_index}\t{self.t:.9f}\t{self.x:.9f}\t"
            f"{self.actor.value}\t{self.kind.value}\t{self.detail}"
        )


class CausalityViolation(RuntimeError):
    """A message was constructed that would have to outrun light."""


@dataclass(frozen=True)
class Message:
    sender: ActorId
    recipient: ActorId
    label: str
    payload: Any
    emit: Event
    arrive: Event
    is_reply: bool = False


def _describe(payload: Any) -> str:
    if isinstance(payload, BellOutcome):
        return f"k=({payload.z},{payload.x})"
    if isinstance(payload, Basis):
        return f"basis={payload.value}"
    if isinstance(payload, bool) or isinstance(payload, (int, np.integer)):
        return f"bit={int(payload)}"
    if isinstance(payload, dict):
        return " ".join(f"{k}={_describe_value(v)}" for k, v in payload.items())
    return str(payload)


def _describe_value(v: Any) -> str:
    if isinstance(v, BellOutcome):
        return f"({v.z},{v.x})"
    if isinstance(v, Basis):
        return v.value
    return str(v)


@dataclass
class RoundTrace:
    """Everything one round produced: rendered records plus the structured
    data the (purely classical) verdict logic needs."""

    round_index: int
    scheme: Scheme
    strategy: str | None
    records: list[TraceRecord]
    messages: list[Message]
    reply_arrivals: dict[ActorId, Event]
    reply_payloads: dict[ActorId, Any]
    expectation: dict[str, Any]
    completion: dict[ActorId, Event]
    decided_at: Event
    epr_pairs_used: int

    def render(self) -> str:
        return "\n".join(r.render(self.round_index) for r in self.records)


class QuantumStage:
    """Named qubits over factored state-vector registers.

    Registers are merged lazily when an operation spans two of them; a Bell
    measurement factors its pair back out. No merge may exceed the engine
    cap of four qubits (no scheme or attack in this package needs more).
    """

    def __init__(self, rng: np.random.Generator):
        self._rng = rng
        self._state: dict[int, StateVector] = {}
        self._names: dict[int, list[str]] = {}
        self._where: dict[str, int] = {}
        self._next = 0

    def _add_register(self, sv: StateVector, names: list[str]) -> int:
        rid = self._next
        self._next += 1
        self._state[rid] = sv
        self._names[rid] = names
        for n in names:
            if n in self._where:
                raise ValueError(f"qubit name {n!r} already in use")
            self._where[n] = rid
        return rid

    def new_qubit(self, name: str, sv: StateVector) -> None:
        if sv.n != 1:
            raise ValueError("new_qubit takes a single-qubit state")
        self._add_register(sv, [name])

    def new_bell_pair(self, a: str, b: str) -> None:
        self._add_register(quantum.bell_pair(), [a, b])

    def _merge(self, ra: int, rb: int) -> int:
        sv = quantum.compose(self._state[ra], self._state[rb])
        names = self._names[ra] + self._names[rb]
        for rid in (ra, rb):
            del self._state[rid], self._names[rid]
        for n in names:
            del self._where[n]
        return self._add_register(sv, names)

    def _locate(self, name: str) -> int:
        if name not in self._where:
            raise KeyError(f"unknown qubit {name!r}")
        return self._where[name]

    def bsm(self, a: str, b: str, force: BellOutcome | None = None) -> BellOutcome:
        ra, rb = self._locate(a), self._locate(b)
        if ra != rb:
            ra = self._merge(ra, rb)
        names = self._names[ra]
        slots = (names.index(a), names.index(b))
        outcome, remnant = quantum.bsm(self._state[ra], slots, self._rng, force)
        survivors = [n for n in names if n not in (a, b)]
        del self._state[ra], self._names[ra]
        for n in names:
            del self._where[n]
        if remnant is not None:
            self._add_register(remnant, survivors)
        return outcome

    def measure(self, name: str, basis: Basis, force: int | None = None) -> int:
        rid = self._locate(name)
        slot = self._names[rid].index(name)
        outcome, post = quantum.measure(self._state[rid], slot, basis, self._rng, force)
        self._state[rid] = post
        return outcome

    def apply_pauli(self, name: str, k: BellOutcome) -> None:
        rid = self._locate(name)
        slot = self._names[rid].index(name)
        self._state[rid] = quantum.apply_pauli(self._state[rid], slot, k)


class Round:
    """Scheduler, stage, and trace sink for a single round."""

    def __init__(self, scenario: Any, round_index: int, forces: dict[str, Any] | None = None):
        self.scenario = scenario
        self.g: Geometry = scenario.geometry
        self.round_index = round_index
        self.forces = dict(forces or {})
        self.rng = np.random.default_rng([scenario.seed, round_index])
        self.stage = QuantumStage(self.rng)
        self.actors: dict[ActorId, Actor] = {}
        self.records: list[TraceRecord] = []
        self.messages: list[Message] = []
        self.handlers: dict[tuple[ActorId, str], Callable[[Message], None]] = {}
        self.mailbox: dict[ActorId, dict[tuple[str, ActorId], Message]] = {}
        self.reply_arrivals: dict[ActorId, Event] = {}
        self.reply_payloads: dict[ActorId, Any] = {}
        self.expectation: dict[str, Any] = {}
        self.scratch: dict[str, Any] = {}
        self.epr_pairs_used = 0
        self._heap: list[tuple[float, int, tuple]] = []
        self._seq = 0
        self._v2_completion: Event | None = None

    # -- setup helpers ------------------------------------------------------

    def force(self, key: str) -> Any:
        return self.forces.get(key)

    def add_actor(self, aid: ActorId, x: float, honest: bool = True) -> None:
        self.actors[aid] = Actor(aid, x, honest)
        self.mailbox[aid] = {}

    def on(self, recipient: ActorId, label: str, fn: Callable[[Message], None]) -> None:
        self.handlers[(recipient, label)] = fn

    def record(self, actor: ActorId, kind: RecordKind, t: float, detail: str,
               x: float | None = None) -> None:
        pos = self.actors[actor].x if x is None else x
        self.records.append(TraceRecord(t=t, x=pos, actor=actor, kind=kind, detail=detail))

    # -- scheduling ---------------------------------------------------------

    def _push(self, t: float, item: tuple) -> None:
        heapq.heappush(self._heap, (t, self._seq, item))
        self._seq += 1

    def dispatch(self, msg: Message) -> None:
        """Validate a fully formed message and enqueue its delivery.

        Protocol messages travel at exactly light speed: a too-early arrival
        is a CausalityViolation (hard error), anything else off the light ray
        is a malformed message.
        """
        sender = self.actors[msg.sender]
        recipient = self.actors[msg.recipient]
        if abs(msg.emit.x - sender.x) > TAU_GEO:
            raise ValueError(f"emit event off sender worldline: {msg.emit.x} != {sender.x}")
        if abs(msg.arrive.x - recipient.x) > TAU_GEO:
            raise ValueError(f"arrive event off recipient worldline: {msg.arrive.x} != {recipient.x}")
        transit = msg.arrive.t - msg.emit.t
        distance = abs(msg.arrive.x - msg.emit.x)
        if transit < distance - TAU_GEO:
            raise CausalityViolation(
                f"superluminal message {msg.label!r}: {msg.sender.value} -> "
                f"{msg.recipient.value} covers {distance} in {transit}"
            )
        if transit > distance + TAU_GEO:
            raise ValueError(f"message {msg.label!r} slower than light: {transit} > {distance}")
        self.messages.append(msg)
        kind = RecordKind.REPLY if msg.is_reply else RecordKind.SEND
        self.record(msg.sender, kind, msg.emit.t, f"{msg.label} -> {msg.recipient.value}")
        self._push(msg.arrive.t, ("msg", msg))

    def send(self, sender: ActorId, recipient: ActorId, label: str, payload: Any,
             emit_t: float, is_reply: bool = False) -> Message:
        """Build and dispatch a light-speed message between two actors."""
        x_from = self.actors[sender].x
        x_to = self.actors[recipient].x
        msg = Message(
            sender=sender,
            recipient=recipient,
            label=label,
            payload=payload,
            emit=Event(x_from, emit_t),
            arrive=Event(x_to, emit_t + abs(x_to - x_from)),
            is_reply=is_reply,
        )
        self.dispatch(msg)
        return msg

    def timer(self, actor: ActorId, t: float, fn: Callable[[], None]) -> None:
        """Schedule a local zero-duration action on an actor's worldline."""
        self._push(t, ("timer", actor, fn))

    def received(self, actor: ActorId, label: str) -> Message | None:
        for (lab, _sender), msg in self.mailbox[actor].items():
            if lab == label:
                return msg
        return None

    # -- execution ----------------------------------------------------------

    def execute(self) -> None:
        while self._heap:
            _t, _seq, item = heapq.heappop(self._heap)
            if item[0] == "msg":
                self._deliver(item[1])
            else:
                _tag, _actor, fn = item
                fn()

    def _deliver(self, msg: Message) -> None:
        recipient = self.actors[msg.recipient]
        intercepted = not recipient.honest and self.actors[msg.sender].honest
        prefix = "intercept " if intercepted else ""
        self.record(
            msg.recipient,
            RecordKind.RECEIVE,
            msg.arrive.t,
            f"{prefix}{msg.label} from {msg.sender.value} ({_describe(msg.payload)})",
        )
        self.mailbox[msg.recipient][(msg.label, msg.sender)] = msg
        if msg.is_reply and msg.recipient in (ActorId.V1, ActorId.V2):
            if msg.recipient not in self.reply_arrivals:
                self.reply_arrivals[msg.recipient] = msg.arrive
                self.reply_payloads[msg.recipient] = msg.payload
        handler = self.handlers.get((msg.recipient, msg.label))
        if handler is not None:
            handler(msg)

    # -- shared choreography ------------------------------------------------

    def sample_bit_basis(self) -> tuple[int, Basis]:
        bit = self.force("bit")
        if bit is None:
            bit = int(self.rng.integers(2))
        basis = self.force("basis")
        if basis is None:
            basis = Basis.Z if self.rng.integers(2) == 0 else Basis.X
        return bit, basis

    def sample_pauli(self, key: str) -> BellOutcome:
        forced = self.force(key)
        if forced is not None:
            return forced
        return quantum.BELL_OUTCOMES[int(self.rng.integers(4))]

    def wire_verifiers(self, targets: dict[ActorId, ActorId]) -> None:
        """Verifier-side setup shared by honest and adversarial rounds: the
        challenges go to whoever sits first in the beam path."""
        g = self.g
        scheme: Scheme = self.scenario.scheme
        if scheme is Scheme.TYPE_I:
            bit, basis = self.sample_bit_basis()
            self.expectation.update(bit=bit, basis=basis)
            self.stage.new_qubit("challenge", quantum.basis_state(bit, basis))
            self.record(ActorId.V1, RecordKind.PREPARE, 0.0,
                        f"qubit bit={bit} basis={basis.value}")
            self.send(ActorId.V1, targets[ActorId.V1], "challenge-qubit",
                      {"qubit": "challenge"}, 0.0)
            self.send(ActorId.V2, targets[ActorId.V2], "challenge-basis",
                      {"basis": basis}, 0.0)
        elif scheme is Scheme.TYPE_II:
            u1 = self.sample_pauli("u1")
            u2 = self.sample_pauli("u2")
            self.expectation.update(u1=u1, u2=u2)
            self.stage.new_bell_pair("K1", "H1")
            self.record(ActorId.V1, RecordKind.PREPARE, 0.0, "entangled pair K1,H1")
            self.stage.new_bell_pair("K2", "H2")
            self.record(ActorId.V2, RecordKind.PREPARE, 0.0, "entangled pair K2,H2")
            self.send(ActorId.V1, targets[ActorId.V1], "challenge-half",
                      {"qubit": "H1", "pauli": u1}, 0.0)
            self.send(ActorId.V2, targets[ActorId.V2], "challenge-half",
                      {"qubit": "H2", "pauli": u2}, 0.0)
        else:
            bit, basis = self.sample_bit_basis()
            self.expectation.update(bit=bit, basis=basis)
            self.stage.new_bell_pair("Hv1", "H1")
            self.record(ActorId.V1, RecordKind.PREPARE, 0.0, "entangled pair Hv1,H1")
            self.stage.new_bell_pair("Hv2", "H2")
            self.record(ActorId.V2, RecordKind.PREPARE, 0.0, "entangled pair Hv2,H2")
            self.send(ActorId.V1, targets[ActorId.V1], "channel-half", {"qubit": "H1"}, 0.0)
            v2_payload: dict[str, Any] = {"qubit": "H2"}
            if scheme is Scheme.TELEPORT_MEASURE:
                v2_payload["basis"] = basis
            self.send(ActorId.V2, targets[ActorId.V2], "channel-half", v2_payload, 0.0)

            t_tel = g.t_p + self.scenario.teleport_time_offset

            def do_teleport() -> None:
                self.stage.new_qubit("Ip", quantum.basis_state(bit, basis))
                self.record(ActorId.V1, RecordKind.PREPARE, t_tel,
                            f"qubit bit={bit} basis={basis.value}")
                k1 = self.stage.bsm("Ip", "Hv1", force=self.force("v1_bsm"))
                self.expectation["k1"] = k1
                self.record(ActorId.V1, RecordKind.BSM, t_tel,
                            f"teleport outcome k=({k1.z},{k1.x})")
                self.send(ActorId.V1, ActorId.V2, "teleport-key",
                          {"k1": k1, "bit": bit, "basis": basis}, t_tel)

            self.timer(ActorId.V1, t_tel, do_teleport)

            if scheme is Scheme.TELEPORT_SWAP:
                def v2_check(_msg: Message) -> None:
                    key = self.received(ActorId.V2, "teleport-key")
                    ans = self.received(ActorId.V2, "answer")
                    if key is None or ans is None or self._v2_completion is not None:
                        return
                    t = max(key.arrive.t, ans.arrive.t)
                    k1 = key.payload["k1"]
                    b = key.payload["basis"]
                    corr = quantum.relabel_bsm(k1, ans.payload)
                    self.stage.apply_pauli("Hv2", corr)
                    self.record(ActorId.V2, RecordKind.PREPARE, t,
                                f"correction k=({corr.z},{corr.x}) on Hv2")
                    v2_bit = self.stage.measure("Hv2", b, force=self.force("v2_measure"))
                    self.record(ActorId.V2, RecordKind.MEASURE, t,
                                f"basis={b.value} outcome={v2_bit}")
                    self.expectation["v2_bit"] = v2_bit
                    self._v2_completion = Event(g.x_v2, t)

                self.on(ActorId.V2, "teleport-key", v2_check)
                self.on(ActorId.V2, "answer", v2_check)

    def wire_honest_prover(self) -> None:
        scheme: Scheme = self.scenario.scheme
        P = ActorId.P

        if scheme is Scheme.TYPE_I:
            def act(_msg: Message) -> None:
                q = self.received(P, "challenge-qubit")
                b = self.received(P, "challenge-basis")
                if q is None or b is None:
                    return
                t = max(q.arrive.t, b.arrive.t)
                basis = b.payload["basis"]
                r = self.stage.measure(q.payload["qubit"], basis, force=self.force("p_measure"))
                self.record(P, RecordKind.MEASURE, t, f"basis={basis.value} outcome={r}")
                self.send(P, ActorId.V1, "answer", r, t, is_reply=True)
                self.send(P, ActorId.V2, "answer", r, t, is_reply=True)

            self.on(P, "challenge-qubit", act)
            self.on(P, "challenge-basis", act)

        elif scheme is Scheme.TYPE_II:
            def act(_msg: Message) -> None:
                m1 = self.mailbox[P].get(("challenge-half", ActorId.V1))
                m2 = self.mailbox[P].get(("challenge-half", ActorId.V2))
                if m1 is None or m2 is None:
                    return
                t = max(m1.arrive.t, m2.arrive.t)
                for m in (m1, m2):
                    u = m.payload["pauli"]
                    self.stage.apply_pauli(m.payload["qubit"], u)
                    self.record(P, RecordKind.PREPARE, t,
                                f"pauli k=({u.z},{u.x}) on {m.payload['qubit']}")
                k = self.stage.bsm("H1", "H2", force=self.force("p_bsm"))
                self.record(P, RecordKind.BSM, t, f"outcome k=({k.z},{k.x})")
                self.send(P, ActorId.V1, "answer", k, t, is_reply=True)
                self.send(P, ActorId.V2, "answer", k, t, is_reply=True)

            self.on(P, "challenge-half", act)

        else:
            def act(_msg: Message) -> None:
                m1 = self.mailbox[P].get(("channel-half", ActorId.V1))
                m2 = self.mailbox[P].get(("channel-half", ActorId.V2))
                if m1 is None or m2 is None:
                    return
                t = max(m1.arrive.t, m2.arrive.t)
                if scheme is Scheme.TELEPORT_MEASURE:
                    basis = m2.payload["basis"]
                    r = self.stage.measure(m1.payload["qubit"], basis,
                                           force=self.force("p_measure"))
                    self.record(P, RecordKind.MEASURE, t, f"basis={basis.value} outcome={r}")
                    answer: Any = r
                else:
                    k2 = self.stage.bsm(m1.payload["qubit"], m2.payload["qubit"],
                                        force=self.force("p_bsm"))
                    self.record(P, RecordKind.BSM, t, f"outcome k=({k2.z},{k2.x})")
                    answer = k2
                self.send(P, ActorId.V1, "answer", answer, t, is_reply=True)
                self.send(P, ActorId.V2, "answer", answer, t, is_reply=True)

            self.on(P, "channel-half", act)

    # -- wrap-up ------------------------------------------------------------

    def finalize(self, strategy_name: str | None) -> RoundTrace:
        g = self.g
        fallback_t = g.deadline + self.scenario.epsilon
        completion: dict[ActorId, Event] = {}
        for vid in (ActorId.V1, ActorId.V2):
            arr = self.reply_arrivals.get(vid)
            completion[vid] = arr if arr is not None else Event(self.actors[vid].x, fallback_t)
        if self.scenario.scheme is Scheme.TELEPORT_SWAP:
            if self._v2_completion is not None:
                completion[ActorId.V2] = self._v2_completion
            else:
                key = self.received(ActorId.V2, "teleport-key")
                t = max(fallback_t, key.arrive.t if key is not None else fallback_t)
                completion[ActorId.V2] = Event(self.actors[ActorId.V2].x, t)
        decided_at = earliest_common_future(completion[ActorId.V1], completion[ActorId.V2])

        if self.scenario.scheme is Scheme.TYPE_II:
            # Joint consistency check on the verifiers' retained halves; the
            # halves can reach the verdict point at light speed, so the check
            # is stamped there.
            kv = self.stage.bsm("K1", "K2", force=self.force("verifier_bsm"))
            self.expectation["kept_label"] = kv
            self.record(ActorId.V1, RecordKind.BSM, decided_at.t,
                        f"retained-pair check k=({kv.z},{kv.x})", x=decided_at.x)

        self.records.sort(key=TraceRecord.sort_key)
        return RoundTrace(
            round_index=self.round_index,
            scheme=self.scenario.scheme,
            strategy=strategy_name,
            records=self.records,
            messages=self.messages,
            reply_arrivals=self.reply_arrivals,
            reply_payloads=self.reply_payloads,
            expectation=self.expectation,
            completion=completion,
            decided_at=decided_at,
            epr_pairs_used=self.epr_pairs_used,
        )


def run_round(scenario: Any, round_index: int,
              forces: dict[str, Any] | None = None) -> RoundTrace:
    """Execute one round of the configured scheme, honestly or under the
    scenario's attack strategy, deterministically in (seed, round_index)."""
    rnd = Round(scenario, round_index, forces)
    g = rnd.g
    if scenario.strategy is None:
        rnd.add_actor(ActorId.V1, g.x_v1)
        rnd.add_actor(ActorId.V2, g.x_v2)
        rnd.add_actor(ActorId.P, g.x_p)
        targets = {ActorId.V1: ActorId.P, ActorId.V2: ActorId.P}
        rnd.wire_verifiers(targets)
        rnd.wire_honest_prover()
        strategy_name = None
    else:
        from .adversary import wire_attack

        strategy_name = scenario.strategy.value
        wire_attack(rnd)
    rnd.execute()
    if rnd.epr_pairs_used > scenario.epr_budget:
        raise RuntimeError(
            f"strategy consumed {rnd.epr_pairs_used} Bell pairs, budget {scenario.epr_budget}"
        )
    return rnd.finalize(strategy_name)
