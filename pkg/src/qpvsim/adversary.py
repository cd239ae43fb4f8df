"""Dishonest-prover strategies.

Two colluding parties sit at x_p -+ delta, intercept the flying challenges
at t_p - delta, and try to get consistent answers to both verifiers by the
2 t_p deadline. The strategies differ in what crosses the gap between them
and whether they spend a pre-shared Bell pair:

- S0: no entanglement, intercept-and-guess; one classical forward that
  arrives too late to matter.
- S1: one Bell pair; the intercepted system is swapped onto the pair and
  the Pauli frame is repaired by XOR arithmetic on broadcast outcomes, so
  both replies are correct and on time.
- S2: the same relabeling machinery pointed at the teleport schemes. The
  strategy is verdict-agnostic: the round computes whatever the physics
  says; the harness reports which way it lands.
- S3: no entanglement against the teleport schemes; the reply needs both
  sides' data, so the far-side verifier hears back at 2 t_p + 2 delta.
"""
from __future__ import annotations

from enum import Enum
from typing import Any

from . import quantum
from .protocol import ActorId, Message, RecordKind, Round, RoundTrace, Scheme
from .quantum import Basis, BellOutcome


class Strategy(Enum):
    S0_INTERCEPT_FORWARD = "S0_intercept_forward"
    S1_RELABEL_TYPE_I = "S1_relabel_type_i"
    S1_RELABEL_TYPE_II = "S1_relabel_type_ii"
    S2_RELABEL_TELEPORT = "S2_relabel_teleport"
    S3_CLASSICAL_EXCHANGE_TELEPORT = "S3_classical_exchange_teleport"


# scheme family and Bell-pair budget each strategy requires
STRATEGY_RULES: dict[Strategy, tuple[tuple[Scheme, ...], int, int]] = {
    # (allowed schemes, min epr_budget, exact epr use)
    Strategy.S0_INTERCEPT_FORWARD: ((Scheme.TYPE_I,), 0, 0),
    Strategy.S1_RELABEL_TYPE_I: ((Scheme.TYPE_I,), 1, 1),
    Strategy.S1_RELABEL_TYPE_II: ((Scheme.TYPE_II,), 1, 1),
    Strategy.S2_RELABEL_TELEPORT: ((Scheme.TELEPORT_MEASURE, Scheme.TELEPORT_SWAP), 1, 1),
    Strategy.S3_CLASSICAL_EXCHANGE_TELEPORT: ((Scheme.TELEPORT_MEASURE, Scheme.TELEPORT_SWAP), 0, 0),
}


def check_strategy(strategy: Strategy, scheme: Scheme, epr_budget: int) -> None:
    """Raises ValueError when a strategy cannot run under the configuration."""
    schemes, min_budget, _used = STRATEGY_RULES[strategy]
    if scheme not in schemes:
        names = "/".join(s.value for s in schemes)
        raise ValueError(f"strategy {strategy.value} applies to scheme {names}, not {scheme.value}")
    if min_budget > 0 and epr_budget < min_budget:
        raise ValueError(
            f"strategy {strategy.value} needs epr_budget >= {min_budget}, got {epr_budget}"
        )
    if min_budget == 0 and epr_budget != 0:
        raise ValueError(f"strategy {strategy.value} requires epr_budget = 0, got {epr_budget}")


class CommPattern(Enum):
    """Operator locality class read off a round's message traffic between
    the two colluding parties: none, one-directional, or both directions."""

    LOCALIZABLE = "localizable"
    SEMI_LOCALIZABLE = "semi_localizable"
    TWO_WAY = "two_way"


def classify_pattern(trace: RoundTrace) -> CommPattern:
    directions = set()
    for msg in trace.messages:
        if {msg.sender, msg.recipient} == {ActorId.P1, ActorId.P2}:
            directions.add(msg.sender)
    if not directions:
        return CommPattern.LOCALIZABLE
    if len(directions) == 1:
        return CommPattern.SEMI_LOCALIZABLE
    return CommPattern.TWO_WAY


def relabel_reply_bit(k_a: BellOutcome, r_prime: int, basis: Basis) -> int:
    """Repair a raw measurement taken through a k_a-relabeled channel."""
    return r_prime ^ quantum.correction_bit(k_a, basis)


def wire_attack(rnd: Round) -> None:
    """Install verifiers plus the colluding pair for the scenario's strategy."""
    g = rnd.g
    strategy: Strategy = rnd.scenario.strategy
    check_strategy(strategy, rnd.scenario.scheme, rnd.scenario.epr_budget)
    rnd.add_actor(ActorId.V1, g.x_v1)
    rnd.add_actor(ActorId.V2, g.x_v2)
    rnd.add_actor(ActorId.P1, g.x_p1, honest=False)
    rnd.add_actor(ActorId.P2, g.x_p2, honest=False)
    rnd.wire_verifiers({ActorId.V1: ActorId.P1, ActorId.V2: ActorId.P2})
    _WIRERS[strategy](rnd)


def _share_pair(rnd: Round) -> None:
    rnd.stage.new_bell_pair("E1", "E2")
    rnd.epr_pairs_used += 1
    rnd.record(ActorId.P1, RecordKind.PREPARE, 0.0, "pre-shared pair half E1")
    rnd.record(ActorId.P2, RecordKind.PREPARE, 0.0, "pre-shared pair half E2")


def _wire_s0(rnd: Round) -> None:
    P1, P2 = ActorId.P1, ActorId.P2

    def on_qubit(msg: Message) -> None:
        t = msg.arrive.t
        guess = rnd.force("s0_guess")
        if guess is None:
            guess = Basis.Z if rnd.rng.integers(2) == 0 else Basis.X
        r = rnd.stage.measure(msg.payload["qubit"], guess, force=rnd.force("p1_measure"))
        rnd.record(P1, RecordKind.MEASURE, t, f"basis={guess.value} outcome={r} (guessed)")
        rnd.send(P1, ActorId.V1, "answer", r, t, is_reply=True)
        rnd.send(P1, ActorId.V2, "answer", r, t, is_reply=True)

    def on_basis(msg: Message) -> None:
        # Forwarded for completeness; it reaches P1 at t_p + delta, after
        # the reply toward V2 had to leave.
        rnd.send(P2, P1, "forwarded-basis", {"basis": msg.payload["basis"]}, msg.arrive.t)

    rnd.on(P1, "challenge-qubit", on_qubit)
    rnd.on(P2, "challenge-basis", on_basis)


def _wire_s1_type_i(rnd: Round) -> None:
    P1, P2 = ActorId.P1, ActorId.P2
    _share_pair(rnd)

    def on_qubit(msg: Message) -> None:
        t = msg.arrive.t
        k_a = rnd.stage.bsm(msg.payload["qubit"], "E1", force=rnd.force("p1_bsm"))
        rnd.scratch["k_a"] = k_a
        rnd.record(P1, RecordKind.BSM, t, f"relabel outcome k=({k_a.z},{k_a.x})")
        rnd.send(P1, P2, "relabel-key", {"k": k_a}, t)

    def on_basis(msg: Message) -> None:
        t = msg.arrive.t
        basis = msg.payload["basis"]
        r_prime = rnd.stage.measure("E2", basis, force=rnd.force("p2_measure"))
        rnd.scratch["r_prime"] = r_prime
        rnd.record(P2, RecordKind.MEASURE, t, f"basis={basis.value} outcome={r_prime}")
        rnd.send(P2, P1, "raw-result", {"r": r_prime, "basis": basis}, t)

    def p1_reply(msg: Message) -> None:
        r = relabel_reply_bit(rnd.scratch["k_a"], msg.payload["r"], msg.payload["basis"])
        rnd.send(P1, ActorId.V1, "answer", r, msg.arrive.t, is_reply=True)

    def p2_reply(msg: Message) -> None:
        basis = rnd.received(P2, "challenge-basis").payload["basis"]
        r = relabel_reply_bit(msg.payload["k"], rnd.scratch["r_prime"], basis)
        rnd.send(P2, ActorId.V2, "answer", r, msg.arrive.t, is_reply=True)

    rnd.on(P1, "challenge-qubit", on_qubit)
    rnd.on(P2, "challenge-basis", on_basis)
    rnd.on(P1, "raw-result", p1_reply)
    rnd.on(P2, "relabel-key", p2_reply)


def _wire_s1_type_ii(rnd: Round) -> None:
    P1, P2 = ActorId.P1, ActorId.P2
    _share_pair(rnd)

    def on_half_v1(msg: Message) -> None:
        t = msg.arrive.t
        u1 = msg.payload["pauli"]
        rnd.stage.apply_pauli(msg.payload["qubit"], u1)
        rnd.record(P1, RecordKind.PREPARE, t, f"pauli k=({u1.z},{u1.x}) on {msg.payload['qubit']}")
        k_a = rnd.stage.bsm(msg.payload["qubit"], "E1", force=rnd.force("p1_bsm"))
        rnd.scratch["k_a"] = k_a
        rnd.record(P1, RecordKind.BSM, t, f"relabel outcome k=({k_a.z},{k_a.x})")
        rnd.send(P1, P2, "relabel-key-a", {"k": k_a}, t)

    def on_half_v2(msg: Message) -> None:
        t = msg.arrive.t
        u2 = msg.payload["pauli"]
        rnd.stage.apply_pauli(msg.payload["qubit"], u2)
        rnd.record(P2, RecordKind.PREPARE, t, f"pauli k=({u2.z},{u2.x}) on {msg.payload['qubit']}")
        k_b = rnd.stage.bsm("E2", msg.payload["qubit"], force=rnd.force("p2_bsm"))
        rnd.scratch["k_b"] = k_b
        rnd.record(P2, RecordKind.BSM, t, f"relabel outcome k=({k_b.z},{k_b.x})")
        rnd.send(P2, P1, "relabel-key-b", {"k": k_b}, t)

    def p1_reply(msg: Message) -> None:
        k = quantum.relabel_bsm(rnd.scratch["k_a"], msg.payload["k"])
        rnd.send(P1, ActorId.V1, "answer", k, msg.arrive.t, is_reply=True)

    def p2_reply(msg: Message) -> None:
        k = quantum.relabel_bsm(msg.payload["k"], rnd.scratch["k_b"])
        rnd.send(P2, ActorId.V2, "answer", k, msg.arrive.t, is_reply=True)

    def dispatch_half(msg: Message) -> None:
        if msg.sender is ActorId.V1:
            on_half_v1(msg)
        else:
            on_half_v2(msg)

    rnd.on(P1, "challenge-half", dispatch_half)
    rnd.on(P2, "challenge-half", dispatch_half)
    rnd.on(P1, "relabel-key-b", p1_reply)
    rnd.on(P2, "relabel-key-a", p2_reply)


def _wire_s2(rnd: Round) -> None:
    P1, P2 = ActorId.P1, ActorId.P2
    scheme: Scheme = rnd.scenario.scheme
    _share_pair(rnd)

    def on_half_v1(msg: Message) -> None:
        t = msg.arrive.t
        k_a = rnd.stage.bsm(msg.payload["qubit"], "E1", force=rnd.force("p1_bsm"))
        rnd.scratch["k_a"] = k_a
        rnd.record(P1, RecordKind.BSM, t, f"relabel outcome k=({k_a.z},{k_a.x})")
        rnd.send(P1, P2, "relabel-key-a", {"k": k_a}, t)

    rnd.on(P1, "channel-half", on_half_v1)

    if scheme is Scheme.TELEPORT_MEASURE:
        def on_half_v2(msg: Message) -> None:
            t = msg.arrive.t
            basis = msg.payload["basis"]
            r_prime = rnd.stage.measure("E2", basis, force=rnd.force("p2_measure"))
            rnd.scratch["r_prime"] = r_prime
            rnd.record(P2, RecordKind.MEASURE, t, f"basis={basis.value} outcome={r_prime}")
            rnd.send(P2, P1, "raw-result", {"r": r_prime, "basis": basis}, t)

        def p1_reply(msg: Message) -> None:
            r = relabel_reply_bit(rnd.scratch["k_a"], msg.payload["r"], msg.payload["basis"])
            rnd.send(P1, ActorId.V1, "answer", r, msg.arrive.t, is_reply=True)

        def p2_reply(msg: Message) -> None:
            basis = rnd.received(P2, "channel-half").payload["basis"]
            r = relabel_reply_bit(msg.payload["k"], rnd.scratch["r_prime"], basis)
            rnd.send(P2, ActorId.V2, "answer", r, msg.arrive.t, is_reply=True)

        rnd.on(P2, "channel-half", on_half_v2)
        rnd.on(P1, "raw-result", p1_reply)
        rnd.on(P2, "relabel-key-a", p2_reply)
    else:
        def on_half_v2(msg: Message) -> None:
            t = msg.arrive.t
            k_b = rnd.stage.bsm("E2", msg.payload["qubit"], force=rnd.force("p2_bsm"))
            rnd.scratch["k_b"] = k_b
            rnd.record(P2, RecordKind.BSM, t, f"relabel outcome k=({k_b.z},{k_b.x})")
            rnd.send(P2, P1, "relabel-key-b", {"k": k_b}, t)

        def p1_reply(msg: Message) -> None:
            k2 = quantum.relabel_bsm(rnd.scratch["k_a"], msg.payload["k"])
            rnd.send(P1, ActorId.V1, "answer", k2, msg.arrive.t, is_reply=True)

        def p2_reply(msg: Message) -> None:
            k2 = quantum.relabel_bsm(msg.payload["k"], rnd.scratch["k_b"])
            rnd.send(P2, ActorId.V2, "answer", k2, msg.arrive.t, is_reply=True)

        rnd.on(P2, "channel-half", on_half_v2)
        rnd.on(P1, "relabel-key-b", p1_reply)
        rnd.on(P2, "relabel-key-a", p2_reply)


def _wire_s3(rnd: Round) -> None:
    P1, P2 = ActorId.P1, ActorId.P2
    scheme: Scheme = rnd.scenario.scheme

    if scheme is Scheme.TELEPORT_MEASURE:
        def on_half_v2(msg: Message) -> None:
            rnd.send(P2, P1, "forwarded-basis", {"basis": msg.payload["basis"]}, msg.arrive.t)

        def on_basis(msg: Message) -> None:
            # By now V1's teleport measurement has fired (t_p < t_p + delta),
            # so the held half carries the challenge up to a Pauli known only
            # to V1; measuring it anyway gives the honest record.
            t = msg.arrive.t
            basis = msg.payload["basis"]
            half = rnd.received(P1, "channel-half")
            r = rnd.stage.measure(half.payload["qubit"], basis, force=rnd.force("p1_measure"))
            rnd.record(P1, RecordKind.MEASURE, t, f"basis={basis.value} outcome={r}")
            rnd.send(P1, ActorId.V1, "answer", r, t, is_reply=True)
            rnd.send(P1, ActorId.V2, "answer", r, t, is_reply=True)

        rnd.on(P2, "channel-half", on_half_v2)
        rnd.on(P1, "forwarded-basis", on_basis)
    else:
        def on_half_v1(msg: Message) -> None:
            # The swap needs both halves at one site; the held half crosses
            # the gap at light speed like any other system.
            rnd.send(P1, P2, "forwarded-half", {"qubit": msg.payload["qubit"]}, msg.arrive.t)

        def on_forwarded(msg: Message) -> None:
            t = msg.arrive.t
            own = rnd.received(P2, "channel-half")
            k2 = rnd.stage.bsm(msg.payload["qubit"], own.payload["qubit"],
                               force=rnd.force("p2_bsm"))
            rnd.record(P2, RecordKind.BSM, t, f"outcome k=({k2.z},{k2.x})")
            rnd.send(P2, ActorId.V2, "answer", k2, t, is_reply=True)
            rnd.send(P2, ActorId.V1, "answer", k2, t, is_reply=True)

        rnd.on(P1, "channel-half", on_half_v1)
        rnd.on(P2, "forwarded-half", on_forwarded)


_WIRERS = {
    Strategy.S0_INTERCEPT_FORWARD: _wire_s0,
    Strategy.S1_RELABEL_TYPE_I: _wire_s1_type_i,
    Strategy.S1_RELABEL_TYPE_II: _wire_s1_type_ii,
    Strategy.S2_RELABEL_TELEPORT: _wire_s2,
    Strategy.S3_CLASSICAL_EXCHANGE_TELEPORT: _wire_s3,
}
