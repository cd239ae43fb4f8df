"""Scenario configuration, verdict, and report tests.

Core claims:
    - the scenario text format roundtrips exactly: parse(render(s)) == s and
      render(parse(text)) is byte-stable
    - malformed configuration fails with a line-numbered ConfigError; invalid
      field values and strategy pairings fail at construction
    - verdicts apply reply presence, then timing, then payload consistency,
      in that priority order, and stamp one verdict record into the trace
    - aggregation conserves counts, and reports render deterministically with
      the single-pair resistance claim shown only for the relabeling attack
      on the teleport schemes
    - theorem layouts pin the encode, extract, and interception events per
      scheme family
"""
import pytest

from qpvsim.adversary import CommPattern, Strategy
from qpvsim.harness import (
    ConfigError,
    Reason,
    Scenario,
    aggregate,
    parse_scenario,
    render_report,
    render_scenario,
    run_scenario,
    theorem_layout,
    verdict,
)
from qpvsim.protocol import ActorId, RecordKind, Scheme, run_round
from qpvsim.spacetime import Event


# -- configuration text format ----------------------------------------------------

def test_parse_empty_gives_defaults():
    assert parse_scenario("") == Scenario()


def test_parse_render_roundtrip():
    cases = [
        Scenario(),
        Scenario(x_v1=-1.5, x_v2=3.0, delta=0.25, epsilon=0.2, rounds=7,
                 seed=9, scheme=Scheme.TYPE_II,
                 strategy=Strategy.S1_RELABEL_TYPE_II, epr_budget=1),
        Scenario(scheme=Scheme.TELEPORT_SWAP,
                 strategy=Strategy.S3_CLASSICAL_EXCHANGE_TELEPORT,
                 epr_budget=0, teleport_time_offset=-0.05),
    ]
    for s in cases:
        text = render_scenario(s)
        assert parse_scenario(text) == s
        assert render_scenario(parse_scenario(text)) == text


def test_parse_comments_and_whitespace():
    text = """
# a full-line comment

  delta = 0.2   # trailing comment
  scheme = type_i
"""
    s = parse_scenario(text)
    assert s.delta == 0.2
    assert s.epsilon == 0.1
    assert s.scheme is Scheme.TYPE_I


def test_parse_strategy_honest_keyword():
    assert parse_scenario("strategy = honest\n").strategy is None


def test_parse_errors_carry_line_numbers():
    with pytest.raises(ConfigError, match="line 1: expected key = value"):
        parse_scenario("x_v1 0.0")
    with pytest.raises(ConfigError, match="line 2: unknown key 'bogus'"):
        parse_scenario("delta = 0.1\nbogus = 3\n")
    with pytest.raises(ConfigError, match="line 3: duplicate key 'delta'"):
        parse_scenario("delta = 0.1\nseed = 1\ndelta = 0.2\n")
    with pytest.raises(ConfigError, match="line 1"):
        parse_scenario("delta = abc\n")
    with pytest.raises(ConfigError, match="unknown scheme 'bogus'"):
        parse_scenario("scheme = bogus\n")
    with pytest.raises(ConfigError, match="unknown strategy 'bogus'"):
        parse_scenario("strategy = bogus\n")


def test_scenario_field_validation():
    with pytest.raises(ConfigError, match="delta"):
        Scenario(delta=1.5)
    with pytest.raises(ConfigError, match="delta"):
        Scenario(delta=0.0)
    with pytest.raises(ConfigError, match="epsilon"):
        Scenario(epsilon=0.0)
    with pytest.raises(ConfigError, match="epsilon"):
        Scenario(epsilon=0.1)
    with pytest.raises(ConfigError, match="rounds"):
        Scenario(rounds=0)
    with pytest.raises(ConfigError, match="seed"):
        Scenario(seed=-1)
    with pytest.raises(ConfigError, match="epr_budget"):
        Scenario(epr_budget=-1)
    with pytest.raises(ConfigError, match="teleport_time_offset"):
        Scenario(teleport_time_offset=0.01)
    with pytest.raises(ConfigError, match="teleport_time_offset"):
        Scenario(teleport_time_offset=-0.1)
    with pytest.raises(ConfigError, match="finite"):
        Scenario(x_v1=float("nan"))
    with pytest.raises(ConfigError):
        Scenario(x_v1=2.0, x_v2=0.0)


def test_scenario_strategy_pairing_validation():
    with pytest.raises(ConfigError, match="scheme"):
        Scenario(scheme=Scheme.TYPE_II, strategy=Strategy.S1_RELABEL_TYPE_I)
    with pytest.raises(ConfigError, match="budget"):
        Scenario(scheme=Scheme.TELEPORT_MEASURE,
                 strategy=Strategy.S2_RELABEL_TELEPORT, epr_budget=0)
    with pytest.raises(ConfigError, match="budget"):
        Scenario(scheme=Scheme.TELEPORT_SWAP,
                 strategy=Strategy.S3_CLASSICAL_EXCHANGE_TELEPORT, epr_budget=1)


def test_epsilon_defaults_to_half_delta():
    assert Scenario(delta=0.2).epsilon == 0.1
    assert Scenario(delta=0.01).epsilon == 0.005


# -- verdicts -----------------------------------------------------------------------

def test_verdict_ok_on_honest_round():
    s = Scenario(scheme=Scheme.TYPE_I, rounds=1)
    trace = run_round(s, 0)
    v = verdict(trace, s)
    assert v.accepted and v.reason is Reason.OK
    assert v.decided_at == trace.decided_at
    assert set(v.arrivals) == {ActorId.V1, ActorId.V2}


def test_verdict_late_on_classical_exchange():
    s = Scenario(scheme=Scheme.TELEPORT_SWAP,
                 strategy=Strategy.S3_CLASSICAL_EXCHANGE_TELEPORT,
                 epr_budget=0, rounds=1)
    v = verdict(run_round(s, 0), s)
    assert not v.accepted and v.reason is Reason.LATE_REPLY


def test_verdict_inconsistent_on_tampered_payload():
    s = Scenario(scheme=Scheme.TYPE_I, rounds=1)
    trace = run_round(s, 0)
    trace.reply_payloads[ActorId.V1] ^= 1
    v = verdict(trace, s)
    assert not v.accepted and v.reason is Reason.INCONSISTENT_PAYLOAD


def test_verdict_missing_on_absent_reply():
    s = Scenario(scheme=Scheme.TYPE_I, rounds=1)
    trace = run_round(s, 0)
    del trace.reply_arrivals[ActorId.V2]
    v = verdict(trace, s)
    assert not v.accepted and v.reason is Reason.MISSING_REPLY


def test_verdict_priority_missing_beats_late():
    s = Scenario(scheme=Scheme.TELEPORT_SWAP,
                 strategy=Strategy.S3_CLASSICAL_EXCHANGE_TELEPORT,
                 epr_budget=0, rounds=1)
    trace = run_round(s, 0)
    del trace.reply_arrivals[ActorId.V1]
    assert verdict(trace, s).reason is Reason.MISSING_REPLY


def test_verdict_lateness_threshold():
    s = Scenario(scheme=Scheme.TYPE_I, rounds=1)
    g = s.geometry
    trace = run_round(s, 0)
    # exactly at deadline + epsilon: still counted
    trace.reply_arrivals[ActorId.V1] = Event(g.x_v1, g.deadline + s.epsilon)
    assert verdict(trace, s).reason is Reason.OK
    # clearly beyond the tolerance window: late
    trace = run_round(s, 0)
    trace.reply_arrivals[ActorId.V1] = Event(g.x_v1, g.deadline + s.epsilon + 1e-6)
    assert verdict(trace, s).reason is Reason.LATE_REPLY


def test_verdict_stamps_one_record():
    s = Scenario(scheme=Scheme.TYPE_I, rounds=1)
    trace = run_round(s, 0)
    v1 = verdict(trace, s)
    v2 = verdict(trace, s)
    assert v1 == v2
    stamps = [r for r in trace.records if r.kind is RecordKind.VERDICT]
    assert len(stamps) == 1
    assert stamps[0].detail == "accept=true reason=ok"
    assert stamps[0].t == trace.decided_at.t
    keys = [r.sort_key() for r in trace.records]
    assert keys == sorted(keys)


def test_epsilon_window_monotonicity():
    # honest replies land exactly at the deadline, so any tolerance accepts
    tight = Scenario(scheme=Scheme.TYPE_I, rounds=1, epsilon=0.0001)
    assert verdict(run_round(tight, 0), tight).accepted
    # the classical-exchange attack overshoots by a full delta beyond any
    # epsilon < delta, so even the widest legal window rejects it
    wide = Scenario(scheme=Scheme.TELEPORT_MEASURE,
                    strategy=Strategy.S3_CLASSICAL_EXCHANGE_TELEPORT,
                    epr_budget=0, rounds=1, epsilon=0.0999)
    assert verdict(run_round(wide, 0), wide).reason is Reason.LATE_REPLY


# -- aggregation and reports ------------------------------------------------------------

def test_aggregate_conserves_counts():
    s = Scenario(scheme=Scheme.TYPE_I, strategy=Strategy.S0_INTERCEPT_FORWARD,
                 epr_budget=0, rounds=80)
    report = run_scenario(s)
    assert report.rounds == 80
    assert sum(report.reasons.values()) == 80
    assert sum(report.patterns.values()) == 80
    assert report.accepted == report.reasons[Reason.OK]
    assert report.acceptance_rate == report.accepted / 80
    assert report.decided_at == report.verdicts[-1].decided_at
    assert report.traces is None


def test_run_scenario_keeps_traces_on_request():
    s = Scenario(scheme=Scheme.TYPE_I, rounds=3)
    report = run_scenario(s, keep_traces=True)
    assert report.traces is not None and len(report.traces) == 3


def test_report_renders_deterministically():
    s = Scenario(scheme=Scheme.TYPE_II, rounds=25)
    a = render_report(run_scenario(s))
    b = render_report(run_scenario(s))
    assert a == b
    for line in (
        "scheme = type_ii",
        "strategy = honest",
        "rounds = 25",
        "accepted = 25",
        "rejected = 0",
        "acceptance_rate = 1.0",
        "reason.ok = 25",
        "reason.missing_reply = 0",
        "reason.late_reply = 0",
        "reason.inconsistent_payload = 0",
        "decided_at = (1.0, 3.0)",
        "epr_pairs_used = 0",
        "pattern.localizable = 25",
        "pattern.semi_localizable = 0",
        "pattern.two_way = 0",
        "theorem1_insecure = true",
        "theorem2 = true",
        "theorem3 = false",
        "theorem4 = false",
    ):
        assert line in a.splitlines(), line
    assert "claim.name" not in a


def test_report_claim_lines_only_for_teleport_relabeling():
    s = Scenario(scheme=Scheme.TELEPORT_SWAP,
                 strategy=Strategy.S2_RELABEL_TELEPORT, rounds=30)
    text = render_report(run_scenario(s))
    assert "claim.name = teleport_resists_single_pair" in text
    assert "claim.observed_acceptance_rate = 1.0" in text
    assert "claim.status = contradicted" in text

    honest = render_report(run_scenario(Scenario(scheme=Scheme.TELEPORT_SWAP, rounds=5)))
    assert "claim." not in honest


def test_claim_supported_when_rate_below_one():
    # judged against a zero-width scenario the same verdicts cannot all pass;
    # synthesize by aggregating a mixed verdict list directly
    s = Scenario(scheme=Scheme.TELEPORT_MEASURE,
                 strategy=Strategy.S2_RELABEL_TELEPORT, rounds=2)
    trace_ok = run_round(s, 0)
    trace_bad = run_round(s, 1)
    trace_bad.reply_payloads[ActorId.V1] ^= 1
    verdicts = [verdict(trace_ok, s), verdict(trace_bad, s)]
    report = aggregate(s, verdicts, [CommPattern.TWO_WAY, CommPattern.TWO_WAY], 2)
    assert report.claim_status == "supported"
    assert report.claim_rate == 0.5


# -- theorem layouts ------------------------------------------------------------------------

def test_theorem_layout_challenge_schemes():
    g = Scenario().geometry
    for scheme in (Scheme.TYPE_I, Scheme.TYPE_II):
        lay = theorem_layout(g, scheme)
        assert lay.encode_events == (Event(0.0, 0.0), Event(2.0, 0.0))
        assert lay.extract_event == Event(1.0, 1.0)
        assert lay.interception_events == (Event(0.9, 0.9), Event(1.1, 0.9))
        assert lay.theorem1_insecure is True
        assert lay.predicates.theorem2 is True
        assert lay.predicates.theorem3 is False
        assert lay.predicates.theorem4 is False


def test_theorem_layout_teleport_schemes():
    g = Scenario().geometry
    for scheme in (Scheme.TELEPORT_MEASURE, Scheme.TELEPORT_SWAP):
        lay = theorem_layout(g, scheme)
        assert lay.encode_events == (Event(0.0, 1.0), Event(2.0, 1.0))
        assert lay.extract_event == Event(1.0, 1.0)
        assert lay.interception_events == (Event(0.9, 1.0), Event(1.1, 1.0))
        assert lay.theorem1_insecure is False
        assert lay.predicates.theorem2 is False
        assert lay.predicates.theorem3 is True
        assert lay.predicates.theorem4 is True
