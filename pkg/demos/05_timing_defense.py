"""What delaying the secret until t_p buys.

The teleport schemes send only halves of entangled pairs at t = 0; the
committed bit enters spacetime at t = t_p, when the near verifier teleports
it. Interceptors without entanglement of their own can still compute the
right answer, but only after a classical round trip between them, and that
makes one reply exactly 2 delta late. The verdict is driven purely by
timing, never by payload inconsistency.
"""
from qpvsim import Reason, Scenario, Scheme, Strategy, run_round, run_scenario

print("== classical exchange against the teleport schemes ==")
for scheme in (Scheme.TELEPORT_MEASURE, Scheme.TELEPORT_SWAP):
    print(f"-- {scheme.value} --")
    print("   delta    near reply    far reply    deadline+eps   accepted")
    for delta in (0.01, 0.05, 0.1, 0.2):
        s = Scenario(scheme=scheme,
                     strategy=Strategy.S3_CLASSICAL_EXCHANGE_TELEPORT,
                     epr_budget=0, rounds=200, delta=delta, epsilon=delta / 2)
        g = s.geometry
        report = run_scenario(s)
        trace = run_round(s, 0)
        near = min(ev.t for ev in trace.reply_arrivals.values())
        far = max(ev.t for ev in trace.reply_arrivals.values())
        print(f"   {delta:<8} {near:<13.4f} {far:<12.4f} "
              f"{g.deadline + s.epsilon:<14.4f} "
              f"{report.accepted}/{report.rounds}")
        assert report.reasons[Reason.INCONSISTENT_PAYLOAD] == 0
    print()

print("the far reply always lands at exactly 2 t_p + 2 delta: one delta to")
print("hear from the partner, one delta of extra path back. every rejection")
print("above is reason = late_reply; the answers themselves are correct,")
print("which is the defining signature of a scheme that is safe against")
print("unentangled adversaries on timing alone.")
