"""Why challenges that are secrets at t = 0 cannot place a prover.

Both challenge-based schemes put everything the verifiers will ever check
into the signals they emit at t = 0. Two colluding parties straddling the
prover point can intercept those signals, and their pooled information
exists at the prover point itself, just in time.

Two attacks:
  * intercept-and-guess needs no entanglement and already wins 75% of
    measured-qubit rounds;
  * one pre-shared pair plus Pauli-frame relabeling wins every round of both
    schemes, indistinguishable from the honest prover in timing and payload.
"""
from qpvsim import Scenario, Scheme, Strategy, render_report, run_round, run_scenario

print("== guessing the basis at the interception point ==")
s = Scenario(scheme=Scheme.TYPE_I, strategy=Strategy.S0_INTERCEPT_FORWARD,
             epr_budget=0, rounds=2000)
report = run_scenario(s)
print(f"  acceptance rate over {report.rounds} rounds: "
      f"{report.acceptance_rate:.3f} (expected about 0.75: the guessed basis "
      f"is right half the time, and a wrong basis still flips a fair coin)")
print()

print("== relabeling with one shared pair: measured-qubit scheme ==")
s = Scenario(scheme=Scheme.TYPE_I, strategy=Strategy.S1_RELABEL_TYPE_I,
             epr_budget=1, rounds=1000)
report = run_scenario(s)
print(render_report(report))
print("  the first interceptor fuses the challenge into the shared pair and")
print("  broadcasts which Pauli frame it landed in; the second measures the")
print("  far half immediately and repairs the result once the frame arrives.")
print()

print("== one traced attack round ==")
trace = run_round(s, 0)
print(trace.render())
print()

print("== relabeling with one shared pair: instruction scheme ==")
s = Scenario(scheme=Scheme.TYPE_II, strategy=Strategy.S1_RELABEL_TYPE_II,
             epr_budget=1, rounds=1000)
report = run_scenario(s)
print(render_report(report))
print("  both halves get fused into the shared pair; the reported outcome is")
print("  the XOR of the two local outcomes, and the verifiers' kept pair")
print("  passes their joint check every single round.")
