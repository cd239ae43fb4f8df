"""Honest verification rounds for every scheme.

Runs each scheme with the prover standing where claimed, prints one full
round trace, and then the aggregate report over many rounds. Honest replies
always land at exactly 2 t_p, the light-speed round trip.
"""
from qpvsim import Scheme, Scenario, render_report, run_round, run_scenario

DESCRIPTIONS = {
    Scheme.TYPE_I: "measure a flying qubit in a broadcast basis",
    Scheme.TYPE_II: "swap two entangled halves after Pauli instructions",
    Scheme.TELEPORT_MEASURE: "measure a qubit teleported at t_p",
    Scheme.TELEPORT_SWAP: "swap the two teleport channels at t_p",
}

print("== one traced round of the measured-qubit scheme ==")
scenario = Scenario(scheme=Scheme.TYPE_I, rounds=1)
trace = run_round(scenario, 0)
print(trace.render())
print()

for scheme, what in DESCRIPTIONS.items():
    s = Scenario(scheme=scheme, rounds=300)
    report = run_scenario(s)
    print(f"== {scheme.value}: {what} ==")
    print(render_report(report))
