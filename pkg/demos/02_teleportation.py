"""Qubit teleportation and Pauli-frame bookkeeping.

Shows the quantum layer on its own: a Bell measurement consumes the shared
pair and leaves the receiver holding the input state up to one of four Pauli
frames, named by two classical bits. Relabeling composes those frames, and
entanglement swapping chains them across parties.
"""
import numpy as np

from qpvsim import (
    BELL_OUTCOMES,
    Basis,
    apply_pauli,
    bell_state,
    bsm,
    compose,
    fidelity,
    haar_random_qubit,
    relabel_bsm,
    teleport,
)

rng = np.random.default_rng(7)

print("== teleporting a random qubit ==")
psi = haar_random_qubit(rng)
outcome, raw = teleport(psi, rng=rng)
print(f"  Bell measurement outcome: (z, x) = ({outcome.z}, {outcome.x}) "
      f"[{outcome.label}]")
print(f"  fidelity before correction: {fidelity(raw, psi):.6f}")
fixed = apply_pauli(raw, 0, outcome)
print(f"  fidelity after the (z, x) correction: {fidelity(fixed, psi):.15f}")

print()
print("== all four outcomes repair the same way ==")
for k in BELL_OUTCOMES:
    outcome, raw = teleport(psi, force=k)
    fixed = apply_pauli(raw, 0, outcome)
    print(f"  forced {k.label}: corrected fidelity {fidelity(fixed, psi):.15f}")

print()
print("== relabeling: Pauli frames compose by XOR ==")
j = BELL_OUTCOMES[1]  # pair prepared in psi+
p = BELL_OUTCOMES[2]  # one half pushed through phi-'s Pauli
print(f"  pair {j.label} with {p.label} applied to one half measures as "
      f"{relabel_bsm(j, p).label}")

print()
print("== entanglement swapping ==")
# two pairs [A1 A2] and [B1 B2]; measuring the middle halves entangles the
# outer ones in the frame named by the outcome
four = compose(bell_state(BELL_OUTCOMES[0]), bell_state(BELL_OUTCOMES[0]))
outcome, kept = bsm(four, (1, 2), rng=rng)
assert kept is not None
want = bell_state(outcome)
print(f"  middle measurement gave {outcome.label}; outer pair is now "
      f"{outcome.label} (fidelity {fidelity(kept, want):.15f})")
print("  a party who learns the outcome bits can relabel without touching "
      "the qubits: that is the whole trick behind the relabeling attacks")
