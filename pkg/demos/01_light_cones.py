"""Geometry of one spatial dimension at light speed c = 1.

Walks through the spacetime primitives: interval classification, causal
order, the earliest common future of two events, and the completion times of
a classical exchange between two separated parties.
"""
from qpvsim import (
    Event,
    Geometry,
    SeparationClass,
    causally_precedes,
    classify,
    earliest_common_future,
    exchange_completion_times,
    squared_interval,
)

print("== intervals and causal order ==")
origin = Event(0.0, 0.0)
for target in (Event(1.0, 2.0), Event(2.0, 1.0), Event(1.0, 1.0)):
    s2 = squared_interval(origin, target)
    cls = classify(origin, target)
    reach = causally_precedes(origin, target)
    print(f"  {origin} -> {target}: interval^2 = {s2:+.3f}, {cls.value}, "
          f"signal can connect: {reach}")

print()
print("== earliest common future ==")
a, b = Event(-1.0, 0.0), Event(1.0, 0.0)
apex = earliest_common_future(a, b)
print(f"  two simultaneous events {a} and {b}")
print(f"  everything both can influence lies above {apex}")
assert classify(a, apex) is SeparationClass.LIGHTLIKE
assert classify(b, apex) is SeparationClass.LIGHTLIKE

late = Event(-1.0, 5.0)
print(f"  if one event is already in the other's future, the apex is the "
      f"later event: {earliest_common_future(a, late)}")

print()
print("== classical exchange between two parties ==")
left, right = Event(-0.5, 0.0), Event(0.5, 0.0)
qa, qb = exchange_completion_times(left, right)
print(f"  messages cross between {left} and {right}")
print(f"  each side holds both inputs from t = {qa.t} onward")

print()
print("== verification geometry ==")
g = Geometry(x_v1=0.0, x_v2=2.0, delta=0.1)
print(f"  verifiers at x = {g.x_v1} and x = {g.x_v2}")
print(f"  prover point ({g.x_p}, {g.t_p}), replies due back at t = {g.deadline}")
ia, ib = g.interception_events()
print(f"  interceptors sitting delta = {g.delta} off the prover meet the "
      f"challenges at {ia} and {ib}")
apex = earliest_common_future(ia, ib)
print(f"  their pooled knowledge exists from ({apex.x:.9f}, {apex.t:.9f}): "
      f"the prover point itself, which is why pure timing cannot catch them")
