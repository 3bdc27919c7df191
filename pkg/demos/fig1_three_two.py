"""
Three parts A, two parts B
==========================

Start from the unnormalized state sqrt(3)|A>|0> + sqrt(2)|B>|0>, compile the
channel schedule, and watch the central cavity empty one unit at a time.
"""

import math

from cavityborn import ChannelParams, StateVector, compile, run
from cavityborn.executor import op_name
from cavityborn.verify import check_equal_amplitude, execute_protocol, permutation_invariance

weights = (3, 2)
schedule = compile(weights, ChannelParams(epsilon=0.0, omega=1.0))
for op in schedule.ops:
    print(op)

psi = StateVector.from_weights(weights)
print("input:", psi)

result = run(schedule, psi, keep_states=True)
for entry in result.trace:
    st = entry.state
    print(f"{entry.step:2d} {op_name(entry.op):8s} |A,0|={abs(st[0, 0]):.6f} |B,0|={abs(st[1, 0]):.6f} norm={entry.norm:.12f}")

# the norm is sqrt(5) throughout; nobody divided by it
print("norm^2 at the end:", round(result.trace[-1].norm ** 2, 12))

final = result.state
print("final:", final)
print(check_equal_amplitude(final, range(1, 6)).report())
print(permutation_invariance(final, range(1, 6)).report())

# each of the five cavities counts 1/5; three came from A, two from B
outcome = execute_protocol(weights)
for s, p in enumerate(outcome.probabilities):
    print(f"P(internal {s}) = {p}")
assert outcome.probabilities[0] * 5 == 3 and math.isclose(float(outcome.probabilities[1]), 0.4)
