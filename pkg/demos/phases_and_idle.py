"""
Phase bookkeeping
=================

With an on-site rate epsilon and an idle rate for disconnected cavities, each
deposited unit amplitude carries its own phase.  The compiler predicts those
phases in closed form and emits one phase shift per cavity to remove them.
"""

import cmath
from dataclasses import replace

from cavityborn import ChannelParams, PhaseShift, Schedule, StateVector, Weights, compile, run
from cavityborn.verify import verify_schedule

weights = Weights((2, 3))
params = ChannelParams(epsilon=1.3, omega=0.8)
schedule = compile(weights, params, idle_rate=0.45)
for op in schedule.ops:
    if isinstance(op, PhaseShift):
        print(f"cavity {op.cavity}: correction {op.phi:+.6f} rad")

final = run(schedule, StateVector.from_weights(weights.entries)).state
for (s, i), a in final.items():
    print(s, i, f"{abs(a):.12f}", f"{cmath.phase(a):+.2e}")

# drop the corrections and the state is no longer symmetric under swaps
bare = Schedule(schedule.device, tuple(op for op in schedule.ops if not isinstance(op, PhaseShift)), weights)
for check in verify_schedule(bare, weights):
    print(check.report())

# corrections computed for the wrong idle rate fail the same way
wrong = Schedule(replace(schedule.device, idle_rate=0.0), schedule.ops, weights)
print([c.report() for c in verify_schedule(wrong, weights)][1])
