"""
Many internal states and arbitrary targets
==========================================

Any positive integer weights (n_1, ..., n_K) go through the same machinery.
Arbitrary probability targets are first approximated by integer ratios.
"""

import itertools

from cavityborn import ChannelParams, rationalize
from cavityborn.verify import execute_protocol

worst = 0.0
count = 0
for w in itertools.product(range(1, 7), repeat=3):
    out = execute_protocol(w, ChannelParams(epsilon=0.25, omega=1.0), idle_rate=0.1)
    n = sum(w)
    born = [x / n for x in w]  # |psi_s|^2 of the normalized input
    worst = max(worst, max(abs(float(p) - q) for p, q in zip(out.probabilities, born)))
    count += 1
print(f"{count} weight vectors, largest gap to squared amplitudes: {worst}")

target = [0.5, 0.3, 0.2]
for budget in (5, 10, 40, 200):
    w = rationalize(target, budget)
    probs = execute_protocol(w).probabilities
    print(budget, w.entries, [str(p) for p in probs], max(abs(float(p) - t) for p, t in zip(probs, target)))
