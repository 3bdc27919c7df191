"""
No decay implies unitarity
==========================

A symmetric two-state step [[a, b], [b, a]] scales |0>+|i> by a+b and |0>-|i>
by a-b.  Keeping both on the unit circle is the same thing as the two
unitarity conditions |a|^2+|b|^2 = 1 and a*conj(b) + conj(a)*b = 0.
"""

import numpy as np

from cavityborn import ChannelParams, TwoStateMatrix, stability_verdict, unitary_from_params
from cavityborn.twostate import iterate_stationary

examples = {
    "identity": TwoStateMatrix(1, 0),
    "half/half": TwoStateMatrix(0.5, 0.5),
    "0.8/0.6": TwoStateMatrix(0.8, 0.6),
    "channel at tau=0.7": unitary_from_params(ChannelParams(0.3, 1.0), 0.7),
}
for name, m in examples.items():
    v = stability_verdict(m)
    print(f"{name:20s} stable={v.stable!s:5s} |a+b|,|a-b|={np.round(v.eigenvalue_magnitudes, 6)} "
          f"residuals={np.round(v.unitarity_residuals, 12)} brute-force={iterate_stationary(m, 200)}")

# random matrices: how often does the verdict disagree with the residual test?
rng = np.random.default_rng(0)
disagree = 0
for _ in range(20_000):
    a, b = (2 * np.sqrt(rng.random()) * np.exp(2j * np.pi * rng.random()) for _ in range(2))
    v = stability_verdict(TwoStateMatrix(complex(a), complex(b)))
    disagree += v.stable != v.residuals_within(4e-9)
print("disagreements over 20000 random matrices:", disagree)

# |a+b|^2 and |a-b|^2 written with the residual quantities
a, b = 0.3 + 0.4j, -0.2 + 0.1j
s, c = abs(a) ** 2 + abs(b) ** 2, 2 * (a * b.conjugate()).real
print(abs(a + b) ** 2, s + c)
print(abs(a - b) ** 2, s - c)
