# coding: utf-8

# # Two photons, one beam splitter
#
# Send one boson into each input port of a balanced splitter and the
# coincidence outcome (1, 1) disappears. We reproduce that, then look at
# what happens as the transmittivity moves away from 1/2.

import numpy as np

from fockbell import FockPair, outcome_distribution

# The source is a pair of occupation numbers; the splitter is just T.

dist = outcome_distribution(FockPair(1, 1), 0.5)
for outcome, p in dist.items():
    print(outcome, f"{p:.3e}")

# Sweep T. The coincidence probability is (T - R)^2, zero only at balance.

for t in np.linspace(0, 1, 11):
    p11 = outcome_distribution((1, 1), t)[(1, 1)]
    print(f"T={t:.1f}  P(1,1)={p11:.4f}  (T-R)^2={(2 * t - 1) ** 2:.4f}")

# Larger equal sources only ever produce even counts at balance.

big = outcome_distribution((4, 4), 0.5)
print({k: round(v, 4) for k, v in big.items()})
