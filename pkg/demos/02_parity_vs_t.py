# coding: utf-8

# # Parity average against transmittivity
#
# The detector-1 parity <(-1)^m1> summarizes a whole outcome distribution
# in one number. Equal sources give +1 at T = 1/2, unequal ones give 0.

import numpy as np

from fockbell import parity_average, parity_extrema, parity_scan

grid = np.linspace(0, 1, 201)
equal = parity_scan((10, 10), grid)
unequal = parity_scan((12, 8), grid)
print("T=0.5:", equal[100, 1], unequal[100, 1])

# Away from balance the curves share an envelope but drift out of phase.

for i in range(0, 201, 20):
    print(f"{grid[i]:.2f}  {equal[i, 1]: .4f}  {unequal[i, 1]: .4f}")

# Sources (2, 1) give the cubic 24T^3 - 36T^2 + 14T - 1.

t_min, t_max = parity_extrema((2, 1))
print("minimum at", t_min, "value", parity_average((2, 1), t_min).value)
print("maximum at", t_max, "value", parity_average((2, 1), t_max).value)

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    plt = None

if plt is not None:
    fig, ax = plt.subplots(figsize=(6, 3.5))
    ax.plot(grid, equal[:, 1], label="(10, 10)")
    ax.plot(grid, unequal[:, 1], "--", label="(12, 8)")
    ax.set_xlabel("T")
    ax.set_ylabel("parity average")
    ax.legend()
    fig.tight_layout()
    fig.savefig("parity_vs_t.png", dpi=120)
    print("wrote parity_vs_t.png")
