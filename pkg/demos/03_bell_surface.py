# coding: utf-8

# # Correlator surface
#
# Two splitters feed Alice and Bob. The parity correlator
# <AB> is a function of the two transmittivities only.

import numpy as np

from fockbell import correlator_array, parity_correlator

# N = 2 has a closed form tau^2 - (T1 - T2)^2.

t1, t2 = 0.57, 0.43
tau = np.sqrt(t1 * (1 - t1)) + np.sqrt(t2 * (1 - t2))
print(parity_correlator(2, t1, t2), tau**2 - (t1 - t2) ** 2)

# N = 20: the ridge T1 = T2 = 1/2 is sharp and the flanks oscillate.

grid = np.linspace(0, 1, 101)
a, b = np.meshgrid(grid, grid, indexing="ij")
surface = correlator_array(20, a, b)
print("center", surface[50, 50])
print("row T1=0.5, every tenth T2:", np.round(surface[50, ::10], 3))

# Both symmetries hold to rounding.
print(np.abs(surface - surface.T).max(), np.abs(surface - surface[::-1, ::-1]).max())
