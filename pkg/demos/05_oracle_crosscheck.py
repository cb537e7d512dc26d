# coding: utf-8

# # Brute-force cross-check
#
# For small particle numbers we can multiply out the creation operators
# directly and compare against the fast paths.

from fockbell import FockPair, bell_mode_map, ghom_mode_map, joint_distribution, oracle, outcome_distribution
from fockbell.crosscheck import oracle_suite

src = FockPair(3, 2)
poly = oracle.expand_state(src, ghom_mode_map(0.3))
slow = oracle.distribution_from_expansion(poly, src)
fast = outcome_distribution(src, 0.3)
print(max(abs(slow[k] - fast[k]) for k in slow))

src = FockPair(2, 2)
poly = oracle.expand_state(src, bell_mode_map(0.57, 0.43))
slow = oracle.distribution_from_expansion(poly, src)
fast = joint_distribution(4, 0.57, 0.43)
print(max(abs(slow[k] - fast[k]) for k in slow))

report = oracle_suite(6)
print(report["passed"], {k: v["max_residual"] for k, v in report["classes"].items()})
