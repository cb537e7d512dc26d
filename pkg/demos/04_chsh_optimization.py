# coding: utf-8

# # Maximizing the CHSH combination
#
# Q = <AB> + <AB'> + <A'B> - <A'B'>. Local realism caps it at 2.

from fockbell import chsh_q, optimize_chsh, q_vs_n_curve

print("balanced:", chsh_q(2, (0.5, 0.5, 0.5, 0.5)).q)
print("N=2 at (0.57, 0.43, 0.06, 0.94):", chsh_q(2, (0.57, 0.43, 0.06, 0.94)).q)

# The optimizer grids the (c1, c2) ansatz and then polishes in 4D.

best = optimize_chsh(2, seed=0)
print(best.q, best.settings.as_tuple(), best.settings.reduced())

best100 = optimize_chsh(100, seed=0)
print(best100.q, best100.settings.as_tuple())

# The published N=100 set with T1 = 0.486 lands far lower than 0.496 does.

print(chsh_q(100, (0.486, 0.504, 0.514, 0.486)).q, chsh_q(100, (0.496, 0.504, 0.514, 0.486)).q)

# The curve dips from N=2 to N=4, then climbs slowly.

for r in q_vs_n_curve([2, 4, 6, 10, 20, 40, 60, 80, 100]):
    red = r.settings.reduced()
    print(f"N={r.n_total:3d}  Q={r.q:.4f}  c1={red.c1:.4f}  c2={red.c2:.4f}")
