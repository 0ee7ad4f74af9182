"""Entropy crossover of the Ising chain in an imaginary longitudinal field.

Below the finite-size threshold h_c the two lowest levels are real; at h_c
they merge into a complex pair.  The bi-orthogonal second Renyi entropy is
concave in the interval size deep in the gapped regime and turns convex as
the threshold is approached.
"""

import numpy as np

from cyclorb import yanglee_chain as ylc

lam, L = 0.8, 8
print(f"lambda = {lam}, L = {L}")
hc = ylc.critical_field(lam, L)
print(f"level-merging threshold h_c = {hc:.6f}")
for f in (0.9, 1.1):
    print(f"  two lowest levels complex at {f:.1f} h_c:",
          ylc.levels_merged(lam, f * hc, L))

st = ylc.crossover_study(lam, L, [0.1, 0.5, 0.9, 0.99])
print()
print("S_2 profiles (ell = 1..L-1):")
for f, prof in sorted(st["profiles"].items()):
    d2 = ylc.midpoint_second_difference(prof)
    shape = "concave" if d2 < 0 else "convex"
    print(f"  h = {f:4.2f} h_c: {np.round(prof, 4)}   midpoint curvature "
          f"{d2:+.4f} ({shape})")

H = ylc.ising_imaginary_chain(lam, 0.5 * hc, L)
gp = ylc.ground_pair(H)
P = ylc.parity_diagonal(L)
pr = P * gp.right
ov = abs(np.vdot(pr, gp.right)) / (np.linalg.norm(pr) * np.linalg.norm(gp.right))
print()
print(f"left/right ground vectors differ: |<P r0, r0>| = {ov:.6f} < 1")
