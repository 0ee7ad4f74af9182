"""Replica entropies of the critical height chain against the bootstrap.

Exact diagonalization of the (m, k) = (4, 3) chain gives bi-orthogonal
ground and vacuum states; twisted replica traces with dressed branch-point
weights scale with the continuum twist dimensions, and the ground-state
curve follows the continued four-point function on the unit circle.

Writes entropy_curve.csv next to this script.
"""

import os

import cyclorb as cy
from cyclorb import rsos

L = 12
print(f"building the (4,3) chain at L = {L} ...")
H, basis = rsos.build_rsos_hamiltonian(4, 3, L)
ground = rsos.select_state(H, basis, "ground")
vacuum = rsos.select_state(H, basis, "vacuum")
print(f"  dim {basis.dim}, E_ground = {ground.energy.real:.6f}, "
      f"E_vacuum = {vacuum.energy.real:.6f}")

print()
print("vacuum-state scaling dimensions from log-sine fits:")
for N, ins, target, label in [(2, 3, -11 / 40, "identity twist (q=3)"),
                              (2, 1, -3 / 8, "ground twist  (q=1)"),
                              (3, 3, -22 / 45, "identity twist, 3 replicas"),
                              (3, 1, -5 / 9, "ground twist, 3 replicas")]:
    curve = rsos.entropy_curve(4, 3, L, N, "vacuum", ins, h_twist=target,
                               pair=vacuum, basis=basis)
    h = rsos.fit_twist_dimension(curve)
    print(f"  {label:28s} fitted {h:+.4f}   target {target:+.4f}")

print()
print("ground-state curve vs the continued bootstrap correlator:")
curve = rsos.entropy_curve(4, 3, L, 2, "ground", 1, h_twist=-3 / 8,
                           pair=ground, basis=basis)
model = cy.get_model("yl1int_gs")
s = curve["ell"] / L
pred = cy.predict_on_circle(model, s, dressing_power=-1 / 20)
const, rms = rsos.overlay_fit(curve["trace"].real, pred)
print(f"  one fitted constant {const:.4f}, rms relative deviation {rms:.3f}")
_, _, shape = cy.ceff_baseline(2)
_, rms_base = rsos.overlay_fit(curve["trace"].real, shape(s, L))
print(f"  effective-central-charge baseline rms {rms_base:.3f} (incompatible)")

out = os.path.join(os.path.dirname(__file__) or ".", "entropy_curve.csv")
with open(out, "w") as fh:
    fh.write(rsos.curve_csv(curve, 1))
print(f"  wrote {out}")
