"""Steady LSPG: Gauss-Newton on the reduced steady residual.

A small Burgers problem is run to (near) steady state; the reduced solve
starts from the projection of an intermediate state.
"""
# %%
import numpy as np

from projrom import BurgersFom, BurgersParams, LinearDecoder, SteadyView, lspg_steady_solve
from projrom.pod import SnapshotCollector, compute_pod_basis
from projrom.steppers import integrate_explicit

fom = BurgersFom(BurgersParams(num_cells=32))
collector = SnapshotCollector()
integrate_explicit("rk4", fom.velocity, fom.initial_condition(), 0.05, 1000, collector)
S = collector.finalize().values

x_ref = np.zeros(32)
basis, _ = compute_pod_basis(S[:, 400:], x_ref, 8)
guess = basis.T @ S[:, 400]

# %%
system = SteadyView(fom)
xi, report = lspg_steady_solve(system, LinearDecoder(basis), x_ref, None, guess)
print(report)
x = basis @ xi
print("steady residual of the reduced solution:", np.linalg.norm(fom.velocity(x, 0.0)))
print("distance to the last FOM state:", np.linalg.norm(x - S[:, -1]) / np.linalg.norm(S[:, -1]))
