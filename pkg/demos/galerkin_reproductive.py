"""Reproductive Galerkin ROM of the Burgers problem.

Run the full model with RK4, build POD bases of several sizes from the
stored states, then replay the same time interval with the reduced model.
"""
# %%
import numpy as np

from projrom import harness
from projrom.pod import compute_pod_basis, pod_energy_report

config = harness.RunConfig(num_cells=512, stepper="rk4", dt=1e-3, num_steps=1000)
fom = harness.run_fom(config)
S = fom.snapshots.values
print(f"FOM: {S.shape[1]} states of size {S.shape[0]} in {fom.wall_ms:.0f} ms")

# %% POD around the initial condition
basis, s = compute_pod_basis(S, S[:, 0], 20)
for p in (4, 8, 12, 20):
    print(f"p={p:3d} retained energy {pod_energy_report(s, p):.10f}")

# %% reduced runs
for p in (4, 8, 12, 20):
    run = harness.run_rom(config.with_(method="galerkin", rom_size=p), basis[:, :p])
    l2, linf = harness.compare_states(fom.final_state, run.final_state)
    print(f"p={p:3d} rel_l2={l2:.3e} rel_linf={linf:.3e} wall={run.wall_ms:.0f} ms")
