"""
Product-formula errors for real and imaginary time
==================================================

"""

import numpy as np

from vibqc.trotter import ite_energy_error, one_norm, phase_cap, scan_real
from vibqc.vibham import build_hamiltonian, fold, load_builtin

# %%
# Eigenphase errors of the first-order product for three molecules.
# The fitted log-log slope is close to 2 for these small systems.
for name in ("co", "coh", "fermi_resonance"):
    h = build_hamiltonian(load_builtin(name)[0], 4)
    cap = phase_cap(h)
    scan = scan_real(h, np.geomspace(cap * 1e-3, cap * 0.5, 8), states=(0, 1))
    print(f"{name:16s} cap {cap:.3e}  slope {scan.slope(0, hi=cap * 1e-2):.2f}")
    for step, state, err in scan.rows():
        if state == 0:
            print(f"    {step:.3e}  {err:.3e}")

# %%
# Imaginary time: the stationary state of the Trotterized propagator is
# biased; here the bias falls off as the square of the step.
h = build_hamiltonian(load_builtin("co")[0], 4)
n = one_norm(h)
for x in (1e-1, 1e-2, 1e-3):
    r = ite_energy_error(h, x / n, method="eig")
    print(f"dbeta*|h| = {x:g}: error {r.error:.3e} cm-1")

# %%
# Folding around zeta turns the level nearest zeta into a ground state.
vals = np.linalg.eigvalsh(h.to_dense())
zeta = vals[2] + 300.0
r = ite_energy_error(h, 0.1 / one_norm(fold(h, zeta)), zeta=zeta, method="eig")
print(f"zeta {zeta:.1f}: found {r.energy:.2f}, nearest exact {r.exact:.2f}")
