"""
Transition moments from overlaps, phase estimation and block encoding
======================================================================

"""

import numpy as np

from vibqc.qsim import (apply_normalized, dipole_block_encoding, ibe_transition_amplitude,
                        qpe_histogram)
from vibqc.spectra import diagonalize
from vibqc.vibham import build_dipole, build_hamiltonian, load_builtin

ff, ds = load_builtin("coh")
h = build_hamiltonian(ff, 4)
sol = diagonalize(h)
mu_y = build_dipole(ds, "y", 4)

# %%
# |<0|mu|j>|^2 rebuilt from overlap probabilities only, then with shot noise.
for j in (1, 2, 3):
    res = ibe_transition_amplitude(sol.vector(0), sol.vector(j), mu_y, validate=True)
    noisy = ibe_transition_amplitude(sol.vector(0), sol.vector(j), mu_y, shots=10_000, seed=j)
    print(f"0->{j}: exact {res.direct:.4e}  rebuilt {res.value:.4e}  "
          f"10k shots {noisy:.4e}  ({res.n_primitives} overlaps)")

# %%
# Phase estimation on mu|0>: peaks land on the levels reachable by the dipole.
eta = apply_normalized(mu_y, sol.vector(0))
hist = qpe_histogram(h, eta, 8, kernel="exact", eig=(sol.eigenvalues, sol.eigenvectors))
top = np.argsort(hist.probabilities)[::-1][:4]
for b in sorted(top):
    print(f"bin {b:3d}  E ~ {hist.energies[b]:8.1f}  p {hist.probabilities[b]:.3f}")

# %%
# Block encoding: for small gamma the post-selected state is mu|0>
# normalized, at the cost of a success probability near gamma^2 <mu^2>.
for gamma in (1e-1, 1e-2, 1e-3):
    r = dipole_block_encoding(mu_y, gamma, sol.vector(0))
    fid = abs(np.vdot(eta, r.state)) ** 2
    print(f"gamma {gamma:g}: success {r.probability:.3e}  infidelity {1 - fid:.1e}")
