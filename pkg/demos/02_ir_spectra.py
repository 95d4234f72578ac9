"""
Infrared spectra from exact eigenstates
=======================================

"""

import numpy as np

from vibqc.spectra import broaden, diagonalize, ir_spectrum
from vibqc.vibham import build_dipole, build_hamiltonian, load_builtin

# %%
# Carbon monoxide at eight levels: the harmonic line sits at omega,
# the anharmonic one is pulled down and an overtone appears.
ff, ds = load_builtin("co")
mu = {"x": build_dipole(ds, "x", 8)}
for harmonic in (True, False):
    s = ir_spectrum(build_hamiltonian(ff, 8, harmonic_only=harmonic), mu, n_transitions=3)
    print("harmonic" if harmonic else "anharmonic",
          [(round(p.energy, 2), round(p.intensity, 5)) for p in s.peaks])

# %%
# A Fermi resonance borrows intensity from the fundamental into the
# bend overtone, so a second band shows up next to the stretch.
ff, ds = load_builtin("fermi_resonance")
mu = {"x": build_dipole(ds, "x", 8)}
s = ir_spectrum(build_hamiltonian(ff, 8), mu, max_energy=4000).normalized()
for p in s.strongest(4):
    print(f"{p.energy:8.1f}  {p.intensity:.3f}")

# %%
# Broadened curve, printed as a coarse text plot.
grid, f = broaden(s, sigma=15.0, grid=np.arange(1300, 3100, 20.0))
for x, y in zip(grid, f / f.max()):
    print(f"{x:6.0f} {'#' * int(40 * y)}")

# %%
# Sum rule: the intensities plus the ground-state expectation squared
# add up to <0|mu^2|0>.
ff, ds = load_builtin("coh")
mus = {a: build_dipole(ds, a, 4) for a in ds.axes()}
sol = diagonalize(build_hamiltonian(ff, 4))
stick = ir_spectrum(sol, mus)
g = sol.vector(0)
for a, m in mus.items():
    lhs = sum(p.axes[a] for p in stick.peaks) + abs(np.vdot(g, m.apply(g))) ** 2
    print(a, lhs, np.vdot(g, m.apply(m.apply(g))).real)
