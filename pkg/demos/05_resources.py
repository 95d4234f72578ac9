"""
Term counts and magnitudes
==========================

"""

from vibqc.fermion import es_pauli_count_analytic
from vibqc.vibham import magnitude, pessimistic_hamiltonian

# %%
# Pessimistic vibrational Hamiltonians against electronic-structure counts
# at the same register size. Larger registers take a minute or more.
print(f"{'qubits':>6} {'vib d=4':>8} {'fermionic':>10} {'W (Ha)':>8}")
for nq in (8, 12, 16, 24):
    m = magnitude(pessimistic_hamiltonian(nq, 4))
    print(f"{nq:6d} {m.n_terms:8d} {es_pauli_count_analytic(nq // 2):10d} {m.w_ha:8.4f}")

# %%
# Precision needed for a target error: W / eps, with eps in Hartree.
m = magnitude(pessimistic_hamiltonian(24, 4))
for eps in (100.0, 10.0, 1.0):
    print(f"eps = {eps:5.1f} cm-1: W/eps = {m.w_over_eps(eps):.3e}")
