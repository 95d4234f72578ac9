"""
Encoding a truncated oscillator on qubits
==========================================

"""

# %%
# The harmonic term q^2 + p^2 cut at four levels is diag(1, 3, 5, 7).
# Under a Gray code it needs only Z strings.
from vibqc.boson import Encoding, encode_operator, harmonic_operator, term_type_operator

for d in (4, 8):
    h = encode_operator(harmonic_operator(d), Encoding("gray", d))
    print(f"d={d}:", h)

# %%
# The same operator in unary needs one qubit per level.
print(encode_operator(harmonic_operator(4), Encoding("unary", 4)))

# %%
# Term counts grow quickly with d. Compare a cubic coupling at two truncations.
for d in (4, 8):
    op = term_type_operator("q2qj", d)
    print(f"q_i^2 q_j, d={d}: {len(op)} strings on {op.n_qubits} qubits")

# %%
# Gray and standard binary give the same spectrum but different strings.
for kind in ("gray", "std_binary"):
    op = term_type_operator("q3", 4, kind)
    print(kind, sorted(op.strings()))
