"""Jordan-Wigner mapping and Pauli-string counting for electronic Hamiltonians.

Spin orbitals are laid out as ``2 * spatial + spin`` with spin 0 (alpha) and
1 (beta). Creation operators map to ``(prod_{m<p} Z_m) (X_p - i Y_p) / 2``.

Two-electron terms use the chemist index order: the coefficient ``h[p,q,r,s]``
multiplies ``a+_{p s1} a+_{r s2} a_{s s2} a_{q s1}``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Iterable, Sequence

import numpy as np

from .pauli import PauliSum

MAX_BRUTEFORCE_ORBITALS = 8

Ladder = tuple[int, bool]


@dataclass(frozen=True)
class FermionTerm:
    """Ordered product of ladder operators times a coefficient.

    ``ops`` is a sequence of ``(spin_orbital, dagger)`` pairs, applied
    left to right as written (the rightmost acts first on a ket).
    """

    ops: tuple[Ladder, ...]
    coeff: complex = 1.0

    def __post_init__(self):
        object.__setattr__(self, "ops", tuple((int(p), bool(d)) for p, d in self.ops))

    def adjoint(self) -> "FermionTerm":
        return FermionTerm(tuple((p, not d) for p, d in reversed(self.ops)),
                           complex(self.coeff).conjugate())

    def __str__(self) -> str:
        body = " ".join(f"a{'+' if d else ''}_{p}" for p, d in self.ops)
        return f"{self.coeff} {body}"


def _ladder(p: int, dagger: bool, n_qubits: int) -> PauliSum:
    z = (1 << p) - 1
    return PauliSum._raw({(1 << p, z): 0.5,
                          (1 << p, z | (1 << p)): (-0.5j if dagger else 0.5j)}, n_qubits)


def ladder_operator(p: int, dagger: bool, n_qubits: int) -> PauliSum:
    """Jordan-Wigner image of ``a+_p`` (``dagger=True``) or ``a_p``."""
    if not 0 <= p < n_qubits:
        raise IndexError(f"spin orbital {p} out of range for {n_qubits} qubits")
    return _ladder(p, dagger, n_qubits)


def jordan_wigner(term: FermionTerm | Iterable[FermionTerm], n_orbitals: int) -> PauliSum:
    """Map one term, or a sum of terms, onto ``n_orbitals`` qubits.

    ``n_orbitals`` counts spin orbitals, which equals the qubit count.
    """
    terms = [term] if isinstance(term, FermionTerm) else list(term)
    acc = PauliSum.zero(n_orbitals)
    for t in terms:
        prod = PauliSum.identity(n_orbitals, t.coeff)
        for p, d in t.ops:
            prod = prod * ladder_operator(p, d, n_orbitals)
        acc = acc + prod
    return acc


def number_operator(p: int, n_qubits: int) -> PauliSum:
    return jordan_wigner(FermionTerm(((p, True), (p, False))), n_qubits)


def two_body_term(P: int, Q: int, R: int, S: int, coeff: complex = 1.0) -> FermionTerm:
    """``coeff * a+_P a+_R a_S a_Q`` on spin-orbital indices."""
    return FermionTerm(((P, True), (R, True), (S, False), (Q, False)), coeff)


def symmetry_partners(P: int, Q: int, R: int, S: int) -> list[tuple[int, int, int, int]]:
    """Distinct index tuples sharing ``h[P,Q,R,S]`` under the real 8-fold symmetry."""
    seen = []
    for a, b, c, d in ((P, Q, R, S), (Q, P, R, S), (P, Q, S, R), (Q, P, S, R)):
        for t in ((a, b, c, d), (c, d, a, b)):
            if t not in seen:
                seen.append(t)
    return seen


def symmetric_two_body(P: int, Q: int, R: int, S: int, coeff: float = 1.0) -> list[FermionTerm]:
    """All symmetry partners of one two-electron integral as fermion terms."""
    return [two_body_term(*t, coeff) for t in symmetry_partners(P, Q, R, S)]


def electronic_hamiltonian(h1: np.ndarray, h2: np.ndarray) -> PauliSum:
    """JW image of a spin-free electronic Hamiltonian from spatial integrals.

    ``h1[p,q]`` multiplies ``a+_{p s} a_{q s}``. ``h2[p,q,r,s]`` multiplies
    ``a+_{p s1} a+_{r s2} a_{s s2} a_{q s1}`` summed over both spins, with
    terms creating or destroying the same spin orbital twice skipped.
    """
    h1 = np.asarray(h1)
    h2 = np.asarray(h2)
    n = h1.shape[0]
    nq = 2 * n
    lad = {(p, d): _ladder(p, d, nq) for p in range(nq) for d in (True, False)}
    acc: dict = {}

    def accumulate(ops, c):
        if c == 0:
            return
        prod = lad[ops[0]]
        for o in ops[1:]:
            prod = prod * lad[o]
        for k, v in prod._terms.items():
            acc[k] = acc.get(k, 0) + c * v

    for p, q in itertools.product(range(n), repeat=2):
        for s in range(2):
            accumulate([(2 * p + s, True), (2 * q + s, False)], h1[p, q])
    for p, q, r, s in itertools.product(range(n), repeat=4):
        for s1 in range(2):
            for s2 in range(2):
                P, Q, R, S = 2 * p + s1, 2 * q + s1, 2 * r + s2, 2 * s + s2
                if P == R or Q == S:
                    continue
                accumulate([(P, True), (R, True), (S, False), (Q, False)], h2[p, q, r, s])
    return PauliSum._raw(acc, nq)


def random_integrals(n: int, seed: int = 0) -> tuple[np.ndarray, np.ndarray]:
    """Generic real integrals with the full 8-fold symmetry."""
    rng = np.random.default_rng(seed)
    h1 = rng.normal(size=(n, n))
    h1 = h1 + h1.T
    h2 = rng.normal(size=(n,) * 4)
    h2 = h2 + h2.transpose(1, 0, 2, 3)
    h2 = h2 + h2.transpose(0, 1, 3, 2)
    h2 = h2 + h2.transpose(2, 3, 0, 1)
    return h1, h2


def es_pauli_count_terms(n_spatial_orbitals: int) -> dict[str, int]:
    """Distinct string count per category, identity listed on its own.

    Categories are disjoint, so the values add up to the total.

    * ``identity``: the all-I string.
    * ``z``: single Z_i and pairs Z_i Z_j (number and number-number terms).
    * ``hopping``: XX/YY strings over a same-spin pair with the JW chain,
      bare or with one extra Z on a qubit outside the pair, which toggles
      that chain or spectator site.
    * ``four_same_spin``: 4 same-spin sites; the three pairings together
      give 6 of the 8 real patterns (XYXY and YXYX never appear).
    * ``four_mixed_spin``: two alpha and two beta sites; one pairing,
      4 strings.
    """
    n = int(n_spatial_orbitals)
    if n < 0:
        raise ValueError("orbital count must be nonnegative")
    if n == 0:
        return {"identity": 0, "z": 0, "hopping": 0, "four_same_spin": 0, "four_mixed_spin": 0}
    N = 2 * n
    return {
        "identity": 1,
        "z": N + comb(N, 2),
        "hopping": 2 * n * (n - 1) * (N - 1),
        "four_same_spin": 2 * 6 * comb(n, 4),
        "four_mixed_spin": 4 * comb(n, 2) ** 2,
    }


def es_pauli_count_analytic(n_spatial_orbitals: int, include_identity: bool = True) -> int:
    """Closed-form number of distinct JW strings for ``n`` spatial orbitals."""
    parts = es_pauli_count_terms(n_spatial_orbitals)
    total = sum(parts.values())
    return total if include_identity else total - parts["identity"]


@lru_cache(maxsize=None)
def _bruteforce(n: int, seed: int) -> int:
    h1, h2 = random_integrals(n, seed)
    return len(electronic_hamiltonian(h1, h2))


def es_pauli_count_bruteforce(n_spatial_orbitals: int, include_identity: bool = True,
                              seed: int = 0) -> int:
    """Count strings by mapping every allowed term and taking the union.

    Coefficients are generic random numbers obeying the 8-fold symmetry.
    Unit coefficients cause exact cancellations (for instance the
    same-spin exchange strings vanish), which would undercount.
    """
    n = int(n_spatial_orbitals)
    if n > MAX_BRUTEFORCE_ORBITALS:
        raise ValueError(f"brute-force enumeration is limited to {MAX_BRUTEFORCE_ORBITALS} orbitals")
    if n <= 0:
        return 0
    total = _bruteforce(n, seed)
    return total if include_identity else total - 1


def count_strings(terms: Sequence[FermionTerm], n_orbitals: int) -> int:
    """Number of distinct strings in the JW image of a term list."""
    return len(jordan_wigner(list(terms), n_orbitals)) if terms else 0
