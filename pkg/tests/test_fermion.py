import numpy as np
import pytest

from vibqc.fermion import (FermionTerm, count_strings, electronic_hamiltonian,
                           es_pauli_count_analytic, es_pauli_count_bruteforce, es_pauli_count_terms,
                           jordan_wigner, ladder_operator, number_operator, random_integrals,
                           symmetric_two_body, symmetry_partners, two_body_term)
from vibqc.pauli import PauliSum


def _on(strings, qubits):
    return {"".join(s[q] for q in qubits) for s in strings}


def test_number_operator():
    assert number_operator(1, 3).to_dict() == {"III": 0.5, "IZI": -0.5}


def test_anticommutation():
    n = 4
    for p in range(n):
        for q in range(n):
            a = ladder_operator(p, False, n)
            ad = ladder_operator(q, True, n)
            anti = a * ad + ad * a
            assert anti.allclose(PauliSum.identity(n, 1.0 if p == q else 0.0))
            bb = ladder_operator(p, False, n) * ladder_operator(q, False, n)
            bb2 = ladder_operator(q, False, n) * ladder_operator(p, False, n)
            assert (bb + bb2).allclose(PauliSum.zero(n))


def test_ladder_bounds():
    with pytest.raises(IndexError):
        ladder_operator(4, True, 4)


def test_hopping_example():
    h = jordan_wigner([FermionTerm(((0, True), (2, False))), FermionTerm(((2, True), (0, False)))], 3)
    assert h.to_dict() == {"XZX": 0.5, "YZY": 0.5}


def test_three_orbital_example():
    terms = symmetric_two_body(0, 0, 2, 3)
    strings = jordan_wigner(terms, 4).strings()
    assert _on(strings, [0, 2, 3]) == {"IXX", "IYY", "ZXX", "ZYY"}
    assert all(s[1] == "I" for s in strings)


def test_four_orbital_example():
    strings = jordan_wigner(symmetric_two_body(1, 5, 3, 7), 8).strings()
    # written with the idle qubit 4 left out
    assert {s.replace("I", "") for s in strings} == {"XZXYZY", "XZYYZX", "YZXXZY", "YZYXZX"}
    assert all(s[0] == "I" and s[4] == "I" for s in strings)


def test_four_orbital_literal_order_differs():
    strings = jordan_wigner(symmetric_two_body(1, 7, 3, 5), 8).strings()
    assert _on(strings, [1, 3, 5, 7]) == {"XXXX", "XYYX", "YXXY", "YYYY"}


def test_symmetry_partners():
    assert len(symmetry_partners(0, 1, 2, 3)) == 8
    assert len(symmetry_partners(0, 0, 1, 1)) == 2
    assert len(symmetry_partners(0, 0, 0, 0)) == 1


def test_two_body_order():
    t = two_body_term(0, 1, 2, 3)
    assert t.ops == ((0, True), (2, True), (3, False), (1, False))


def test_hamiltonian_hermitian():
    h1, h2 = random_integrals(2, seed=3)
    h = electronic_hamiltonian(h1, h2)
    assert h.n_qubits == 4 and h.is_hermitian()
    assert np.allclose(h.to_dense(), h.to_dense().conj().T)


def test_hamiltonian_preserves_particle_number():
    h1, h2 = random_integrals(2, seed=5)
    h = electronic_hamiltonian(h1, h2).to_dense()
    n = sum(number_operator(p, 4) for p in range(1, 4)) + number_operator(0, 4)
    nd = n.to_dense()
    assert np.allclose(h @ nd, nd @ h)


def test_analytic_small_values():
    assert [es_pauli_count_analytic(n) for n in range(1, 7)] == [4, 27, 118, 361, 876, 1819]
    assert es_pauli_count_analytic(3, include_identity=False) == 117
    assert sum(es_pauli_count_terms(4).values()) == 361


@pytest.mark.parametrize("n", range(1, 6))
def test_analytic_equals_bruteforce(n):
    assert es_pauli_count_analytic(n) == es_pauli_count_bruteforce(n)


def test_bruteforce_seed_independent():
    assert es_pauli_count_bruteforce(3, seed=0) == es_pauli_count_bruteforce(3, seed=11)


def test_bruteforce_limit():
    with pytest.raises(ValueError):
        es_pauli_count_bruteforce(9)


def test_count_strings():
    assert count_strings([], 4) == 0
    assert count_strings(symmetric_two_body(1, 5, 3, 7), 8) == 4
