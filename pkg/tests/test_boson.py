import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from vibqc.boson import (REFERENCE_COUNTS, DLevelOperator, Encoding, codeword_indices,
                         embed_dense, encode_mode_product, encode_operator, encoding,
                         harmonic_operator, levels_of_index, position_operator, projector_to_pauli,
                         q_power, term_type_operator, vibrational_term_count_table)
from vibqc.pauli import PauliSum


def test_gray_codewords():
    assert Encoding("gray", 4).codewords == (0, 1, 3, 2)
    assert [Encoding("gray", 4).bits(l) for l in range(4)] == ["00", "10", "11", "01"]


def test_qubits_per_mode():
    assert Encoding("gray", 8).n_qubits_per_mode == 3
    assert Encoding("std_binary", 5).n_qubits_per_mode == 3
    assert Encoding("unary", 4).n_qubits_per_mode == 4
    assert not Encoding("unary", 4).is_complete
    assert Encoding("binary", 4).kind == "std_binary"


def test_bad_encoding():
    with pytest.raises(ValueError):
        Encoding("ternary", 4)
    with pytest.raises(ValueError):
        encoding(Encoding("gray", 4), 8)


def test_position_matrix():
    q = position_operator(4).matrix
    assert q[1, 0] == pytest.approx(np.sqrt(0.5))
    assert q[3, 2] == pytest.approx(np.sqrt(1.5))
    assert np.allclose(q, q.T)


def test_harmonic_is_exact_diagonal():
    assert np.allclose(harmonic_operator(6).matrix, np.diag([1, 3, 5, 7, 9, 11]))
    # truncating first loses half of the last level's weight
    assert harmonic_operator(4, "before").matrix[3, 3] == pytest.approx(3.0)


def test_gray_harmonic_d4():
    h = encode_operator(harmonic_operator(4), Encoding("gray", 4))
    assert h.to_dict() == {"II": 4, "ZZ": -1, "IZ": -2}


def test_gray_harmonic_d8():
    h = encode_operator(harmonic_operator(8), Encoding("gray", 8))
    assert h.to_dict() == {"III": 8, "IIZ": -4, "IZZ": -2, "ZZZ": -1}


def test_binary_swap_projector():
    enc = Encoding("std_binary", 4)
    op = projector_to_pauli(3, 2, enc) + projector_to_pauli(2, 3, enc)
    assert op.to_dict() == {"XI": 0.5, "XZ": -0.5}


def test_q3_gray_strings():
    assert term_type_operator("q3", 4).strings() == {"XI", "XZ", "ZX", "IX"}


def test_projector_direction():
    enc = Encoding("std_binary", 2)
    assert np.allclose(projector_to_pauli(0, 1, enc).to_dense(), [[0, 0], [1, 0]])


def test_projector_bounds():
    with pytest.raises(IndexError):
        projector_to_pauli(0, 4, Encoding("gray", 4))


@pytest.mark.parametrize("kind", ["gray", "std_binary", "unary"])
@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_encoded_matrix_matches_embedding(kind, d, rng):
    enc = Encoding(kind, d)
    m = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    dense = encode_operator(DLevelOperator(d, m), enc).to_dense()
    assert np.allclose(dense, embed_dense(m, enc))


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(["gray", "std_binary", "unary"]), st.integers(2, 6), st.integers(0, 10))
def test_projectors_compose(kind, d, seed):
    enc = Encoding(kind, d)
    r = np.random.default_rng(seed)
    a, b, c = (int(x) for x in r.integers(0, d, 3))
    # |c><b| |b><a| = |c><a|
    prod = projector_to_pauli(b, c, enc) * projector_to_pauli(a, b, enc)
    assert prod.allclose(projector_to_pauli(a, c, enc))


def test_after_truncation_matches_big_space():
    d, k = 5, 3
    exact = np.linalg.matrix_power(position_operator(d + 10).matrix, k)[:d, :d]
    assert np.allclose(q_power(k, d).matrix, exact)


def test_mode_product_dense():
    enc = Encoding("gray", 4)
    q = position_operator(4)
    q2 = q_power(2, 4)
    op = encode_mode_product([(0, q2), (1, q)], 2, enc, coeff=0.3)
    expected = 0.3 * np.kron(embed_dense(q.matrix, enc), embed_dense(q2.matrix, enc))
    assert np.allclose(op.to_dense(), expected)


def test_mode_product_rejects_repeat():
    q = position_operator(4)
    with pytest.raises(ValueError):
        encode_mode_product([(0, q), (0, q)], 2, Encoding("gray", 4))


def test_codeword_indices_and_levels():
    enc = Encoding("gray", 4)
    idx = codeword_indices(enc, 2)
    assert len(idx) == 16
    assert levels_of_index(int(idx[1]), enc, 2) == (1, 0)
    assert levels_of_index(int(idx[4]), enc, 2) == (0, 1)
    un = codeword_indices(Encoding("unary", 3), 2)
    assert sorted(un.tolist()) == sorted({(1 << a) | (1 << (3 + b)) for a in range(3) for b in range(3)})


def _reference_matches(d):
    table = vibrational_term_count_table(d)
    return {k: table[k] == v for k, v in REFERENCE_COUNTS[d].items()}


def test_count_table_d4():
    assert all(_reference_matches(4).values())


def test_count_table_d8_non_harmonic():
    ok = _reference_matches(8)
    ok.pop("harmonic")
    assert all(ok.values())


def test_count_table_full_values():
    t = vibrational_term_count_table(8)
    assert t["harmonic"] == (3, True)
    assert t["q2qj2"] == (143, True)
    assert vibrational_term_count_table(4)["p2"] == (4, True)


def test_count_table_needs_supported_d():
    with pytest.raises(ValueError):
        vibrational_term_count_table(6)
