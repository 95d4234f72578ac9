import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from vibqc.pauli import (DenseLimitError, PauliString, PauliSum, add, locality_histogram,
                         multiply, to_dense, w_magnitude)

from conftest import random_sum

letters = st.text(alphabet="IXYZ", min_size=3, max_size=3)
coeffs = st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False)
sums3 = st.dictionaries(letters, coeffs, max_size=6).map(lambda d: PauliSum(d, 3))


def test_cancellation_gives_empty_sum():
    assert len(add(PauliSum({"I": 1}), PauliSum({"I": -1}))) == 0


def test_add_merges_coefficients():
    assert add(PauliSum({"Z": 2}), PauliSum({"Z": 3})).to_dict() == {"Z": 5}


def test_single_qubit_products():
    assert multiply(PauliSum({"X": 1}), PauliSum({"Y": 1})).to_dict() == {"Z": 1j}
    assert multiply(PauliSum({"Y": 1}), PauliSum({"X": 1})).to_dict() == {"Z": -1j}
    zz = PauliSum({"ZZ": 1})
    assert (zz * zz).to_dict() == {"II": 1}


def test_qubit_mismatch_raises():
    with pytest.raises(ValueError):
        PauliSum({"X": 1}) + PauliSum({"XX": 1})
    with pytest.raises(ValueError):
        PauliSum({"X": 1}) * PauliSum({"XX": 1})


def test_letter_order_is_qubit_order():
    p = PauliString.from_letters("XZI")
    assert p.x == 0b001 and p.z == 0b010
    assert p.letters == "XZI" and p.weight == 2


def test_dense_single_qubit():
    assert np.allclose(PauliSum({"Z": 1}).to_dense(), np.diag([1, -1]))
    assert np.allclose(PauliSum({"X": 1}).to_dense(), [[0, 1], [1, 0]])
    assert np.allclose(PauliSum({"Y": 1}).to_dense(), [[0, -1j], [1j, 0]])


def test_dense_qubit_zero_is_least_significant():
    # Z on qubit 0 flips sign on odd indices
    assert np.allclose(np.diag(PauliSum({"ZI": 1}).to_dense()), [1, -1, 1, -1])


def test_gray_harmonic_example_dense():
    h = PauliSum({"II": 4, "ZZ": -1, "IZ": -2})
    # index = bits (q0 + 2 q1); Gray levels 0,1,2,3 sit at 00, 10, 11, 01
    diag = np.diag(h.to_dense()).real
    gray = [0, 1, 3, 2]
    assert np.allclose(diag[gray], [1, 3, 5, 7])


def test_w_magnitude_examples():
    assert w_magnitude(PauliSum({"I": 7.3})) == 0
    assert w_magnitude(PauliSum({"I": 1, "Z": 0.5})) == pytest.approx(0.5)
    with pytest.raises(ValueError):
        w_magnitude(PauliSum({"Z": 1j}))


def test_locality_histogram():
    assert locality_histogram(PauliSum({"II": 1, "ZI": 1, "XX": 1})) == {0: 1, 1: 1, 2: 1}


def test_dense_limit(monkeypatch):
    monkeypatch.setenv("VIBQC_DENSE_LIMIT", "3")
    with pytest.raises(DenseLimitError):
        PauliSum({"IIII": 1}).to_dense()


def test_relative_drop_tolerance():
    s = PauliSum({"X": 1e6, "Z": 1e-7})
    assert s.strings() == {"X"}
    assert PauliSum({"X": 1e-20}).strings() == {"X"}


def test_canonical_iteration_order():
    s = PauliSum({"ZI": 1, "IX": 1, "XI": 1, "II": 1})
    assert [p.letters for p, _ in s] == ["II", "IX", "XI", "ZI"]


def test_serialization_round_trip(rng):
    s = random_sum(rng, 4, 8)
    text = s.dumps("cm-1")
    assert text.splitlines()[0] == "# n_qubits 4"
    back, unit = PauliSum.loads(text)
    assert unit == "cm-1" and back == s


@settings(max_examples=40, deadline=None)
@given(sums3, sums3)
def test_product_matches_dense(a, b):
    assert np.allclose(to_dense(a * b), to_dense(a) @ to_dense(b), atol=1e-9)


@settings(max_examples=30, deadline=None)
@given(sums3, sums3, sums3)
def test_associative_and_distributive(a, b, c):
    assert ((a * b) * c).allclose(a * (b * c), atol=1e-8)
    assert (a * (b + c)).allclose(a * b + a * c, atol=1e-8)


@settings(max_examples=30, deadline=None)
@given(sums3)
def test_simplify_idempotent(a):
    assert a.simplify() == a.simplify().simplify()


def test_frobenius_relation(rng):
    for n in (1, 3, 5):
        h = random_sum(rng, n, 10, hermitian=True)
        traceless = h - h.identity_coefficient
        fro = np.linalg.norm(traceless.to_dense())
        assert fro == pytest.approx(w_magnitude(h) * 2 ** (n / 2), rel=1e-12)


def test_w_invariant_under_identity_shift(rng):
    h = random_sum(rng, 3, 8, hermitian=True)
    assert w_magnitude(h + 12.5) == pytest.approx(w_magnitude(h))


def test_apply_matches_dense(rng):
    h = random_sum(rng, 4, 8)
    v = rng.normal(size=16) + 1j * rng.normal(size=16)
    m = rng.normal(size=(16, 3))
    assert np.allclose(h.apply(v), h.to_dense() @ v)
    assert np.allclose(h.apply(m), h.to_dense() @ m)


def test_hermitian_dense(rng):
    h = random_sum(rng, 3, 8, hermitian=True)
    d = h.to_dense()
    assert h.is_hermitian() and np.allclose(d, d.conj().T)
