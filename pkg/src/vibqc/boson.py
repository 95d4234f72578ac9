"""Truncated bosonic modes and their qubit encodings.

A mode truncated at ``d`` levels is stored as a dense ``d x d`` matrix
``M`` with ``M[l', l]`` the coefficient of ``|l'><l|``. Encodings assign
each level a codeword; the operator is then expanded in Pauli strings by
tensoring single-qubit transition operators bit by bit.

Mode ``m`` of a multi-mode register occupies qubits ``[m*w, (m+1)*w)``
where ``w`` is the number of qubits per mode, and bit 0 of a codeword sits
on the lowest qubit of its block.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .pauli import DEFAULT_DROP_TOL, PauliSum

ENCODINGS = ("gray", "std_binary", "unary")
_ALIASES = {"binary": "std_binary", "std-binary": "std_binary", "standard": "std_binary"}

# |b'><b| on one qubit, as {(x, z): coeff}.
_ONE_QUBIT = {
    (0, 0): {(0, 0): 0.5, (0, 1): 0.5},
    (1, 1): {(0, 0): 0.5, (0, 1): -0.5},
    (0, 1): {(1, 0): 0.5, (1, 1): 0.5j},   # |0><1| = (X + iY)/2
    (1, 0): {(1, 0): 0.5, (1, 1): -0.5j},  # |1><0| = (X - iY)/2
}


def gray_code(level: int) -> int:
    return level ^ (level >> 1)


@dataclass(frozen=True)
class Encoding:
    """Level-to-bitstring map for one mode."""

    kind: str
    d: int
    codewords: tuple[int, ...] = field(init=False)
    n_qubits_per_mode: int = field(init=False)

    def __post_init__(self):
        kind = _ALIASES.get(self.kind, self.kind)
        if kind not in ENCODINGS:
            raise ValueError(f"unknown encoding {self.kind!r}; choose from {ENCODINGS}")
        if self.d < 2:
            raise ValueError("a mode needs at least 2 levels")
        object.__setattr__(self, "kind", kind)
        if kind == "unary":
            w = self.d
            words = tuple(1 << l for l in range(self.d))
        else:
            w = max(1, int(self.d - 1).bit_length())
            words = tuple(gray_code(l) if kind == "gray" else l for l in range(self.d))
        object.__setattr__(self, "n_qubits_per_mode", w)
        object.__setattr__(self, "codewords", words)

    @property
    def is_complete(self) -> bool:
        """True when every bitstring of the mode block is a codeword."""
        return len(self.codewords) == 1 << self.n_qubits_per_mode

    def bits(self, level: int) -> str:
        w = self.codewords[level]
        return "".join(str((w >> k) & 1) for k in range(self.n_qubits_per_mode))


def encoding(kind: str | Encoding, d: int) -> Encoding:
    if isinstance(kind, Encoding):
        if kind.d != d:
            raise ValueError(f"encoding has d={kind.d}, expected {d}")
        return kind
    return Encoding(kind, d)


@dataclass(frozen=True)
class DLevelOperator:
    """Dense operator on one mode; ``matrix[l', l]`` multiplies ``|l'><l|``."""

    d: int
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if self.d < 2 or m.shape != (self.d, self.d):
            raise ValueError(f"expected a {self.d}x{self.d} matrix with d >= 2, got {m.shape}")
        object.__setattr__(self, "matrix", m)

    def is_hermitian(self, atol: float = 1e-12) -> bool:
        return bool(np.allclose(self.matrix, self.matrix.conj().T, atol=atol))

    def __add__(self, other: "DLevelOperator") -> "DLevelOperator":
        _same_d(self, other)
        return DLevelOperator(self.d, self.matrix + other.matrix)

    def __sub__(self, other: "DLevelOperator") -> "DLevelOperator":
        _same_d(self, other)
        return DLevelOperator(self.d, self.matrix - other.matrix)

    def __matmul__(self, other: "DLevelOperator") -> "DLevelOperator":
        _same_d(self, other)
        return DLevelOperator(self.d, self.matrix @ other.matrix)

    def __mul__(self, s: complex) -> "DLevelOperator":
        return DLevelOperator(self.d, self.matrix * s)

    __rmul__ = __mul__

    @classmethod
    def identity(cls, d: int) -> "DLevelOperator":
        return cls(d, np.eye(d))


def _same_d(a: DLevelOperator, b: DLevelOperator) -> None:
    if a.d != b.d:
        raise ValueError(f"truncation mismatch: {a.d} vs {b.d}")


def annihilation_matrix(d: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, d, dtype=float)), 1)


def _q_matrix(d: int) -> np.ndarray:
    a = annihilation_matrix(d)
    return (a + a.T) / np.sqrt(2.0)


def _p_matrix(d: int) -> np.ndarray:
    a = annihilation_matrix(d)
    return 1j * (a.T - a) / np.sqrt(2.0)


def position_operator(d: int) -> DLevelOperator:
    """``q = (a + a+)/sqrt(2)`` truncated at ``d`` levels."""
    return DLevelOperator(d, _q_matrix(d))


def momentum_operator(d: int) -> DLevelOperator:
    """``p = i(a+ - a)/sqrt(2)`` truncated at ``d`` levels."""
    return DLevelOperator(d, _p_matrix(d))


TRUNCATE_MODES = ("after", "before")


def _check_truncate(truncate: str) -> None:
    if truncate not in TRUNCATE_MODES:
        raise ValueError(f"truncate must be one of {TRUNCATE_MODES}")


def q_power(k: int, d: int, truncate: str = "after") -> DLevelOperator:
    """``q**k`` on one mode.

    With ``truncate="after"`` the power is taken in a padded space of
    ``d + k`` levels and the top-left ``d x d`` block is kept, which is
    the truncation of the exact operator. ``"before"`` multiplies the
    already truncated ``q`` matrices instead; the two differ in the last
    few levels only.
    """
    _check_truncate(truncate)
    if k < 0:
        raise ValueError("power must be nonnegative")
    if truncate == "before":
        return DLevelOperator(d, np.linalg.matrix_power(_q_matrix(d), k))
    big = _q_matrix(d + k)
    return DLevelOperator(d, np.linalg.matrix_power(big, k)[:d, :d])


def p_power(k: int, d: int, truncate: str = "after") -> DLevelOperator:
    _check_truncate(truncate)
    if truncate == "before":
        return DLevelOperator(d, np.linalg.matrix_power(_p_matrix(d), k))
    big = _p_matrix(d + k)
    return DLevelOperator(d, np.linalg.matrix_power(big, k)[:d, :d])


def harmonic_operator(d: int, truncate: str = "after") -> DLevelOperator:
    """``q**2 + p**2``; with ``truncate="after"`` this is ``diag(1, 3, ..., 2d-1)``."""
    if truncate == "after":
        _check_truncate(truncate)
        return DLevelOperator(d, np.diag(2.0 * np.arange(d) + 1.0).astype(complex))
    m = q_power(2, d, truncate).matrix + p_power(2, d, truncate).matrix
    return DLevelOperator(d, m)


@lru_cache(maxsize=4096)
def _projector_terms(src_word: int, dst_word: int, w: int) -> tuple[tuple[tuple[int, int], complex], ...]:
    terms: dict[tuple[int, int], complex] = {(0, 0): 1.0}
    for k in range(w):
        b, b2 = (src_word >> k) & 1, (dst_word >> k) & 1
        factor = _ONE_QUBIT[(b2, b)]
        nxt: dict[tuple[int, int], complex] = {}
        for (x, z), c in terms.items():
            for (fx, fz), f in factor.items():
                key = (x | (fx << k), z | (fz << k))
                nxt[key] = nxt.get(key, 0) + c * f
        terms = nxt
    return tuple(terms.items())


def projector_to_pauli(l: int, l_prime: int, enc: Encoding) -> PauliSum:
    """Pauli expansion of ``|l'><l|``, the map taking level ``l`` to ``l_prime``."""
    for v in (l, l_prime):
        if not 0 <= v < enc.d:
            raise IndexError(f"level {v} outside 0..{enc.d - 1}")
    w = enc.n_qubits_per_mode
    terms = _projector_terms(enc.codewords[l], enc.codewords[l_prime], w)
    return PauliSum(dict(terms), w)


def _encode_terms(matrix: np.ndarray, enc: Encoding) -> dict[tuple[int, int], complex]:
    w = enc.n_qubits_per_mode
    acc: dict[tuple[int, int], complex] = {}
    rows, cols = np.nonzero(matrix)
    for lp, l in zip(rows.tolist(), cols.tolist()):
        c = matrix[lp, l]
        for key, f in _projector_terms(enc.codewords[l], enc.codewords[lp], w):
            acc[key] = acc.get(key, 0) + c * f
    return acc


def encode_operator(op: DLevelOperator, enc: Encoding, tol: float = DEFAULT_DROP_TOL) -> PauliSum:
    """Expand a one-mode operator over its encoding's qubits."""
    if op.d != enc.d:
        raise ValueError(f"operator has d={op.d} but encoding has d={enc.d}")
    return PauliSum(_encode_terms(op.matrix, enc), enc.n_qubits_per_mode, tol=tol)


def encode_mode_product(factors: Iterable[tuple[int, DLevelOperator]], n_modes: int,
                        enc: Encoding, coeff: complex = 1.0,
                        tol: float = DEFAULT_DROP_TOL) -> PauliSum:
    """Encode ``coeff * prod_m A_m`` with each factor on a distinct mode.

    Powers on one mode must be multiplied into a single factor first.
    """
    factors = list(factors)
    seen = set()
    for m, op in factors:
        if m in seen:
            raise ValueError(f"mode {m} appears twice; combine its factors first")
        if not 0 <= m < n_modes:
            raise IndexError(f"mode {m} outside 0..{n_modes - 1}")
        if op.d != enc.d:
            raise ValueError(f"factor on mode {m} has d={op.d}, encoding has d={enc.d}")
        seen.add(m)
    w = enc.n_qubits_per_mode
    terms: dict[tuple[int, int], complex] = {(0, 0): complex(coeff)}
    for m, op in factors:
        local = encode_operator(op, enc, tol=tol)._terms
        shift = m * w
        terms = {(x | (lx << shift), z | (lz << shift)): c * lc
                 for (x, z), c in terms.items() for (lx, lz), lc in local.items()}
    return PauliSum(terms, n_modes * w, tol=tol)


def embed_dense(matrix: np.ndarray, enc: Encoding) -> np.ndarray:
    """Place a ``d x d`` matrix into the ``2**w`` dimensional mode register."""
    dim = 1 << enc.n_qubits_per_mode
    out = np.zeros((dim, dim), dtype=complex)
    idx = np.array(enc.codewords)
    out[np.ix_(idx, idx)] = matrix
    return out


# term type -> list of (power) per distinct mode
TERM_TYPES: dict[str, tuple[str, ...]] = {
    "p2": ("p2",),
    "q2": ("q2",),
    "harmonic": ("h",),
    "q3": ("q3",),
    "q2qj": ("q2", "q1"),
    "q4": ("q4",),
    "q3qj": ("q3", "q1"),
    "q2qj2": ("q2", "q2"),
    "q2qjqk": ("q2", "q1", "q1"),
}

# Reference Gray-code counts: (non-identity strings, identity present).
REFERENCE_COUNTS: dict[int, dict[str, tuple[int, bool]]] = {
    4: {"harmonic": (2, True), "q3": (4, False), "q2qj": (20, False), "q4": (5, True),
        "q3qj": (16, False), "q2qj2": (24, True), "q2qjqk": (80, False)},
    8: {"harmonic": (1, True), "q3": (16, False), "q2qj": (144, False), "q4": (18, True),
        "q3qj": (192, False), "q2qj2": (143, True), "q2qjqk": (1728, False)},
}


def _factor(label: str, d: int, truncate: str) -> DLevelOperator:
    if label == "h":
        return harmonic_operator(d, truncate)
    if label.startswith("p"):
        return p_power(int(label[1:]), d, truncate)
    return q_power(int(label[1:]), d, truncate)


def term_type_operator(term: str, d: int, enc: Encoding | str = "gray",
                       truncate: str = "after") -> PauliSum:
    """Encoded representative of one term type, on modes 0, 1, 2 as needed."""
    labels = TERM_TYPES[term]
    enc = encoding(enc, d)
    factors = [(m, _factor(lab, d, truncate)) for m, lab in enumerate(labels)]
    return encode_mode_product(factors, len(labels), enc)


def vibrational_term_count_table(d: int, enc: Encoding | str = "gray",
                                 truncate: str = "after") -> dict[str, tuple[int, bool]]:
    """Map term type to ``(non-identity string count, identity present)``."""
    if d not in (4, 8):
        raise ValueError("the count table is defined for d = 4 and d = 8")
    table = {}
    for term in TERM_TYPES:
        h = term_type_operator(term, d, enc, truncate)
        table[term] = (h.non_identity_count(), h.identity_coefficient != 0)
    return table


def codeword_indices(enc: Encoding, n_modes: int) -> np.ndarray:
    """Register indices of all physical states, ordered by level tuple.

    The index of level tuple ``(l_0, ..., l_{M-1})`` in the output is the
    mixed-radix number with ``l_0`` least significant.
    """
    w = enc.n_qubits_per_mode
    words = np.array(enc.codewords, dtype=np.int64)
    idx = np.zeros(1, dtype=np.int64)
    for m in range(n_modes):
        idx = (idx[None, :] | (words[:, None] << (m * w))).reshape(-1)
    return idx


def levels_of_index(index: int, enc: Encoding, n_modes: int) -> tuple[int, ...]:
    w = enc.n_qubits_per_mode
    lookup = {c: l for l, c in enumerate(enc.codewords)}
    mask = (1 << w) - 1
    return tuple(lookup[(index >> (m * w)) & mask] for m in range(n_modes))


def mode_operators(ops: Sequence[DLevelOperator], enc: Encoding) -> list[PauliSum]:
    return [encode_operator(op, enc) for op in ops]
