"""Sums of Pauli strings with exact phase tracking.

Strings are stored in symplectic form: two integers ``x`` and ``z`` whose bit
``g`` describes the letter on qubit ``g`` (I=00, X=10, Y=11, Z=01). Qubit 0 is
the least significant bit, and is printed leftmost in letter form, so
``"XZII"`` is X on qubit 0 and Z on qubit 1.
"""

from __future__ import annotations

import os
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Union

import numpy as np

DEFAULT_DROP_TOL = 1e-12
HARTREE_TO_CM1 = 219474.6313632

_LETTER_BITS = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
_BITS_LETTER = {v: k for k, v in _LETTER_BITS.items()}
_IPOW = (1, 1j, -1, -1j)


class DenseLimitError(ValueError):
    """Raised when a dense matrix would exceed the configured qubit limit."""


def dense_limit() -> int:
    """Maximum qubit count for dense matrices (env ``VIBQC_DENSE_LIMIT``)."""
    return int(os.environ.get("VIBQC_DENSE_LIMIT", "14"))


def _check_dense(n_qubits: int) -> None:
    limit = dense_limit()
    if n_qubits > limit:
        raise DenseLimitError(
            f"{n_qubits} qubits exceeds the dense limit of {limit} "
            "(set VIBQC_DENSE_LIMIT to raise it)"
        )


def _popcount(v: int) -> int:
    return bin(v).count("1")


def _product_phase(x1: int, z1: int, x2: int, z2: int) -> int:
    """Power of ``i`` picked up by the product of two strings."""
    xo1, yo1, zo1 = x1 & ~z1, x1 & z1, z1 & ~x1
    xo2, yo2, zo2 = x2 & ~z2, x2 & z2, z2 & ~x2
    cyclic = (xo1 & yo2) | (yo1 & zo2) | (zo1 & xo2)
    anti = (yo1 & xo2) | (zo1 & yo2) | (xo1 & zo2)
    return (_popcount(cyclic) - _popcount(anti)) % 4


@dataclass(frozen=True)
class PauliString:
    """A tensor product of single-qubit Paulis on ``n_qubits`` qubits."""

    x: int
    z: int
    n_qubits: int

    @classmethod
    def from_letters(cls, letters: str) -> "PauliString":
        x = z = 0
        for g, ch in enumerate(letters.upper()):
            try:
                bx, bz = _LETTER_BITS[ch]
            except KeyError:
                raise ValueError(f"invalid Pauli letter {ch!r} in {letters!r}") from None
            x |= bx << g
            z |= bz << g
        return cls(x, z, len(letters))

    @classmethod
    def from_sparse(cls, ops: Mapping[int, str], n_qubits: int) -> "PauliString":
        """Build from ``{qubit: letter}``, e.g. ``{0: "X", 2: "Z"}``."""
        letters = ["I"] * n_qubits
        for q, ch in ops.items():
            if not 0 <= q < n_qubits:
                raise ValueError(f"qubit {q} out of range for {n_qubits} qubits")
            letters[q] = ch
        return cls.from_letters("".join(letters))

    @property
    def letters(self) -> str:
        return "".join(
            _BITS_LETTER[(self.x >> g) & 1, (self.z >> g) & 1] for g in range(self.n_qubits)
        )

    @property
    def weight(self) -> int:
        """Number of non-identity letters (the Pauli length)."""
        return _popcount(self.x | self.z)

    @property
    def is_identity(self) -> bool:
        return self.x == 0 and self.z == 0

    def support(self) -> list[int]:
        mask = self.x | self.z
        return [g for g in range(self.n_qubits) if (mask >> g) & 1]

    def commutes(self, other: "PauliString") -> bool:
        return (_popcount(self.x & other.z) + _popcount(self.z & other.x)) % 2 == 0

    def __mul__(self, other: "PauliString") -> tuple[complex, "PauliString"]:
        if self.n_qubits != other.n_qubits:
            raise ValueError("qubit-count mismatch")
        k = _product_phase(self.x, self.z, other.x, other.z)
        return _IPOW[k], PauliString(self.x ^ other.x, self.z ^ other.z, self.n_qubits)

    def __str__(self) -> str:
        return self.letters

    def __repr__(self) -> str:
        return f"PauliString('{self.letters}')"

    def to_dense(self) -> np.ndarray:
        return PauliSum({self: 1.0}, self.n_qubits).to_dense()


TermKey = tuple[int, int]
TermsLike = Union[Mapping[Union[str, PauliString, TermKey], complex], Iterable]


def _key(p, n_qubits: int) -> TermKey:
    if isinstance(p, str):
        if len(p) != n_qubits:
            raise ValueError(f"string {p!r} does not have {n_qubits} letters")
        s = PauliString.from_letters(p)
        return s.x, s.z
    if isinstance(p, PauliString):
        if p.n_qubits != n_qubits:
            raise ValueError("qubit-count mismatch")
        return p.x, p.z
    x, z = p
    return int(x), int(z)


def _prune(terms: dict[TermKey, complex], tol: float) -> dict[TermKey, complex]:
    if not terms:
        return terms
    cmax = max(abs(c) for c in terms.values())
    if cmax == 0.0:
        return {}
    cut = tol * cmax
    return {k: c for k, c in terms.items() if abs(c) > cut}


class PauliSum:
    """Linear combination of Pauli strings with complex coefficients.

    Parameters
    ----------
    terms
        Mapping from a string (letters, :class:`PauliString` or ``(x, z)``
        pair) to its coefficient, or an iterable of such pairs. Repeated
        strings are summed.
    n_qubits
        Register size.
    tol
        Relative drop tolerance: coefficients with magnitude at or below
        ``tol * max|c|`` are discarded.
    """

    __slots__ = ("_terms", "n_qubits", "tol")

    def __init__(self, terms: TermsLike | None = None, n_qubits: int | None = None,
                 tol: float = DEFAULT_DROP_TOL):
        items = list(terms.items()) if isinstance(terms, Mapping) else list(terms or [])
        if n_qubits is None:
            if not items:
                raise ValueError("n_qubits is required for an empty sum")
            first = items[0][0]
            if isinstance(first, str):
                n_qubits = len(first)
            elif isinstance(first, PauliString):
                n_qubits = first.n_qubits
            else:
                raise ValueError("n_qubits is required when terms are given as (x, z) pairs")
        if n_qubits < 0:
            raise ValueError("n_qubits must be non-negative")
        self.n_qubits = n_qubits
        self.tol = tol
        acc: dict[TermKey, complex] = {}
        for p, c in items:
            k = _key(p, n_qubits)
            acc[k] = acc.get(k, 0.0) + complex(c)
        self._terms = _prune(acc, tol)

    @classmethod
    def _raw(cls, terms: dict[TermKey, complex], n_qubits: int,
             tol: float = DEFAULT_DROP_TOL, prune: bool = True) -> "PauliSum":
        out = cls.__new__(cls)
        out.n_qubits = n_qubits
        out.tol = tol
        out._terms = _prune(terms, tol) if prune else terms
        return out

    @classmethod
    def identity(cls, n_qubits: int, coeff: complex = 1.0) -> "PauliSum":
        return cls._raw({(0, 0): complex(coeff)}, n_qubits)

    @classmethod
    def zero(cls, n_qubits: int) -> "PauliSum":
        return cls._raw({}, n_qubits)

    # -- container protocol ---------------------------------------------------

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self) -> Iterator[tuple[PauliString, complex]]:
        for (x, z), c in self.sorted_items():
            yield PauliString(x, z, self.n_qubits), c

    def sorted_items(self) -> list[tuple[TermKey, complex]]:
        """Raw ``((x, z), coeff)`` pairs in canonical lexicographic letter order."""
        return sorted(self._terms.items(), key=lambda kv: self._letters(kv[0]))

    def _letters(self, key: TermKey) -> str:
        return PauliString(key[0], key[1], self.n_qubits).letters

    @property
    def terms(self) -> dict[PauliString, complex]:
        return {p: c for p, c in self}

    def to_dict(self) -> dict[str, complex]:
        return {p.letters: c for p, c in self}

    def keys(self) -> set[TermKey]:
        return set(self._terms)

    def coefficient(self, p: str | PauliString) -> complex:
        return self._terms.get(_key(p, self.n_qubits), 0.0)

    @property
    def identity_coefficient(self) -> complex:
        return self._terms.get((0, 0), 0.0)

    def strings(self) -> set[str]:
        return {p.letters for p, _ in self}

    def non_identity_count(self) -> int:
        return len(self._terms) - ((0, 0) in self._terms)

    # -- algebra ----------------------------------------------------------------

    def _check(self, other: "PauliSum") -> None:
        if self.n_qubits != other.n_qubits:
            raise ValueError(
                f"qubit-count mismatch: {self.n_qubits} vs {other.n_qubits}"
            )

    def __add__(self, other) -> "PauliSum":
        if isinstance(other, (int, float, complex)):
            other = PauliSum.identity(self.n_qubits, other)
        if not isinstance(other, PauliSum):
            return NotImplemented
        self._check(other)
        acc = dict(self._terms)
        for k, c in other._terms.items():
            acc[k] = acc.get(k, 0.0) + c
        return PauliSum._raw(acc, self.n_qubits, min(self.tol, other.tol))

    __radd__ = __add__

    def __neg__(self) -> "PauliSum":
        return PauliSum._raw({k: -c for k, c in self._terms.items()}, self.n_qubits,
                             self.tol, prune=False)

    def __sub__(self, other) -> "PauliSum":
        if isinstance(other, (int, float, complex)):
            return self + (-other)
        return self + (-other)

    def __rsub__(self, other) -> "PauliSum":
        return (-self) + other

    def scale(self, s: complex) -> "PauliSum":
        return PauliSum._raw({k: s * c for k, c in self._terms.items()}, self.n_qubits, self.tol)

    def __mul__(self, other) -> "PauliSum":
        if isinstance(other, (int, float, complex, np.number)):
            return self.scale(complex(other))
        if not isinstance(other, PauliSum):
            return NotImplemented
        self._check(other)
        acc: dict[TermKey, complex] = {}
        for (x1, z1), c1 in self._terms.items():
            for (x2, z2), c2 in other._terms.items():
                k = (x1 ^ x2, z1 ^ z2)
                ph = _IPOW[_product_phase(x1, z1, x2, z2)]
                acc[k] = acc.get(k, 0.0) + ph * c1 * c2
        return PauliSum._raw(acc, self.n_qubits, min(self.tol, other.tol))

    def __rmul__(self, other) -> "PauliSum":
        if isinstance(other, (int, float, complex, np.number)):
            return self.scale(complex(other))
        return NotImplemented

    def __truediv__(self, s) -> "PauliSum":
        return self.scale(1.0 / s)

    def __pow__(self, k: int) -> "PauliSum":
        if k < 0:
            raise ValueError("negative powers are not supported")
        out = PauliSum.identity(self.n_qubits)
        for _ in range(k):
            out = out * self
        return out

    def tensor(self, other: "PauliSum") -> "PauliSum":
        """``self`` on the low qubits, ``other`` on the qubits above them."""
        shift = self.n_qubits
        acc = {}
        for (x1, z1), c1 in self._terms.items():
            for (x2, z2), c2 in other._terms.items():
                acc[(x1 | (x2 << shift), z1 | (z2 << shift))] = c1 * c2
        return PauliSum._raw(acc, self.n_qubits + other.n_qubits, min(self.tol, other.tol))

    def embed(self, offset: int, n_qubits: int) -> "PauliSum":
        """Place this operator on qubits ``[offset, offset + self.n_qubits)``."""
        if offset < 0 or offset + self.n_qubits > n_qubits:
            raise ValueError("embedding does not fit in the target register")
        return PauliSum._raw(
            {(x << offset, z << offset): c for (x, z), c in self._terms.items()},
            n_qubits, self.tol, prune=False,
        )

    def simplify(self, tol: float | None = None) -> "PauliSum":
        return PauliSum._raw(dict(self._terms), self.n_qubits, self.tol if tol is None else tol)

    def real(self) -> "PauliSum":
        return PauliSum._raw({k: complex(c.real) for k, c in self._terms.items()},
                             self.n_qubits, self.tol)

    def adjoint(self) -> "PauliSum":
        return PauliSum._raw({k: c.conjugate() for k, c in self._terms.items()},
                             self.n_qubits, self.tol, prune=False)

    def is_hermitian(self, atol: float = 1e-10) -> bool:
        if not self._terms:
            return True
        scale = max(1.0, max(abs(c) for c in self._terms.values()))
        return all(abs(c.imag) <= atol * scale for c in self._terms.values())

    def allclose(self, other: "PauliSum", atol: float = 1e-10) -> bool:
        self._check(other)
        keys = set(self._terms) | set(other._terms)
        return all(abs(self._terms.get(k, 0) - other._terms.get(k, 0)) <= atol for k in keys)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PauliSum):
            return NotImplemented
        return self.n_qubits == other.n_qubits and self._terms == other._terms

    __hash__ = None

    def __repr__(self) -> str:
        shown = [f"{c:.6g}*{p}" for p, c in list(self)[:6]]
        more = "" if len(self) <= 6 else f" + ... ({len(self)} terms)"
        return f"PauliSum({' + '.join(shown) or '0'}{more}; n_qubits={self.n_qubits})"

    # -- dense realisation --------------------------------------------------------

    def _grouped(self) -> dict[int, list[tuple[int, complex]]]:
        groups: dict[int, list[tuple[int, complex]]] = {}
        for (x, z), c in self._terms.items():
            groups.setdefault(x, []).append((z, c * _IPOW[_popcount(x & z) % 4]))
        return groups

    def _diagonals(self):
        idx = np.arange(2 ** self.n_qubits, dtype=np.int64)
        for x, zs in self._grouped().items():
            diag = np.zeros(idx.size, dtype=complex)
            for z, c in zs:
                sign = 1 - 2 * (np.bitwise_count(idx & z).astype(np.int64) & 1)
                diag += c * sign
            yield x, idx, diag

    def to_dense(self) -> np.ndarray:
        _check_dense(self.n_qubits)
        dim = 2 ** self.n_qubits
        mat = np.zeros((dim, dim), dtype=complex)
        for x, idx, diag in self._diagonals():
            mat[idx ^ x, idx] += diag
        return mat

    def apply(self, state: np.ndarray) -> np.ndarray:
        """Matrix-free action on a statevector (or the columns of a matrix)."""
        state = np.asarray(state, dtype=complex)
        if state.shape[0] != 2 ** self.n_qubits:
            raise ValueError("state dimension does not match the qubit count")
        out = np.zeros_like(state)
        for x, idx, diag in self._diagonals():
            d = diag if state.ndim == 1 else diag[:, None]
            out += (d * state)[idx ^ x]
        return out

    # -- serialisation --------------------------------------------------------------

    def dumps(self, unit: str = "none") -> str:
        lines = [f"# n_qubits {self.n_qubits}", f"# unit {unit}",
                 "# bit order: leftmost letter = qubit 0"]
        for p, c in self:
            lines.append(f"{p.letters or '-'} {c.real!r} {c.imag!r}")
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str) -> tuple["PauliSum", str]:
        """Parse :meth:`dumps` output; returns ``(operator, unit)``."""
        n_qubits, unit, items = None, "none", []
        for raw in text.splitlines():
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                parts = line[1:].split()
                if parts[:1] == ["n_qubits"]:
                    n_qubits = int(parts[1])
                elif parts[:1] == ["unit"]:
                    unit = parts[1]
                continue
            letters, re, im = line.split()
            items.append(("" if letters == "-" else letters, complex(float(re), float(im))))
        if n_qubits is None:
            raise ValueError("missing '# n_qubits' header")
        return cls(items, n_qubits), unit


def add(a: PauliSum, b: PauliSum) -> PauliSum:
    return a + b


def multiply(a: PauliSum, b: PauliSum) -> PauliSum:
    return a * b


def to_dense(h: PauliSum) -> np.ndarray:
    return h.to_dense()


def w_magnitude(h: PauliSum, atol: float = 1e-10) -> float:
    """Root-sum-square of the non-identity coefficients.

    Raises
    ------
    ValueError
        If a coefficient has an imaginary part beyond ``atol`` (relative to
        the largest coefficient).
    """
    if not h.is_hermitian(atol):
        raise ValueError("W is defined for Hermitian sums with real coefficients")
    return float(np.sqrt(sum(c.real ** 2 for k, c in h._terms.items() if k != (0, 0))))


def max_abs_coefficient(h: PauliSum) -> float:
    """Largest non-identity coefficient magnitude (0 for identity-only sums)."""
    return max((abs(c) for k, c in h._terms.items() if k != (0, 0)), default=0.0)


def locality_histogram(h: PauliSum) -> dict[int, int]:
    """Count strings by weight; the identity sits at weight 0."""
    return dict(sorted(Counter(_popcount(x | z) for x, z in h._terms).items()))
