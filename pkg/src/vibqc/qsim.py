"""Statevector checks of the quantum subroutines.

Covers compute-uncompute overlaps, transition moments rebuilt from
overlap-squared measurements, the phase-estimation histogram and the
dipole block encoding. States are plain complex numpy vectors with qubit 0
as the least significant bit of the index.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.linalg import eigh, expm

from .pauli import PauliString, PauliSum, _check_dense

NORM_TOL = 1e-10
ORTHOGONAL_TOL = 1e-12


class ProtocolConsistencyError(RuntimeError):
    """A reconstructed quantity disagrees with its direct evaluation."""

    def __init__(self, message: str, pair: tuple[int, int] | None = None):
        super().__init__(message)
        self.pair = pair


class LowSuccessError(ArithmeticError):
    """The block encoding's success branch is numerically empty."""


# -- states -------------------------------------------------------------------

def basis_state(n_qubits: int, index: int = 0) -> np.ndarray:
    v = np.zeros(1 << n_qubits, dtype=complex)
    v[index] = 1.0
    return v


def as_state(psi, check: bool = True) -> np.ndarray:
    v = np.asarray(psi, dtype=complex).reshape(-1)
    n = v.size.bit_length() - 1
    if v.size != 1 << n:
        raise ValueError(f"state length {v.size} is not a power of two")
    if check and abs(np.linalg.norm(v) - 1) > NORM_TOL:
        raise ValueError(f"state norm {np.linalg.norm(v):.12f} differs from 1")
    return v


def random_state(n_qubits: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=1 << n_qubits) + 1j * rng.normal(size=1 << n_qubits)
    return v / np.linalg.norm(v)


def preparation_unitary(psi) -> np.ndarray:
    """Unitary taking ``|0...0>`` to ``psi``, built from one Householder reflection."""
    psi = as_state(psi)
    phase = np.exp(1j * np.angle(psi[0])) if psi[0] != 0 else 1.0
    b = psi / phase
    v = -b.copy()
    v[0] += 1.0
    nv = np.vdot(v, v).real
    dim = psi.size
    if nv < 1e-30:
        return phase * np.eye(dim, dtype=complex)
    return phase * (np.eye(dim, dtype=complex) - 2.0 * np.outer(v, v.conj()) / nv)


def _zero_probability(amp0: complex, shots: int | None, rng) -> float:
    p = float(min(1.0, abs(amp0) ** 2))
    if shots is None:
        return p
    rng = np.random.default_rng(rng)
    return rng.binomial(shots, p) / shots


def _pauli_dense(r: PauliString | str, n_qubits: int) -> np.ndarray:
    if isinstance(r, str):
        r = PauliString.from_letters(r)
    if r.n_qubits != n_qubits:
        raise ValueError(f"string acts on {r.n_qubits} qubits, states on {n_qubits}")
    return r.to_dense()


def overlap_squared(psi_i, psi_j, shots: int | None = None, seed=None) -> float:
    """Probability of reading all zeros after ``U_i^dagger U_j |0>``."""
    psi_i, psi_j = as_state(psi_i), as_state(psi_j)
    if psi_i.size != psi_j.size:
        raise ValueError("states have different dimensions")
    out = preparation_unitary(psi_i).conj().T @ (preparation_unitary(psi_j)[:, 0])
    return _zero_probability(out[0], shots, seed)


def rotation_overlap(psi_i, psi_j, unitary: np.ndarray, shots: int | None = None,
                     seed=None) -> float:
    """All-zeros probability of ``U_i^dagger W U_j |0>`` for a unitary ``W``."""
    psi_i, psi_j = as_state(psi_i), as_state(psi_j)
    out = preparation_unitary(psi_i).conj().T @ (unitary @ preparation_unitary(psi_j)[:, 0])
    return _zero_probability(out[0], shots, seed)


def pauli_exponential(r: PauliString | str, theta: float, n_qubits: int) -> np.ndarray:
    """``exp(i theta R) = cos(theta) + i sin(theta) R``."""
    p = _pauli_dense(r, n_qubits)
    return np.cos(theta) * np.eye(p.shape[0]) + 1j * np.sin(theta) * p


def pauli_rotation_overlap(psi_i, psi_j, r: PauliString | str, shots: int | None = None,
                           seed=None) -> float:
    """``|<i| exp(i pi/2 R) |j>|**2``, which equals ``|<i|R|j>|**2``."""
    n = as_state(psi_i).size.bit_length() - 1
    return rotation_overlap(psi_i, psi_j, pauli_exponential(r, np.pi / 2, n), shots, seed)


def v_operator(r_k: PauliString, r_l: PauliString, sign: int) -> np.ndarray:
    """``exp(+-i pi/4 R_k) exp(+-i pi/4 R_l)``."""
    n = r_k.n_qubits
    return pauli_exponential(r_k, sign * np.pi / 4, n) @ pauli_exponential(r_l, sign * np.pi / 4, n)


@dataclass
class IbeResult:
    value: float
    direct: float | None
    n_primitives: int
    diagonal: dict = field(default_factory=dict)
    cross: dict = field(default_factory=dict)


def ibe_transition_amplitude(psi_i, psi_j, mu: PauliSum, shots: int | None = None,
                             seed=None, validate: bool = False,
                             atol: float = 1e-9) -> float | IbeResult:
    """``|<i|mu|j>|**2`` rebuilt from overlap-squared measurements only.

    With ``mu = sum_k b_k R_k`` and real ``b_k``::

        |<i|mu|j>|^2 = sum_k b_k^2 D_k
                     + sum_{k<l} b_k b_l (2 P+ + 2 P- - D_k - D_l - D_kl)

    where ``D_k = |<i|R_k|j>|^2``, ``D_kl = |<i|R_k R_l|j>|^2`` and
    ``P+- = |<i|V+-|j>|^2`` with ``V+- = exp(+-i pi/4 R_k) exp(+-i pi/4 R_l)``.
    The cross identity holds when the two states are orthogonal, which is
    the case for distinct eigenstates; that is checked up front whenever
    ``mu`` has more than one string. Identical states give an expectation
    value rather than a transition and are evaluated directly.

    ``validate=True`` compares every cross term with the dense value and
    returns an :class:`IbeResult`; a mismatch raises
    :class:`ProtocolConsistencyError` naming the term pair.
    """
    psi_i, psi_j = as_state(psi_i), as_state(psi_j)
    n = psi_i.size.bit_length() - 1
    if mu.n_qubits != n:
        raise ValueError(f"dipole acts on {mu.n_qubits} qubits, states on {n}")
    items = mu.sorted_items()
    coeffs = []
    for _, c in items:
        if abs(c.imag) > 1e-12 * max(1.0, abs(c)):
            raise ValueError("the reconstruction needs real Pauli coefficients")
        coeffs.append(c.real)
    strings = [PauliString(x, z, n) for (x, z), _ in items]

    inner = np.vdot(psi_i, psi_j)
    if len(strings) > 1 and abs(abs(inner) - 1) < 1e-12:
        value = float(abs(np.vdot(psi_i, mu.apply(psi_j))) ** 2)
        return IbeResult(value, value, 0) if validate else value
    if len(strings) > 1 and abs(inner) > ORTHOGONAL_TOL:
        raise ValueError(f"states must be orthogonal or identical (|<i|j>| = {abs(inner):.3e})")

    rng = np.random.default_rng(seed)
    prims = 0
    diag = {}
    for k, r in enumerate(strings):
        diag[k] = pauli_rotation_overlap(psi_i, psi_j, r, shots, rng)
        prims += 1
    total = sum(b * b * diag[k] for k, b in enumerate(coeffs))
    cross = {}
    direct_r = None
    if validate:
        direct_r = [np.vdot(psi_i, r.to_dense() @ psi_j) for r in strings]
    for k in range(len(strings)):
        for l in range(k + 1, len(strings)):
            pp = rotation_overlap(psi_i, psi_j, v_operator(strings[k], strings[l], +1), shots, rng)
            pm = rotation_overlap(psi_i, psi_j, v_operator(strings[k], strings[l], -1), shots, rng)
            _, prod = strings[k] * strings[l]
            dkl = pauli_rotation_overlap(psi_i, psi_j, prod, shots, rng)
            prims += 3
            term = 2 * pp + 2 * pm - diag[k] - diag[l] - dkl  # = 2 Re(r_k^* r_l)
            cross[(k, l)] = term
            total += coeffs[k] * coeffs[l] * term
            if validate:
                want = 2 * np.real(np.conj(direct_r[k]) * direct_r[l])
                if abs(term - want) > atol:
                    raise ProtocolConsistencyError(
                        f"cross term ({strings[k]}, {strings[l]}) gives {term:.3e}, "
                        f"direct {want:.3e}", (k, l))
    value = float(max(total, 0.0)) if shots is not None else float(total)
    if not validate:
        return value
    direct = float(abs(np.vdot(psi_i, mu.apply(psi_j))) ** 2)
    if abs(value - direct) > atol * max(1.0, direct):
        raise ProtocolConsistencyError(f"reconstruction {value:.6e} vs direct {direct:.6e}")
    return IbeResult(value, direct, prims, diag, cross)


# -- phase estimation -----------------------------------------------------------

@dataclass
class PhaseHistogram:
    n_bits: int
    probabilities: np.ndarray
    t: float
    kernel: str

    @property
    def phases(self) -> np.ndarray:
        return np.arange(1 << self.n_bits) / (1 << self.n_bits)

    @property
    def energies(self) -> np.ndarray:
        """Energy at the centre of each bin."""
        return self.phases / self.t

    def to_csv(self) -> str:
        lines = ["bin,phase,probability"]
        for m, (ph, p) in enumerate(zip(self.phases, self.probabilities)):
            lines.append(f"{m},{ph:.12f},{p:.12e}")
        return "\n".join(lines) + "\n"


def auto_time_scale(lam_min: float, lam_max: float, n_bits: int) -> float:
    """Largest ``t`` keeping every phase ``t * lambda`` inside ``[0, 1 - 2**-n]``."""
    if lam_min < 0:
        raise ValueError("automatic scaling needs a nonnegative spectrum; shift h or pass t")
    if lam_max <= 0:
        return 1.0
    return (1 - 2.0 ** -n_bits) / lam_max


def qpe_kernel(delta: np.ndarray, n_bits: int) -> np.ndarray:
    """``|sin(2^n pi delta) / (2^n sin(pi delta))|**2``, equal to 1 at integer delta."""
    m = 1 << n_bits
    delta = np.asarray(delta, dtype=float)
    den = m * np.sin(np.pi * delta)
    small = np.abs(den) < 1e-12
    out = np.ones_like(delta)
    out[~small] = (np.sin(np.pi * m * delta[~small]) / den[~small]) ** 2
    return out


def qpe_histogram(h: PauliSum, eta0, n_bits: int, t: float | None = None,
                  kernel: str = "ideal", eig: tuple[np.ndarray, np.ndarray] | None = None) -> PhaseHistogram:
    """Phase-register statistics of phase estimation applied to ``eta0``.

    Each eigencomponent ``c_i`` with phase ``t * lambda_i`` contributes
    ``|c_i|**2`` times the kernel. The ideal kernel puts it all in bin
    ``round(2^n t lambda_i)``; the exact kernel spreads it with the
    standard phase-estimation leakage profile.
    """
    if kernel not in ("ideal", "exact"):
        raise ValueError("kernel must be 'ideal' or 'exact'")
    eta0 = as_state(eta0)
    if eig is None:
        _check_dense(h.n_qubits)
        eig = eigh(h.to_dense())
    vals, vecs = eig
    weights = np.abs(vecs.conj().T @ eta0) ** 2
    if t is None:
        t = auto_time_scale(vals.min(), vals.max(), n_bits)
    phases = t * vals
    live = weights > 1e-15
    if np.any(phases[live] < 0) or np.any(phases[live] >= 1):
        raise ValueError("phases fall outside [0, 1); choose a smaller t or shift the spectrum")
    m = 1 << n_bits
    probs = np.zeros(m)
    if kernel == "ideal":
        bins = np.rint(phases * m).astype(np.int64) % m
        np.add.at(probs, bins, weights)
    else:
        grid = np.arange(m) / m
        for ph, w in zip(phases[live], weights[live]):
            probs += w * qpe_kernel(ph - grid, n_bits)
    return PhaseHistogram(n_bits, probs, float(t), kernel)


# -- block encoding ----------------------------------------------------------------

@dataclass
class BlockEncodingResult:
    probability: float
    state: np.ndarray
    unitary: np.ndarray | None = field(default=None, repr=False)


def block_encoding_unitary(mu: PauliSum, gamma: float) -> np.ndarray:
    """``exp(-i gamma Y_anc (x) mu)`` with the ancilla as the top qubit.

    In the ancilla basis this is ``[[cos g mu, -sin g mu], [sin g mu, cos g mu]]``.
    """
    _check_dense(mu.n_qubits + 1)
    y = np.array([[0, -1j], [1j, 0]])
    return expm(-1j * gamma * np.kron(y, mu.to_dense()))


def dipole_block_encoding(mu: PauliSum, gamma: float, psi, threshold: float = 1e-14,
                          keep_unitary: bool = False) -> BlockEncodingResult:
    """Apply the block encoding to ``|0>|psi>`` and keep the ancilla-1 branch.

    That branch holds ``sin(gamma mu) psi``; its squared norm is the
    success probability and the normalized branch tends to ``mu psi`` as
    ``gamma -> 0``.
    """
    psi = as_state(psi)
    if mu.n_qubits != psi.size.bit_length() - 1:
        raise ValueError("dipole and state sizes differ")
    if not mu.is_hermitian():
        raise ValueError("the dipole operator must be Hermitian")
    u = block_encoding_unitary(mu, gamma)
    full = u[:, : psi.size] @ psi
    branch = full[psi.size:]
    p = float(np.vdot(branch, branch).real)
    if p < threshold:
        raise LowSuccessError(f"success probability {p:.3e} is below {threshold:.1e}")
    return BlockEncodingResult(p, branch / np.sqrt(p), u if keep_unitary else None)


def apply_normalized(op: PauliSum, psi) -> np.ndarray:
    v = op.apply(as_state(psi))
    n = np.linalg.norm(v)
    if n == 0:
        raise ValueError("operator annihilates the state")
    return v / n
