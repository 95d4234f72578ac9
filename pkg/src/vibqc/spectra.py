"""Exact eigenstates, infrared intensities and line broadening."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np
from scipy.linalg import eigh

from .boson import Encoding, codeword_indices
from .pauli import PauliSum

DEFAULT_SIGMA = 10.0
DEGENERACY_TOL = 1e-6


class ResidualError(ArithmeticError):
    """An eigenpair failed the residual check."""


@dataclass(frozen=True)
class Layout:
    """Where the physical states of an encoded register live."""

    enc: Encoding
    n_modes: int

    @property
    def n_qubits(self) -> int:
        return self.enc.n_qubits_per_mode * self.n_modes

    def indices(self) -> np.ndarray | None:
        """Codeword indices, or ``None`` when every basis state is physical."""
        if self.enc.is_complete:
            return None
        return codeword_indices(self.enc, self.n_modes)


@dataclass
class EigenSolution:
    """Eigenvalues (ascending) and eigenvectors as columns over the full register."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    subspace: np.ndarray | None = None

    def __len__(self) -> int:
        return len(self.eigenvalues)

    def vector(self, j: int) -> np.ndarray:
        return self.eigenvectors[:, j]


def _dense_restricted(h: PauliSum, subspace: np.ndarray | None) -> np.ndarray:
    if subspace is None:
        return h.to_dense()
    # Only the physical columns are needed: apply h to those basis vectors.
    dim = 1 << h.n_qubits
    basis = np.zeros((dim, len(subspace)), dtype=complex)
    basis[subspace, np.arange(len(subspace))] = 1.0
    return h.apply(basis)[subspace, :]


def diagonalize(h: PauliSum, layout: Layout | None = None, check: bool = True) -> EigenSolution:
    """Full eigendecomposition, restricted to the physical subspace if given."""
    if not h.is_hermitian():
        raise ValueError("diagonalize needs a Hermitian operator")
    sub = layout.indices() if layout is not None else None
    mat = _dense_restricted(h, sub)
    vals, vecs = eigh(mat)
    if check:
        scale = max(np.linalg.norm(mat), 1.0)
        res = np.linalg.norm(mat @ vecs - vecs * vals, axis=0)
        bad = np.nonzero(res > 1e-8 * scale)[0]
        if len(bad):
            raise ResidualError(f"eigenpair {bad[0]} residual {res[bad[0]]:.3e}")
    if sub is not None:
        full = np.zeros((1 << h.n_qubits, len(vals)), dtype=complex)
        full[sub, :] = vecs
        vecs = full
    return EigenSolution(vals, vecs, sub)


@dataclass(frozen=True)
class Peak:
    energy: float
    intensity: float
    axes: Mapping[str, float] = field(default_factory=dict)
    states: tuple[int, ...] = ()


@dataclass
class Spectrum:
    peaks: list[Peak]
    broadening: str = "none"
    width: float = 0.0

    @property
    def energies(self) -> np.ndarray:
        return np.array([p.energy for p in self.peaks])

    @property
    def intensities(self) -> np.ndarray:
        return np.array([p.intensity for p in self.peaks])

    def normalized(self) -> "Spectrum":
        """Copy scaled so the strongest peak has intensity 1."""
        top = max((p.intensity for p in self.peaks), default=0.0)
        if top <= 0:
            return Spectrum(list(self.peaks), self.broadening, self.width)
        scaled = [Peak(p.energy, p.intensity / top, {a: v / top for a, v in p.axes.items()}, p.states)
                  for p in self.peaks]
        return Spectrum(scaled, self.broadening, self.width)

    def strongest(self, n: int, min_energy: float = 0.0) -> list[Peak]:
        keep = [p for p in self.peaks if p.energy > min_energy]
        return sorted(keep, key=lambda p: -p.intensity)[:n]

    def nearest(self, energy: float, min_intensity: float = 0.0) -> Peak | None:
        cands = [p for p in self.peaks if p.intensity > min_intensity]
        return min(cands, key=lambda p: abs(p.energy - energy), default=None)

    def to_csv(self, axes: bool = True) -> str:
        return peaks_csv(self, axes)


def _multiplets(vals: np.ndarray, start: int, tol: float) -> list[list[int]]:
    groups: list[list[int]] = []
    for j in range(start, len(vals)):
        if groups and vals[j] - vals[groups[-1][0]] < tol:
            groups[-1].append(j)
        else:
            groups.append([j])
    return groups


def transition_moments(sol: EigenSolution, mu: PauliSum, initial: int = 0) -> np.ndarray:
    """``<psi_initial| mu |psi_j>`` for every eigenstate ``j``."""
    bra = sol.vector(initial).conj()
    return bra @ mu.apply(sol.eigenvectors)


def ir_spectrum(h: PauliSum | EigenSolution, dipoles: Mapping[str, PauliSum],
                n_transitions: int | None = None, max_energy: float | None = None,
                layout: Layout | None = None, degeneracy_tol: float = DEGENERACY_TOL) -> Spectrum:
    """Stick spectrum from the ground state.

    Intensities are ``sum_axis |<0|mu_axis|j>|**2``, summed over each
    degenerate multiplet of final states. ``n_transitions`` keeps the
    lowest excited multiplets, ``max_energy`` drops peaks above a cutoff.
    """
    sol = h if isinstance(h, EigenSolution) else diagonalize(h, layout)
    nq = int(np.log2(sol.eigenvectors.shape[0]))
    for a, mu in dipoles.items():
        if mu.n_qubits != nq:
            raise ValueError(f"dipole {a} acts on {mu.n_qubits} qubits, Hamiltonian on {nq}")
    vals = sol.eigenvalues
    ground = _multiplets(vals, 0, degeneracy_tol)[0]
    moments = {a: np.abs(transition_moments(sol, mu, 0)) ** 2 for a, mu in dipoles.items()}
    groups = _multiplets(vals, len(ground), degeneracy_tol)
    if n_transitions is not None:
        groups = groups[:n_transitions]
    peaks = []
    for g in groups:
        e = float(np.mean(vals[g]) - vals[0])
        if max_energy is not None and e > max_energy:
            break
        axes = {a: float(m[g].sum()) for a, m in moments.items()}
        peaks.append(Peak(e, float(sum(axes.values())), axes, tuple(g)))
    return Spectrum(peaks)


def gaussian(omega: np.ndarray, center: float, sigma: float) -> np.ndarray:
    return np.exp(-0.5 * ((omega - center) / sigma) ** 2) / (sigma * np.sqrt(2 * np.pi))


def broaden(s: Spectrum, sigma: float = DEFAULT_SIGMA, grid: Sequence[float] | None = None,
            step: float = 1.0) -> tuple[np.ndarray, np.ndarray]:
    """Sum of unit-area Gaussians, one per peak, sampled on ``grid``.

    Without a grid, one is built from 0 to ``max(energy) + 5 sigma``.
    """
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    if grid is None:
        hi = (s.energies.max() if s.peaks else 0.0) + 5 * sigma
        grid = np.arange(0.0, hi + step, step)
    grid = np.asarray(grid, dtype=float)
    if grid.size == 0:
        raise ValueError("empty grid")
    if np.any(np.diff(grid) <= 0):
        raise ValueError("grid must be strictly increasing")
    f = np.zeros_like(grid)
    for p in s.peaks:
        f += p.intensity * gaussian(grid, p.energy, sigma)
    return grid, f


def peaks_csv(s: Spectrum, axes: bool = True) -> str:
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(["omega_cm1", "intensity", "axis_x", "axis_y", "axis_z"] if axes
                else ["omega_cm1", "intensity"])
    for p in s.peaks:
        row = [f"{p.energy:.6f}", f"{p.intensity:.10e}"]
        if axes:
            row += [f"{p.axes.get(a, 0.0):.10e}" for a in "xyz"]
        wr.writerow(row)
    return buf.getvalue()


def curve_csv(grid: np.ndarray, f: np.ndarray) -> str:
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(["omega_cm1", "f"])
    for x, y in zip(grid, f):
        wr.writerow([f"{x:.6f}", f"{y:.10e}"])
    return buf.getvalue()
