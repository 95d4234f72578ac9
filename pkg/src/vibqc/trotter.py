"""First-order product formulas for real and imaginary time.

Each factor is the exponential of one Pauli term, applied in closed form:
``exp(-i t P) = cos t - i sin t P`` and ``exp(-b P) = cosh b - sinh b P``.
The product is written left to right in the chosen term order, so the
first term of the ordering is the leftmost factor.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.linalg import eigh

from .pauli import PauliSum, _check_dense
from .vibham import fold

ORDERS = ("lex", "magnitude-desc", "seeded-shuffle")


class PhaseAliasingError(ValueError):
    """Time step too large for eigenphases to be unwrapped uniquely."""


class ConvergenceError(ArithmeticError):
    """Power iteration did not settle within the iteration cap."""


def ordered_terms(h: PauliSum, order: str = "lex", seed: int = 0,
                  include_identity: bool = False) -> list[tuple[tuple[int, int], complex]]:
    """Terms of ``h`` in product order."""
    items = h.sorted_items()
    if not include_identity:
        items = [kv for kv in items if kv[0] != (0, 0)]
    if order == "lex":
        return items
    if order == "magnitude-desc":
        return sorted(items, key=lambda kv: -abs(kv[1]))  # stable: ties stay lexicographic
    if order == "seeded-shuffle":
        perm = np.random.default_rng(seed).permutation(len(items))
        return [items[i] for i in perm]
    raise ValueError(f"unknown order {order!r}; choose from {ORDERS}")


def _pauli_rows(key: tuple[int, int], n: int):
    """Row source indices and phases so that ``(P A)[r] = ph[r] * A[src[r]]``."""
    x, z = key
    idx = np.arange(1 << n, dtype=np.int64)
    src = idx ^ x
    par = np.bitwise_count(src & z).astype(np.int64) & 1
    ph = (1j ** (bin(x & z).count("1") % 4)) * (1 - 2 * par)
    return src, ph


def _apply_factor(mat: np.ndarray, key, c: float, s: complex, n: int) -> np.ndarray:
    """``(c I + s P) @ mat``."""
    if key == (0, 0):
        return (c + s) * mat
    src, ph = _pauli_rows(key, n)
    return c * mat + s * (ph[:, None] * mat[src])


def _real_coeff(coeff: complex, what: str) -> float:
    if abs(coeff.imag) > 1e-12 * max(1.0, abs(coeff)):
        raise ValueError(f"{what} needs real coefficients, got {coeff}")
    return float(coeff.real)


def trotter_propagator(h: PauliSum, dt: float, order: str = "lex", seed: int = 0,
                       reverse: bool = False) -> np.ndarray:
    """Dense ``prod_k exp(-i dt a_k P_k)``, identity term included as a phase."""
    n = h.n_qubits
    _check_dense(n)
    terms = ordered_terms(h, order, seed, include_identity=True)
    if reverse:
        terms = terms[::-1]
    u = np.eye(1 << n, dtype=complex)
    for key, a in reversed(terms):
        t = dt * _real_coeff(a, "trotter_propagator")
        u = _apply_factor(u, key, np.cos(t), -1j * np.sin(t), n)
    return u


def exact_propagator(h: PauliSum, dt: float) -> np.ndarray:
    vals, vecs = eigh(h.to_dense())
    return (vecs * np.exp(-1j * dt * vals)) @ vecs.conj().T


def one_norm(h: PauliSum, include_identity: bool = False) -> float:
    return float(sum(abs(c) for k, c in h._terms.items() if include_identity or k != (0, 0)))


def phase_cap(h: PauliSum) -> float:
    """Largest step for which unwrapped eigenphases stay inside ``(-pi, pi)``.

    The identity term is handled exactly as a global phase and does not
    count toward the bound.
    """
    norm = one_norm(h)
    return np.inf if norm == 0 else np.pi / norm


@dataclass
class PhaseErrors:
    step: float
    exact: np.ndarray
    approx: np.ndarray
    errors: np.ndarray
    crossing: np.ndarray


def propagator_eigenphase_errors(h: PauliSum, dt: float, tracked: Sequence[int] | None = None,
                                 order: str = "lex", seed: int = 0,
                                 exact: np.ndarray | None = None) -> PhaseErrors:
    """Compare sorted Trotter eigenvalues with the exact spectrum.

    Eigenvalues of the product are read off as ``-angle / dt`` after the
    identity part is removed, then shifted back. A flag marks states whose
    error exceeds half the gap to a neighbouring exact level, where the
    sorted pairing may have swapped states.
    """
    cap = phase_cap(h)
    if dt <= 0:
        raise ValueError("time step must be positive")
    if dt >= cap:
        raise PhaseAliasingError(f"step {dt:.4g} is not below the aliasing cap {cap:.4g}")
    shift = _real_coeff(h.identity_coefficient, "propagator_eigenphase_errors")
    traceless = h - shift
    u = trotter_propagator(traceless, dt, order, seed)
    approx = np.sort(-np.angle(np.linalg.eigvals(u)) / dt) + shift
    if exact is None:
        exact = np.linalg.eigvalsh(h.to_dense())
    exact = np.sort(np.asarray(exact))
    idx = np.arange(len(exact)) if tracked is None else np.asarray(tracked)
    err = np.abs(approx[idx] - exact[idx])
    gaps = np.full(len(exact), np.inf)
    d = np.diff(exact)
    gaps[:-1] = np.minimum(gaps[:-1], d)
    gaps[1:] = np.minimum(gaps[1:], d)
    crossing = err > 0.5 * gaps[idx]
    return PhaseErrors(dt, exact[idx], approx[idx], err, crossing)


def ite_operator(h: PauliSum, dbeta: float, order: str = "lex", seed: int = 0,
                 reverse: bool = False, log_scale: bool = False):
    """Dense ``prod_k exp(-dbeta a_k P_k)``.

    With ``log_scale=True`` the matrix is returned rescaled to unit max
    entry together with the natural log of the removed factor, which keeps
    large ``dbeta * |a_k|`` from overflowing.
    """
    n = h.n_qubits
    _check_dense(n)
    terms = ordered_terms(h, order, seed, include_identity=True)
    if reverse:
        terms = terms[::-1]
    m = np.eye(1 << n, dtype=complex)
    logs = 0.0
    for key, a in reversed(terms):
        b = dbeta * _real_coeff(a, "ite_operator")
        if key == (0, 0):
            logs -= b
            continue
        # cosh b - sinh b P, with exp(|b|) pulled out
        e = np.exp(-2 * abs(b))
        c = 0.5 * (1 + e)
        s = -np.sign(b) * 0.5 * (1 - e)
        m = _apply_factor(m, key, c, s, n)
        logs += abs(b)
        top = np.abs(m).max()
        if top == 0:
            raise ConvergenceError("ITE product underflowed to zero; use a smaller step")
        if top > 1e100 or top < 1e-100:
            m /= top
            logs += np.log(top)
    if log_scale:
        top = np.abs(m).max()
        return m / top, logs + np.log(top)
    return m * np.exp(logs)


def _codeword_start(dim: int, subspace: np.ndarray | None) -> np.ndarray:
    v = np.zeros(dim, dtype=complex)
    if subspace is None:
        v[:] = 1.0
    else:
        v[subspace] = 1.0
    return v / np.linalg.norm(v)


def power_iterate(m: np.ndarray, v0: np.ndarray, tol: float = 1e-10,
                  max_iter: int = 100_000) -> tuple[np.ndarray, int]:
    """Dominant eigenvector by repeated application and normalization."""
    v = v0 / np.linalg.norm(v0)
    for it in range(1, max_iter + 1):
        w = m @ v
        nrm = np.linalg.norm(w)
        if nrm == 0:
            raise ConvergenceError("start vector is annihilated by the operator")
        w /= nrm
        k = np.argmax(np.abs(w))
        w *= np.exp(-1j * np.angle(w[k]))  # fix the global phase
        if np.linalg.norm(w - v) < tol:
            return w, it
        v = w
    raise ConvergenceError(f"no convergence after {max_iter} iterations")


def dominant_eigenvector(m: np.ndarray, degeneracy_tol: float = 1e-9) -> np.ndarray:
    vals, vecs = np.linalg.eig(m)
    order = np.argsort(-np.abs(vals))
    if len(vals) > 1 and abs(abs(vals[order[0]]) - abs(vals[order[1]])) <= degeneracy_tol * abs(vals[order[0]]):
        raise ConvergenceError("dominant eigenvalue is degenerate")
    v = vecs[:, order[0]]
    return v / np.linalg.norm(v)


@dataclass
class ITEResult:
    error: float
    energy: float
    exact: float
    iterations: int
    folded_energy: float | None = None
    zeta: float | None = None
    vector: np.ndarray | None = field(default=None, repr=False)


def ite_energy_error(h: PauliSum, dbeta: float, zeta: float | None = None,
                     method: str = "power", order: str = "lex", seed: int = 0,
                     subspace: np.ndarray | None = None, tol: float = 1e-10,
                     max_iter: int = 100_000) -> ITEResult:
    """Energy error of the state selected by repeated Trotterized ITE steps.

    Without ``zeta`` the target is the ground state. With ``zeta`` the
    operator is built from ``(h - zeta)**2`` and the target is the level of
    ``h`` nearest ``zeta``. The reported energy is the expectation value of
    ``h`` itself; ``folded_energy`` gives ``zeta +/- sqrt(<h_fold>)`` with
    the sign taken from that expectation value.
    """
    dense = h.to_dense()
    exact_vals = np.linalg.eigvalsh(dense if subspace is None else dense[np.ix_(subspace, subspace)])
    target_op = h if zeta is None else fold(h, zeta)
    m, _ = ite_operator(target_op, dbeta, order, seed, log_scale=True)
    if method == "power":
        v, its = power_iterate(m, _codeword_start(m.shape[0], subspace), tol, max_iter)
    elif method == "eig":
        v, its = dominant_eigenvector(m), 0
    else:
        raise ValueError("method must be 'power' or 'eig'")
    v = v / np.linalg.norm(v)
    energy = float(np.real(v.conj() @ dense @ v))
    if zeta is None:
        exact = float(exact_vals[0])
        folded = None
    else:
        exact = float(exact_vals[np.argmin(np.abs(exact_vals - zeta))])
        fval = float(np.real(v.conj() @ target_op.apply(v)))
        folded = zeta + np.sign(energy - zeta) * np.sqrt(max(fval, 0.0))
    return ITEResult(abs(energy - exact), energy, exact, its, folded, zeta, v)


@dataclass
class TrotterScan:
    mode: str
    steps: np.ndarray
    states: tuple[int, ...]
    errors: np.ndarray            # shape (len(steps), len(states))
    order: str
    seed: int = 0
    cap: float | None = None
    crossing: np.ndarray | None = None
    notes: list[str] = field(default_factory=list)

    def rows(self):
        for i, s in enumerate(self.steps):
            for j, st in enumerate(self.states):
                yield float(s), int(st), float(self.errors[i, j])

    def slope(self, state_col: int = 0, lo: float | None = None, hi: float | None = None) -> float:
        """Least-squares log-log slope of error against step."""
        s, e = self.steps, self.errors[:, state_col]
        keep = (e > 0) & np.isfinite(e)
        if lo is not None:
            keep &= s >= lo
        if hi is not None:
            keep &= s <= hi
        return float(np.polyfit(np.log(s[keep]), np.log(e[keep]), 1)[0])


def default_steps(scale: float, n: int = 17, decades: float = 4.0, top: float = 0.9) -> np.ndarray:
    return np.geomspace(scale * top * 10 ** (-decades), scale * top, n)


def scan_real(h: PauliSum, steps: Sequence[float] | None = None, states: Sequence[int] = (0,),
              order: str = "lex", seed: int = 0) -> TrotterScan:
    """Eigenvalue errors of the Trotter propagator over a step grid.

    Steps at or beyond the aliasing cap are dropped and noted; if none
    remain the scan fails.
    """
    cap = phase_cap(h)
    steps = default_steps(cap) if steps is None else np.asarray(sorted(steps), dtype=float)
    notes = []
    if np.any(steps >= cap):
        notes.append(f"dropped {int(np.sum(steps >= cap))} steps at or above cap {cap:.6g}")
        steps = steps[steps < cap]
        if not len(steps):
            raise PhaseAliasingError(f"every requested step is at or above the cap {cap:.6g}")
    exact = np.linalg.eigvalsh(h.to_dense())
    errs, cross = [], []
    for dt in steps:
        r = propagator_eigenphase_errors(h, dt, states, order, seed, exact=exact)
        errs.append(r.errors)
        cross.append(r.crossing)
    return TrotterScan("real", steps, tuple(states), np.array(errs).reshape(len(steps), len(states)),
                       order, seed, cap, np.array(cross).reshape(len(steps), len(states)), notes)


def scan_imag(h: PauliSum, steps: Sequence[float] | None = None, states: Sequence[int] = (0,),
              order: str = "lex", seed: int = 0, zeta_offset: float = 0.0,
              method: str = "power", subspace: np.ndarray | None = None) -> TrotterScan:
    """ITE energy errors; excited states are reached by folding at their exact level.

    The same steps are used for every state. Folded operators scale like
    ``|h|**2``, so useful steps for excited states are correspondingly smaller.
    """
    exact = np.linalg.eigvalsh(h.to_dense())
    steps = default_steps(1.0 / max(one_norm(h), 1e-300)) if steps is None \
        else np.asarray(sorted(steps), dtype=float)
    errs = np.zeros((len(steps), len(states)))
    for j, st in enumerate(states):
        zeta = None if st == 0 else float(exact[st] + zeta_offset)
        for i, db in enumerate(steps):
            errs[i, j] = ite_energy_error(h, db, zeta, method, order, seed, subspace).error
    return TrotterScan("imag", steps, tuple(states), errs, order, seed)
