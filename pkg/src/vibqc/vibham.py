"""Anharmonic force fields, dipole surfaces and their qubit Hamiltonians.

Force constants are keyed by sorted index tuples and multiply the monomial
once: ``{(0, 0, 1): h}`` contributes ``h * q0**2 * q1``. The harmonic part
is ``omega_i * (q_i**2 + p_i**2) / 2``. All energies are in cm-1.
"""

from __future__ import annotations

import io
from collections import Counter
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Mapping

import numpy as np

from .boson import Encoding, encoding, harmonic_operator, q_power, _encode_terms
from .pauli import DEFAULT_DROP_TOL, HARTREE_TO_CM1, PauliSum, max_abs_coefficient, w_magnitude

AXES = ("x", "y", "z")
BUILTIN = ("co", "coh", "fermi_resonance")


class ForceFieldError(ValueError):
    """Malformed force-field data."""


def _sorted_key(key, order: int, n_modes: int) -> tuple[int, ...]:
    t = tuple(sorted(int(i) for i in key))
    if len(t) != order:
        raise ForceFieldError(f"expected {order} indices, got {key!r}")
    if t and (t[0] < 0 or t[-1] >= n_modes):
        raise ForceFieldError(f"index out of range in {key!r} for {n_modes} modes")
    return t


@dataclass
class ForceField:
    """Harmonic frequencies plus cubic and quartic force constants.

    ``strict=True`` rejects terms whose indices are all distinct. Real data
    sets often carry such terms (for example a ``q0 q1 q2`` coupling), so
    they are accepted by default.
    """

    omegas: np.ndarray
    cubic: dict[tuple[int, ...], float] = field(default_factory=dict)
    quartic: dict[tuple[int, ...], float] = field(default_factory=dict)
    name: str = ""
    strict: bool = False

    def __post_init__(self):
        self.omegas = np.asarray(self.omegas, dtype=float).reshape(-1)
        if np.any(self.omegas <= 0):
            raise ForceFieldError("harmonic frequencies must be positive")
        self.cubic = self._normalize(self.cubic, 3)
        self.quartic = self._normalize(self.quartic, 4)

    def _normalize(self, terms: Mapping, order: int) -> dict[tuple[int, ...], float]:
        out: dict[tuple[int, ...], float] = {}
        for key, v in terms.items():
            t = _sorted_key(key, order, self.n_modes)
            if self.strict and len(set(t)) == order:
                raise ForceFieldError(f"all-distinct term {t} not allowed in strict mode")
            out[t] = out.get(t, 0.0) + float(v)
        return out

    @property
    def n_modes(self) -> int:
        return len(self.omegas)

    def harmonic(self) -> "ForceField":
        return ForceField(self.omegas.copy(), name=self.name)

    def n_body(self, key: tuple[int, ...]) -> int:
        return len(set(key))

    def __eq__(self, other) -> bool:
        if not isinstance(other, ForceField):
            return NotImplemented
        return (np.array_equal(self.omegas, other.omegas) and self.cubic == other.cubic
                and self.quartic == other.quartic)


@dataclass
class DipoleSurface:
    """Dipole Taylor coefficients per Cartesian axis.

    ``linear[axis][i]`` multiplies ``q_i``; ``quadratic[axis][(i, j)]`` with
    ``i <= j`` multiplies ``q_i q_j`` once, like the force constants.
    """

    n_modes: int
    constant: dict[str, float] = field(default_factory=dict)
    linear: dict[str, dict[int, float]] = field(default_factory=dict)
    quadratic: dict[str, dict[tuple[int, int], float]] = field(default_factory=dict)

    def __post_init__(self):
        for name in (*self.constant, *self.linear, *self.quadratic):
            _check_axis(name)
        self.linear = {a: {int(i): float(v) for i, v in m.items()} for a, m in self.linear.items()}
        quad = {}
        for a, m in self.quadratic.items():
            quad[a] = {}
            for key, v in m.items():
                t = _sorted_key(key, 2, self.n_modes)
                quad[a][t] = quad[a].get(t, 0.0) + float(v)
        self.quadratic = quad
        for a, m in self.linear.items():
            for i in m:
                if not 0 <= i < self.n_modes:
                    raise ForceFieldError(f"dipole index {i} out of range")

    def axes(self) -> list[str]:
        """Axes with at least one nonzero coefficient."""
        used = []
        for a in AXES:
            if (self.constant.get(a, 0.0) or any(self.linear.get(a, {}).values())
                    or any(self.quadratic.get(a, {}).values())):
                used.append(a)
        return used

    def __eq__(self, other) -> bool:
        if not isinstance(other, DipoleSurface):
            return NotImplemented
        def clean(d):
            return {k: v for k, v in d.items() if v}
        return (self.n_modes == other.n_modes
                and all(self.constant.get(a, 0.0) == other.constant.get(a, 0.0) for a in AXES)
                and all(clean(self.linear.get(a, {})) == clean(other.linear.get(a, {})) for a in AXES)
                and all(clean(self.quadratic.get(a, {})) == clean(other.quadratic.get(a, {}))
                        for a in AXES))


def _check_axis(axis: str) -> str:
    if axis not in AXES:
        raise ValueError(f"unknown axis {axis!r}; expected one of {AXES}")
    return axis


class _LocalCache:
    """Pauli terms of single-mode factors, computed once per build."""

    def __init__(self, d: int, enc: Encoding, truncate: str):
        self.d, self.enc, self.truncate = d, enc, truncate
        self._cache: dict = {}

    def q(self, k: int):
        key = ("q", k)
        if key not in self._cache:
            self._cache[key] = _encode_terms(q_power(k, self.d, self.truncate).matrix, self.enc)
        return self._cache[key]

    def harmonic(self):
        if "h" not in self._cache:
            self._cache["h"] = _encode_terms(harmonic_operator(self.d, self.truncate).matrix, self.enc)
        return self._cache["h"]


def _accumulate(acc: dict, locals_, coeff: float, w: int) -> None:
    terms = {(0, 0): coeff}
    for m, local in locals_:
        shift = m * w
        terms = {(x | (lx << shift), z | (lz << shift)): c * lc
                 for (x, z), c in terms.items() for (lx, lz), lc in local.items()}
    for k, c in terms.items():
        acc[k] = acc.get(k, 0) + c


def _monomial(cache: _LocalCache, key: tuple[int, ...]):
    return [(m, cache.q(k)) for m, k in sorted(Counter(key).items())]


def build_hamiltonian(ff: ForceField, d: int, enc: Encoding | str = "gray",
                      truncate: str = "after", harmonic_only: bool = False,
                      tol: float = DEFAULT_DROP_TOL) -> PauliSum:
    """Qubit Hamiltonian of a force field, coefficients in cm-1."""
    enc = encoding(enc, d)
    w = enc.n_qubits_per_mode
    cache = _LocalCache(d, enc, truncate)
    acc: dict = {}
    for m, om in enumerate(ff.omegas):
        _accumulate(acc, [(m, cache.harmonic())], 0.5 * om, w)
    if not harmonic_only:
        for table in (ff.cubic, ff.quartic):
            for key, h in table.items():
                if h:
                    _accumulate(acc, _monomial(cache, key), h, w)
    return PauliSum._raw(acc, ff.n_modes * w, tol=tol)


def build_dipole(ds: DipoleSurface, axis: str, d: int, enc: Encoding | str = "gray",
                 truncate: str = "after", tol: float = DEFAULT_DROP_TOL) -> PauliSum:
    """Encoded dipole component along ``axis``."""
    _check_axis(axis)
    enc = encoding(enc, d)
    w = enc.n_qubits_per_mode
    cache = _LocalCache(d, enc, truncate)
    acc: dict = {}
    c0 = ds.constant.get(axis, 0.0)
    if c0:
        acc[(0, 0)] = c0
    for i, m in ds.linear.get(axis, {}).items():
        if m:
            _accumulate(acc, [(i, cache.q(1))], m, w)
    for key, m in ds.quadratic.get(axis, {}).items():
        if m:
            _accumulate(acc, _monomial(cache, key), m, w)
    return PauliSum._raw(acc, ds.n_modes * w, tol=tol)


def fold(h: PauliSum, zeta: float) -> PauliSum:
    """``(h - zeta)**2``, whose ground state is the eigenstate nearest ``zeta``."""
    shifted = h - zeta
    return shifted * shifted


# -- pessimistic resource model ----------------------------------------------

CUBIC_COEFF = 400.0
QUARTIC_COEFF = 40.0


def frequency_grid(n_modes: int, lo: float = 1000.0, hi: float = 4000.0,
                   grid: str = "inclusive") -> np.ndarray:
    """Evenly spaced frequencies; a single mode sits at ``lo``."""
    if n_modes < 1:
        raise ValueError("need at least one mode")
    if n_modes == 1:
        return np.array([lo])
    if grid == "inclusive":
        return np.linspace(lo, hi, n_modes)
    if grid == "exclusive":
        return np.linspace(lo, hi, n_modes, endpoint=False)
    raise ValueError("grid must be 'inclusive' or 'exclusive'")


def pessimistic_model(n_modes: int, include_3body: bool = False, cubic_pairs: str = "upper",
                      grid: str = "inclusive") -> ForceField:
    """Force field with every allowed coupling switched on.

    Cubic terms ``q_i**3`` and ``q_i**2 q_j`` get 400 cm-1, quartic terms
    ``q_i**4``, ``q_i**3 q_j``, ``q_i**2 q_j**2`` get 40 cm-1, and with
    ``include_3body`` so do ``q_i**2 q_j q_k``. ``cubic_pairs="upper"``
    keeps ``q_i**2 q_j`` for ``i < j`` only; ``"all"`` takes both orders.
    The upper choice is the one that reproduces the reference magnitudes.
    """
    if cubic_pairs not in ("upper", "all"):
        raise ValueError("cubic_pairs must be 'upper' or 'all'")
    M = n_modes
    cubic: dict = {}
    quartic: dict = {}
    for i in range(M):
        cubic[(i, i, i)] = CUBIC_COEFF
        quartic[(i, i, i, i)] = QUARTIC_COEFF
        for j in range(M):
            if j == i:
                continue
            if cubic_pairs == "all" or i < j:
                cubic[tuple(sorted((i, i, j)))] = CUBIC_COEFF
            quartic[tuple(sorted((i, i, i, j)))] = QUARTIC_COEFF
            if i < j:
                quartic[(i, i, j, j)] = QUARTIC_COEFF
            if include_3body:
                for k in range(j + 1, M):
                    if k != i:
                        quartic[tuple(sorted((i, i, j, k)))] = QUARTIC_COEFF
    label = f"pessimistic-{M}-{'3' if include_3body else '2'}body"
    return ForceField(frequency_grid(M, grid=grid), cubic, quartic, name=label)


def pessimistic_hamiltonian(n_qubits: int, d: int, include_3body: bool = False,
                            enc: Encoding | str = "gray", **kw) -> PauliSum:
    """Pessimistic model sized to ``n_qubits`` at truncation ``d``."""
    enc = encoding(enc, d)
    w = enc.n_qubits_per_mode
    if n_qubits % w:
        raise ValueError(f"{n_qubits} qubits is not a multiple of {w} qubits per mode")
    return build_hamiltonian(pessimistic_model(n_qubits // w, include_3body, **kw), d, enc)


@dataclass(frozen=True)
class Magnitude:
    n_qubits: int
    n_terms: int
    max_coeff_ha: float
    w_ha: float

    def w_over_eps(self, eps_cm1: float) -> float:
        return self.w_ha / (eps_cm1 / HARTREE_TO_CM1)


def magnitude(h_cm1: PauliSum) -> Magnitude:
    """Term count, largest non-identity coefficient and W, in Hartree."""
    h = h_cm1.scale(1.0 / HARTREE_TO_CM1)
    return Magnitude(h.n_qubits, len(h), max_abs_coefficient(h), w_magnitude(h))


# -- file format --------------------------------------------------------------

def _fmt(v: float) -> str:
    return repr(float(v))


def dumps_forcefield(ff: ForceField, dipole: DipoleSurface | None = None) -> str:
    out = io.StringIO()
    if ff.name:
        out.write(f"name {ff.name}\n")
    out.write("\n[omegas]\n")
    for i, om in enumerate(ff.omegas):
        out.write(f"{i} {_fmt(om)}\n")
    for section, table in (("cubic", ff.cubic), ("quartic", ff.quartic)):
        if table:
            out.write(f"\n[{section}]\n")
            for key in sorted(table):
                out.write(" ".join(map(str, key)) + f" {_fmt(table[key])}\n")
    if dipole is not None:
        for a in AXES:
            const = dipole.constant.get(a, 0.0)
            lin = dipole.linear.get(a, {})
            quad = dipole.quadratic.get(a, {})
            if not (const or lin or quad):
                continue
            out.write(f"\n[dipole.{a}]\n")
            if const:
                out.write(f"const {_fmt(const)}\n")
            for i in sorted(lin):
                out.write(f"{i} {_fmt(lin[i])}\n")
            for key in sorted(quad):
                out.write(f"{key[0]} {key[1]} {_fmt(quad[key])}\n")
    return out.getvalue()


def loads_forcefield(text: str, strict: bool = False) -> tuple[ForceField, DipoleSurface]:
    """Parse the sectioned text format into a force field and dipole surface."""
    name = ""
    section = None
    omegas: dict[int, float] = {}
    cubic: dict = {}
    quartic: dict = {}
    const: dict[str, float] = {}
    lin: dict[str, dict] = {}
    quad: dict[str, dict] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise ForceFieldError(f"line {lineno}: bad section header {raw!r}")
            section = line[1:-1].strip()
            if section not in ("omegas", "cubic", "quartic") and not (
                    section.startswith("dipole.") and section[7:] in AXES):
                raise ForceFieldError(f"line {lineno}: unknown section [{section}]")
            continue
        tok = line.split()
        if section is None:
            if tok[0] == "name" and len(tok) == 2:
                name = tok[1]
                continue
            raise ForceFieldError(f"line {lineno}: data outside a section")
        try:
            value = float(tok[-1])
            if section.startswith("dipole.") and tok[0] == "const":
                idx: tuple[int, ...] = ()
                if len(tok) != 2:
                    raise ValueError
            else:
                idx = tuple(int(t) for t in tok[:-1])
        except ValueError:
            raise ForceFieldError(f"line {lineno}: cannot parse {raw!r}") from None
        if section == "omegas":
            if len(idx) != 1:
                raise ForceFieldError(f"line {lineno}: expected 'index value'")
            omegas[idx[0]] = value
        elif section == "cubic":
            cubic[idx] = cubic.get(idx, 0.0) + value
        elif section == "quartic":
            quartic[idx] = quartic.get(idx, 0.0) + value
        else:
            axis = section[7:]
            if len(idx) == 0:
                const[axis] = value
            elif len(idx) == 1:
                lin.setdefault(axis, {})[idx[0]] = value
            elif len(idx) == 2:
                quad.setdefault(axis, {})[idx] = value
            else:
                raise ForceFieldError(f"line {lineno}: dipole terms go up to second order")
    if sorted(omegas) != list(range(len(omegas))):
        raise ForceFieldError("omegas must be given for modes 0..M-1")
    ff = ForceField(np.array([omegas[i] for i in range(len(omegas))]), cubic, quartic,
                    name=name, strict=strict)
    return ff, DipoleSurface(ff.n_modes, const, lin, quad)


def load_forcefield(path: str | Path, strict: bool = False) -> tuple[ForceField, DipoleSurface]:
    return loads_forcefield(Path(path).read_text(), strict=strict)


def dump_forcefield(path: str | Path, ff: ForceField, dipole: DipoleSurface | None = None) -> None:
    Path(path).write_text(dumps_forcefield(ff, dipole))


def builtin_text(name: str) -> str:
    if name not in BUILTIN:
        raise KeyError(f"unknown molecule {name!r}; built-ins are {BUILTIN}")
    return resources.files("vibqc.data").joinpath(f"{name}.ff").read_text()


def load_builtin(name: str) -> tuple[ForceField, DipoleSurface]:
    """Built-in data set by name: ``co``, ``coh`` or ``fermi_resonance``."""
    return loads_forcefield(builtin_text(name))


def load_molecule(name: str) -> tuple[ForceField, DipoleSurface]:
    """Built-in name or a path to a force-field file."""
    if name in BUILTIN:
        return load_builtin(name)
    p = Path(name)
    if not p.exists():
        raise ForceFieldError(f"{name!r} is neither a built-in molecule nor a file")
    return load_forcefield(p)
