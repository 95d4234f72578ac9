"""Command-line front end.

Subcommands write CSV data and a JSON manifest echoing the resolved
configuration. Failures print a JSON object on stderr and exit with
2 (bad configuration), 3 (numerical failure) or 4 (protocol mismatch).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .boson import Encoding
from .fermion import MAX_BRUTEFORCE_ORBITALS, es_pauli_count_analytic, es_pauli_count_bruteforce
from .pauli import DenseLimitError, locality_histogram
from .qsim import (ProtocolConsistencyError, LowSuccessError, apply_normalized,
                   ibe_transition_amplitude, qpe_histogram)
from .spectra import Layout, ResidualError, broaden, curve_csv, diagonalize, ir_spectrum, peaks_csv
from .trotter import ORDERS, ConvergenceError, PhaseAliasingError, scan_imag, scan_real
from .vibham import (AXES, ForceFieldError, build_dipole, build_hamiltonian, dumps_forcefield,
                     load_molecule, loads_forcefield, magnitude, pessimistic_hamiltonian)

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_PROTOCOL = 0, 2, 3, 4
EPSILONS_CM1 = (100.0, 10.0, 1.0)
VIB_CLASSES = ("vib-2body-d4", "vib-3body-d4", "vib-2body-d8", "vib-3body-d8")


class ConfigError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        _fail(EXIT_CONFIG, "ConfigError", message)


def _fail(code: int, kind: str, message: str):
    sys.stderr.write(json.dumps({"error": kind, "message": message, "exit_code": code}) + "\n")
    sys.exit(code)


def _int_list(text: str) -> list[int]:
    return [int(t) for t in text.split(",") if t.strip()] if text else []


def _steps(text: str | None) -> np.ndarray | None:
    """``lo:hi:n`` for a geometric grid, or a comma list."""
    if not text:
        return None
    if ":" in text:
        lo, hi, n = text.split(":")
        return np.geomspace(float(lo), float(hi), int(n))
    return np.array([float(t) for t in text.split(",")])


def _write(out: Path | None, name: str, text: str, written: list[str]) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    out.mkdir(parents=True, exist_ok=True)
    (out / name).write_text(text)
    written.append(name)


def _manifest(args, out: Path | None, written: list[str], extra: dict | None = None) -> None:
    cfg = {k: v for k, v in sorted(vars(args).items()) if k != "func"}
    body = {"tool": "vibqc", "version": __version__, "config": cfg, "outputs": written}
    if extra:
        body.update(extra)
    text = json.dumps(body, indent=2, sort_keys=True, default=str) + "\n"
    if out is None:
        sys.stderr.write(text)
    else:
        out.mkdir(parents=True, exist_ok=True)
        (out / "manifest.json").write_text(text)


def _csv(rows, header) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _molecule(args):
    ff, ds = load_molecule(args.molecule)
    # round-trip through the text format so the run uses exactly what a dump would hold
    ff2, ds2 = loads_forcefield(dumps_forcefield(ff, ds))
    if ff2 != ff or ds2 != ds:
        raise ForceFieldError("force field does not survive a dump/load round trip")
    enc = Encoding(args.encoding, args.d)
    return ff, ds, enc


def _hamiltonian(args, ff, enc):
    return build_hamiltonian(ff, args.d, enc, truncate=args.truncate,
                             harmonic_only=getattr(args, "harmonic_only", False))


# -- subcommands ----------------------------------------------------------------

def cmd_resources(args) -> int:
    out = Path(args.out) if args.out else None
    written: list[str] = []
    if args.fermionic:
        rows = []
        for n in range(1, args.orbitals + 1):
            brute = es_pauli_count_bruteforce(n) if n <= args.brute_max else ""
            rows.append([2 * n, n, es_pauli_count_analytic(n), brute])
        _write(out, "fermionic.csv",
               _csv(rows, ["n_qubits", "n_orbitals", "analytic", "bruteforce"]), written)
        _manifest(args, out, written)
        return EXIT_OK
    classes = [c for c in args.classes.split(",") if c] if args.classes is not None else list(VIB_CLASSES)
    for c in classes:
        if c not in VIB_CLASSES and c != "fermionic":
            raise ConfigError(f"unknown class {c!r}; choose from {VIB_CLASSES + ('fermionic',)}")
    header = ["problem_class", "n_qubits", "n_terms", "locality", "max_coeff_ha", "w_ha"] + [
        f"w_over_eps_{int(e)}cm1" for e in EPSILONS_CM1]
    rows = []
    for c in classes:
        for nq in _int_list(args.qubits):
            if c == "fermionic":
                if nq % 2:
                    continue
                rows.append([c, nq, es_pauli_count_analytic(nq // 2), "", "", ""] + [""] * 3)
                continue
            body, d = c.split("-")[1], int(c.split("-d")[1])
            h = pessimistic_hamiltonian(nq, d, body == "3body", args.encoding)
            m = magnitude(h)
            loc = ";".join(f"{k}:{v}" for k, v in locality_histogram(h).items())
            rows.append([c, nq, m.n_terms, loc, f"{m.max_coeff_ha:.6e}", f"{m.w_ha:.6e}"]
                        + [f"{m.w_over_eps(e):.6e}" for e in EPSILONS_CM1])
    _write(out, "resources.csv", _csv(rows, header), written)
    _manifest(args, out, written)
    return EXIT_OK


def default_max_energy(ff) -> float:
    """Cutoff for reported peaks: 1.2 times the first overtone of the highest mode."""
    return 1.2 * 2.0 * float(np.max(ff.omegas)) if ff.n_modes else 0.0


def cmd_spectrum(args) -> int:
    out = Path(args.out) if args.out else None
    ff, ds, enc = _molecule(args)
    h = _hamiltonian(args, ff, enc)
    axes = ds.axes()
    dip = {a: build_dipole(ds, a, args.d, enc, truncate=args.truncate) for a in axes}
    layout = Layout(enc, ff.n_modes)
    max_e = args.max_energy if args.max_energy is not None else default_max_energy(ff)
    spectrum = ir_spectrum(h, dip, n_transitions=args.n_transitions, max_energy=max_e, layout=layout)
    spectrum = spectrum.normalized()
    written: list[str] = []
    _write(out, "peaks.csv", peaks_csv(spectrum), written)
    if out is not None:
        grid, f = broaden(spectrum, args.sigma)
        _write(out, "curve.csv", curve_csv(grid, f), written)
    _manifest(args, out, written, {"n_qubits": h.n_qubits, "n_terms": len(h), "max_energy": max_e})
    return EXIT_OK


def cmd_trotter(args) -> int:
    out = Path(args.out) if args.out else None
    ff, ds, enc = _molecule(args)
    h = _hamiltonian(args, ff, enc)
    states = tuple(_int_list(args.states)) or (0,)
    steps = _steps(args.steps)
    extra = {}
    if args.mode == "real":
        scan = scan_real(h, steps, states, args.order, args.seed)
        extra = {"cap": scan.cap, "notes": scan.notes}
    else:
        sub = Layout(enc, ff.n_modes).indices()
        scan = scan_imag(h, steps, states, args.order, args.seed, subspace=sub)
    rows = [[f"{s:.10e}", st, f"{e:.10e}"] for s, st, e in scan.rows()]
    written: list[str] = []
    _write(out, "trotter.csv", _csv(rows, ["step", "state", "error_cm1"]), written)
    _manifest(args, out, written, extra)
    return EXIT_OK


def cmd_transition(args) -> int:
    out = Path(args.out) if args.out else None
    ff, ds, enc = _molecule(args)
    h = _hamiltonian(args, ff, enc)
    sol = diagonalize(h, Layout(enc, ff.n_modes))
    mu = build_dipole(ds, args.axis, args.d, enc, truncate=args.truncate)
    i, j = args.from_state, args.to_state
    for s in (i, j):
        if not 0 <= s < len(sol):
            raise ConfigError(f"state {s} out of range 0..{len(sol) - 1}")
    bra, ket = sol.vector(i), sol.vector(j)
    direct = float(abs(np.vdot(bra, mu.apply(ket))) ** 2)
    if args.protocol == "direct":
        value, prims = direct, 0
    else:
        res = ibe_transition_amplitude(bra, ket, mu, shots=args.shots, seed=args.seed,
                                       validate=args.shots is None)
        value = res.value if hasattr(res, "value") else res
        prims = getattr(res, "n_primitives", "")
    rows = [[i, j, args.axis, args.protocol, f"{value:.12e}", f"{direct:.12e}",
             f"{abs(value - direct):.3e}", prims]]
    written: list[str] = []
    _write(out, "transition.csv", _csv(rows, ["from", "to", "axis", "protocol", "value",
                                              "direct", "abs_diff", "primitives"]), written)
    _manifest(args, out, written)
    return EXIT_OK


def cmd_qpe(args) -> int:
    out = Path(args.out) if args.out else None
    ff, ds, enc = _molecule(args)
    h = _hamiltonian(args, ff, enc)
    sub = Layout(enc, ff.n_modes).indices()
    sol = diagonalize(h, Layout(enc, ff.n_modes))
    ground = sol.vector(0)
    if args.initial == "ground":
        eta = ground
    elif args.initial == "dipole-excited":
        axes = ds.axes()
        if not axes:
            raise ConfigError("molecule has no dipole surface")
        eta = apply_normalized(build_dipole(ds, axes[0], args.d, enc, truncate=args.truncate), ground)
    else:
        eta = np.zeros(1 << h.n_qubits, dtype=complex)
        eta[sub if sub is not None else slice(None)] = 1.0
        eta /= np.linalg.norm(eta)
    vals = sol.eigenvalues
    vecs = sol.eigenvectors
    hist = qpe_histogram(h, eta, args.bits, t=args.t, kernel=args.kernel, eig=(vals, vecs))
    written: list[str] = []
    _write(out, "qpe.csv", hist.to_csv(), written)
    _manifest(args, out, written, {"t": hist.t})
    return EXIT_OK


# -- parser -----------------------------------------------------------------------

def _common(p, molecule: bool = True):
    if molecule:
        p.add_argument("--molecule", default="co",
                       help="built-in name (co, coh, fermi_resonance) or force-field file")
        p.add_argument("--d", type=int, default=4, help="levels per mode")
        p.add_argument("--truncate", choices=("after", "before"), default="after",
                       help="truncate operator powers after (exact) or before multiplying")
    p.add_argument("--encoding", choices=("gray", "binary", "unary"), default="gray")
    p.add_argument("--out", default=None, help="output directory (default: stdout)")
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="vibqc", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("resources", help="term counts, locality and magnitude census")
    _common(p, molecule=False)
    p.add_argument("--classes", default=None,
                   help=f"comma list from {','.join(VIB_CLASSES)},fermionic (empty for none)")
    p.add_argument("--qubits", default="24,36,48")
    p.add_argument("--fermionic", action="store_true", help="fermionic counts per orbital number")
    p.add_argument("--orbitals", type=int, default=6)
    p.add_argument("--brute-max", type=int, default=6,
                   help=f"largest orbital count checked by enumeration (<= {MAX_BRUTEFORCE_ORBITALS})")
    p.set_defaults(func=cmd_resources)

    p = sub.add_parser("spectrum", help="stick and broadened infrared spectrum")
    _common(p)
    p.add_argument("--harmonic-only", action="store_true")
    p.add_argument("--sigma", type=float, default=10.0)
    p.add_argument("--n-transitions", type=int, default=None)
    p.add_argument("--max-energy", type=float, default=None)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("trotter", help="product-formula error scans")
    _common(p)
    p.add_argument("--harmonic-only", action="store_true")
    p.add_argument("--mode", choices=("real", "imag"), default="real")
    p.add_argument("--steps", default=None, help="lo:hi:n geometric grid or comma list")
    p.add_argument("--states", default="0")
    p.add_argument("--order", choices=ORDERS, default="lex")
    p.set_defaults(func=cmd_trotter)

    p = sub.add_parser("transition", help="transition moment, direct or from overlaps")
    _common(p)
    p.add_argument("--axis", choices=AXES, default="x")
    p.add_argument("--from", dest="from_state", type=int, default=0)
    p.add_argument("--to", dest="to_state", type=int, default=1)
    p.add_argument("--protocol", choices=("direct", "ibe"), default="ibe")
    p.add_argument("--shots", type=int, default=None)
    p.set_defaults(func=cmd_transition)

    p = sub.add_parser("qpe", help="phase-estimation histogram")
    _common(p)
    p.add_argument("--bits", type=int, default=8)
    p.add_argument("--kernel", choices=("ideal", "exact"), default="exact")
    p.add_argument("--initial", choices=("ground", "dipole-excited", "uniform"),
                   default="dipole-excited")
    p.add_argument("--t", type=float, default=None, help="energy-to-phase scale")
    p.set_defaults(func=cmd_qpe)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        code = args.func(args)
    except ProtocolConsistencyError as e:
        _fail(EXIT_PROTOCOL, type(e).__name__, str(e))
    except (PhaseAliasingError, ConvergenceError, ResidualError, LowSuccessError,
            ArithmeticError, np.linalg.LinAlgError) as e:
        _fail(EXIT_NUMERIC, type(e).__name__, str(e))
    except (ConfigError, ForceFieldError, DenseLimitError, ValueError, KeyError,
            FileNotFoundError, IndexError) as e:
        _fail(EXIT_CONFIG, type(e).__name__, str(e))
    return code


if __name__ == "__main__":
    sys.exit(main())
