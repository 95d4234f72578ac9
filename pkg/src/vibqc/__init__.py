"""Vibrational Hamiltonians on qubits.

Encodings of truncated modes, Pauli-sum algebra and resource metrics,
exact infrared spectra, and dense-statevector checks of product formulas,
phase estimation and transition-moment protocols.
"""

import os as _os

# Thread count for BLAS must be fixed before numpy loads.
if _os.environ.get("VIBQC_THREADS"):
    for _var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        _os.environ.setdefault(_var, _os.environ["VIBQC_THREADS"])

__version__ = "0.1.0"

from .pauli import (  # noqa: E402
    HARTREE_TO_CM1, DenseLimitError, PauliString, PauliSum, add, locality_histogram,
    max_abs_coefficient, multiply, to_dense, w_magnitude,
)
from .boson import (  # noqa: E402
    DLevelOperator, Encoding, encode_mode_product, encode_operator, harmonic_operator,
    momentum_operator, position_operator, projector_to_pauli, q_power,
    vibrational_term_count_table,
)
from .fermion import (  # noqa: E402
    FermionTerm, es_pauli_count_analytic, es_pauli_count_bruteforce, jordan_wigner,
)
from .vibham import (  # noqa: E402
    DipoleSurface, ForceField, build_dipole, build_hamiltonian, fold, load_builtin,
    pessimistic_model,
)
from .spectra import EigenSolution, Layout, Spectrum, broaden, diagonalize, ir_spectrum  # noqa: E402
from .trotter import (  # noqa: E402
    TrotterScan, ite_energy_error, ite_operator, propagator_eigenphase_errors,
    trotter_propagator,
)
from .qsim import (  # noqa: E402
    PhaseHistogram, dipole_block_encoding, ibe_transition_amplitude, overlap_squared,
    pauli_rotation_overlap, qpe_histogram,
)
