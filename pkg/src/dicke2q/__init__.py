"""Two-quadrature Dicke model: mean-field theory, polariton spectra,
finite-size exact diagonalization and a circuit-parameter front end.

The model couples N two-level systems to one boson mode through both field
quadratures with independent strengths, which tunes the Hamiltonian symmetry
between a discrete parity and a continuous U(1), and correspondingly the
superradiant transition between discrete and continuous symmetry breaking.
"""

from .circuit import (
    CircuitParams,
    EffectiveParams,
    LumpedEnergies,
    UnsupportedRegimeError,
    effective_model,
    lumped_energies,
    model_from_circuit,
    report_document,
)
from .exact import (
    ConvergenceReport,
    CutoffConvergenceError,
    SpinBosonBasis,
    build_hamiltonian,
    converged_ground_spectrum,
    ground_spectrum,
    meanfield_convergence,
    symmetry_operators,
)
from .kernels import BACKEND as KERNEL_BACKEND
from .meanfield import (
    CouplingPath,
    GridSpec,
    LandscapeGrid,
    OrderParameters,
    TransitionReport,
    analytic_order_parameters,
    classify_phase,
    eliminate_alpha,
    em_valley_point,
    ground_energy,
    landscape,
    minimize_numerically,
    minimum_energy_per_spin,
    reduced_energy,
    transition_order,
)
from .params import (
    CriticalQuantities,
    ModelParams,
    Phase,
    critical_coupling,
    mu_factors,
)
from .spectrum import (
    ModeFlags,
    PolaritonSpectrum,
    SpectrumConsistencyError,
    mode_scan,
    polariton_energies,
    tilde_substitution,
)
from .sweep import (
    FIGURES,
    SweepSpec,
    SweepValidationError,
    oracle_report,
    reproduce_figure,
    run_sweep,
)
from .version import VERSION

__version__ = VERSION

__all__ = [
    "CircuitParams",
    "ConvergenceReport",
    "CouplingPath",
    "CriticalQuantities",
    "CutoffConvergenceError",
    "EffectiveParams",
    "FIGURES",
    "GridSpec",
    "KERNEL_BACKEND",
    "LandscapeGrid",
    "LumpedEnergies",
    "ModeFlags",
    "ModelParams",
    "OrderParameters",
    "Phase",
    "PolaritonSpectrum",
    "SpectrumConsistencyError",
    "SpinBosonBasis",
    "SweepSpec",
    "SweepValidationError",
    "TransitionReport",
    "UnsupportedRegimeError",
    "VERSION",
    "analytic_order_parameters",
    "build_hamiltonian",
    "classify_phase",
    "converged_ground_spectrum",
    "critical_coupling",
    "effective_model",
    "eliminate_alpha",
    "em_valley_point",
    "ground_energy",
    "ground_spectrum",
    "landscape",
    "lumped_energies",
    "meanfield_convergence",
    "minimize_numerically",
    "minimum_energy_per_spin",
    "mode_scan",
    "model_from_circuit",
    "mu_factors",
    "oracle_report",
    "polariton_energies",
    "reduced_energy",
    "report_document",
    "reproduce_figure",
    "run_sweep",
    "symmetry_operators",
    "tilde_substitution",
    "transition_order",
]
