"""Exact diagonalization in a truncated Fock x collective-spin basis.

The finite-size oracle for everything mean-field: builds the full
Hamiltonian for N spins coupled to one boson mode with the Fock space cut at
a finite occupation, exposes the discrete and antiunitary symmetry operators,
and compares exact ground-state data against the mean-field predictions as
the system grows.

The Hamiltonian is real symmetric in this basis: the magnetic coupling joins
the antisymmetric combinations (J+ - J-) and (a - a^dag), whose product is
symmetric again, so no complex arithmetic is needed anywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple, Union

import numpy as np
import scipy.linalg as la
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from . import meanfield
from .params import ModelParams, Phase

#: dimensions up to this use the dense solver, larger ones the Lanczos one
DENSE_CUTOFF = 2000
#: eigenvalues within DEGENERACY_TOL * ||H|| of the lowest count as degenerate
DEGENERACY_TOL = 1e-7
#: eigenpairs must satisfy ||H v - e v|| <= RESIDUAL_TOL * ||H||
RESIDUAL_TOL = 1e-9


@dataclass(frozen=True)
class SpinBosonBasis:
    """Product basis |m_index> x |n>: collective spin j = N/2 ladder index
    m_index = m + j in 0..N, Fock occupation n in 0..fock_cutoff.

    Flat index = m_index * (fock_cutoff + 1) + n.
    """

    n_spins: int
    fock_cutoff: int

    def __post_init__(self):
        if self.n_spins < 1:
            raise ValueError(f"n_spins must be >= 1, got {self.n_spins}")
        if self.fock_cutoff < 1:
            raise ValueError(f"fock_cutoff must be >= 1, got {self.fock_cutoff}")

    @property
    def dim(self) -> int:
        return (self.n_spins + 1) * (self.fock_cutoff + 1)

    def index(self, m_index: int, n: int) -> int:
        if not (0 <= m_index <= self.n_spins and 0 <= n <= self.fock_cutoff):
            raise ValueError(f"state ({m_index}, {n}) outside the basis")
        return m_index * (self.fock_cutoff + 1) + n

    def unindex(self, flat: int) -> Tuple[int, int]:
        return divmod(flat, self.fock_cutoff + 1)

    def m_values(self) -> np.ndarray:
        """Physical J_z eigenvalues m = -j..j per ladder index."""
        j = self.n_spins / 2.0
        return np.arange(self.n_spins + 1, dtype=float) - j

    def fock_values(self) -> np.ndarray:
        return np.arange(self.fock_cutoff + 1, dtype=float)


def _boson_annihilator(fock_cutoff: int) -> sp.csr_matrix:
    n = np.arange(1, fock_cutoff + 1, dtype=float)
    return sp.csr_matrix(
        (np.sqrt(n), (np.arange(fock_cutoff), np.arange(1, fock_cutoff + 1))),
        shape=(fock_cutoff + 1, fock_cutoff + 1),
    )


def _spin_raising(n_spins: int) -> sp.csr_matrix:
    j = n_spins / 2.0
    m = np.arange(n_spins, dtype=float) - j
    amp = np.sqrt(j * (j + 1.0) - m * (m + 1.0))
    return sp.csr_matrix(
        (amp, (np.arange(1, n_spins + 1), np.arange(n_spins))),
        shape=(n_spins + 1, n_spins + 1),
    )


@dataclass(frozen=True)
class SparseHamiltonian:
    matrix: sp.csr_matrix
    basis: SpinBosonBasis
    params: ModelParams
    frobenius_norm: float

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def build_hamiltonian(params: ModelParams, basis: SpinBosonBasis) -> SparseHamiltonian:
    """Assemble the truncated Hamiltonian as a real symmetric sparse matrix."""
    if basis.n_spins != params.n_spins:
        raise ValueError(
            f"basis built for N={basis.n_spins} but params have N={params.n_spins}"
        )
    n_sp = params.n_spins
    a = _boson_annihilator(basis.fock_cutoff)
    ad = a.T.tocsr()
    jp = _spin_raising(n_sp)
    jm = jp.T.tocsr()
    eye_b = sp.identity(basis.fock_cutoff + 1, format="csr")
    eye_s = sp.identity(n_sp + 1, format="csr")
    jz = sp.diags(basis.m_values(), format="csr")
    number = sp.diags(basis.fock_values(), format="csr")

    scale = 1.0 / math.sqrt(n_sp)
    h = (
        params.omega0 * sp.kron(jz, eye_b)
        + params.omega * sp.kron(eye_s, number)
        + (params.omega_E * scale) * sp.kron(jp + jm, a + ad)
        + (params.omega_M * scale) * sp.kron(jp - jm, a - ad)
    ).tocsr()
    norm = float(np.sqrt((h.data * h.data).sum()))
    return SparseHamiltonian(h, basis, params, norm)


# ---------------------------------------------------------------------------
# symmetries


@dataclass(frozen=True)
class AntiunitaryAction:
    """Antiunitary operation T = U K, with K complex conjugation in the
    number basis and U diagonal (entries +-1)."""

    name: str
    unitary_diag: np.ndarray

    def transform(self, matrix) -> sp.csr_matrix:
        """T M T^{-1} = U conj(M) U^dagger."""
        d = sp.diags(self.unitary_diag)
        return (d @ sp.csr_matrix(matrix).conjugate() @ d).tocsr()

    def invariance_defect(self, matrix) -> float:
        """Frobenius norm of T M T^{-1} - M."""
        return frobenius(self.transform(matrix) - sp.csr_matrix(matrix))


@dataclass(frozen=True)
class SymmetryOperators:
    """Diagonals of the parity and excitation-number operators plus the two
    antiunitary operations, all in the flat basis ordering.

    u1_diag holds n + m_index (the conserved total shifted by +j so the
    entries are small integers); shifting by a constant changes no
    commutator or block structure.
    """

    parity_diag: np.ndarray
    u1_diag: np.ndarray
    t_e: AntiunitaryAction
    t_m: AntiunitaryAction

    @property
    def parity(self) -> sp.csr_matrix:
        return sp.diags(self.parity_diag).tocsr()

    @property
    def u1_generator(self) -> sp.csr_matrix:
        return sp.diags(self.u1_diag).tocsr()


def symmetry_operators(basis: SpinBosonBasis) -> SymmetryOperators:
    m_index = np.repeat(np.arange(basis.n_spins + 1), basis.fock_cutoff + 1)
    n = np.tile(np.arange(basis.fock_cutoff + 1), basis.n_spins + 1)
    parity = np.where((m_index + n) % 2 == 0, 1.0, -1.0)
    u1 = (m_index + n).astype(float)
    t_m = AntiunitaryAction("T_M", np.ones(basis.dim))
    t_e = AntiunitaryAction("T_E", parity.copy())
    return SymmetryOperators(parity, u1, t_e, t_m)


def frobenius(matrix) -> float:
    if sp.issparse(matrix):
        data = matrix.tocoo().data
        return float(np.sqrt((np.abs(data) ** 2).sum()))
    return float(np.linalg.norm(np.asarray(matrix)))


def commutator_norm(matrix: sp.spmatrix, other: Union[np.ndarray, sp.spmatrix]) -> float:
    """Frobenius norm of [matrix, other].

    A 1-D array is taken as the diagonal of an operator, in which case the
    commutator reduces to an entrywise rescaling of the matrix.
    """
    if isinstance(other, np.ndarray) and other.ndim == 1:
        coo = matrix.tocoo()
        vals = coo.data * (other[coo.col] - other[coo.row])
        return float(np.sqrt((np.abs(vals) ** 2).sum()))
    comm = matrix @ other - other @ matrix
    return frobenius(comm)


def block_offdiagonal_norm(matrix: sp.spmatrix, labels: np.ndarray) -> float:
    """Frobenius norm of the part of the matrix joining different label
    sectors; zero exactly when the labels define a block structure."""
    coo = matrix.tocoo()
    mask = labels[coo.row] != labels[coo.col]
    vals = coo.data[mask]
    return float(np.sqrt((np.abs(vals) ** 2).sum()))


# ---------------------------------------------------------------------------
# spectra


@dataclass(frozen=True)
class SpectralResult:
    """Lowest eigenpairs of one truncated Hamiltonian."""

    eigenvalues: np.ndarray
    vectors: np.ndarray
    e0_per_spin: float
    gap: float
    degeneracy: int
    h_norm: float
    basis: SpinBosonBasis


class CutoffConvergenceError(RuntimeError):
    """The Fock cutoff escalation hit its ceiling before the ground energy
    stabilized; carries the last two estimates for inspection."""

    def __init__(self, message: str, estimates: Tuple[float, float], cutoffs: Tuple[int, int]):
        super().__init__(message)
        self.estimates = estimates
        self.cutoffs = cutoffs


def ground_spectrum(
    ham: SparseHamiltonian, k: int = 4, dense_cutoff: int = DENSE_CUTOFF
) -> SpectralResult:
    """Lowest k eigenpairs with verified residuals.

    Small problems go through the dense symmetric solver, large ones through
    shift-free Lanczos; either way each returned pair must satisfy
    ||H v - e v|| <= RESIDUAL_TOL * ||H|| or a RuntimeError is raised.
    """
    dim = ham.dim
    if not 2 <= k < dim:
        raise ValueError(f"need 2 <= k < dim, got k={k}, dim={dim}")
    if dim <= dense_cutoff:
        vals, vecs = la.eigh(ham.matrix.toarray(), subset_by_index=(0, k - 1))
    else:
        try:
            vals, vecs = spla.eigsh(ham.matrix, k=k, which="SA")
        except spla.ArpackNoConvergence:
            vals, vecs = spla.eigsh(
                ham.matrix,
                k=k,
                which="SA",
                ncv=min(dim - 1, max(4 * k + 1, 60)),
                maxiter=50 * dim,
            )
        order = np.argsort(vals)
        vals = vals[order]
        vecs = vecs[:, order]
    residuals = ham.matrix @ vecs - vecs * vals
    worst = float(np.linalg.norm(residuals, axis=0).max())
    if worst > RESIDUAL_TOL * ham.frobenius_norm:
        raise RuntimeError(
            f"eigenpair residual {worst} exceeds {RESIDUAL_TOL} * ||H|| = "
            f"{RESIDUAL_TOL * ham.frobenius_norm}"
        )
    degeneracy = int(np.sum(vals - vals[0] <= DEGENERACY_TOL * ham.frobenius_norm))
    return SpectralResult(
        eigenvalues=vals,
        vectors=vecs,
        e0_per_spin=float(vals[0]) / ham.params.n_spins,
        gap=float(vals[1] - vals[0]),
        degeneracy=degeneracy,
        h_norm=ham.frobenius_norm,
        basis=ham.basis,
    )


def converged_ground_spectrum(
    params: ModelParams,
    k: int = 4,
    start_cutoff: Optional[int] = None,
    growth: float = 1.25,
    rtol: float = 1e-8,
    max_cutoff: int = 512,
    dense_cutoff: int = DENSE_CUTOFF,
) -> SpectralResult:
    """Escalate the Fock cutoff geometrically until E0 is stable.

    Starts from start_cutoff (default 4 N) and accepts once raising the
    cutoff by the growth factor moves the ground energy by less than
    rtol * |E0|.  Raises CutoffConvergenceError when max_cutoff is reached
    first.
    """
    if growth <= 1.0:
        raise ValueError(f"growth factor must exceed 1, got {growth}")
    cutoff = start_cutoff if start_cutoff is not None else 4 * params.n_spins
    cutoff = max(cutoff, 2)
    if cutoff > max_cutoff:
        raise ValueError(f"start cutoff {cutoff} exceeds max_cutoff {max_cutoff}")
    result = ground_spectrum(
        build_hamiltonian(params, SpinBosonBasis(params.n_spins, cutoff)), k, dense_cutoff
    )
    previous = (float(result.eigenvalues[0]), cutoff)
    while True:
        bigger = max(cutoff + 1, math.ceil(growth * cutoff))
        if bigger > max_cutoff:
            raise CutoffConvergenceError(
                f"ground energy not converged at fock_cutoff={cutoff} "
                f"(ceiling {max_cutoff})",
                (previous[0], float(result.eigenvalues[0])),
                (previous[1], cutoff),
            )
        probe = ground_spectrum(
            build_hamiltonian(params, SpinBosonBasis(params.n_spins, bigger)),
            k,
            dense_cutoff,
        )
        if abs(probe.eigenvalues[0] - result.eigenvalues[0]) < rtol * abs(
            probe.eigenvalues[0]
        ):
            return probe
        previous = (float(result.eigenvalues[0]), cutoff)
        cutoff, result = bigger, probe


# ---------------------------------------------------------------------------
# mean-field comparison


@dataclass(frozen=True)
class ConvergenceRow:
    n_spins: int
    fock_cutoff: int
    e0_per_spin: float
    mf_per_spin: float
    deviation: float
    doublet_splitting: float


@dataclass(frozen=True)
class ConvergenceReport:
    """Exact ground-state energy density against the mean-field limit.

    mf_per_spin rows include the -omega0/2 constant separating the
    transition-relative energy convention from absolute ED energies.
    variational_offset is the fitted c in E0 >= E_MF_total - c sqrt(N),
    i.e. the largest observed (E_MF_total - E0) / sqrt(N), floored at zero.
    """

    params: ModelParams
    phase: Phase
    rows: Tuple[ConvergenceRow, ...]
    deviation_monotone: bool
    energy_sign_ok: bool
    variational_offset: float


def meanfield_convergence(
    params: ModelParams,
    n_list: Sequence[int],
    k: int = 4,
    rtol: float = 1e-8,
    max_cutoff: int = 512,
    monotone_slack: float = 1e-10,
    dense_cutoff: int = DENSE_CUTOFF,
) -> ConvergenceReport:
    """Compare converged ED ground energies against mean-field across sizes."""
    sizes = list(n_list)
    if not sizes or sizes != sorted(sizes) or len(set(sizes)) != len(sizes):
        raise ValueError(f"n_list must be strictly increasing and non-empty, got {n_list}")
    phase = meanfield.classify_phase(params)
    mf_density = meanfield.minimum_energy_per_spin(params) - params.omega0 / 2.0
    rows = []
    for n in sizes:
        res = converged_ground_spectrum(
            params.with_size(n), k=k, rtol=rtol, max_cutoff=max_cutoff, dense_cutoff=dense_cutoff
        )
        rows.append(
            ConvergenceRow(
                n_spins=n,
                fock_cutoff=res.basis.fock_cutoff,
                e0_per_spin=res.e0_per_spin,
                mf_per_spin=mf_density,
                deviation=abs(res.e0_per_spin - mf_density),
                doublet_splitting=res.gap,
            )
        )
    monotone = all(
        rows[i + 1].deviation <= rows[i].deviation + monotone_slack
        for i in range(len(rows) - 1)
    )
    slack = 1e-9 * params.omega0
    if phase is Phase.NORMAL:
        sign_ok = all(r.e0_per_spin <= -params.omega0 / 2.0 + slack for r in rows)
    else:
        sign_ok = all(r.e0_per_spin < -params.omega0 / 2.0 for r in rows)
    offset = max(
        [(r.mf_per_spin - r.e0_per_spin) * r.n_spins / math.sqrt(r.n_spins) for r in rows]
        + [0.0]
    )
    return ConvergenceReport(
        params=params,
        phase=phase,
        rows=tuple(rows),
        deviation_monotone=monotone,
        energy_sign_ok=sign_ok,
        variational_offset=offset,
    )
