"""Mean-field ground state of the two-quadrature model.

The collective spin is bosonized at leading order in 1/N and both modes are
given coherent amplitudes alpha = <a> and beta = <b>.  The resulting
classical energy surface is exactly minimized over alpha for every beta,
leaving a landscape over the scaled spin coherence
beta / sqrt(N) = u + i v on the closed unit disk.  This module evaluates
that landscape, finds and classifies its minima (in closed form and
numerically, as independent cross-checks), and measures the order of the
ground-state transitions along coupling-space paths.

Energies follow the convention that the normal phase sits at zero; the
constant -omega0/2 per spin separating this from the absolute ground energy
is added back where finite-size spectra are compared (see exact.py).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from . import kernels
from .params import ModelParams, Phase, critical_coupling, mu_factors

#: half-width of the equal-coupling (EM) line, in units of omega
SYMMETRY_TOL = 1e-9
#: descent stops when the gradient norm falls below GRAD_TOL * omega
GRAD_TOL = 1e-12
#: minima closer than DEDUP_TOL (scaled units) count as the same point
DEDUP_TOL = 1e-6
#: multistart pattern: the origin plus START_ANGLES points on each ring
START_RADII = (0.3, 0.7, 0.95)
START_ANGLES = 8
#: descent iteration budget; generous because near-critical landscapes are flat
MAX_ITER = 200_000

_FIRST_ORDER_THRESHOLD = 1e-3   # jump in d(E/N)/dcoupling, dimensionless
_SECOND_ORDER_THRESHOLD = 1e-2  # jump in d^2(E/N)/dcoupling^2, units of 1/omega


def _hp_root(beta_abs2: float, n: float) -> float:
    """sqrt(1 - |beta|^2/N), with a domain check tolerant of roundoff."""
    rem = 1.0 - beta_abs2 / n
    if rem < 0.0:
        if rem < -1e-12:
            raise ValueError(f"|beta|^2 = {beta_abs2} exceeds n_spins = {n}")
        rem = 0.0
    return math.sqrt(rem)


def ground_energy(alpha: complex, beta: complex, params: ModelParams) -> float:
    """Variational energy (units of hbar, relative to the normal phase) for
    boson amplitude alpha and spin amplitude beta.

    Raises ValueError when |beta|^2 > n_spins, which lies outside the domain
    of the bosonization square root.
    """
    alpha = complex(alpha)
    beta = complex(beta)
    n = params.n_spins
    b2 = beta.real * beta.real + beta.imag * beta.imag
    root = _hp_root(b2, n)
    a2 = alpha.real * alpha.real + alpha.imag * alpha.imag
    coupling = (
        4.0 * params.omega_E * alpha.real * beta.real
        + 4.0 * params.omega_M * alpha.imag * beta.imag
    )
    return params.omega * a2 + params.omega0 * b2 + coupling * root


def eliminate_alpha(beta: complex, params: ModelParams) -> complex:
    """Boson amplitude at its stationary point for fixed spin amplitude.

    The energy is quadratic in alpha, so the stationary point is the exact
    minimum over the boson degree of freedom.
    """
    beta = complex(beta)
    n = params.n_spins
    b2 = beta.real * beta.real + beta.imag * beta.imag
    root = _hp_root(b2, n)
    scale = 2.0 * root / params.omega
    return complex(
        -params.omega_E * beta.real * scale,
        -params.omega_M * beta.imag * scale,
    )


def reduced_energy(beta: complex, params: ModelParams) -> float:
    """Energy with alpha eliminated: ground_energy(eliminate_alpha(beta), beta)."""
    beta = complex(beta)
    rn = math.sqrt(params.n_spins)
    u = beta.real / rn
    v = beta.imag / rn
    if u * u + v * v > 1.0 + 1e-12:
        raise ValueError(f"|beta|^2 = {abs(beta)**2} exceeds n_spins = {params.n_spins}")
    return params.n_spins * kernels.energy_scaled(
        u, v, params.omega, params.omega0, params.omega_E, params.omega_M
    )


@dataclass(frozen=True)
class OrderParameters:
    """One mean-field minimum.

    theta is only set for members of the EM valley, where it labels the
    position along the degenerate circle.
    """

    alpha: complex
    beta: complex
    phase: Phase
    n_spins: int
    theta: Optional[float] = None

    @property
    def alpha_scaled(self) -> complex:
        return self.alpha / math.sqrt(self.n_spins)

    @property
    def beta_scaled(self) -> complex:
        return self.beta / math.sqrt(self.n_spins)


def classify_phase(params: ModelParams, tol_sym: float = SYMMETRY_TOL) -> Phase:
    """Phase label from the coupling strengths alone.

    Points within tol_sym * omega of the diagonal and above the critical
    coupling are EM; exactly critical points are still Normal (the order
    parameters vanish continuously there).
    """
    cr = critical_coupling(params.omega, params.omega0)
    we, wm = params.omega_E, params.omega_M
    if abs(we - wm) <= tol_sym * params.omega:
        return Phase.EM if we > cr else Phase.NORMAL
    if we > cr and we > wm:
        return Phase.ELECTRIC
    if wm > cr and wm > we:
        return Phase.MAGNETIC
    return Phase.NORMAL


def minimum_energy_per_spin(params: ModelParams, tol_sym: float = SYMMETRY_TOL) -> float:
    """Energy density of the mean-field ground state, from the closed form.

    Zero in the normal phase; -(omega0/4)(1 - mu)^2/mu with the dominant
    coupling's mu factor in the condensed phases.
    """
    phase = classify_phase(params, tol_sym)
    if phase is Phase.NORMAL:
        return 0.0
    mu_e, mu_m = mu_factors(params)
    mu = mu_m if phase is Phase.MAGNETIC else mu_e
    return -(params.omega0 / 4.0) * (1.0 - mu) ** 2 / mu


def em_valley_point(
    params: ModelParams, theta: float, tol_sym: float = SYMMETRY_TOL
) -> OrderParameters:
    """Member of the degenerate EM circle at valley angle theta.

    Every member is the theta = 0 minimum with both amplitudes rotated by
    exp(i theta); only valid when the parameters actually sit on the EM line.
    """
    phase = classify_phase(params, tol_sym)
    if phase is not Phase.EM:
        raise ValueError(f"parameters are in the {phase} phase, not EM")
    mu = mu_factors(params)[0]
    n = params.n_spins
    rot = complex(math.cos(theta), math.sin(theta))
    beta = math.sqrt(n * (1.0 - mu) / 2.0) * rot
    alpha = -(params.omega_E / params.omega) * math.sqrt(n * (1.0 - mu * mu)) * rot
    return OrderParameters(alpha, beta, phase, n, theta=float(theta))


def analytic_order_parameters(
    params: ModelParams, tol_sym: float = SYMMETRY_TOL
) -> Tuple[OrderParameters, ...]:
    """Closed-form degenerate minima of the reduced energy.

    Normal: the origin.  Electric (Magnetic): an anti-correlated pair on the
    real (imaginary) beta axis, with alpha of the opposite sign.  EM: the
    ground manifold is a circle; the theta = 0 representative is returned and
    em_valley_point() yields any other member.
    """
    phase = classify_phase(params, tol_sym)
    n = params.n_spins
    if phase is Phase.NORMAL:
        return (OrderParameters(0j, 0j, phase, n),)
    if phase is Phase.EM:
        return (em_valley_point(params, 0.0, tol_sym),)
    mu_e, mu_m = mu_factors(params)
    if phase is Phase.ELECTRIC:
        mu = mu_e
        beta = complex(math.sqrt(n * (1.0 - mu) / 2.0), 0.0)
        alpha = complex(
            -(params.omega_E / params.omega) * math.sqrt(n * (1.0 - mu * mu)), 0.0
        )
    else:
        mu = mu_m
        beta = complex(0.0, math.sqrt(n * (1.0 - mu) / 2.0))
        alpha = complex(
            0.0, -(params.omega_M / params.omega) * math.sqrt(n * (1.0 - mu * mu))
        )
    first = OrderParameters(alpha, beta, phase, n)
    second = OrderParameters(-alpha, -beta, phase, n)
    return (first, second)


# ---------------------------------------------------------------------------
# numerical minimization


def _start_points() -> Tuple[np.ndarray, np.ndarray]:
    """Multistart pattern in scaled coordinates: origin plus three rings."""
    us = [0.0]
    vs = [0.0]
    for radius in START_RADII:
        for k in range(START_ANGLES):
            angle = 2.0 * math.pi * k / START_ANGLES
            us.append(radius * math.cos(angle))
            vs.append(radius * math.sin(angle))
    return np.asarray(us), np.asarray(vs)


def _hessian_min_eigenvalue(u, v, params: ModelParams) -> float:
    huu, hvv, huv = kernels.hessian_scaled(
        u, v, params.omega, params.omega0, params.omega_E, params.omega_M
    )
    mean = 0.5 * (huu + hvv)
    return mean - math.hypot(0.5 * (huu - hvv), huv)


def minimize_numerically(
    params: ModelParams,
    grad_tol: float = GRAD_TOL,
    dedup_tol: float = DEDUP_TOL,
    max_iter: int = MAX_ITER,
    tol_sym: float = SYMMETRY_TOL,
) -> Tuple[OrderParameters, ...]:
    """Minima of the reduced energy by multistart descent.

    Independent of the closed forms: 25 deterministic starts (origin plus
    three rings of 8) are descended to gradient norm grad_tol * omega, saddle
    points are discarded with the analytic Hessian, and the surviving global
    set is deduplicated at distance dedup_tol and sorted by valley angle.
    In the EM phase the result samples the degenerate circle rather than
    enumerating it.
    """
    w, w0 = params.omega, params.omega0
    we, wm = params.omega_E, params.omega_M
    su, sv = _start_points()
    u, v, e, g, ok = kernels.multistart(su, sv, w, w0, we, wm, grad_tol * w, int(max_iter))
    if not ok.any():
        raise RuntimeError("no descent start converged; raise max_iter")

    curvature_scale = 2.0 * w0 + 8.0 * (we * we + wm * wm) / w
    saddle_tol = -1e-9 * curvature_scale
    candidates = [
        (u[i], v[i], e[i])
        for i in range(len(su))
        if ok[i] and _hessian_min_eigenvalue(u[i], v[i], params) >= saddle_tol
    ]
    if not candidates:
        raise RuntimeError("descent only reached saddle points; raise max_iter")

    e_min = min(c[2] for c in candidates)
    keep = [c for c in candidates if c[2] <= e_min + 1e-8 * w]
    keep.sort(key=lambda c: (math.atan2(c[1], c[0]) % (2.0 * math.pi), c[0] * c[0] + c[1] * c[1]))
    distinct = []
    for cu, cv, ce in keep:
        if all((cu - du) ** 2 + (cv - dv) ** 2 > dedup_tol**2 for du, dv, _ in distinct):
            distinct.append((cu, cv, ce))

    phase = classify_phase(params, tol_sym)
    rn = math.sqrt(params.n_spins)
    out = []
    for cu, cv, _ in distinct:
        beta = complex(cu * rn, cv * rn)
        theta = math.atan2(cv, cu) if phase is Phase.EM else None
        out.append(
            OrderParameters(eliminate_alpha(beta, params), beta, phase, params.n_spins, theta)
        )
    return tuple(out)


def _minimized_energy_scaled(
    w: float, w0: float, we: float, wm: float, grad_tol: float, max_iter: int
) -> float:
    """Per-spin minimum of the reduced energy (multistart, no bookkeeping)."""
    su, sv = _start_points()
    _, _, e, _, ok = kernels.multistart(su, sv, w, w0, we, wm, grad_tol * w, max_iter)
    if not ok.any():
        raise RuntimeError("no descent start converged; raise max_iter")
    return float(e[ok].min())


def valley_energies(
    params: ModelParams,
    n_theta: int = 360,
    grad_tol: float = GRAD_TOL,
    max_iter: int = MAX_ITER,
) -> np.ndarray:
    """Minimum energy per spin along n_theta rays from the origin.

    With equal couplings the gradient is radial, so each descent stays on its
    ray and the returned array samples the energy around the degenerate
    valley; any angular variation is purely numerical.  Off the diagonal the
    descents leave their rays and drain into the discrete minima instead, so
    this is only a flatness probe for the EM phase.
    """
    w, w0 = params.omega, params.omega0
    we, wm = params.omega_E, params.omega_M
    out = np.empty(n_theta)
    for k in range(n_theta):
        angle = 2.0 * math.pi * k / n_theta
        u, v = 0.7 * math.cos(angle), 0.7 * math.sin(angle)
        _, _, e, _, _, converged = kernels.descend(
            u, v, w, w0, we, wm, grad_tol * w, max_iter
        )
        if not converged:
            raise RuntimeError(f"radial descent at angle {angle} did not converge")
        out[k] = e
    return out


# ---------------------------------------------------------------------------
# landscape grids


@dataclass(frozen=True)
class GridSpec:
    """Rectangular sampling of the scaled (Re beta, Im beta) plane."""

    n_re: int = 201
    n_im: int = 201
    re_range: Tuple[float, float] = (-1.0, 1.0)
    im_range: Tuple[float, float] = (-1.0, 1.0)

    def __post_init__(self):
        if self.n_re < 2 or self.n_im < 2:
            raise ValueError("grid needs at least 2 points per axis")
        if self.re_range[0] >= self.re_range[1] or self.im_range[0] >= self.im_range[1]:
            raise ValueError("grid ranges must be increasing")

    def axes(self) -> Tuple[np.ndarray, np.ndarray]:
        return (
            np.linspace(self.re_range[0], self.re_range[1], self.n_re),
            np.linspace(self.im_range[0], self.im_range[1], self.n_im),
        )


@dataclass(frozen=True)
class LandscapeGrid:
    """Reduced energy per spin sampled on a grid.

    energy[i, j] belongs to (re_axis[i], im_axis[j]); entries outside the
    unit disk are NaN and flagged False in valid.
    """

    re_axis: np.ndarray
    im_axis: np.ndarray
    energy: np.ndarray
    valid: np.ndarray
    params: ModelParams

    def minimum_cells(self, tol: float = 1e-10) -> list:
        """Indices of all grid cells within tol of the grid minimum."""
        lowest = np.nanmin(self.energy)
        rows, cols = np.nonzero(self.energy <= lowest + tol)
        return list(zip(rows.tolist(), cols.tolist()))


def landscape(params: ModelParams, grid: GridSpec = GridSpec()) -> LandscapeGrid:
    """Evaluate the reduced per-spin energy over a grid."""
    re_axis, im_axis = grid.axes()
    energy, valid = kernels.landscape_fill(
        re_axis, im_axis, params.omega, params.omega0, params.omega_E, params.omega_M
    )
    return LandscapeGrid(re_axis, im_axis, energy, valid, params)


# ---------------------------------------------------------------------------
# transition order along coupling-space paths


@dataclass(frozen=True)
class CouplingPath:
    """Straight segment in the (omega_E, omega_M) plane."""

    start: Tuple[float, float]
    end: Tuple[float, float]

    def __post_init__(self):
        if self.start == self.end:
            raise ValueError("path endpoints coincide")
        for we, wm in (self.start, self.end):
            if we < 0.0 or wm < 0.0:
                raise ValueError("couplings along the path must be non-negative")

    def point(self, t: float) -> Tuple[float, float]:
        return (
            self.start[0] + t * (self.end[0] - self.start[0]),
            self.start[1] + t * (self.end[1] - self.start[1]),
        )

    def length(self) -> float:
        return math.hypot(self.end[0] - self.start[0], self.end[1] - self.start[1])


@dataclass(frozen=True)
class TransitionReport:
    """Outcome of a transition-order measurement along one path.

    order is "first", "second" or "none"; the jumps are the measured
    discontinuities in the first and second directional derivatives of the
    energy density across the crossing, and the margins are those jumps over
    their thresholds (> 1 means detected).
    """

    path: CouplingPath
    crossing: Optional[Tuple[float, float]]
    phases: Optional[Tuple[Phase, Phase]]
    order: str
    first_jump: float
    second_jump: float
    first_margin: float
    second_margin: float


def _phase_runs(labels: Sequence[Phase]) -> list:
    runs = []
    for i, lab in enumerate(labels):
        if runs and runs[-1][0] is lab:
            runs[-1][2] = i
        else:
            runs.append([lab, i, i])
    return runs


def _locate_crossing(path, params, scan_points, tol_sym):
    """Bisect the single phase boundary crossed by the path, or None."""

    def label(t: float) -> Phase:
        we, wm = path.point(t)
        return classify_phase(params.with_couplings(we, wm), tol_sym)

    ts = np.linspace(0.0, 1.0, scan_points)
    labels = [label(t) for t in ts]
    runs = _phase_runs(labels)
    if len(runs) == 1:
        return None
    if len(runs) == 3 and runs[1][0] is Phase.EM and runs[1][2] - runs[1][1] <= 1:
        # grazing sample exactly on the diagonal inside an X -> EM -> Y
        # crossing: a single physical boundary
        lo, hi = ts[runs[0][2]], ts[runs[2][1]]
    elif len(runs) == 2:
        lo, hi = ts[runs[0][2]], ts[runs[1][1]]
    else:
        raise ValueError(
            f"path crosses more than one phase boundary: {[str(r[0]) for r in runs]}"
        )
    left = label(lo)
    for _ in range(100):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if label(mid) is left:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi), labels[0], labels[-1]


def transition_order(
    path: CouplingPath,
    params: ModelParams,
    step: float = 1e-3,
    scan_points: int = 401,
    first_threshold: float = _FIRST_ORDER_THRESHOLD,
    second_threshold: float = _SECOND_ORDER_THRESHOLD,
    tol_sym: float = SYMMETRY_TOL,
    grad_tol: float = GRAD_TOL,
    max_iter: int = MAX_ITER,
) -> TransitionReport:
    """Classify the transition where the path crosses a phase boundary.

    The minimized energy density is sampled at five points on each side of
    the crossing, spaced step * omega along the path direction, and one-sided
    5-point stencils give the directional derivatives from either side.  A
    first-derivative jump above first_threshold means a first-order
    transition; otherwise a second-derivative jump above
    second_threshold / omega means second order.  Paths that never leave
    their phase report order "none".
    """
    located = _locate_crossing(path, params, scan_points, tol_sym)
    if located is None:
        return TransitionReport(path, None, None, "none", 0.0, 0.0, 0.0, 0.0)
    t_star, phase_from, phase_to = located
    cx, cy = path.point(t_star)
    direction = (
        (path.end[0] - path.start[0]) / path.length(),
        (path.end[1] - path.start[1]) / path.length(),
    )
    h = step * params.omega

    def density(s: float) -> float:
        we = cx + s * direction[0]
        wm = cy + s * direction[1]
        return _minimized_energy_scaled(
            params.omega, params.omega0, max(we, 0.0), max(wm, 0.0), grad_tol, max_iter
        )

    def one_sided(signed_h: float):
        f = [density(k * signed_h) for k in range(5)]
        d1 = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / (
            12.0 * signed_h
        )
        d2 = (35.0 * f[0] - 104.0 * f[1] + 114.0 * f[2] - 56.0 * f[3] + 11.0 * f[4]) / (
            12.0 * signed_h * signed_h
        )
        return d1, d2

    d1_plus, d2_plus = one_sided(h)
    d1_minus, d2_minus = one_sided(-h)
    first_jump = abs(d1_plus - d1_minus)
    second_jump = abs(d2_plus - d2_minus)
    first_margin = first_jump / first_threshold
    second_margin = second_jump / (second_threshold / params.omega)
    if first_margin > 1.0:
        order = "first"
    elif second_margin > 1.0:
        order = "second"
    else:
        order = "none"
    return TransitionReport(
        path,
        (cx, cy),
        (phase_from, phase_to),
        order,
        first_jump,
        second_jump,
        first_margin,
        second_margin,
    )
