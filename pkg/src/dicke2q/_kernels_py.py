"""Pure-Python mean-field kernels.

Fallback used when the compiled extension is unavailable (see kernels.py for
the selection logic).  Every expression here is written in the same order as
in the compiled source so both backends produce identical floating-point
results; keep the two files in sync when touching either.

All kernels work in scaled coordinates u + i v = beta / sqrt(N), where the
reduced per-spin energy after eliminating the boson amplitude is

    e(u, v) = omega0 (u^2 + v^2)
              - (4 / omega) (omega_E^2 u^2 + omega_M^2 v^2) (1 - u^2 - v^2)

on the closed unit disk u^2 + v^2 <= 1.
"""

import math

import numpy as np

BACKEND = "python"

ARMIJO = 1e-4
STEP_GROW = 4.0
STEP_MIN = 1e-20
#: Hessian eigenvalues below FLOOR_FACTOR * curvature scale are treated as
#: flat directions during the Newton polish
FLOOR_FACTOR = 1e-9
#: a stalled search still counts as converged below this gradient scale
STALL_ACCEPT = 1e-6
POLISH_MAX = 30


def energy_scaled(u, v, omega, omega0, we, wm):
    """Reduced per-spin energy at the scaled spin coherence (u, v)."""
    r2 = u * u + v * v
    return omega0 * r2 - 4.0 / omega * (we * we * u * u + wm * wm * v * v) * (1.0 - r2)


def gradient_scaled(u, v, omega, omega0, we, wm):
    """Gradient (de/du, de/dv) of energy_scaled."""
    r2 = u * u + v * v
    acc = we * we * u * u + wm * wm * v * v
    rem = 1.0 - r2
    gu = 2.0 * omega0 * u - 8.0 * u / omega * (we * we * rem - acc)
    gv = 2.0 * omega0 * v - 8.0 * v / omega * (wm * wm * rem - acc)
    return gu, gv


def hessian_scaled(u, v, omega, omega0, we, wm):
    """Hessian entries (e_uu, e_vv, e_uv) of energy_scaled."""
    r2 = u * u + v * v
    acc = we * we * u * u + wm * wm * v * v
    rem = 1.0 - r2
    huu = 2.0 * omega0 - 8.0 / omega * (we * we * rem - acc) + 32.0 * we * we * u * u / omega
    hvv = 2.0 * omega0 - 8.0 / omega * (wm * wm * rem - acc) + 32.0 * wm * wm * v * v / omega
    huv = 16.0 * u * v / omega * (we * we + wm * wm)
    return huu, hvv, huv


def descend(u, v, omega, omega0, we, wm, gtol, max_iter):
    """Find a minimum of the scaled energy inside the open unit disk.

    Gradient descent with a backtracking (and regrowing) line search, then a
    guarded Newton polish: steps are taken only along Hessian eigendirections
    with clearly positive curvature, which drives the gradient to rounding
    level without blowing up in flat valleys.  The search counts as converged
    when the gradient norm reaches gtol, or when no float-representable
    energy decrease remains and the gradient already sits at the flatness
    floor STALL_ACCEPT * curvature scale.

    Returns (u, v, energy, grad_norm, iterations, converged).
    """
    r2 = u * u + v * v
    if r2 >= 1.0:
        shrink = 0.999 / math.sqrt(r2)
        u = u * shrink
        v = v * shrink
    cscale = 2.0 * omega0 + 8.0 * (we * we + wm * wm) / omega + omega
    step = 1.0 / cscale
    e = energy_scaled(u, v, omega, omega0, we, wm)
    g2tol = gtol * gtol
    gu, gv = gradient_scaled(u, v, omega, omega0, we, wm)
    g2 = gu * gu + gv * gv
    stalled = False
    iters = 0
    while iters < max_iter:
        if g2 <= g2tol:
            return u, v, e, math.sqrt(g2), iters, True
        iters += 1
        step = step * STEP_GROW
        while True:
            if step < STEP_MIN:
                stalled = True
                break
            un = u - step * gu
            vn = v - step * gv
            if un * un + vn * vn < 1.0:
                en = energy_scaled(un, vn, omega, omega0, we, wm)
                # strict <: once ARMIJO*step*g2 underflows below the float
                # resolution of e, a non-strict test would accept zero-progress
                # steps forever instead of hitting the stall exit
                if en < e - ARMIJO * step * g2:
                    break
            step = step * 0.5
        if stalled:
            break
        u = un
        v = vn
        e = en
        gu, gv = gradient_scaled(u, v, omega, omega0, we, wm)
        g2 = gu * gu + gv * gv

    floor = FLOOR_FACTOR * cscale
    for _ in range(POLISH_MAX):
        if g2 <= g2tol:
            break
        huu, hvv, huv = hessian_scaled(u, v, omega, omega0, we, wm)
        mean = 0.5 * (huu + hvv)
        half = 0.5 * (huu - hvv)
        spread = math.sqrt(half * half + huv * huv)
        lam1 = mean + spread
        lam2 = mean - spread
        if lam1 <= floor:
            break
        ax = huv
        ay = lam1 - huu
        bx = lam1 - hvv
        by = huv
        if ax * ax + ay * ay >= bx * bx + by * by:
            ex, ey = ax, ay
        else:
            ex, ey = bx, by
        norm = math.sqrt(ex * ex + ey * ey)
        if norm < 1e-300:
            ex, ey = 1.0, 0.0
        else:
            ex = ex / norm
            ey = ey / norm
        px = -ey
        py = ex
        c1 = gu * ex + gv * ey
        su = -(c1 / lam1) * ex
        sv = -(c1 / lam1) * ey
        if lam2 > floor:
            c2 = gu * px + gv * py
            su = su - (c2 / lam2) * px
            sv = sv - (c2 / lam2) * py
        un = u + su
        vn = v + sv
        if un * un + vn * vn >= 1.0:
            break
        ngu, ngv = gradient_scaled(un, vn, omega, omega0, we, wm)
        ng2 = ngu * ngu + ngv * ngv
        if ng2 >= g2:
            break
        u = un
        v = vn
        gu = ngu
        gv = ngv
        g2 = ng2

    e = energy_scaled(u, v, omega, omega0, we, wm)
    stall_floor = STALL_ACCEPT * cscale
    converged = g2 <= g2tol or (stalled and g2 <= stall_floor * stall_floor)
    return u, v, e, math.sqrt(g2), iters, converged


def multistart(starts_u, starts_v, omega, omega0, we, wm, gtol, max_iter):
    """Run descend from each start; returns (u, v, energy, grad_norm, ok) arrays."""
    n = len(starts_u)
    out_u = np.empty(n)
    out_v = np.empty(n)
    out_e = np.empty(n)
    out_g = np.empty(n)
    out_ok = np.empty(n, dtype=bool)
    for i in range(n):
        u, v, e, g, _, ok = descend(
            float(starts_u[i]), float(starts_v[i]), omega, omega0, we, wm, gtol, max_iter
        )
        out_u[i] = u
        out_v[i] = v
        out_e[i] = e
        out_g[i] = g
        out_ok[i] = ok
    return out_u, out_v, out_e, out_g, out_ok


def landscape_fill(re_axis, im_axis, omega, omega0, we, wm):
    """Energy over the (re, im) grid; NaN outside the closed unit disk.

    Returns (energy, valid) with energy[i, j] evaluated at
    (re_axis[i], im_axis[j]).
    """
    u = np.asarray(re_axis, dtype=float)[:, None]
    v = np.asarray(im_axis, dtype=float)[None, :]
    r2 = u * u + v * v
    energy = omega0 * r2 - 4.0 / omega * (we * we * u * u + wm * wm * v * v) * (1.0 - r2)
    valid = r2 <= 1.0
    return np.where(valid, energy, np.nan), valid
