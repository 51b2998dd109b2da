# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled mean-field kernels.

Mirror of _kernels_py.py; expressions are kept in the same order so the two
backends produce identical floating-point results (the extension is built
with -ffp-contract=off for the same reason).  Keep both files in sync.
"""

from libc.math cimport sqrt

import numpy as np

BACKEND = "compiled"

cdef double ARMIJO = 1e-4
cdef double STEP_GROW = 4.0
cdef double STEP_MIN = 1e-20
cdef double FLOOR_FACTOR = 1e-9
cdef double STALL_ACCEPT = 1e-6
cdef int POLISH_MAX = 30


cdef inline double _energy(double u, double v, double omega, double omega0,
                           double we, double wm) nogil:
    cdef double r2 = u * u + v * v
    return omega0 * r2 - 4.0 / omega * (we * we * u * u + wm * wm * v * v) * (1.0 - r2)


cdef inline void _gradient(double u, double v, double omega, double omega0,
                           double we, double wm, double* gu, double* gv) nogil:
    cdef double r2 = u * u + v * v
    cdef double acc = we * we * u * u + wm * wm * v * v
    cdef double rem = 1.0 - r2
    gu[0] = 2.0 * omega0 * u - 8.0 * u / omega * (we * we * rem - acc)
    gv[0] = 2.0 * omega0 * v - 8.0 * v / omega * (wm * wm * rem - acc)


cdef inline void _hessian(double u, double v, double omega, double omega0,
                          double we, double wm,
                          double* huu, double* hvv, double* huv) nogil:
    cdef double r2 = u * u + v * v
    cdef double acc = we * we * u * u + wm * wm * v * v
    cdef double rem = 1.0 - r2
    huu[0] = 2.0 * omega0 - 8.0 / omega * (we * we * rem - acc) + 32.0 * we * we * u * u / omega
    hvv[0] = 2.0 * omega0 - 8.0 / omega * (wm * wm * rem - acc) + 32.0 * wm * wm * v * v / omega
    huv[0] = 16.0 * u * v / omega * (we * we + wm * wm)


cdef int _descend(double* pu, double* pv, double omega, double omega0,
                  double we, double wm, double gtol, long max_iter,
                  double* pe, double* pg, long* pit) nogil:
    cdef double u = pu[0]
    cdef double v = pv[0]
    cdef double r2 = u * u + v * v
    cdef double shrink, cscale, step, e, g2tol, gu, gv, g2, un, vn, en
    cdef double floor_, huu, hvv, huv, mean, half, spread, lam1, lam2
    cdef double ax, ay, bx, by, ex, ey, px, py, norm, c1, c2, su, sv
    cdef double ngu, ngv, ng2, stall_floor
    cdef long iters
    cdef int stalled = 0
    cdef int inner_done
    cdef int k
    if r2 >= 1.0:
        shrink = 0.999 / sqrt(r2)
        u = u * shrink
        v = v * shrink
    cscale = 2.0 * omega0 + 8.0 * (we * we + wm * wm) / omega + omega
    step = 1.0 / cscale
    e = _energy(u, v, omega, omega0, we, wm)
    g2tol = gtol * gtol
    _gradient(u, v, omega, omega0, we, wm, &gu, &gv)
    g2 = gu * gu + gv * gv
    iters = 0
    while iters < max_iter:
        if g2 <= g2tol:
            pu[0] = u; pv[0] = v; pe[0] = e; pg[0] = sqrt(g2); pit[0] = iters
            return 1
        iters = iters + 1
        step = step * STEP_GROW
        un = u
        vn = v
        en = e
        inner_done = 0
        while inner_done == 0:
            if step < STEP_MIN:
                stalled = 1
                inner_done = 1
            else:
                un = u - step * gu
                vn = v - step * gv
                if un * un + vn * vn < 1.0:
                    en = _energy(un, vn, omega, omega0, we, wm)
                    # strict <: once ARMIJO*step*g2 underflows below the float
                    # resolution of e, a non-strict test would accept
                    # zero-progress steps forever instead of stalling out
                    if en < e - ARMIJO * step * g2:
                        inner_done = 1
                    else:
                        step = step * 0.5
                else:
                    step = step * 0.5
        if stalled == 1:
            break
        u = un
        v = vn
        e = en
        _gradient(u, v, omega, omega0, we, wm, &gu, &gv)
        g2 = gu * gu + gv * gv

    floor_ = FLOOR_FACTOR * cscale
    for k in range(POLISH_MAX):
        if g2 <= g2tol:
            break
        _hessian(u, v, omega, omega0, we, wm, &huu, &hvv, &huv)
        mean = 0.5 * (huu + hvv)
        half = 0.5 * (huu - hvv)
        spread = sqrt(half * half + huv * huv)
        lam1 = mean + spread
        lam2 = mean - spread
        if lam1 <= floor_:
            break
        ax = huv
        ay = lam1 - huu
        bx = lam1 - hvv
        by = huv
        if ax * ax + ay * ay >= bx * bx + by * by:
            ex = ax
            ey = ay
        else:
            ex = bx
            ey = by
        norm = sqrt(ex * ex + ey * ey)
        if norm < 1e-300:
            ex = 1.0
            ey = 0.0
        else:
            ex = ex / norm
            ey = ey / norm
        px = -ey
        py = ex
        c1 = gu * ex + gv * ey
        su = -(c1 / lam1) * ex
        sv = -(c1 / lam1) * ey
        if lam2 > floor_:
            c2 = gu * px + gv * py
            su = su - (c2 / lam2) * px
            sv = sv - (c2 / lam2) * py
        un = u + su
        vn = v + sv
        if un * un + vn * vn >= 1.0:
            break
        _gradient(un, vn, omega, omega0, we, wm, &ngu, &ngv)
        ng2 = ngu * ngu + ngv * ngv
        if ng2 >= g2:
            break
        u = un
        v = vn
        gu = ngu
        gv = ngv
        g2 = ng2

    pe[0] = _energy(u, v, omega, omega0, we, wm)
    stall_floor = STALL_ACCEPT * cscale
    pu[0] = u
    pv[0] = v
    pg[0] = sqrt(g2)
    pit[0] = iters
    if g2 <= g2tol:
        return 1
    if stalled == 1 and g2 <= stall_floor * stall_floor:
        return 1
    return 0


def energy_scaled(double u, double v, double omega, double omega0, double we, double wm):
    """Reduced per-spin energy at the scaled spin coherence (u, v)."""
    return _energy(u, v, omega, omega0, we, wm)


def gradient_scaled(double u, double v, double omega, double omega0, double we, double wm):
    """Gradient (de/du, de/dv) of energy_scaled."""
    cdef double gu, gv
    _gradient(u, v, omega, omega0, we, wm, &gu, &gv)
    return gu, gv


def hessian_scaled(double u, double v, double omega, double omega0, double we, double wm):
    """Hessian entries (e_uu, e_vv, e_uv) of energy_scaled."""
    cdef double huu, hvv, huv
    _hessian(u, v, omega, omega0, we, wm, &huu, &hvv, &huv)
    return huu, hvv, huv


def descend(double u, double v, double omega, double omega0, double we, double wm,
            double gtol, long max_iter):
    """Same contract as the fallback implementation: descent with
    backtracking plus a guarded Newton polish; returns
    (u, v, energy, grad_norm, iterations, converged)."""
    cdef double e = 0.0, g = 0.0
    cdef long it = 0
    cdef int ok = _descend(&u, &v, omega, omega0, we, wm, gtol, max_iter, &e, &g, &it)
    return u, v, e, g, it, bool(ok)


def multistart(starts_u, starts_v, double omega, double omega0, double we, double wm,
               double gtol, long max_iter):
    """Run descend from each start; returns (u, v, energy, grad_norm, ok) arrays."""
    cdef double[::1] su = np.ascontiguousarray(starts_u, dtype=np.float64)
    cdef double[::1] sv = np.ascontiguousarray(starts_v, dtype=np.float64)
    n = su.shape[0]
    out_u = np.empty(n)
    out_v = np.empty(n)
    out_e = np.empty(n)
    out_g = np.empty(n)
    out_ok = np.empty(n, dtype=bool)
    cdef double[::1] mu = out_u
    cdef double[::1] mv = out_v
    cdef double[::1] me = out_e
    cdef double[::1] mg = out_g
    cdef double u, v, e, g
    cdef long it
    cdef int ok
    cdef Py_ssize_t i
    for i in range(n):
        u = su[i]
        v = sv[i]
        ok = _descend(&u, &v, omega, omega0, we, wm, gtol, max_iter, &e, &g, &it)
        mu[i] = u
        mv[i] = v
        me[i] = e
        mg[i] = g
        out_ok[i] = bool(ok)
    return out_u, out_v, out_e, out_g, out_ok


def landscape_fill(re_axis, im_axis, double omega, double omega0, double we, double wm):
    """Energy over the (re, im) grid; NaN outside the closed unit disk."""
    cdef double[::1] us = np.ascontiguousarray(re_axis, dtype=np.float64)
    cdef double[::1] vs = np.ascontiguousarray(im_axis, dtype=np.float64)
    cdef Py_ssize_t nu = us.shape[0]
    cdef Py_ssize_t nv = vs.shape[0]
    energy = np.empty((nu, nv))
    valid = np.empty((nu, nv), dtype=bool)
    cdef double[:, ::1] em = energy
    cdef double nan = float("nan")
    cdef double u, v, r2
    cdef Py_ssize_t i, j
    with nogil:
        for i in range(nu):
            u = us[i]
            for j in range(nv):
                v = vs[j]
                r2 = u * u + v * v
                if r2 <= 1.0:
                    em[i, j] = omega0 * r2 - 4.0 / omega * (we * we * u * u + wm * wm * v * v) * (1.0 - r2)
                else:
                    em[i, j] = nan
    np.less_equal(
        np.add.outer(np.square(np.asarray(us)), np.square(np.asarray(vs))), 1.0, out=valid
    )
    return energy, valid
