# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels. Mirrors ``_pycore`` routine for routine."""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, sin, cos, tanh, cosh, floor, fabs, pow, M_PI

cnp.import_array()

cdef double EPS = 2.220446049250313e-16
cdef double _RF_Q = pow(3.0 * EPS, -1.0 / 6.0)
cdef double _RD_Q = pow(EPS / 4.0, -1.0 / 6.0)

SIMPSON_TOL = 1e-12
SIMPSON_DEPTH = 40
cdef double _TOL = 1e-12
cdef int _DEPTH = 40

ctypedef double (*integrand_t)(double) noexcept nogil


cdef inline double _max3(double a, double b, double c) noexcept nogil:
    if b > a:
        a = b
    if c > a:
        a = c
    return a


cpdef double agm_K(double k):
    cdef double a = 1.0
    cdef double b = sqrt((1.0 - k) * (1.0 + k))
    cdef double t
    cdef int i
    for i in range(64):
        if fabs(a - b) <= 4.0 * EPS * a:
            break
        t = 0.5 * (a + b)
        b = sqrt(a * b)
        a = t
    return M_PI / (a + b)


cpdef double carlson_rf(double x, double y, double z):
    cdef double x0 = x, y0 = y, z0 = z
    cdef double A0 = (x + y + z) / 3.0
    cdef double Q = _RF_Q * _max3(fabs(A0 - x), fabs(A0 - y), fabs(A0 - z))
    cdef double A = A0, f = 1.0
    cdef double sx, sy, sz, lam, X, Y, Z, E2, E3
    while f * Q >= fabs(A):
        sx = sqrt(x)
        sy = sqrt(y)
        sz = sqrt(z)
        lam = sx * sy + sx * sz + sy * sz
        x = 0.25 * (x + lam)
        y = 0.25 * (y + lam)
        z = 0.25 * (z + lam)
        A = 0.25 * (A + lam)
        f *= 0.25
    X = f * (A0 - x0) / A
    Y = f * (A0 - y0) / A
    Z = -(X + Y)
    E2 = X * Y - Z * Z
    E3 = X * Y * Z
    return (1.0 - E2 / 10.0 + E3 / 14.0 + E2 * E2 / 24.0
            - 3.0 * E2 * E3 / 44.0) / sqrt(A)


cpdef double carlson_rd(double x, double y, double z):
    cdef double x0 = x, y0 = y, z0 = z
    cdef double A0 = (x + y + 3.0 * z) / 5.0
    cdef double Q = _RD_Q * _max3(fabs(A0 - x), fabs(A0 - y), fabs(A0 - z))
    cdef double A = A0, f = 1.0, acc = 0.0
    cdef double sx, sy, sz, lam, X, Y, Z, XY, Z2, E2, E3, E4, E5, series
    while f * Q >= fabs(A):
        sx = sqrt(x)
        sy = sqrt(y)
        sz = sqrt(z)
        lam = sx * sy + sx * sz + sy * sz
        acc += f / (sz * (z + lam))
        x = 0.25 * (x + lam)
        y = 0.25 * (y + lam)
        z = 0.25 * (z + lam)
        A = 0.25 * (A + lam)
        f *= 0.25
    X = f * (A0 - x0) / A
    Y = f * (A0 - y0) / A
    Z = -(X + Y) / 3.0
    XY = X * Y
    Z2 = Z * Z
    E2 = XY - 6.0 * Z2
    E3 = (3.0 * XY - 8.0 * Z2) * Z
    E4 = 3.0 * (XY - Z2) * Z2
    E5 = XY * Z2 * Z
    series = (1.0 - 3.0 * E2 / 14.0 + E3 / 6.0 + 9.0 * E2 * E2 / 88.0
              - 3.0 * E4 / 22.0 - 9.0 * E2 * E3 / 52.0 + 3.0 * E5 / 26.0)
    return f * series / (A * sqrt(A)) + 3.0 * acc


cpdef double ellip_f(double phi, double k):
    cdef double s = sin(phi), c = cos(phi)
    return s * carlson_rf(c * c, 1.0 - k * k * s * s, 1.0)


cpdef double ellip_e(double phi, double k):
    cdef double s = sin(phi), c = cos(phi)
    cdef double c2 = c * c
    cdef double d2 = 1.0 - k * k * s * s
    return s * carlson_rf(c2, d2, 1.0) - k * k * s * s * s * carlson_rd(c2, d2, 1.0) / 3.0


cpdef double amplitude_quarter(double r, double k, double K):
    cdef double lo = 0.0, hi = 0.5 * M_PI
    cdef double phi, res, s, step, nxt, k2 = k * k
    cdef int i
    if r <= 0.0:
        return 0.0
    if r >= K:
        return 0.5 * M_PI
    phi = 0.5 * M_PI * r / K
    for i in range(100):
        res = ellip_f(phi, k) - r
        if res > 0.0:
            hi = phi
        else:
            lo = phi
        s = sin(phi)
        step = res * sqrt(1.0 - k2 * s * s)
        nxt = phi - step
        if not (lo < nxt < hi):
            nxt = 0.5 * (lo + hi)
        if fabs(nxt - phi) <= 2.0 * EPS * (phi if phi > 1.0 else 1.0) or hi - lo <= 2.0 * EPS:
            return nxt
        phi = nxt
    return phi


cdef void _jacobi(double x, double k, double K, double* out) noexcept:
    cdef double sign = 1.0, c, K_hi, K_lo, q, r, phi, s, co, d, kp
    cdef long quad
    if k >= 1.0:
        out[0] = tanh(x)
        out[1] = 1.0 / cosh(x)
        out[2] = out[1]
        return
    if x < 0.0:
        sign = -1.0
        x = -x
    c = 134217729.0 * K
    K_hi = c - (c - K)
    K_lo = K - K_hi
    q = floor(x / K)
    r = (x - q * K_hi) - q * K_lo
    if r < 0.0:
        q -= 1.0
        r += K
    elif r >= K:
        q += 1.0
        r -= K
    phi = amplitude_quarter(r, k, K)
    s = sin(phi)
    co = cos(phi)
    d = sqrt(1.0 - k * k * s * s)
    kp = sqrt((1.0 - k) * (1.0 + k))
    quad = (<long>q) % 4
    if quad == 0:
        out[0] = s
        out[1] = co
        out[2] = d
    elif quad == 1:
        out[0] = co / d
        out[1] = -kp * s / d
        out[2] = kp / d
    elif quad == 2:
        out[0] = -s
        out[1] = -co
        out[2] = d
    else:
        out[0] = -co / d
        out[1] = kp * s / d
        out[2] = kp / d
    out[0] *= sign


def jacobi(double x, double k):
    cdef double out[3]
    cdef double K = agm_K(k) if k < 1.0 else 0.0
    _jacobi(x, k, K, out)
    return out[0], out[1], out[2]


def jacobi_array(x, double k):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] flat = np.ascontiguousarray(x, dtype=np.float64).ravel()
    cdef Py_ssize_t n = flat.shape[0], i
    cdef cnp.ndarray[cnp.float64_t, ndim=1] sn = np.empty(n)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] cn = np.empty(n)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] dn = np.empty(n)
    cdef double out[3]
    cdef double K = agm_K(k) if k < 1.0 else 0.0
    for i in range(n):
        _jacobi(flat[i], k, K, out)
        sn[i] = out[0]
        cn[i] = out[1]
        dn[i] = out[2]
    shape = np.shape(x)
    return sn.reshape(shape), cn.reshape(shape), dn.reshape(shape)


cdef double _simpson_step(integrand_t f, double a, double m, double b, double fa,
                          double fm, double fb, double whole, double tol,
                          int depth) noexcept nogil:
    cdef double lm = 0.5 * (a + m)
    cdef double rm = 0.5 * (m + b)
    cdef double flm = f(lm)
    cdef double frm = f(rm)
    cdef double left = (m - a) * (fa + 4.0 * flm + fm) / 6.0
    cdef double right = (b - m) * (fm + 4.0 * frm + fb) / 6.0
    cdef double delta = left + right - whole
    if depth <= 0 or fabs(delta) <= 15.0 * tol:
        return left + right + delta / 15.0
    return (_simpson_step(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + _simpson_step(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1))


cdef double _simpson(integrand_t f, double a, double b, double tol, int depth) noexcept nogil:
    cdef double m = 0.5 * (a + b)
    cdef double fa = f(a), fm = f(m), fb = f(b)
    cdef double whole = (b - a) * (fa + 4.0 * fm + fb) / 6.0
    return _simpson_step(f, a, m, b, fa, fm, fb, whole, tol, depth)


cdef double _half_elastica_integrand(double v) noexcept nogil:
    cdef double s = sin(v), c = cos(v)
    return c * c / sqrt(1.0 - 0.5 * s * s)


cdef double _sqrt_cos_substituted(double v) noexcept nogil:
    return 2.0 * v * sqrt(sin(v * v))


cpdef double primitive_amp(double a, double b):
    if a == b:
        return 0.0
    return _simpson(_half_elastica_integrand, a, b, _TOL, _DEPTH)


def primitive_amp_array(a, b):
    a_b, b_b = np.broadcast_arrays(np.asarray(a, dtype=np.float64), np.asarray(b, dtype=np.float64))
    shape = a_b.shape
    cdef cnp.ndarray[cnp.float64_t, ndim=1] fa = np.ascontiguousarray(a_b).ravel()
    cdef cnp.ndarray[cnp.float64_t, ndim=1] fb = np.ascontiguousarray(b_b).ravel()
    cdef Py_ssize_t n = fa.shape[0], i
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(n)
    for i in range(n):
        out[i] = primitive_amp(fa[i], fb[i])
    return out.reshape(shape)


cpdef double c_star_integral():
    return _simpson(_sqrt_cos_substituted, 0.0, sqrt(0.5 * M_PI), _TOL, _DEPTH)


def graph_energy_grad(u_in, double dx):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] u = np.ascontiguousarray(u_in, dtype=np.float64)
    cdef Py_ssize_t n = u.shape[0], i
    cdef cnp.ndarray[cnp.float64_t, ndim=1] grad = np.zeros(n)
    cdef double inv2 = 1.0 / (2.0 * dx), invsq = 1.0 / (dx * dx)
    cdef double energy = 0.0, d1, d2, q, a, w, g1, g2
    for i in range(n):
        if i == 0:
            d1 = (-3.0 * u[0] + 4.0 * u[1] - u[2]) * inv2
            d2 = (2.0 * u[0] - 5.0 * u[1] + 4.0 * u[2] - u[3]) * invsq
            w = 0.5 * dx
        elif i == n - 1:
            d1 = (3.0 * u[i] - 4.0 * u[i - 1] + u[i - 2]) * inv2
            d2 = (2.0 * u[i] - 5.0 * u[i - 1] + 4.0 * u[i - 2] - u[i - 3]) * invsq
            w = 0.5 * dx
        else:
            d1 = (u[i + 1] - u[i - 1]) * inv2
            d2 = (u[i + 1] - 2.0 * u[i] + u[i - 1]) * invsq
            w = dx
        q = 1.0 + d1 * d1
        a = 1.0 / (q * q * sqrt(q))
        energy += w * d2 * d2 * a
        g2 = w * 2.0 * d2 * a
        g1 = w * (-5.0) * d1 * d2 * d2 * a / q
        if i == 0:
            grad[0] += -3.0 * g1 * inv2 + 2.0 * g2 * invsq
            grad[1] += 4.0 * g1 * inv2 - 5.0 * g2 * invsq
            grad[2] += -g1 * inv2 + 4.0 * g2 * invsq
            grad[3] += -g2 * invsq
        elif i == n - 1:
            grad[i] += 3.0 * g1 * inv2 + 2.0 * g2 * invsq
            grad[i - 1] += -4.0 * g1 * inv2 - 5.0 * g2 * invsq
            grad[i - 2] += g1 * inv2 + 4.0 * g2 * invsq
            grad[i - 3] += -g2 * invsq
        else:
            grad[i + 1] += g1 * inv2 + g2 * invsq
            grad[i - 1] += -g1 * inv2 + g2 * invsq
            grad[i] += -2.0 * g2 * invsq
    return energy, grad
