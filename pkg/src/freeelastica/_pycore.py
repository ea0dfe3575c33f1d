"""Pure-Python kernels.

Reference implementation of every routine in ``_core.pyx``. The compiled
module is preferred at import time (see ``_kernels``); this one is used when
the extension is unavailable or ``FREEELASTICA_PURE_PYTHON`` is set.
"""

import math

import numpy as np

EPS = 2.220446049250313e-16
_RF_Q = (3.0 * EPS) ** (-1.0 / 6.0)
_RD_Q = (EPS / 4.0) ** (-1.0 / 6.0)

SIMPSON_TOL = 1e-12
SIMPSON_DEPTH = 40

SQRT_HALF = math.sqrt(0.5)


def agm_K(k):
    """Complete elliptic integral of the first kind by the AGM, 0 <= k < 1."""
    a = 1.0
    b = math.sqrt((1.0 - k) * (1.0 + k))
    for _ in range(64):
        if abs(a - b) <= 4.0 * EPS * a:
            break
        a, b = 0.5 * (a + b), math.sqrt(a * b)
    return math.pi / (a + b)


def carlson_rf(x, y, z):
    """Carlson's symmetric integral R_F by duplication."""
    x0, y0, z0 = x, y, z
    A0 = (x + y + z) / 3.0
    Q = _RF_Q * max(abs(A0 - x), abs(A0 - y), abs(A0 - z))
    A = A0
    f = 1.0
    while f * Q >= abs(A):
        sx, sy, sz = math.sqrt(x), math.sqrt(y), math.sqrt(z)
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
            - 3.0 * E2 * E3 / 44.0) / math.sqrt(A)


def carlson_rd(x, y, z):
    """Carlson's symmetric integral R_D by duplication."""
    x0, y0, z0 = x, y, z
    A0 = (x + y + 3.0 * z) / 5.0
    Q = _RD_Q * max(abs(A0 - x), abs(A0 - y), abs(A0 - z))
    A = A0
    f = 1.0
    acc = 0.0
    while f * Q >= abs(A):
        sx, sy, sz = math.sqrt(x), math.sqrt(y), math.sqrt(z)
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
    return f * series / (A * math.sqrt(A)) + 3.0 * acc


def ellip_f(phi, k):
    """Incomplete integral of the first kind for 0 <= phi <= pi/2."""
    s = math.sin(phi)
    c = math.cos(phi)
    return s * carlson_rf(c * c, 1.0 - k * k * s * s, 1.0)


def ellip_e(phi, k):
    """Incomplete integral of the second kind for 0 <= phi <= pi/2."""
    s = math.sin(phi)
    c = math.cos(phi)
    c2 = c * c
    d2 = 1.0 - k * k * s * s
    k2s3 = k * k * s * s * s
    return s * carlson_rf(c2, d2, 1.0) - k2s3 * carlson_rd(c2, d2, 1.0) / 3.0


def amplitude_quarter(r, k, K):
    """Solve F(phi, k) = r for phi in [0, pi/2], given 0 <= r <= K.

    Bracketed Newton on the amplitude integral; the derivative of the
    integral is the integrand (1 - k^2 sin^2 phi)^(-1/2).
    """
    if r <= 0.0:
        return 0.0
    if r >= K:
        return 0.5 * math.pi
    lo = 0.0
    hi = 0.5 * math.pi
    phi = 0.5 * math.pi * r / K
    k2 = k * k
    for _ in range(100):
        res = ellip_f(phi, k) - r
        if res > 0.0:
            hi = phi
        else:
            lo = phi
        s = math.sin(phi)
        step = res * math.sqrt(1.0 - k2 * s * s)
        nxt = phi - step
        if not (lo < nxt < hi):
            nxt = 0.5 * (lo + hi)
        if abs(nxt - phi) <= 2.0 * EPS * max(1.0, phi) or hi - lo <= 2.0 * EPS:
            return nxt
        phi = nxt
    return phi


def _split(v):
    # Veltkamp split so that q * hi is exact for |q| < 2**26.
    c = 134217729.0 * v
    hi = c - (c - v)
    return hi, v - hi


def jacobi(x, k):
    """Return (sn, cn, dn) at argument x for modulus 0 <= k <= 1."""
    if k >= 1.0:
        t = math.tanh(x)
        sech = 1.0 / math.cosh(x)
        return t, sech, sech
    sign = 1.0
    if x < 0.0:
        sign = -1.0
        x = -x
    K = agm_K(k)
    K_hi, K_lo = _split(K)
    q = math.floor(x / K)
    r = (x - q * K_hi) - q * K_lo
    if r < 0.0:
        q -= 1.0
        r += K
    elif r >= K:
        q += 1.0
        r -= K
    phi = amplitude_quarter(r, k, K)
    s = math.sin(phi)
    c = math.cos(phi)
    d = math.sqrt(1.0 - k * k * s * s)
    kp = math.sqrt((1.0 - k) * (1.0 + k))
    quad = int(q) % 4
    if quad == 0:
        sn, cn, dn = s, c, d
    elif quad == 1:
        sn, cn, dn = c / d, -kp * s / d, kp / d
    elif quad == 2:
        sn, cn, dn = -s, -c, d
    else:
        sn, cn, dn = -c / d, kp * s / d, kp / d
    return sign * sn, cn, dn


def jacobi_array(x, k):
    x = np.asarray(x, dtype=float)
    flat = x.ravel()
    sn = np.empty_like(flat)
    cn = np.empty_like(flat)
    dn = np.empty_like(flat)
    for i, xi in enumerate(flat):
        sn[i], cn[i], dn[i] = jacobi(float(xi), k)
    return sn.reshape(x.shape), cn.reshape(x.shape), dn.reshape(x.shape)


def _simpson(f, a, b, tol, depth):
    m = 0.5 * (a + b)
    fa, fm, fb = f(a), f(m), f(b)
    whole = (b - a) * (fa + 4.0 * fm + fb) / 6.0
    return _simpson_step(f, a, m, b, fa, fm, fb, whole, tol, depth)


def _simpson_step(f, a, m, b, fa, fm, fb, whole, tol, depth):
    lm = 0.5 * (a + m)
    rm = 0.5 * (m + b)
    flm = f(lm)
    frm = f(rm)
    left = (m - a) * (fa + 4.0 * flm + fm) / 6.0
    right = (b - m) * (fm + 4.0 * frm + fb) / 6.0
    delta = left + right - whole
    if depth <= 0 or abs(delta) <= 15.0 * tol:
        return left + right + delta / 15.0
    return (_simpson_step(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + _simpson_step(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1))


def _half_elastica_integrand(v):
    s = math.sin(v)
    c = math.cos(v)
    return c * c / math.sqrt(1.0 - 0.5 * s * s)


def primitive_amp(a, b):
    """Integral of cos^2 v / sqrt(1 - sin^2 v / 2) over [a, b].

    With sigma = sin v this is the primitive F(r) between sin a and sin b.
    """
    if a == b:
        return 0.0
    return _simpson(_half_elastica_integrand, a, b, SIMPSON_TOL, SIMPSON_DEPTH)


def primitive_amp_array(a, b):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    a, b = np.broadcast_arrays(a, b)
    out = np.empty(a.shape)
    for idx in np.ndindex(a.shape):
        out[idx] = primitive_amp(float(a[idx]), float(b[idx]))
    return out


def _sqrt_cos_substituted(v):
    # phi = pi/2 - v^2 removes the endpoint singularity of sqrt(cos phi).
    return 2.0 * v * math.sqrt(math.sin(v * v))


def c_star_integral():
    return _simpson(_sqrt_cos_substituted, 0.0, math.sqrt(0.5 * math.pi),
                    SIMPSON_TOL, SIMPSON_DEPTH)


def graph_energy_grad(u, dx):
    """Discrete graph bending energy and its gradient w.r.t. every node.

    Second-order central stencils in the interior, one-sided second-order
    stencils at both ends, trapezoid weights.
    """
    u = np.asarray(u, dtype=float)
    n = u.shape[0]
    d1 = np.empty(n)
    d2 = np.empty(n)
    d1[1:-1] = (u[2:] - u[:-2]) / (2.0 * dx)
    d2[1:-1] = (u[2:] - 2.0 * u[1:-1] + u[:-2]) / (dx * dx)
    d1[0] = (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * dx)
    d2[0] = (2.0 * u[0] - 5.0 * u[1] + 4.0 * u[2] - u[3]) / (dx * dx)
    d1[-1] = (3.0 * u[-1] - 4.0 * u[-2] + u[-3]) / (2.0 * dx)
    d2[-1] = (2.0 * u[-1] - 5.0 * u[-2] + 4.0 * u[-3] - u[-4]) / (dx * dx)

    w = np.full(n, dx)
    w[0] = w[-1] = 0.5 * dx
    q = 1.0 + d1 * d1
    a = q ** -2.5
    energy = float(np.sum(w * d2 * d2 * a))

    g2 = w * 2.0 * d2 * a
    g1 = w * (-5.0) * d1 * d2 * d2 * a / q
    grad = np.zeros(n)
    c1 = g1[1:-1] / (2.0 * dx)
    grad[2:] += c1
    grad[:-2] -= c1
    c2 = g2[1:-1] / (dx * dx)
    grad[2:] += c2
    grad[1:-1] -= 2.0 * c2
    grad[:-2] += c2

    grad[0] += g1[0] * -3.0 / (2.0 * dx) + g2[0] * 2.0 / (dx * dx)
    grad[1] += g1[0] * 4.0 / (2.0 * dx) + g2[0] * -5.0 / (dx * dx)
    grad[2] += g1[0] * -1.0 / (2.0 * dx) + g2[0] * 4.0 / (dx * dx)
    grad[3] += g2[0] * -1.0 / (dx * dx)
    grad[-1] += g1[-1] * 3.0 / (2.0 * dx) + g2[-1] * 2.0 / (dx * dx)
    grad[-2] += g1[-1] * -4.0 / (2.0 * dx) + g2[-1] * -5.0 / (dx * dx)
    grad[-3] += g1[-1] * 1.0 / (2.0 * dx) + g2[-1] * 4.0 / (dx * dx)
    grad[-4] += g2[-1] * -1.0 / (dx * dx)
    return energy, grad
