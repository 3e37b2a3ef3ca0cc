# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled twin of the characteristic-function kernels.

Same contracts as _chareq_py (see that module for the scaling scheme);
the scalar loop avoids the temporary arrays of the NumPy path, which
matters inside adaptive contour sampling and Newton polishing.
"""
import numpy as np

from libc.math cimport atan2, cos, exp, fabs, pow, sin

cdef double QUARTER_PI = 0.78539816339744830961
cdef double complex I = 1j


cdef inline double complex _expi(double t) noexcept nogil:
    return cos(t) + I * sin(t)


cdef inline double complex _ssin(double complex z) noexcept nogil:
    cdef double x = z.real
    cdef double y = z.imag
    if y >= 0.0:
        return -_expi(-x) + exp(-2.0 * y) * _expi(x)
    return _expi(x) - exp(2.0 * y) * _expi(-x)


cdef inline double complex _scos(double complex z) noexcept nogil:
    cdef double x = z.real
    cdef double y = z.imag
    if y >= 0.0:
        return _expi(-x) + exp(-2.0 * y) * _expi(x)
    return _expi(x) + exp(2.0 * y) * _expi(-x)


cdef inline double complex _ssinh(double complex z) noexcept nogil:
    cdef double x = z.real
    cdef double y = z.imag
    if x >= 0.0:
        return _expi(y) - exp(-2.0 * x) * _expi(-y)
    return -_expi(-y) + exp(2.0 * x) * _expi(y)


cdef inline double complex _scosh(double complex z) noexcept nogil:
    cdef double x = z.real
    cdef double y = z.imag
    if x >= 0.0:
        return _expi(y) + exp(-2.0 * x) * _expi(-y)
    return _expi(-y) + exp(2.0 * x) * _expi(y)


cdef inline double complex _principal_root(double complex mu, double a,
                                           double b) noexcept nogil:
    cdef double complex w = -(b * mu + mu * mu) / a
    cdef double mag = pow(w.real * w.real + w.imag * w.imag, 0.125)
    cdef double th = atan2(w.imag, w.real) * 0.25
    cdef double complex lam = mag * _expi(th)
    if not (-QUARTER_PI <= th < QUARTER_PI):
        lam = lam * (-I)
    return lam


def principal_lambda(mus, double a, double b):
    """Principal fourth root of -(b*mu + mu^2)/a, arg in [-pi/4, pi/4)."""
    cdef double complex[::1] m = np.ascontiguousarray(mus, dtype=np.complex128).ravel()
    out = np.empty(m.shape[0], dtype=np.complex128)
    cdef double complex[::1] o = out
    cdef Py_ssize_t k
    for k in range(m.shape[0]):
        o[k] = _principal_root(m[k], a, b)
    return out.reshape(np.shape(mus))


def char_parts(mus, double a, double b, double alpha, double beta, double xi,
               bint want_derivative=True):
    """Scaled characteristic function (and mu-derivative) on a batch.

    Identical contract to the NumPy backend: G = ghat * exp(scale_log),
    dG/dmu = dghat * exp(scale_log), lam on the principal branch.
    """
    arr = np.ascontiguousarray(mus, dtype=np.complex128).ravel()
    cdef double complex[::1] m = arr
    cdef Py_ssize_t n = m.shape[0]
    ghat_np = np.empty(n, dtype=np.complex128)
    lam_np = np.empty(n, dtype=np.complex128)
    slog_np = np.empty(n, dtype=np.float64)
    dghat_np = np.empty(n, dtype=np.complex128) if want_derivative else None
    cdef double complex[::1] gv = ghat_np
    cdef double complex[::1] lv = lam_np
    cdef double[::1] sv = slog_np
    cdef double complex[::1] dv = dghat_np if want_derivative else ghat_np

    cdef double c = 1.0 - xi
    cdef Py_ssize_t k
    cdef double complex mu, lam, aeff, S, Sh, Sx, Shx, Sc, Shc
    cdef double complex Cs, Ch, Cx, Chx, Cc, Chc
    cdef double complex phat, bhat, dlam, phat_d, bhat_d, g, dg
    for k in range(n):
        mu = m[k]
        lam = _principal_root(mu, a, b)
        S = _ssin(lam)
        Sh = _ssinh(lam)
        Sx = _ssin(lam * xi)
        Shx = _ssinh(lam * xi)
        Sc = _ssin(lam * c)
        Shc = _ssinh(lam * c)
        if beta != 0.0:
            aeff = alpha + beta / mu
        else:
            aeff = alpha
        phat = -0.25 * I * Sh * S
        bhat = -0.125 * I * S * Shx * Shc + 0.125 * Sh * Sx * Sc
        g = 2.0 * (mu + b) * phat + aeff * lam * bhat
        gv[k] = g
        lv[k] = lam
        sv[k] = fabs(lam.real) + fabs(lam.imag)
        if want_derivative:
            Cs = _scos(lam)
            Ch = _scosh(lam)
            Cx = _scos(lam * xi)
            Chx = _scosh(lam * xi)
            Cc = _scos(lam * c)
            Chc = _scosh(lam * c)
            dlam = -(b + 2.0 * mu) / (4.0 * a * lam * lam * lam)
            phat_d = -0.25 * I * Ch * S + 0.25 * Sh * Cs
            bhat_d = (0.125 * (Cs * Shx * Shc + Ch * Sx * Sc)
                      - 0.125 * I * (xi * S * Chx * Shc + c * S * Shx * Chc)
                      + 0.125 * I * (xi * Sh * Cx * Sc + c * Sh * Sx * Cc))
            dg = 2.0 * phat + (2.0 * (mu + b) * phat_d
                               + aeff * (bhat + lam * bhat_d)) * dlam
            if beta != 0.0:
                dg = dg - (beta / (mu * mu)) * lam * bhat
            dv[k] = dg
    shape = np.shape(mus)
    if want_derivative:
        return (ghat_np.reshape(shape), dghat_np.reshape(shape),
                lam_np.reshape(shape), slog_np.reshape(shape))
    return ghat_np.reshape(shape), None, lam_np.reshape(shape), slog_np.reshape(shape)


def char_scaled_at(lams, mus, double a, double b, double alpha, double beta,
                   double xi):
    """Scaled characteristic value at caller-supplied lambda points."""
    la = np.ascontiguousarray(lams, dtype=np.complex128).ravel()
    ma = np.ascontiguousarray(mus, dtype=np.complex128).ravel()
    cdef double complex[::1] lv = la
    cdef double complex[::1] mv = ma
    cdef Py_ssize_t n = lv.shape[0]
    out = np.empty(n, dtype=np.complex128)
    slog = np.empty(n, dtype=np.float64)
    cdef double complex[::1] ov = out
    cdef double[::1] sv = slog
    cdef double c = 1.0 - xi
    cdef Py_ssize_t k
    cdef double complex lam, mu, aeff
    for k in range(n):
        lam = lv[k]
        mu = mv[k]
        if beta != 0.0:
            aeff = alpha + beta / mu
        else:
            aeff = alpha
        ov[k] = (2.0 * (mu + b) * (-0.25 * I) * _ssinh(lam) * _ssin(lam)
                 + aeff * lam * (-0.125 * I * _ssin(lam) * _ssinh(lam * xi) * _ssinh(lam * c)
                                 + 0.125 * _ssinh(lam) * _ssin(lam * xi) * _ssin(lam * c)))
        sv[k] = fabs(lam.real) + fabs(lam.imag)
    shape = np.shape(lams)
    return out.reshape(shape), slog.reshape(shape)
