"""NumPy implementation of the characteristic-function kernels.

Every trigonometric factor is evaluated in "stripped" form with its
dominant exponential removed so that nothing overflows:

    sin(z)  = exp(|Im z|) * S(z)  / (2i)      |S|  <= 2
    cos(z)  = exp(|Im z|) * Cs(z) / 2
    sinh(z) = exp(|Re z|) * Sh(z) / 2
    cosh(z) = exp(|Re z|) * Ch(z) / 2

For the characteristic combination the stripped exponentials of each
product term add up to the same total exp(|Re lam| + |Im lam|), so the
scaled value ghat satisfies  G(mu) = ghat * exp(scale_log)  exactly,
with scale_log = |Re lam| + |Im lam|.
"""
import numpy as np

QUARTER_PI = np.pi / 4.0


def _ssin(z):
    x, y = z.real, z.imag
    up = y >= 0
    ex = np.exp(1j * x)
    return np.where(up, -1.0 / ex + np.exp(-2.0 * y) * ex,
                    ex - np.exp(2.0 * y) / ex)


def _scos(z):
    x, y = z.real, z.imag
    up = y >= 0
    ex = np.exp(1j * x)
    return np.where(up, 1.0 / ex + np.exp(-2.0 * y) * ex,
                    ex + np.exp(2.0 * y) / ex)


def _ssinh(z):
    x, y = z.real, z.imag
    rp = x >= 0
    ey = np.exp(1j * y)
    return np.where(rp, ey - np.exp(-2.0 * x) / ey,
                    -1.0 / ey + np.exp(2.0 * x) * ey)


def _scosh(z):
    x, y = z.real, z.imag
    rp = x >= 0
    ey = np.exp(1j * y)
    return np.where(rp, ey + np.exp(-2.0 * x) / ey,
                    1.0 / ey + np.exp(2.0 * x) * ey)


def principal_lambda(mus, a, b):
    """Principal fourth root of -(b*mu + mu^2)/a, arg in [-pi/4, pi/4)."""
    mus = np.asarray(mus, dtype=complex)
    w = -(b * mus + mus * mus) / a
    lam = w ** 0.25
    ph = np.angle(lam)
    flip = ~((ph >= -QUARTER_PI) & (ph < QUARTER_PI))
    return np.where(flip, lam * (-1j), lam)


def char_parts(mus, a, b, alpha, beta, xi, want_derivative=True):
    """Scaled characteristic function (and its mu-derivative) on a batch.

    Returns (ghat, dghat, lam, scale_log):
        G(mu)      = ghat  * exp(scale_log)
        dG/dmu     = dghat * exp(scale_log)
    dghat is None when want_derivative is False.  With beta != 0 the
    damper coefficient alpha is replaced by alpha + beta/mu pointwise.
    """
    mus = np.asarray(mus, dtype=complex)
    lam = principal_lambda(mus, a, b)
    c = 1.0 - xi

    S = _ssin(lam)
    Sh = _ssinh(lam)
    Sx = _ssin(lam * xi)
    Shx = _ssinh(lam * xi)
    Sc = _ssin(lam * c)
    Shc = _ssinh(lam * c)

    if beta != 0.0:
        aeff = alpha + beta / mus
    else:
        aeff = alpha

    phat = -0.25j * Sh * S
    bhat = -0.125j * S * Shx * Shc + 0.125 * Sh * Sx * Sc
    ghat = 2.0 * (mus + b) * phat + aeff * lam * bhat
    scale_log = np.abs(lam.real) + np.abs(lam.imag)

    if not want_derivative:
        return ghat, None, lam, scale_log

    Cs = _scos(lam)
    Ch = _scosh(lam)
    Cx = _scos(lam * xi)
    Chx = _scosh(lam * xi)
    Cc = _scos(lam * c)
    Chc = _scosh(lam * c)

    dlam = -(b + 2.0 * mus) / (4.0 * a * lam ** 3)
    phat_d = -0.25j * Ch * S + 0.25 * Sh * Cs
    bhat_d = (0.125 * (Cs * Shx * Shc + Ch * Sx * Sc)
              - 0.125j * (xi * S * Chx * Shc + c * S * Shx * Chc)
              + 0.125j * (xi * Sh * Cx * Sc + c * Sh * Sx * Cc))
    dghat = 2.0 * phat + (2.0 * (mus + b) * phat_d + aeff * (bhat + lam * bhat_d)) * dlam
    if beta != 0.0:
        dghat = dghat - (beta / (mus * mus)) * lam * bhat
    return ghat, dghat, lam, scale_log


def char_scaled_at(lam, mus, a, b, alpha, beta, xi):
    """Scaled characteristic value at a caller-supplied lambda batch.

    Same contract as char_parts but without the principal-branch
    projection; any of the four roots may be passed (the zero set is
    branch independent, the value flips sign under lam -> i*lam).
    """
    lam = np.asarray(lam, dtype=complex)
    mus = np.asarray(mus, dtype=complex)
    c = 1.0 - xi
    S = _ssin(lam)
    Sh = _ssinh(lam)
    Sx = _ssin(lam * xi)
    Shx = _ssinh(lam * xi)
    Sc = _ssin(lam * c)
    Shc = _ssinh(lam * c)
    if beta != 0.0:
        aeff = alpha + beta / mus
    else:
        aeff = alpha
    ghat = (2.0 * (mus + b) * (-0.25j) * Sh * S
            + aeff * lam * (-0.125j * S * Shx * Shc + 0.125 * Sh * Sx * Sc))
    return ghat, np.abs(lam.real) + np.abs(lam.imag)
