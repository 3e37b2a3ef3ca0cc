"""Characteristic function of the damped beam and its derivative.

The eigenvalues of the generator are the roots mu of

    G(mu) = 2(mu + b) sinh(lam) sin(lam)
            + alpha * lam * [ sin(lam) sinh(lam xi) sinh(lam (1-xi))
                              - sinh(lam) sin(lam xi) sin(lam (1-xi)) ]

with lam = lambda_from_mu(mu).  The raw form overflows once
|Re lam| + |Im lam| grows past ~700/1 in double precision, so beyond a
threshold the evaluation switches to the exponentially scaled form of
the kernels (zero set unchanged, value divided by exp(scale_log)).

With a pointwise stiffness term the same function applies with alpha
replaced by alpha + beta/mu.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import DegenerateLambda, DivisionNearZero
from .model import BeamParams, lambda_from_mu

__all__ = ["CharValue", "char_fn", "char_fn_scaled", "char_fn_beta", "char_derivative"]

# beyond this the raw sinh/sin products lose headroom (e^30 ~ 1e13)
SCALING_THRESHOLD = 30.0


@dataclass(frozen=True)
class CharValue:
    """Characteristic-function value, possibly exponentially scaled.

    When scaled is True the mathematical value is value * exp(scale_log);
    the zero set is identical either way.
    """

    value: complex
    scaled: bool = False
    scale_log: float = 0.0

    @property
    def magnitude(self) -> float:
        """Overflow-safe residual magnitude |value| (scaled when scaled)."""
        return abs(self.value)


def _raw_value(params: BeamParams, lam: complex, mu: complex, alpha_eff: complex) -> complex:
    s, sh = cmath.sin(lam), cmath.sinh(lam)
    xi = params.xi
    bracket = (s * cmath.sinh(lam * xi) * cmath.sinh(lam * (1 - xi))
               - sh * cmath.sin(lam * xi) * cmath.sin(lam * (1 - xi)))
    return 2.0 * (mu + params.b) * sh * s + alpha_eff * lam * bracket


def _eval(params: BeamParams, mu: complex, alpha: float, beta: float) -> CharValue:
    point = lambda_from_mu(params, mu)
    lam = point.lam
    if abs(lam.real) + abs(lam.imag) > SCALING_THRESHOLD:
        ghat, slog = _kernels.char_scaled_at(
            np.array([lam]), np.array([mu]), params.a, params.b, alpha, beta, params.xi)
        return CharValue(complex(ghat[0]), scaled=True, scale_log=float(slog[0]))
    aeff = alpha + (beta / mu if beta != 0.0 else 0.0)
    return CharValue(_raw_value(params, lam, mu, aeff), scaled=False, scale_log=0.0)


def char_fn(params: BeamParams, mu: complex) -> CharValue:
    """Characteristic value at mu for a pure damper (beta must be 0).

    Raises DegenerateLambda at mu in {0, -b} where lam = 0.
    """
    if params.beta != 0.0:
        raise ValueError("char_fn requires beta = 0; use char_fn_beta")
    return _eval(params, complex(mu), params.alpha, 0.0)


def char_fn_beta(params: BeamParams, mu: complex) -> CharValue:
    """Characteristic value with the stiffness extension: alpha -> alpha + beta/mu."""
    mu = complex(mu)
    if params.beta != 0.0 and abs(mu) < 1e-12:
        raise DivisionNearZero("|mu| < 1e-12: beta/mu is not computable")
    return _eval(params, mu, params.alpha, params.beta)


def char_fn_scaled(params: BeamParams, lam: complex, mu: complex) -> CharValue:
    """Product-normalized overflow-safe characteristic value.

    Every sin/sinh factor is replaced by its stripped form (dominant
    exponential removed, quadrant-adapted so each remaining exponent has
    nonpositive real part).  The returned value has the stripped product
    S(lam)*Sh(lam) as its leading term, so |value| <= 4 when alpha = 0
    and the pointwise-damper correction is O(mu / lam^3) relative.

    Zeros coincide exactly with those of char_fn; the two values are
    related by char_fn = (i a lam^4 / (2 mu)) * value * exp(scale_log).

    lam may be any of the four roots of lam^4 = -(b mu + mu^2)/a; it must
    be consistent with mu to 1e-8 relative.
    """
    lam = complex(lam)
    mu = complex(mu)
    if lam == 0:
        raise DegenerateLambda("lam = 0")
    lhs = lam ** 4 + (params.b * mu + mu * mu) / params.a
    if abs(lhs) > 1e-8 * max(1.0, abs(lam) ** 4):
        raise ValueError("lam is not a fourth root matching mu (residual %g)" % abs(lhs))
    if abs(mu) < 1e-12:
        raise DivisionNearZero("|mu| < 1e-12")
    ghat, slog = _kernels.char_scaled_at(
        np.array([lam]), np.array([mu]), params.a, params.b, params.alpha, params.beta, params.xi)
    value = -2j * mu * complex(ghat[0]) / (params.a * lam ** 4)
    return CharValue(value, scaled=True, scale_log=float(slog[0]))


# distance to {0, -b} below which the analytic chain rule loses accuracy
_DEGENERATE_HALO = 1e-3


def char_derivative(params: BeamParams, mu: complex) -> complex:
    """Total derivative dG/dmu of the characteristic function.

    Analytic chain rule through lam(mu) (dlam/dmu = -(b+2mu)/(4 a lam^3))
    plus the explicit mu-dependence; within 1e-3 of the branch-degenerate
    points {0, -b} a central difference with step 1e-6*max(1,|mu|) is
    used instead.
    """
    mu = complex(mu)
    near_degenerate = min(abs(mu), abs(mu + params.b)) < _DEGENERATE_HALO
    if near_degenerate:
        h = 1e-6 * max(1.0, abs(mu))
        fp = _eval(params, mu + h, params.alpha, params.beta)
        fm = _eval(params, mu - h, params.alpha, params.beta)
        if fp.scaled or fm.scaled:
            raise DegenerateLambda("scaled values near the degenerate set")
        return (fp.value - fm.value) / (2.0 * h)
    ghat, dghat, lam, slog = _kernels.char_parts(
        np.array([mu]), params.a, params.b, params.alpha, params.beta, params.xi)
    return complex(dghat[0]) * float(np.exp(slog[0]))


def newton_ratio(params: BeamParams, mu: complex) -> tuple[complex, float, float]:
    """Overflow-safe Newton ratio G/G' plus scaled |G| and |G'|.

    Internal helper for root refinement; both magnitudes are in the
    common scaled units (divided by exp(scale_log)).
    """
    ghat, dghat, lam, slog = _kernels.char_parts(
        np.array([mu]), params.a, params.b, params.alpha, params.beta, params.xi)
    g, dg = complex(ghat[0]), complex(dghat[0])
    if dg == 0:
        raise DegenerateLambda("vanishing characteristic derivative at mu=%r" % (mu,))
    return g / dg, abs(g), abs(dg)
