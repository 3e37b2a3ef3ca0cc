"""Domain types and the algebraic maps between mu and lambda.

The damped beam couples a complex frequency ``mu`` (eigenvalue of the
first-order generator) to a wavenumber-like parameter ``lambda`` through

    lambda**4 = -(b*mu + mu**2) / a.

Everything downstream (characteristic function, eigenfunctions, resolvent)
is written in terms of this pair.  ``lambda_from_mu`` canonicalizes to the
principal fourth root, arg(lambda) in [-pi/4, pi/4); the three rotations
i*lambda, -lambda, -i*lambda carry no extra information because every
formula depends on lambda only through lambda**4 up to a sign.
"""
from __future__ import annotations

import cmath
import json
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .errors import DegenerateLambda, RationalXiWarning

__all__ = [
    "BeamParams",
    "SpectralPoint",
    "EigenRecord",
    "GridFunction",
    "lambda_from_mu",
    "mu_from_lambda",
]

_QUARTER_PI = math.pi / 4.0


def _xi_rational_guard(xi: float, max_den: int = 64, tol: float = 1e-12) -> bool:
    """True when xi is within tol of p/q with q <= max_den.

    Several closed-form results assume an irrational damper location; in
    floating point we can only flag proximity to small-denominator
    rationals (continued-fraction convergent test).
    """
    frac = Fraction(xi).limit_denominator(max_den)
    return abs(xi - float(frac)) <= tol


@dataclass(frozen=True)
class BeamParams:
    """Physical configuration of the damped beam.

    a      stiffness ratio (> 0)
    b      distributed damping ratio (> 0)
    alpha  pointwise damper coefficient (>= 0)
    beta   pointwise stiffness coefficient (>= 0)
    xi     damper location, strictly inside (0, 1)
    """

    a: float
    b: float
    alpha: float = 0.0
    beta: float = 0.0
    xi: float = 0.5
    xi_is_rational_guard: bool = field(init=False, default=False, compare=False)

    def __post_init__(self):
        if not (self.a > 0):
            raise ValueError("stiffness ratio a must be > 0, got %r" % (self.a,))
        if not (self.b > 0):
            raise ValueError("damping ratio b must be > 0, got %r" % (self.b,))
        if self.alpha < 0:
            raise ValueError("damper coefficient alpha must be >= 0, got %r" % (self.alpha,))
        if self.beta < 0:
            raise ValueError("stiffness coefficient beta must be >= 0, got %r" % (self.beta,))
        if not (0.0 < self.xi < 1.0):
            raise ValueError("damper location xi must lie in (0, 1), got %r" % (self.xi,))
        guard = _xi_rational_guard(self.xi)
        object.__setattr__(self, "xi_is_rational_guard", guard)
        if guard:
            warnings.warn(
                "xi=%r is within 1e-12 of a rational p/q with q <= 64; "
                "eigenfunction formulas assume an irrational damper location"
                % (self.xi,),
                RationalXiWarning,
                stacklevel=3,
            )

    def replace(self, **kw) -> "BeamParams":
        data = {"a": self.a, "b": self.b, "alpha": self.alpha, "beta": self.beta, "xi": self.xi}
        data.update(kw)
        return BeamParams(**data)

    def to_dict(self) -> dict:
        return {"a": self.a, "b": self.b, "alpha": self.alpha, "beta": self.beta, "xi": self.xi}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> "BeamParams":
        return cls(a=data["a"], b=data["b"], alpha=data.get("alpha", 0.0),
                   beta=data.get("beta", 0.0), xi=data["xi"])

    @classmethod
    def from_json(cls, text: str) -> "BeamParams":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class SpectralPoint:
    """A paired (mu, lambda) value on the principal branch.

    branch   rotation applied to the raw fourth root to reach the
             principal sector ("1" or "-i"; the power function lands in
             (-pi/4, pi/4] so only the upper edge needs rotating)
    residual magnitude of the characteristic function at (mu, lambda);
             0.0 until a characteristic evaluation fills it in
    """

    mu: complex
    lam: complex
    branch: str = "1"
    residual: float = 0.0

    def with_residual(self, residual: float) -> "SpectralPoint":
        return SpectralPoint(self.mu, self.lam, self.branch, residual)


PROVENANCES = ("closed-form", "perturbative", "contour", "tracked", "oracle")


@dataclass(frozen=True)
class EigenRecord:
    """An eigenvalue with its mode index, quadratic-root sign and origin."""

    point: SpectralPoint
    n: int
    sign: int  # +1 or -1, which root of mu**2 + b*mu + a*lam**4 = 0
    alg_mult_estimate: int = 1
    provenance: str = "closed-form"

    def __post_init__(self):
        if self.n == 0:
            raise ValueError("mode index n must be a nonzero integer")
        if self.sign not in (-1, 1):
            raise ValueError("sign must be +1 or -1")
        if self.provenance not in PROVENANCES:
            raise ValueError("unknown provenance %r" % (self.provenance,))

    @property
    def mu(self) -> complex:
        return self.point.mu

    def conjugate(self) -> "EigenRecord":
        pt = SpectralPoint(self.point.mu.conjugate(), self.point.lam.conjugate(),
                           self.point.branch, self.point.residual)
        return EigenRecord(pt, self.n, -self.sign, self.alg_mult_estimate, self.provenance)


class GridFunction:
    """Complex samples on the uniform grid x_j = j/M, j = 0..M.

    Optionally carries the index of the interior node nearest to the
    damper location, for one-sided evaluation around the kink.
    """

    def __init__(self, samples, grid=None, xi_index: Optional[int] = None):
        self.samples = np.asarray(samples, dtype=complex)
        m = self.samples.size - 1
        if m < 8:
            raise ValueError("grid must have at least 9 points (M >= 8)")
        if grid is None:
            grid = np.linspace(0.0, 1.0, m + 1)
        else:
            grid = np.asarray(grid, dtype=float)
            if grid.shape != self.samples.shape:
                raise ValueError("grid and samples must have matching shapes")
            h = 1.0 / m
            if abs(grid[0]) > 0 or abs(grid[-1] - 1.0) > 0 or \
                    np.max(np.abs(np.diff(grid) - h)) > 1e-15:
                raise ValueError("grid must be the uniform partition of [0, 1]")
        self.grid = grid
        self.xi_index = xi_index

    @property
    def m(self) -> int:
        return self.samples.size - 1

    @property
    def h(self) -> float:
        return 1.0 / self.m

    @classmethod
    def from_callable(cls, fn, m: int = 1024, xi: Optional[float] = None) -> "GridFunction":
        grid = np.linspace(0.0, 1.0, m + 1)
        vals = np.asarray(fn(grid), dtype=complex)
        idx = None if xi is None else int(round(xi * m))
        return cls(vals, grid, xi_index=idx)

    def to_csv(self, path) -> None:
        with open(path, "w") as fh:
            fh.write("x,re,im\n")
            for x, v in zip(self.grid, self.samples):
                fh.write("%.17e,%.17e,%.17e\n" % (x, v.real, v.imag))

    def __len__(self):
        return self.samples.size


def lambda_from_mu(params: BeamParams, mu: complex) -> SpectralPoint:
    """Principal fourth root of -(b*mu + mu**2)/a paired with mu.

    Raises DegenerateLambda when b*mu + mu**2 underflows to zero
    (mu in {0, -b}), where lambda = 0 and the characteristic machinery
    does not apply.
    """
    mu = complex(mu)
    w = -(params.b * mu + mu * mu) / params.a
    if abs(w) * params.a < 1e-300:
        raise DegenerateLambda(
            "lambda = 0 at mu=%r (mu(mu+b) vanishes); use the special-value analysis" % (mu,))
    lam = w ** 0.25
    branch = "1"
    ph = cmath.phase(lam)
    if not (-_QUARTER_PI <= ph < _QUARTER_PI):
        # the power function returns arg in (-pi/4, pi/4]; only the upper
        # edge (arg exactly pi/4, negative-real w) needs rotating down
        lam *= -1j
        branch = "-i"
    return SpectralPoint(mu=mu, lam=lam, branch=branch, residual=0.0)


def mu_from_lambda(params: BeamParams, lam: complex) -> tuple[complex, complex]:
    """Both roots (mu_plus, mu_minus) of mu**2 + b*mu + a*lam**4 = 0.

    mu_plus = (-b + delta)/2 with delta the principal square root of
    b**2 - 4*a*lam**4, so mu_plus is the root with the larger real part
    (and, in the underdamped regime, positive imaginary part).  The
    smaller-magnitude root is recovered from the product a*lam**4 to
    avoid cancellation when |a*lam**4| << b**2.
    """
    lam = complex(lam)
    b = params.b
    prod = params.a * lam ** 4  # mu_plus * mu_minus
    delta = cmath.sqrt(b * b - 4.0 * prod)
    if delta.real < 0 or (delta.real == 0 and delta.imag < 0):
        delta = -delta
    # -b - delta is the larger-magnitude root; derive the other stably
    mu_minus = 0.5 * (-b - delta)
    if mu_minus == 0:
        return (0.0 + 0.0j, -b + 0.0j)
    mu_plus = prod / mu_minus
    return (mu_plus, mu_minus)
