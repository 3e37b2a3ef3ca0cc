"""Modal Galerkin truncation of the damped beam: matrix oracle and
time-domain simulation.

Projecting onto the sine basis turns the pointwise damper/stiffener into
a rank-one coupling: with s_k = sin(k pi xi) and using int_0^1 sin^2 = 1/2,

    c_k'' + a (k pi)^4 c_k + b c_k'
        + 2 s_k (alpha * sum_n c_n' s_n + beta * sum_n c_n s_n) = 0.

In first-order form z = (c, c') this is z' = A_N z with

    A_N = [[0, I], [-D - 2 beta s s^T, -b I - 2 alpha s s^T]],
    D = diag(a (k pi)^4).

The energy of the continuous beam restricted to the truncation is

    E(t) = 1/2 int (u_t^2 + a u_xx^2) dx
         = 1/2 [ 1/2 sum c_n'^2 + a/2 sum (n pi)^4 c_n^2 ]
         = 1/4 sum (c_n'^2 + a n^4 pi^4 c_n^2)

(the halves come from int_0^1 sin^2(n pi x) dx = 1/2).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import (
    EigensolverFailure,
    EnergyUnderflow,
    SamplingTooCoarse,
)
from .model import BeamParams

__all__ = [
    "ModalSystem",
    "Trajectory",
    "assemble_modal",
    "modal_eigen_oracle",
    "simulate",
    "dissipation_check",
    "fit_decay_rate",
]

PI = math.pi

CONDITION_LIMIT = 1e10


@dataclass
class ModalSystem:
    """First-order truncation of dimension 2N with rank-one coupling."""

    n_modes: int
    matrix: np.ndarray           # (2N, 2N) real
    coupling: np.ndarray         # s_k = sin(k pi xi)
    omega4: np.ndarray           # a (k pi)^4
    params: BeamParams

    def energy(self, c: np.ndarray, cdot: np.ndarray) -> np.ndarray:
        c = np.atleast_2d(c.T).T
        cdot = np.atleast_2d(cdot.T).T
        return 0.25 * (np.sum(cdot * cdot, axis=0)
                       + np.sum(self.omega4[:, None] * c * c, axis=0))


@dataclass
class Trajectory:
    times: np.ndarray
    coeffs: np.ndarray            # (N, samples)
    dcoeffs: np.ndarray           # (N, samples)
    energy: np.ndarray
    velocity_at_xi: np.ndarray
    params: BeamParams
    n_modes: int
    used_fallback: bool = False
    notes: list = field(default_factory=list)

    def to_csv(self, path, leading_modes: int = 4) -> None:
        k = min(leading_modes, self.n_modes)
        with open(path, "w") as fh:
            cols = ",".join("c%d" % (j + 1) for j in range(k))
            fh.write("t,energy,velocity_at_xi,%s\n" % cols)
            for i, t in enumerate(self.times):
                amps = ",".join("%.17e" % self.coeffs[j, i] for j in range(k))
                fh.write("%.17e,%.17e,%.17e,%s\n" % (
                    t, self.energy[i], self.velocity_at_xi[i], amps))


def assemble_modal(params: BeamParams, n_modes: int) -> ModalSystem:
    """Build the truncated first-order system for the damped beam."""
    if n_modes < 2:
        raise ValueError("need at least 2 modes")
    k = np.arange(1, n_modes + 1)
    s = np.sin(k * PI * params.xi)
    omega4 = params.a * (k * PI) ** 4
    n = n_modes
    mat = np.zeros((2 * n, 2 * n))
    mat[:n, n:] = np.eye(n)
    mat[n:, :n] = -np.diag(omega4)
    mat[n:, n:] = -params.b * np.eye(n)
    if params.alpha != 0.0:
        mat[n:, n:] -= 2.0 * params.alpha * np.outer(s, s)
    if params.beta != 0.0:
        mat[n:, :n] -= 2.0 * params.beta * np.outer(s, s)
    return ModalSystem(n_modes=n_modes, matrix=mat, coupling=s, omega4=omega4,
                       params=params)


def modal_eigen_oracle(params: BeamParams, n_modes: int) -> np.ndarray:
    """All 2N eigenvalues of the truncation, sorted by |Im| (then Im, Re).

    The low-|Im| entries converge to the true eigenvalues as N grows;
    this is the independent cross-check for the characteristic roots.
    """
    if n_modes < 8:
        raise ValueError("oracle needs N >= 8")
    system = assemble_modal(params, n_modes)
    try:
        ev = np.linalg.eigvals(system.matrix)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK dependent
        raise EigensolverFailure(str(exc)) from exc
    order = np.lexsort((ev.real, ev.imag, np.abs(ev.imag)))
    return ev[order]


def simulate(params: BeamParams, init: tuple, t_final: float, samples: int,
             n_modes: int) -> Trajectory:
    """Propagate the truncated system exactly through its eigendecomposition.

    init is the pair (c(0), c'(0)) of length-N arrays.  When the
    eigenvector matrix is ill-conditioned (condition > 1e10, e.g. at an
    engineered double eigenvalue) the propagation falls back to adaptive
    Runge-Kutta stepping and the trajectory is flagged.
    """
    if t_final <= 0:
        raise ValueError("t_final must be positive")
    if samples < 2:
        raise ValueError("need at least 2 samples")
    c0, cdot0 = (np.asarray(v, dtype=float) for v in init)
    if c0.shape != (n_modes,) or cdot0.shape != (n_modes,):
        raise ValueError("init arrays must have length n_modes")
    system = assemble_modal(params, n_modes)
    z0 = np.concatenate([c0, cdot0])
    times = np.linspace(0.0, t_final, samples)

    used_fallback = False
    notes = []
    try:
        evals, vecs = np.linalg.eig(system.matrix)
        cond = np.linalg.cond(vecs)
    except np.linalg.LinAlgError as exc:
        raise EigensolverFailure(str(exc)) from exc
    if cond <= CONDITION_LIMIT:
        w0 = np.linalg.solve(vecs, z0.astype(complex))
        z = (vecs @ (np.exp(np.outer(evals, times)) * w0[:, None])).real
    else:
        notes.append("eigenvector condition %.3g > %.1g; RK fallback"
                     % (cond, CONDITION_LIMIT))
        used_fallback = True
        from scipy.integrate import solve_ivp

        sol = solve_ivp(lambda t, y: system.matrix @ y, (0.0, t_final), z0,
                        t_eval=times, method="DOP853", rtol=1e-11, atol=1e-12)
        if not sol.success:  # pragma: no cover - integrator dependent
            raise EigensolverFailure("fallback integrator failed: %s" % sol.message)
        z = sol.y

    c = z[:n_modes]
    cdot = z[n_modes:]
    energy = system.energy(c, cdot)
    vel_xi = system.coupling @ cdot
    return Trajectory(times=times, coeffs=c, dcoeffs=cdot, energy=energy,
                      velocity_at_xi=vel_xi, params=params, n_modes=n_modes,
                      used_fallback=used_fallback, notes=notes)


def shortest_modal_period(params: BeamParams, n_modes: int) -> float:
    """Period of the fastest retained mode, 2 pi / Im mu_N (undamped estimate)."""
    im_top = math.sqrt(params.a) * (n_modes * PI) ** 2
    return 2.0 * PI / im_top


def dissipation_check(traj: Trajectory, params: Optional[BeamParams] = None) -> dict:
    """Compare centered-difference dE/dt with the dissipation functional

        dE/dt = -b * (1/2) sum c_n'^2 - alpha * (sum c_n' s_n)^2.

    Requires at least 20 samples per shortest modal period; reports the
    maximum mismatch relative to the peak dissipation rate.
    """
    params = params or traj.params
    dt = traj.times[1] - traj.times[0]
    period = shortest_modal_period(params, traj.n_modes)
    if dt > period / 20.0:
        raise SamplingTooCoarse(
            "dt=%g exceeds 1/20 of the shortest modal period %g" % (dt, period))
    dE = (traj.energy[2:] - traj.energy[:-2]) / (2.0 * dt)
    k = np.arange(1, traj.n_modes + 1)
    s = np.sin(k * PI * params.xi)
    cdot = traj.dcoeffs[:, 1:-1]
    rhs = (-params.b * 0.5 * np.sum(cdot * cdot, axis=0)
           - params.alpha * (s @ cdot) ** 2)
    scale = float(np.max(np.abs(rhs)))
    if scale == 0.0:
        return {"max_relative_mismatch": 0.0, "scale": 0.0}
    mismatch = float(np.max(np.abs(dE - rhs)) / scale)
    return {"max_relative_mismatch": mismatch, "scale": scale}


def fit_decay_rate(traj: Trajectory, tail_fraction: float = 0.5) -> float:
    """Least-squares slope of log E over the trailing window, halved.

    E(t) ~ C exp(2 omega t) asymptotically, so the fitted omega is
    directly comparable to the spectral abscissa.
    """
    if not (0.0 < tail_fraction < 1.0):
        raise ValueError("tail_fraction must be in (0, 1)")
    n = traj.times.size
    start = int(math.floor(n * (1.0 - tail_fraction)))
    t = traj.times[start:]
    e = traj.energy[start:]
    if np.any(e <= 0):
        raise EnergyUnderflow("nonpositive energy inside the fit window")
    if float(np.min(e)) < 1e-280:
        raise EnergyUnderflow("energy below 1e-280 in the window; shrink t_final")
    slope = np.polyfit(t, np.log(e), 1)[0]
    return float(slope / 2.0)
