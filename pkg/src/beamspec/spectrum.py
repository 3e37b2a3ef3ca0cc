"""Eigenvalue assembly: closed forms, contour counting, Newton refinement,
continuation in the damper coefficient, perturbation formulas and special
values.

Root finding happens in the mu plane.  The characteristic function G(mu)
inherits branch cuts from lam(mu) on the real rays mu > 0 and mu < -b,
but G/lam**2 extends to an entire function of mu (G depends on lam only
through lam**2 up to the sign flip under lam -> i*lam, which the division
cancels).  All winding numbers are therefore computed on

    w(mu) = ghat(mu) / lam(mu)**2        (ghat = scaled G)

whose zero set is the spectrum plus one known extra zero at mu = -b
(where lam = 0); count_zeros subtracts that point when it lies inside a
box.  Newton refinement uses the scaled ratio G/G' directly.
"""
from __future__ import annotations

import cmath
import json
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from . import _kernels
from .errors import (
    AuditMismatch,
    BoundaryTooClose,
    DegenerateLambda,
    DenominatorVanishes,
    DriftedOutOfBasin,
    NearDoubleRoot,
    NoConvergence,
    NonConvergentPhase,
)
from .model import BeamParams, EigenRecord, SpectralPoint

__all__ = [
    "ContourBox",
    "SpectrumResult",
    "CriticalAlpha",
    "BranchTrack",
    "TrackResult",
    "n0_index",
    "undamped_spectrum",
    "count_zeros",
    "refine_root",
    "compute_spectrum",
    "track_alpha",
    "perturbation_mu",
    "spectral_abscissa",
    "critical_alpha_double",
    "xi_special_report",
    "beta_shift",
]

PI = math.pi

# boundary-clearance threshold on |w| and the per-interval phase cap
BOUNDARY_MIN_W = 1e-9
PHASE_CAP = PI / 2.0
MAX_BOUNDARY_SAMPLES = 2 ** 20

NEWTON_TOL = 1e-12
NEWTON_MAX_ITER = 50
DOUBLE_ROOT_DERIV_TOL = 1e-7


@dataclass
class ContourBox:
    """Axis-aligned rectangle in the mu plane (lo = lower-left corner)."""

    lo: complex
    hi: complex
    depth: int = 0
    winding: Optional[int] = None

    def __post_init__(self):
        if not (self.lo.real < self.hi.real and self.lo.imag < self.hi.imag):
            raise ValueError("box corners must satisfy lo < hi componentwise")

    def contains(self, z: complex, margin: float = 0.0) -> bool:
        return (self.lo.real + margin < z.real < self.hi.real - margin
                and self.lo.imag + margin < z.imag < self.hi.imag - margin)

    @property
    def diameter(self) -> float:
        return abs(self.hi - self.lo)

    def halves(self) -> tuple["ContourBox", "ContourBox"]:
        wx = self.hi.real - self.lo.real
        wy = self.hi.imag - self.lo.imag
        d = self.depth + 1
        if wx >= wy:
            mid = 0.5 * (self.lo.real + self.hi.real)
            return (ContourBox(self.lo, complex(mid, self.hi.imag), d),
                    ContourBox(complex(mid, self.lo.imag), self.hi, d))
        mid = 0.5 * (self.lo.imag + self.hi.imag)
        return (ContourBox(self.lo, complex(self.hi.real, mid), d),
                ContourBox(complex(self.lo.real, mid), self.hi, d))


@dataclass
class SpectrumResult:
    eigenvalues: list  # of EigenRecord, sorted by |Im mu|
    abscissa: float
    params: BeamParams
    diagnostics: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "params": self.params.to_dict(),
            "abscissa": self.abscissa,
            "eigenvalues": [
                {
                    "n": r.n,
                    "sign": "+" if r.sign > 0 else "-",
                    "mu": [r.mu.real, r.mu.imag],
                    "lambda": [r.point.lam.real, r.point.lam.imag],
                    "residual": r.point.residual,
                    "multiplicity": r.alg_mult_estimate,
                    "provenance": r.provenance,
                }
                for r in self.eigenvalues
            ],
            "diagnostics": self.diagnostics,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def to_csv(self, path) -> None:
        with open(path, "w") as fh:
            fh.write("n,sign,re_mu,im_mu,residual,provenance\n")
            for r in self.eigenvalues:
                fh.write("%d,%s,%.17e,%.17e,%.17e,%s\n" % (
                    r.n, "+" if r.sign > 0 else "-", r.mu.real, r.mu.imag,
                    r.point.residual, r.provenance))


def n0_index(a: float, b: float) -> int:
    """Largest n with 2*sqrt(a)*n^2*pi^2 < b (0 when even n=1 is above)."""
    n0 = int(math.floor(math.sqrt(b / (2.0 * math.sqrt(a))) / PI))
    while 2.0 * math.sqrt(a) * (n0 + 1) ** 2 * PI ** 2 < b:
        n0 += 1
    while n0 >= 1 and not (2.0 * math.sqrt(a) * n0 ** 2 * PI ** 2 < b):
        n0 -= 1
    return n0


def _char_residual_undamped(a: float, b: float, mu: complex) -> float:
    # alpha = beta = 0: the damper location is irrelevant
    ghat, _, _, _ = _kernels.char_parts(
        np.array([mu]), a, b, 0.0, 0.0, 0.5, want_derivative=False)
    return float(abs(ghat[0]))


CRITICAL_B_TOL = 1e-10


def undamped_spectrum(a: float, b: float, n_max: int) -> list:
    """Closed-form eigenvalues mu_n^{+-} for alpha = beta = 0.

    For each n <= n_max the quadratic mu^2 + b*mu + a*(n*pi)^4 = 0 gives a
    real pair when b exceeds the critical damping 2*sqrt(a)*n^2*pi^2 and a
    conjugate pair otherwise.  When b is within 1e-10 of the critical
    value the pair merges at -b/2 and a single record with multiplicity
    estimate 2 is returned for that n.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    if not (a > 0 and b > 0):
        raise ValueError("a and b must be positive")
    out = []
    for n in range(1, n_max + 1):
        lam = n * PI
        crit = 2.0 * math.sqrt(a) * n * n * PI * PI
        if abs(b - crit) <= CRITICAL_B_TOL:
            mu = complex(-b / 2.0, 0.0)
            pt = SpectralPoint(mu=mu, lam=complex(lam, 0.0),
                               residual=_char_residual_undamped(a, b, mu))
            out.append(EigenRecord(pt, n=n, sign=+1, alg_mult_estimate=2,
                                   provenance="closed-form"))
            continue
        disc = b * b - 4.0 * a * n ** 4 * PI ** 4
        if disc > 0:
            root = math.sqrt(disc)
            pair = (complex(0.5 * (-b + root)), complex(0.5 * (-b - root)))
        else:
            root = math.sqrt(-disc)
            pair = (complex(-b / 2.0, root / 2.0), complex(-b / 2.0, -root / 2.0))
        for sign, mu in zip((+1, -1), pair):
            pt = SpectralPoint(mu=mu, lam=complex(lam, 0.0),
                               residual=_char_residual_undamped(a, b, mu))
            out.append(EigenRecord(pt, n=n, sign=sign, alg_mult_estimate=1,
                                   provenance="closed-form"))
    return out


# ---------------------------------------------------------------------------
# contour counting
# ---------------------------------------------------------------------------

def _w_values(params: BeamParams, mus: np.ndarray) -> np.ndarray:
    ghat, _, lam, _ = _kernels.char_parts(
        mus, params.a, params.b, params.alpha, params.beta, params.xi,
        want_derivative=False)
    return ghat / (lam * lam)


def _w_and_rate(params: BeamParams, mus: np.ndarray):
    """w plus the local phase-rate bound |d log w / d mu|.

    w = G/lam^2 is entire, so |w'/w| = |G'/G + (b + 2 mu)/(2 a lam^4)|
    bounds how fast arg w can turn along a contour; the sampler refines
    any segment whose length times this rate could hide a phase wrap.
    """
    ghat, dghat, lam, _ = _kernels.char_parts(
        mus, params.a, params.b, params.alpha, params.beta, params.xi)
    w = ghat / (lam * lam)
    lam4 = lam ** 4
    rate = np.abs(dghat / ghat + (params.b + 2.0 * mus) / (2.0 * params.a * lam4))
    return w, rate


def _boundary_points(box: ContourBox, ts: np.ndarray) -> np.ndarray:
    x0, y0 = box.lo.real, box.lo.imag
    x1, y1 = box.hi.real, box.hi.imag
    e = np.minimum((ts * 4).astype(int), 3)
    f = ts * 4 - e
    pts = np.empty(ts.shape, dtype=complex)
    m = e == 0
    pts[m] = x0 + (x1 - x0) * f[m] + 1j * y0
    m = e == 1
    pts[m] = x1 + 1j * (y0 + (y1 - y0) * f[m])
    m = e == 2
    pts[m] = x1 - (x1 - x0) * f[m] + 1j * y1
    m = e == 3
    pts[m] = x0 + 1j * (y1 - (y1 - y0) * f[m])
    return pts


def count_zeros(params: BeamParams, box: ContourBox,
                max_samples: int = MAX_BOUNDARY_SAMPLES) -> int:
    """Number of characteristic roots (with multiplicity) inside the box.

    Adaptive argument accumulation of w = ghat/lam^2 along the boundary:
    a segment is refined while its wrapped phase increment reaches pi/2
    or its length times the local phase-rate bound |w'/w| could hide a
    wrap.  The cut-free w has one known zero at mu = -b that is not an
    eigenvalue; it is subtracted when the box contains it strictly.
    """
    ts = np.linspace(0.0, 1.0, 129)[:-1]
    while True:
        pts = _boundary_points(box, ts)
        w, rate = _w_and_rate(params, pts)
        if not np.all(np.isfinite(w)):
            raise BoundaryTooClose("non-finite boundary value (degenerate point on boundary)")
        amin = float(np.min(np.abs(w)))
        if amin < BOUNDARY_MIN_W:
            raise BoundaryTooClose("min boundary |w| = %g < %g" % (amin, BOUNDARY_MIN_W))
        ph = np.angle(w)
        inc = np.diff(ph, append=ph[:1])
        inc = (inc + PI) % (2.0 * PI) - PI
        nxt_pts = np.roll(pts, -1)
        nxt_rate = np.roll(rate, -1)
        seglen = np.abs(nxt_pts - pts)
        swing = np.maximum(rate, nxt_rate) * seglen
        bad = (np.abs(inc) >= PHASE_CAP) | (swing >= PHASE_CAP)
        if not bad.any():
            total = float(np.sum(inc)) / (2.0 * PI)
            winding = int(round(total))
            if abs(total - winding) > 0.25 or winding < 0:
                raise NonConvergentPhase(
                    "winding %g did not settle to a nonnegative integer" % total)
            if box.contains(complex(-params.b, 0.0)):
                winding -= 1
            box.winding = winding
            return winding
        if ts.size >= max_samples:
            raise NonConvergentPhase("phase refinement exceeded %d samples" % max_samples)
        seg_end = np.concatenate([ts[1:], ts[:1] + 1.0])
        mids = (ts[bad] + seg_end[bad]) / 2.0
        ts = np.sort(np.concatenate([ts, mids % 1.0]))


def _clear_box(params: BeamParams, box: ContourBox, tries: int = 8) -> tuple[ContourBox, int]:
    """count_zeros with automatic outward perturbation when the boundary
    is too close to a root."""
    grow = 1.0
    for k in range(tries):
        try:
            return box, count_zeros(params, box)
        except BoundaryTooClose:
            grow *= 1.0 + 0.013 * (k + 1)
            cx = 0.5 * (box.lo + box.hi)
            half = 0.5 * (box.hi - box.lo) * grow
            box = ContourBox(cx - half, cx + half, box.depth)
    raise BoundaryTooClose("could not clear the boundary after %d perturbations" % tries)


# ---------------------------------------------------------------------------
# Newton refinement
# ---------------------------------------------------------------------------

def _newton(params: BeamParams, mu0: complex, basin_radius: Optional[float]):
    """Scaled Newton iteration on G; returns (mu, iters, |g|, |dg|, converged)."""
    mu = complex(mu0)
    gmag = dgmag = float("nan")
    for it in range(1, NEWTON_MAX_ITER + 1):
        ghat, dghat, _, _ = _kernels.char_parts(
            np.array([mu]), params.a, params.b, params.alpha, params.beta, params.xi)
        g, dg = complex(ghat[0]), complex(dghat[0])
        gmag, dgmag = abs(g), abs(dg)
        if dgmag == 0.0 or not np.isfinite(dgmag):
            return mu, it, gmag, dgmag, False
        step = g / dg
        mu_new = mu - step
        if basin_radius is not None and abs(mu_new - mu0) > basin_radius:
            return mu_new, -it, gmag, dgmag, False  # negative iters marks drift
        mu = mu_new
        if abs(step) <= NEWTON_TOL * max(1.0, abs(mu)):
            return mu, it, gmag, dgmag, True
    return mu, NEWTON_MAX_ITER, gmag, dgmag, False


def _infer_indices(params: BeamParams, mu: complex, lam: complex) -> tuple[int, int]:
    n = max(1, int(round(abs(lam) / PI)))
    if abs(mu.imag) > 1e-9 * max(1.0, abs(mu)):
        sign = +1 if mu.imag > 0 else -1
    else:
        sign = +1 if mu.real >= -params.b / 2.0 else -1
    return n, sign


def _curvature_scale(params: BeamParams, mu: complex) -> float:
    h = 1e-3 * max(1.0, abs(mu))
    pts = np.array([mu - h, mu, mu + h])
    ghat, _, _, _ = _kernels.char_parts(
        pts, params.a, params.b, params.alpha, params.beta, params.xi,
        want_derivative=False)
    curv = abs(ghat[0] - 2.0 * ghat[1] + ghat[2]) / (h * h)
    return max(1.0, float(curv))


def refine_root(params: BeamParams, mu0: complex,
                basin_radius: Optional[float] = None,
                n_hint: Optional[int] = None,
                sign_hint: Optional[int] = None,
                provenance: str = "tracked") -> EigenRecord:
    """Polish a seed with Newton iteration on the characteristic function.

    Stops when the relative step drops below 1e-12 (or after 50 steps,
    raising NoConvergence with the best iterate attached).  The
    multiplicity estimate is 2 when |G'| at convergence falls below
    1e-7 times the local curvature scale.
    """
    mu0 = complex(mu0)
    if min(abs(mu0), abs(mu0 + params.b)) < 1e-8:
        raise DegenerateLambda("seed within 1e-8 of the degenerate set {0, -b}")
    mu, iters, gmag, dgmag, converged = _newton(params, mu0, basin_radius)
    lam = complex(_kernels.principal_lambda(np.array([mu]), params.a, params.b)[0])
    point = SpectralPoint(mu=mu, lam=lam, residual=gmag)
    n, sign = (n_hint, sign_hint)
    if n is None or sign is None:
        n_i, sign_i = _infer_indices(params, mu, lam)
        n = n_i if n is None else n
        sign = sign_i if sign is None else sign
    mult = 2 if dgmag < DOUBLE_ROOT_DERIV_TOL * _curvature_scale(params, mu) else 1
    record = EigenRecord(point, n=n, sign=sign, alg_mult_estimate=mult,
                         provenance=provenance)
    if iters < 0:
        raise DriftedOutOfBasin(
            "Newton left the basin of %r (radius %g)" % (mu0, basin_radius), record)
    if not converged:
        raise NoConvergence(
            "Newton did not converge from %r (|G|=%g after %d iters)" % (mu0, gmag, iters),
            record)
    return record


# ---------------------------------------------------------------------------
# full spectrum with contour audit
# ---------------------------------------------------------------------------

def _audit_bands(params: BeamParams, records: list, n_max: int) -> list:
    """Horizontal bands tiling the audit rectangle, cut between |Im| levels."""
    a, b = params.a, params.b
    sqa = math.sqrt(a)
    ims = sorted({r.mu.imag for r in records if r.mu.imag > 1e-9})
    im_top_root = ims[-1] if ims else 0.0
    im_max = im_top_root + 0.5 * sqa * PI * PI * (2 * n_max + 1)
    dip = min(0.5, 0.05 * sqa * PI * PI)
    x0 = -2.0 * b
    x1 = 1e-4 * max(1.0, b)  # keeps the branch point mu = 0 off the edge
    cuts = [-dip]
    prev = 0.0
    for lv in ims:
        cuts.append(0.5 * (prev + lv))
        prev = lv
    cuts.append(im_max)
    boxes = []
    for ylo, yhi in zip(cuts[:-1], cuts[1:]):
        if yhi - ylo < 1e-9:
            continue
        boxes.append(ContourBox(complex(x0, ylo), complex(x1, yhi)))
    return boxes


def _expected_in(box: ContourBox, mus: list) -> int:
    return sum(1 for m in mus if box.contains(m))


def _hunt_missing(params: BeamParams, box: ContourBox, known: list,
                  found: list, max_depth: int = 6) -> None:
    """Recursive bisection until every sub-box count is explained."""
    box, cnt = _clear_box(params, box)
    expected = _expected_in(box, known + [f.mu for f in found])
    if cnt <= expected:
        return
    if box.depth >= max_depth or box.diameter < 1e-3:
        seed = 0.5 * (box.lo + box.hi)
        if min(abs(seed), abs(seed + params.b)) < 1e-6:
            raise AuditMismatch("surplus count next to the degenerate set")
        rec = refine_root(params, seed, basin_radius=2.0 * box.diameter,
                          provenance="contour")
        if all(abs(rec.mu - m) > 1e-7 for m in known + [f.mu for f in found]):
            found.append(rec)
        return
    for half in box.halves():
        _hunt_missing(params, half, known, found, max_depth)


def compute_spectrum(params: BeamParams, n_max: int, audit: bool = True,
                     jobs: int = 1) -> SpectrumResult:
    """Spectrum up to mode n_max: closed-form seeds, Newton refinement and
    a winding-number audit of the rectangle [-2b, 0] x [0, Im_top].

    Conjugates are added by symmetry, so only representatives with
    Im mu >= 0 are refined.  Any surplus contour count triggers a
    bisection hunt for missed roots; irreconcilable counts raise
    AuditMismatch.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    seeds = undamped_spectrum(params.a, params.b, n_max)
    pure_undamped = params.alpha == 0.0 and params.beta == 0.0

    reps = [r for r in seeds if r.mu.imag >= 0.0]
    half_gap = 0.5 * math.sqrt(params.a) * PI * PI  # < min spacing between seeds
    refined = []
    diagnostics: dict = {"dedupe": [], "contour_added": 0, "boxes": []}

    def _refine_one(rec: EigenRecord) -> EigenRecord:
        if pure_undamped:
            return rec
        basin = max(half_gap, 4.0 * params.alpha + 4.0 * params.beta)
        out = refine_root(params, rec.mu, basin_radius=basin,
                          n_hint=rec.n, sign_hint=rec.sign, provenance="tracked")
        if rec.alg_mult_estimate > 1 and out.alg_mult_estimate == 1:
            out = EigenRecord(out.point, out.n, out.sign, rec.alg_mult_estimate,
                              out.provenance)
        return out

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            refined = list(pool.map(_refine_one, reps))
    else:
        refined = [_refine_one(r) for r in reps]

    # collapse seeds that converged to the same root
    dedup: list = []
    for rec in refined:
        twin = next((d for d in dedup if abs(d.mu - rec.mu) < 1e-8), None)
        if twin is None:
            dedup.append(rec)
        else:
            diagnostics["dedupe"].append([twin.n, twin.sign, rec.n, rec.sign])
    refined = dedup

    if audit:
        known = [r.mu for r in refined] + [r.mu.conjugate() for r in refined
                                           if r.mu.imag > 1e-9]
        boxes = _audit_bands(params, refined, n_max)
        found: list = []

        def _audit_one(box: ContourBox):
            bx, cnt = _clear_box(params, box)
            return bx, cnt

        if jobs > 1:
            with ThreadPoolExecutor(max_workers=jobs) as pool:
                counted = list(pool.map(_audit_one, boxes))
        else:
            counted = [_audit_one(b) for b in boxes]

        for bx, cnt in counted:
            expected = _expected_in(bx, known + [f.mu for f in found])
            diagnostics["boxes"].append({
                "lo": [bx.lo.real, bx.lo.imag], "hi": [bx.hi.real, bx.hi.imag],
                "count": cnt, "expected": expected,
            })
            if cnt > expected:
                _hunt_missing(params, bx, known, found)
                expected = _expected_in(bx, known + [f.mu for f in found])
                _, recount = _clear_box(params, bx)
                if recount != expected:
                    raise AuditMismatch(
                        "box %r: count %d vs %d refined roots" % (bx, recount, expected))
            elif cnt < expected:
                raise AuditMismatch(
                    "box %r: count %d below %d refined roots" % (bx, cnt, expected))
        diagnostics["contour_added"] = len(found)
        refined.extend(found)

    full = list(refined)
    for rec in refined:
        if rec.mu.imag > 1e-9:
            full.append(rec.conjugate())
    full.sort(key=lambda r: (abs(r.mu.imag), -r.mu.imag, r.mu.real))

    abscissa = max(r.mu.real for r in full)
    diagnostics["max_residual"] = max(r.point.residual for r in full)
    diagnostics["abscissa_near_minus_b_over_2"] = bool(
        abs(abscissa - (-params.b / 2.0)) < 1e-6)
    return SpectrumResult(eigenvalues=full, abscissa=abscissa, params=params,
                          diagnostics=diagnostics)


def spectral_abscissa(result: SpectrumResult) -> float:
    """max Re mu over the computed set.

    Truncation cannot hide larger-Re roots for this operator family
    (large-n roots approach Re = -b/2 from the left), so the only caveat,
    recorded in result.diagnostics, is an abscissa within 1e-6 of -b/2.
    """
    if not result.eigenvalues:
        raise ValueError("empty spectrum")
    absc = max(r.mu.real for r in result.eigenvalues)
    result.diagnostics["abscissa_near_minus_b_over_2"] = bool(
        abs(absc - (-result.params.b / 2.0)) < 1e-6)
    return absc


# ---------------------------------------------------------------------------
# continuation in alpha
# ---------------------------------------------------------------------------

@dataclass
class BranchTrack:
    n: int
    sign: int
    alphas: list
    records: list


@dataclass
class TrackResult:
    branches: list
    collisions: list


def track_alpha(params0: BeamParams, alpha_target: float, steps: int,
                n_max: int = 8) -> TrackResult:
    """Continuation of every closed-form root from alpha = 0 to the target.

    Each branch reuses its previous root as the Newton seed; when Newton
    needs more than 8 iterations the alpha step is halved (internally)
    until it converges quickly.  Branch pairs closer than 1e-8 at a grid
    point are reported as collisions, never merged.
    """
    if params0.alpha != 0.0:
        raise ValueError("track_alpha starts from alpha = 0")
    if steps < 1:
        raise ValueError("steps must be >= 1")
    seeds = undamped_spectrum(params0.a, params0.b, n_max)
    branches = [BranchTrack(r.n, r.sign, [0.0], [r]) for r in seeds]
    collisions = []
    if alpha_target == 0.0:
        return TrackResult(branches, collisions)

    grid = np.linspace(0.0, alpha_target, steps + 1)[1:]
    current = [r.mu for r in seeds]
    alpha_now = 0.0
    for alpha_next in grid:
        new = []
        for bi, br in enumerate(branches):
            mu_prev = current[bi]
            lo, hi = alpha_now, alpha_next
            mu_here = mu_prev
            # adaptive sub-stepping toward alpha_next
            while True:
                p = params0.replace(alpha=hi)
                mu_try, iters, gmag, dgmag, ok = _newton(p, mu_here, basin_radius=None)
                if ok and abs(iters) <= 8:
                    if hi == alpha_next:
                        mu_here = mu_try
                        break
                    mu_here = mu_try
                    lo, hi = hi, alpha_next
                else:
                    hi = 0.5 * (lo + hi)
                    if hi - lo < 1e-12 * max(1.0, alpha_target):
                        raise NoConvergence(
                            "continuation stalled on branch (n=%d, sign=%+d) near alpha=%g"
                            % (br.n, br.sign, lo))
            new.append(mu_here)
        current = new
        alpha_now = alpha_next
        p = params0.replace(alpha=alpha_now)
        for bi, br in enumerate(branches):
            lam = complex(_kernels.principal_lambda(
                np.array([current[bi]]), p.a, p.b)[0])
            ghat, _, _, _ = _kernels.char_parts(
                np.array([current[bi]]), p.a, p.b, p.alpha, p.beta, p.xi,
                want_derivative=False)
            pt = SpectralPoint(mu=current[bi], lam=lam, residual=float(abs(ghat[0])))
            br.alphas.append(float(alpha_now))
            br.records.append(EigenRecord(pt, br.n, br.sign, 1, "tracked"))
        for i in range(len(current)):
            for j in range(i + 1, len(current)):
                if abs(current[i] - current[j]) < 1e-8:
                    collisions.append({
                        "alpha": float(alpha_now),
                        "branches": [[branches[i].n, branches[i].sign],
                                     [branches[j].n, branches[j].sign]],
                        "mu": [current[i].real, current[i].imag],
                    })
    if collisions:
        warnings.warn("track_alpha: %d branch collision(s) detected (reported, "
                      "not resolved)" % len(collisions))
    return TrackResult(branches, collisions)


# ---------------------------------------------------------------------------
# perturbation formulas and special values
# ---------------------------------------------------------------------------

def perturbation_mu(a: float, b: float, xi: float, alpha: float,
                    n: int, sign: int) -> complex:
    """First order in alpha for mu_n^{sign} around the undamped root.

    Linearizing the characteristic equation about lam = n pi gives

        d mu / d alpha = -2 mu0 sin^2(n pi xi) / (2 mu0 + b),

    verified against the rank-one eigenvalue perturbation of the modal
    truncation; in particular Re mu_n^{+-} = -b/2 - sin^2(n pi xi) alpha
    + o(alpha) in the conjugate-pair regime.  Valid away from the
    double-root configuration; raises NearDoubleRoot when
    |b^2 - 4 a n^4 pi^4| < 1e-8.
    """
    if sign not in (-1, 1):
        raise ValueError("sign must be +1 or -1")
    disc = b * b - 4.0 * a * n ** 4 * PI ** 4
    if abs(disc) < 1e-8:
        raise NearDoubleRoot("b is within the double-root configuration for n=%d" % n)
    s1 = math.sin(n * PI * xi) ** 2
    if disc < 0:
        d = math.sqrt(-disc)
        mu0 = 0.5 * complex(-b, sign * d)
        corr = sign * 1j * (s1 / d) * complex(-b, sign * d) * alpha
    else:
        d = math.sqrt(disc)
        mu0 = complex(0.5 * (-b + sign * d))
        corr = -sign * (s1 / d) * (-b + sign * d) * alpha
    return mu0 + corr


class CriticalAlpha(NamedTuple):
    alpha_star: float
    admissible: bool   # alpha_star > 0
    degenerate: bool   # numerator vanishes (sin r = 0): the construction collapses


def critical_alpha_double(a: float, b: float, xi: float) -> CriticalAlpha:
    """Damper coefficient that places an eigenvalue exactly at mu = -b/2.

    With r = (b^2/4a)^(1/4),

        alpha* = -4 a r^3 sinh(r) sin(r)
                 / ( b [sinh(r) sin(r xi) sin(r (xi-1))
                        - sin(r) sinh(r xi) sinh(r (xi-1))] ).

    Raises DenominatorVanishes at structurally degenerate xi.
    """
    r = (b * b / (4.0 * a)) ** 0.25
    num = -4.0 * a * r ** 3 * math.sinh(r) * math.sin(r)
    den = b * (math.sinh(r) * math.sin(r * xi) * math.sin(r * (xi - 1.0))
               - math.sin(r) * math.sinh(r * xi) * math.sinh(r * (xi - 1.0)))
    scale = b * (abs(math.sinh(r)) + 1.0) * (abs(r) + 1.0) ** 2
    if abs(den) < 1e-14 * scale:
        raise DenominatorVanishes("xi=%r is structurally degenerate for this (a, b)" % (xi,))
    alpha_star = num / den
    degenerate = abs(math.sin(r)) < 1e-12
    return CriticalAlpha(alpha_star=alpha_star, admissible=alpha_star > 0,
                         degenerate=degenerate)


def xi_special_report(a: float, b: float, alpha: float) -> dict:
    """Roots in (0,1) of P(x) = 1 - (2 alpha b / 3) x^2 (1-x)^2.

    P controls whether mu = -b is an eigenvalue for some damper location.
    Roots solve x(1-x) = sqrt(3/(2 alpha b)) in closed form.  The case
    split for P is often quoted at alpha*b = 6, but P's minimum
    1 - alpha*b/24 at x = 1/2 implies the two-root regime begins at
    alpha*b = 24; both thresholds are reported and the disagreement is
    flagged.
    """
    if not (alpha > 0 and b > 0):
        raise ValueError("alpha and b must be positive")
    ab = alpha * b
    m = math.sqrt(3.0 / (2.0 * ab))
    p_half = 1.0 - ab / 24.0
    if abs(m - 0.25) <= 1e-12:
        roots = [0.5]
    elif m > 0.25:
        roots = []
    else:
        d = math.sqrt(1.0 - 4.0 * m)
        roots = [0.5 * (1.0 - d), 0.5 * (1.0 + d)]
    return {
        "a": a,
        "b": b,
        "alpha": alpha,
        "alpha_b": ab,
        "root_count": len(roots),
        "roots": roots,
        "p_at_half": p_half,
        "case_threshold_quoted": 6.0,
        "case_threshold_from_extremum": 24.0,
        "thresholds_disagree": True,
    }


def beta_shift(a: float, b: float, xi: float, beta: float,
               n: int, sign: int) -> float:
    """First-order shift of Re mu_n^{sign} from the pointwise stiffness term.

    Only defined in the real-root regime n <= n0.  Linearizing the
    characteristic equation (and, independently, rank-one matrix
    perturbation of the modal truncation) gives

        d mu_n^{sign} / d beta = -sign * 2 sin^2(n pi xi)
                                  / sqrt(b^2 - 4 a n^4 pi^4),

    so added stiffness moves the slow root mu_n^+ left and the fast root
    mu_n^- right whenever sin(n pi xi) != 0.
    """
    if sign not in (-1, 1):
        raise ValueError("sign must be +1 or -1")
    disc = b * b - 4.0 * a * n ** 4 * PI ** 4
    if abs(disc) < 1e-8:
        raise NearDoubleRoot("double-root configuration for n=%d" % n)
    if disc < 0:
        raise ValueError("beta_shift requires the real-root regime (n <= n0)")
    s1 = math.sin(n * PI * xi) ** 2
    return -sign * 2.0 * s1 / math.sqrt(disc) * beta
