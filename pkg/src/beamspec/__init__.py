"""beamspec: spectral analysis and modal simulation of a damped beam with
a pointwise feedback damper.

The beam occupies (0, 1) with hinged ends; its transverse displacement
obeys a fourth-order equation with distributed damping b and a pointwise
damper (coefficient alpha, optionally a stiffener beta) acting at an
interior location xi.  This package computes the spectrum of the
first-order generator (closed forms, Newton refinement, winding-number
audits), its eigenfunctions and resolvent, Riesz-basis closeness
diagnostics, and time-domain energy decay via a modal Galerkin oracle.
"""
from . import errors
from ._kernels import backend_name
from .chareq import CharValue, char_derivative, char_fn, char_fn_beta, char_fn_scaled
from .eigenfunctions import (
    EigenfunctionPair,
    eval_phi,
    eval_psi,
    hnorm_diff,
    riesz_tail_report,
)
from .model import (
    BeamParams,
    EigenRecord,
    GridFunction,
    SpectralPoint,
    lambda_from_mu,
    mu_from_lambda,
)
from .resolvent import (
    ResolventInput,
    ResolventOutput,
    convolve_u0,
    det_alpha,
    galerkin_resolvent,
    kernel_u0,
    resolvent_apply,
    resolvent_residual,
)
from .simulator import (
    ModalSystem,
    Trajectory,
    assemble_modal,
    dissipation_check,
    fit_decay_rate,
    modal_eigen_oracle,
    simulate,
)
from .spectrum import (
    ContourBox,
    SpectrumResult,
    TrackResult,
    beta_shift,
    compute_spectrum,
    count_zeros,
    critical_alpha_double,
    n0_index,
    perturbation_mu,
    refine_root,
    spectral_abscissa,
    track_alpha,
    undamped_spectrum,
    xi_special_report,
)

__version__ = "0.1.0"

__all__ = [
    "errors",
    "backend_name",
    "BeamParams",
    "SpectralPoint",
    "EigenRecord",
    "GridFunction",
    "lambda_from_mu",
    "mu_from_lambda",
    "CharValue",
    "char_fn",
    "char_fn_scaled",
    "char_fn_beta",
    "char_derivative",
    "ContourBox",
    "SpectrumResult",
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
    "EigenfunctionPair",
    "eval_phi",
    "eval_psi",
    "hnorm_diff",
    "riesz_tail_report",
    "ResolventInput",
    "ResolventOutput",
    "kernel_u0",
    "convolve_u0",
    "det_alpha",
    "resolvent_apply",
    "resolvent_residual",
    "galerkin_resolvent",
    "ModalSystem",
    "Trajectory",
    "assemble_modal",
    "modal_eigen_oracle",
    "simulate",
    "dissipation_check",
    "fit_decay_rate",
]
