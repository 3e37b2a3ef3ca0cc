"""Exception types shared across the package."""


class BeamError(Exception):
    """Base class for numerical/domain failures in beamspec."""


class DegenerateLambda(BeamError):
    """The wavenumber collapses to zero (mu in {0, -b}); the characteristic
    machinery is inapplicable there."""


class DivisionNearZero(BeamError):
    """A formula requires dividing by a quantity below its safe threshold."""


class BoundaryTooClose(BeamError):
    """A contour boundary passes too close to a zero of the characteristic
    function for a reliable winding number."""


class NonConvergentPhase(BeamError):
    """Adaptive phase accumulation along a contour did not settle within the
    sample budget."""


class NoConvergence(BeamError):
    """Newton refinement did not meet its stopping rule.

    The best iterate is attached as ``record``.
    """

    def __init__(self, message, record=None):
        super().__init__(message)
        self.record = record


class DriftedOutOfBasin(BeamError):
    """Newton refinement left the basin assigned to its seed."""

    def __init__(self, message, record=None):
        super().__init__(message)
        self.record = record


class AuditMismatch(BeamError):
    """Contour zero counts could not be reconciled with refined roots."""


class NearDoubleRoot(BeamError):
    """A perturbation formula was requested too close to the double-root
    configuration where its denominator vanishes."""


class DenominatorVanishes(BeamError):
    """A closed-form denominator vanishes; the requested location is
    structurally degenerate."""


class ResidualTooLarge(BeamError):
    """An eigen-record's characteristic residual is too large to trust."""


class DegenerateTrig(BeamError):
    """sin or sinh at the eigen-wavenumber is numerically zero; use the
    limiting comparison functions instead."""


class GridTooCoarse(BeamError):
    """A quadrature self-check (half-grid Richardson) disagreed beyond
    tolerance."""


class AtEigenvalue(BeamError):
    """The resolvent was requested at (or too near) a spectral point."""


class EigensolverFailure(BeamError):
    """The dense eigensolver failed on the modal matrix."""


class IllConditionedModes(BeamError):
    """The modal eigenvector matrix is too ill-conditioned for exact
    propagation (a time-stepping fallback is used instead)."""


class SamplingTooCoarse(BeamError):
    """A trajectory is sampled too coarsely for the requested check."""


class EnergyUnderflow(BeamError):
    """Energy decayed below the representable range inside the fit window."""


class RationalXiWarning(UserWarning):
    """The damper location is (numerically) a small-denominator rational,
    outside the regime where the eigenfunction formulas are guaranteed."""
