"""Typed error surface shared across the library.

Divergences of the underlying scattering problem are deliberately surfaced as
distinct exception types (pole of the amplitude, on-shell Dirac atom, forward
delta beam) rather than as floating-point garbage.
"""


class PointScatterError(Exception):
    """Base class for all library-specific failures."""


class ValidationError(PointScatterError, ValueError):
    """A precondition on arguments was violated."""


class DomainError(ValidationError):
    """Argument outside the mathematical domain of a special function."""


class PoleError(PointScatterError):
    """A coupling denominator vanished (the amplitude pole, or a degenerate
    renormalization map).  No bound-state interpretation is attempted."""


class ForwardAngleError(PointScatterError):
    """Scattering angle coincides with the incidence angle.  The amplitude
    there carries the unscattered delta beam, which is reported symbolically
    and never as a finite number."""


class OnShellAtomError(PointScatterError):
    """A Dirac atom with nonzero weight sits exactly at |p| = k, where 1/varpi
    diverges.  Callers must route such amplitudes through the varpi-times-F
    product representation instead of integrating them directly."""

    def __init__(self, location: float, weight: complex):
        self.location = location
        self.weight = weight
        super().__init__(
            f"atom at p = {location!r} (weight {weight!r}) sits on the "
            "on-shell edge |p| = k; 1/varpi integration is undefined there"
        )


class SupportMismatchError(PointScatterError):
    """Two generalized amplitudes with incompatible supports were combined."""


class QuadratureError(PointScatterError):
    """Numerical integration did not converge to the requested accuracy."""

    def __init__(self, message: str, error_estimate: float | None = None):
        self.error_estimate = error_estimate
        if error_estimate is not None:
            message = f"{message} (achieved error estimate {error_estimate:.3e})"
        super().__init__(message)


class ConvergenceError(PointScatterError):
    """A limit or extrapolation sequence failed to contract."""


class GridCoarseWarning(UserWarning):
    """Finite-difference grid spacing exceeds the advertised error budget."""
