"""Exception types shared across the library."""


class PricingError(Exception):
    """Base class for all library errors."""


class DomainError(PricingError):
    """Argument outside the domain of the Laplace exponent or a transform."""


class DegenerateRoots(PricingError):
    """Two roots of psi(s)=q coincide; the exponential-sum scale form breaks down."""


class PhiUndefined(PricingError):
    """psi(s)=q has no real root on the admissible half-line."""


class TangentRoot(PhiUndefined):
    """psi'(Phi(q)) is numerically zero; downstream denominators would vanish."""


class DegenerateTheta(PricingError):
    """Phi(r) == theta where a formula requires them distinct."""


class NoRoot(PricingError):
    """A first-order condition has no root on the admissible interval."""


class ScanExhausted(PricingError):
    """Outer barrier scan reached its floor without bracketing a root."""


class PreconditionError(PricingError):
    """Caller violated an argument-ordering precondition."""


class StaleBarriers(PricingError):
    """BarrierPair residuals exceed tolerance; re-solve before evaluating values."""


class BarrierRegime(PricingError):
    """r - Psi(1) >= 0: the call stopping region is a half-line, out of scope here."""


class AssumptionsFailed(PricingError):
    """A standing assumption fails; carries the full validation report."""

    def __init__(self, report):
        self.report = report
        failed = ", ".join(c.name for c in report.checks if not c.passed)
        super().__init__(f"standing assumptions violated: {failed}")


class OverflowRisk(PricingError):
    """An exponent would overflow double precision; failing loudly instead."""


class NumericsError(PricingError):
    """Internal numerical sanity check failed (e.g. imaginary parts not cancelling)."""


class TruncationWarning(UserWarning):
    """Monte Carlo truncated more paths than the reporting threshold."""
