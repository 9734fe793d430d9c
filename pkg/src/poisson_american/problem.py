"""Pricing problem container and the standing-assumption validator."""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .errors import DomainError, PhiUndefined
from .model import LevyModel, Side, log_moment, phi, psi_prime, tilt_exponent_for_call


class OptionType(str, Enum):
    PUT = "put"
    CALL = "call"


@dataclass(frozen=True)
class PricingProblem:
    model: LevyModel
    K: float
    r: float
    lam: float
    option: OptionType

    def __post_init__(self):
        if self.K <= 0.0:
            raise ValueError("strike K must be positive")
        if self.lam <= 0.0:
            raise ValueError("observation rate lam must be positive")


@dataclass(frozen=True)
class AssumptionCheck:
    name: str
    passed: bool
    diagnostic: float | None
    note: str


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple[AssumptionCheck, ...]

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> tuple[AssumptionCheck, ...]:
        return tuple(c for c in self.checks if not c.passed)

    def as_dict(self) -> dict:
        return {
            "all_passed": self.all_passed,
            "checks": [
                {
                    "name": c.name,
                    "passed": c.passed,
                    "diagnostic": c.diagnostic,
                    "note": c.note,
                }
                for c in self.checks
            ],
        }


def _put_side_checks(model: LevyModel, r: float, prefix: str = "") -> list[AssumptionCheck]:
    """Drift and Phi-sign conditions for a put driven by ``model``."""
    checks = []
    drift = psi_prime(model, 0.0)
    if model.side is Side.SN:
        checks.append(
            AssumptionCheck(
                prefix + "drift_to_infinity",
                drift > 0.0,
                drift,
                "SN put needs psi'(0) > 0 so X drifts to +inf",
            )
        )
    else:
        checks.append(
            AssumptionCheck(
                prefix + "drift_to_infinity",
                drift < 0.0,
                drift,
                "SP put needs dual psi'(0) < 0 so X drifts to +inf",
            )
        )
    try:
        ph = phi(model, r)
        checks.append(
            AssumptionCheck(
                prefix + "phi_defined", True, ph, "Phi(r) is well-defined"
            )
        )
        if model.side is Side.SN:
            checks.append(
                AssumptionCheck(
                    prefix + "phi_sign",
                    ph < 0.0,
                    ph,
                    "SN put regime has Phi(r) < 0",
                )
            )
        else:
            checks.append(
                AssumptionCheck(
                    prefix + "phi_sign",
                    ph > 0.0,
                    ph,
                    "SP put regime has Phi(r) > 0",
                )
            )
    except PhiUndefined as exc:
        checks.append(
            AssumptionCheck(prefix + "phi_defined", False, None, str(exc))
        )
    return checks


def validate_assumptions(problem: PricingProblem) -> ValidationReport:
    """Report-only check of every standing assumption for ``problem``.

    Covers lam + r > 0, finiteness of log E[S_1] for calls with
    lam + r - log E[S_1] > 0, existence and sign of Phi(r), and the drift
    conditions of the applicable put regime (for calls, applied to the
    tilted put problem).
    """
    checks: list[AssumptionCheck] = []
    lam_r = problem.lam + problem.r
    checks.append(
        AssumptionCheck(
            "lambda_plus_r",
            lam_r > 0.0,
            lam_r,
            "lam + r > 0 keeps one-period discounting finite",
        )
    )
    if problem.option is OptionType.PUT:
        checks.extend(_put_side_checks(problem.model, problem.r))
    else:
        try:
            psi1 = log_moment(problem.model)
            checks.append(
                AssumptionCheck("log_moment_finite", True, psi1, "Psi(1) = log E[S_1]")
            )
            growth = problem.lam + problem.r - psi1
            checks.append(
                AssumptionCheck(
                    "lambda_r_growth",
                    growth > 0.0,
                    growth,
                    "lam + r - log E[S_1] > 0 keeps call payoffs integrable",
                )
            )
            r_tilde = problem.r - psi1
            checks.append(
                AssumptionCheck(
                    "double_barrier_regime",
                    r_tilde < 0.0,
                    r_tilde,
                    "r - Psi(1) < 0; otherwise the call stopping region is a half-line",
                )
            )
            if r_tilde < 0.0:
                tilted = tilt_exponent_for_call(problem.model)
                checks.extend(_put_side_checks(tilted, r_tilde, prefix="tilted_"))
        except DomainError as exc:
            checks.append(AssumptionCheck("log_moment_finite", False, None, str(exc)))
    return ValidationReport(checks=tuple(checks))
