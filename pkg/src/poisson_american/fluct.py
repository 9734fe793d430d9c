"""Poissonian fluctuation identities built on the scale functions.

``two_sided_transform`` and ``one_sided_transform`` are the joint Laplace
transforms of the first Poisson observation time at which the SN-represented
process sits in [0, a], killed at the continuous upper passage over b and
unkilled, respectively.  ``up_crossing_transform`` / ``down_crossing_transform``
are their half-line (single-barrier) limits, used for the L=0 and U=inf
perturbation strategies.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

from .errors import DomainError, NumericsError, PreconditionError
from .model import LevyModel, RootSet, all_roots, phi, psi, psi_prime, psi_prime_complex
from .scale import w_bar, w_bar_expsum, w_expsum, script_z, z

# Threshold for the removable-singularity branches in theta.
_BRANCH_TOL = 1e-8


@dataclass(frozen=True)
class FluctContext:
    """Immutable bundle of (model, q, lam) with the cached spectral data."""

    model: LevyModel
    q: float
    lam: float
    phi_q: float
    phi_q_lam: float
    psi_prime_phi: float
    roots_q: RootSet
    roots_q_lam: RootSet


@lru_cache(maxsize=128)
def make_context(model: LevyModel, q: float, lam: float) -> FluctContext:
    if lam <= 0.0:
        raise PreconditionError("observation rate lam must be positive")
    phi_q = phi(model, q)
    return FluctContext(
        model=model,
        q=q,
        lam=lam,
        phi_q=phi_q,
        phi_q_lam=phi(model, q + lam),
        psi_prime_phi=psi_prime(model, phi_q),
        roots_q=all_roots(model, q),
        roots_q_lam=all_roots(model, q + lam),
    )


def l_fun(ctx: FluctContext, x: float, a: float, theta: float) -> float:
    """L^{(q,lam)}(x, a; theta).

    Uses the compact form (e^{theta a} Z^(q)(x-a;theta) - script_Z) / (q+lam-psi)
    away from psi(theta) = q + lam, and the defining integral representation,
    continuous in theta, on the removable singularity.
    """
    model, q, lam = ctx.model, ctx.q, ctx.lam
    if x <= a:
        if x <= 0.0:
            return 0.0
        return -math.exp(theta * x) * w_bar(model, q + lam, x, theta)
    denom = q + lam - psi(model, theta)
    if abs(denom) > _BRANCH_TOL:
        return (
            math.exp(theta * a) * z(model, q, x - a, theta)
            - script_z(model, q, lam, a, x, theta)
        ) / denom
    if a < 0.0:
        raise NumericsError("integral form of L needs a >= 0")
    # psi(theta) == q + lam: fall back to the theta-continuous integral form.
    f = w_expsum(model, q).exp_shift(-theta)
    g = w_bar_expsum(model, q + lam, theta).reflected(x)
    double = f.product(g).integral()(x - a)
    return math.exp(theta * x) * (
        w_bar(model, q, x - a, theta) - w_bar(model, q + lam, x, theta) + lam * double
    )


def m_fun(ctx: FluctContext, y: float, theta: float) -> float:
    """M^{(q,lam)}(y; theta) with the limiting branch at theta = Phi(q)."""
    if y < 0.0:
        raise PreconditionError("m_fun needs y >= 0")
    model, q, lam, ph = ctx.model, ctx.q, ctx.lam, ctx.phi_q
    if abs(ph - theta) < _BRANCH_TOL:
        inner = w_expsum(model, q + lam).exp_shift(-ph).integral().integral()(y)
        return -lam * (y + lam * inner)
    return (
        lam
        * math.exp(-ph * y)
        / (ph - theta)
        * (
            math.exp(theta * y) * (1.0 + lam * w_bar(model, q + lam, y, theta))
            - z(model, q + lam, y, ph)
        )
    )


def n_fun(ctx: FluctContext, y: float) -> float:
    """N^{(q,lam)}(y) = psi'(Phi(q)) + lam int_0^y e^{-Phi(q) z} Z^(q+lam)(z; Phi(q)) dz.

    The integrand equals 1 + lam Wbar^(q+lam)(z; Phi(q)), so the integral is
    closed form; N is strictly increasing when psi'(Phi(q)) > 0.
    """
    if y < 0.0:
        raise PreconditionError("n_fun needs y >= 0")
    model, q, lam, ph = ctx.model, ctx.q, ctx.lam, ctx.phi_q
    inner = w_bar_expsum(model, q + lam, ph).integral()(y)
    return ctx.psi_prime_phi + lam * (y + lam * inner)


def two_sided_transform(ctx: FluctContext, x: float, a: float, b: float, theta: float) -> float:
    """E_x[e^{-q tau + theta X_tau}; tau < T_b^+] for tau the first observation in [0, a]."""
    if not (0.0 < a < b):
        raise PreconditionError("need 0 < a < b")
    if x > b:
        raise PreconditionError("need x <= b")
    model, q, lam, ph = ctx.model, ctx.q, ctx.lam, ctx.phi_q
    ratio = script_z(model, q, lam, a, x, ph) / script_z(model, q, lam, a, b, ph)
    return lam * (l_fun(ctx, x, a, theta) - l_fun(ctx, b, a, theta) * ratio)


def one_sided_transform(ctx: FluctContext, x: float, a: float, theta: float) -> float:
    """E_x[e^{-q tau + theta X_tau}; tau < inf] for tau the first observation in [0, a]."""
    if a <= 0.0:
        raise PreconditionError("need a > 0")
    model, q, lam, ph = ctx.model, ctx.q, ctx.lam, ctx.phi_q
    return lam * l_fun(ctx, x, a, theta) - m_fun(ctx, a, theta) * script_z(
        model, q, lam, a, x, ph
    ) / n_fun(ctx, a)


def _check_tail_condition(ctx: FluctContext, theta: float) -> None:
    """Down-crossing finiteness: all non-principal roots of psi = q + lam must
    have real part below theta, and Phi(q) < theta."""
    if ctx.phi_q >= theta - 1e-12:
        raise DomainError(
            f"down-crossing transform needs Phi(q) < theta; Phi={ctx.phi_q}, theta={theta}"
        )
    for root in ctx.roots_q_lam.roots:
        if root != ctx.phi_q_lam and root.real >= theta - 1e-9:
            raise DomainError(
                "down-crossing transform diverges: a root of psi=q+lam has "
                f"real part {root.real} >= theta={theta}"
            )


def down_crossing_transform(ctx: FluctContext, x: float, u: float, theta: float) -> float:
    """E_x[e^{-q nu + theta X_nu}; nu < inf], nu the first observation with X <= u.

    This is the l -> -inf limit of the interval transform:

        lam Z^(q)(y;th)/(q+lam-psi(th))
        + (Phi_lam - Phi)(q - psi(th)) / ((th - Phi)(q+lam-psi(th))) Z^(q)(y;Phi_lam)

    at y = x - u, shifted by e^{theta u}.
    """
    model, q, lam = ctx.model, ctx.q, ctx.lam
    ph, phl = ctx.phi_q, ctx.phi_q_lam
    _check_tail_condition(ctx, theta)
    pth = psi(model, theta)
    denom = q + lam - pth
    if abs(denom) < _BRANCH_TOL:
        raise NumericsError("down-crossing transform at psi(theta)=q+lam is not supported")
    y = x - u
    coef = (phl - ph) * (q - pth) / ((theta - ph) * denom)
    val = lam / denom * z(model, q, y, theta) + coef * z(model, q, y, phl)
    return math.exp(theta * u) * val


def up_crossing_transform(ctx: FluctContext, x: float, l: float, theta: float) -> float:
    """E_x[e^{-q mu + theta X_mu}; mu < inf], mu the first observation with X >= l.

    The a -> inf limit of the one-sided transform; the principal q+lam root
    cancels exactly, leaving only decaying exponentials for w = x - l > 0.
    """
    model, q, lam = ctx.model, ctx.q, ctx.lam
    ph, phl = ctx.phi_q, ctx.phi_q_lam
    if theta >= phl - 1e-9:
        raise DomainError(
            f"up-crossing transform needs theta < Phi(q+lam)={phl}; got {theta}"
        )
    w = x - l
    ratio = (phl - ph) / (phl - theta)
    if w <= 0.0:
        return math.exp(theta * l) * ratio * math.exp(ph * w)
    pth = psi(model, theta)
    denom = q + lam - pth
    if abs(denom) < _BRANCH_TOL:
        raise NumericsError("up-crossing transform at psi(theta)=q+lam is not supported")
    total = lam * math.exp(theta * w) / denom
    for root in ctx.roots_q_lam.roots:
        if abs(root - phl) < 1e-9:
            continue
        if abs(root - theta) < 1e-9:
            raise NumericsError("up-crossing transform hit theta equal to a q+lam root")
        b_j = 1.0 / psi_prime_complex(model, root)
        total += (
            lam * b_j * cmath.exp(root * w) * (ratio / (root - ph) - 1.0 / (root - theta))
        ).real
    return math.exp(theta * l) * total
