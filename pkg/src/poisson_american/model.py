"""Levy model primitives: Laplace exponent, root machinery, Phi and tilting.

The model is a spectrally one-sided jump diffusion whose spectrally negative
(SN) representation is

    X_t = c t + eta B_t - sum_{n <= N_t} J_n,

with the J_n drawn from a finite mixture of exponentials.  A spectrally
positive model stores the parameters of its dual -X and every formula in the
library routes through that dual, so ``psi`` below is always the SN-side
Laplace exponent of the stored parameters.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache

import numpy as np

from .errors import DegenerateRoots, DomainError, NumericsError, PhiUndefined, TangentRoot

# Roots closer than this (relative) are treated as a double root.
DEGENERATE_REL_TOL = 1e-8
# |psi'(Phi)| below this triggers TangentRoot: N(0) = psi'(Phi) would vanish.
TANGENT_TOL = 1e-6
_ROOT_RESIDUAL_TOL = 1e-9


class Side(str, Enum):
    SN = "SN"
    SP = "SP"


@dataclass(frozen=True)
class ExpJump:
    """One compound-Poisson component: rate alpha, Exp(beta) sizes."""

    alpha: float
    beta: float


@dataclass(frozen=True)
class LevyModel:
    side: Side
    c: float
    eta: float
    jumps: tuple[ExpJump, ...]
    domain_floor: float = field(init=False, compare=False)

    def __post_init__(self):
        jumps = tuple(
            j if isinstance(j, ExpJump) else ExpJump(float(j[0]), float(j[1]))
            for j in self.jumps
        )
        if self.eta < 0:
            raise ValueError("eta must be nonnegative")
        for j in jumps:
            if j.alpha <= 0 or j.beta <= 0:
                raise ValueError("jump components need alpha > 0 and beta > 0")
        if self.eta == 0 and not jumps:
            raise ValueError("need eta > 0 or at least one jump component")
        if self.eta == 0 and self.c <= 0:
            raise ValueError("eta = 0 requires c > 0 (bounded variation with drift)")
        # Equal-beta components are one component with the rates added; merging
        # keeps the cleared-denominator polynomial free of spurious pole roots.
        merged: dict[float, float] = {}
        for j in jumps:
            merged[j.beta] = merged.get(j.beta, 0.0) + j.alpha
        jumps = tuple(ExpJump(a, b) for b, a in sorted(merged.items()))
        object.__setattr__(self, "jumps", jumps)
        floor = -min((j.beta for j in jumps), default=math.inf)
        object.__setattr__(self, "domain_floor", floor)

    @property
    def total_jump_rate(self) -> float:
        return sum(j.alpha for j in self.jumps)


@dataclass(frozen=True)
class RootSet:
    """All solutions of psi(s) = q over the rational extension of psi."""

    q: float
    roots: tuple[complex, ...]

    @property
    def real_roots(self) -> tuple[float, ...]:
        return tuple(z.real for z in self.roots if z.imag == 0.0)


def psi_complex(model: LevyModel, s: complex) -> complex:
    """Rational extension of the Laplace exponent; no domain checks."""
    out = model.c * s + 0.5 * model.eta**2 * s * s
    for j in model.jumps:
        out += j.alpha * (j.beta / (j.beta + s) - 1.0)
    return out


def psi_prime_complex(model: LevyModel, s: complex) -> complex:
    out = model.c + model.eta**2 * s
    for j in model.jumps:
        out -= j.alpha * j.beta / (j.beta + s) ** 2
    return out


def psi(model: LevyModel, theta: float) -> float:
    """Laplace exponent of the SN representation, log E[e^{theta X_1}]."""
    if theta <= model.domain_floor:
        raise DomainError(
            f"psi is defined on ({model.domain_floor}, inf); got theta={theta}"
        )
    return psi_complex(model, theta).real


def psi_prime(model: LevyModel, theta: float) -> float:
    """Exact derivative of psi; psi'(0) is the mean drift E[X_1]."""
    if theta <= model.domain_floor:
        raise DomainError(
            f"psi' is defined on ({model.domain_floor}, inf); got theta={theta}"
        )
    return psi_prime_complex(model, theta).real


def _cleared_polynomial(model: LevyModel, q: float) -> np.ndarray:
    """(psi(s) - q) * prod_i (beta_i + s) as highest-first coefficients."""
    base = np.array([0.5 * model.eta**2, model.c, -q], dtype=float)
    if model.eta == 0.0:
        base = base[1:]
    poly = base
    for j in model.jumps:
        poly = np.polymul(poly, [1.0, j.beta])
    for i, j in enumerate(model.jumps):
        rest = np.array([1.0])
        for k, j2 in enumerate(model.jumps):
            if k != i:
                rest = np.polymul(rest, [1.0, j2.beta])
        poly = np.polyadd(poly, np.polymul([-j.alpha, 0.0], rest))
    return np.atleast_1d(poly)


def _symmetrize(roots: np.ndarray) -> list[complex]:
    """Snap near-real roots to the real axis and enforce exact conjugate pairs."""
    out: list[complex] = []
    pending: list[complex] = []
    for z in roots:
        if abs(z.imag) <= 1e-10 * (1.0 + abs(z.real)):
            out.append(complex(z.real, 0.0))
        else:
            pending.append(complex(z))
    used = [False] * len(pending)
    for i, z in enumerate(pending):
        if used[i]:
            continue
        best, best_d = None, math.inf
        for k in range(i + 1, len(pending)):
            if used[k]:
                continue
            d = abs(pending[k] - z.conjugate())
            if d < best_d:
                best, best_d = k, d
        if best is None:
            raise NumericsError(f"unpaired complex root {z}")
        used[i] = used[best] = True
        w = 0.5 * (z + pending[best].conjugate())
        out.extend([w, w.conjugate()])
    return out


@lru_cache(maxsize=512)
def all_roots(model: LevyModel, q: float) -> RootSet:
    """All roots of psi(s) = q, via companion-matrix eigenvalues plus polishing.

    Raises DegenerateRoots when two roots coincide to relative 1e-8: the
    scale functions are built from simple-root partial fractions only.
    """
    poly = _cleared_polynomial(model, q)
    roots = np.roots(poly)
    dpoly = np.polyder(poly)
    for _ in range(2):
        vals = np.polyval(poly, roots)
        dvals = np.polyval(dpoly, roots)
        step = np.where(dvals != 0.0, vals / np.where(dvals == 0.0, 1.0, dvals), 0.0)
        roots = roots - step
    roots = np.array(_symmetrize(roots))
    # Extra Newton polishing of real roots on the rational form itself.
    for i, z in enumerate(roots):
        if z.imag == 0.0:
            s = z.real
            for _ in range(3):
                dp = psi_prime_complex(model, s).real
                if dp == 0.0:
                    break
                s = s - (psi_complex(model, s).real - q) / dp
            if math.isfinite(s):
                roots[i] = complex(s, 0.0)

    scale = 1.0 + abs(q)
    for z in roots:
        if abs(psi_complex(model, z) - q) > _ROOT_RESIDUAL_TOL * scale:
            raise NumericsError(
                f"root {z} of psi(s)={q} failed back-substitution"
            )
    rs = sorted(roots, key=lambda z: (z.real, z.imag))
    for i in range(len(rs)):
        for k in range(i + 1, len(rs)):
            if abs(rs[i] - rs[k]) < DEGENERATE_REL_TOL * (1.0 + abs(rs[i])):
                raise DegenerateRoots(
                    f"roots {rs[i]} and {rs[k]} of psi(s)={q} coincide"
                )
    return RootSet(q=q, roots=tuple(rs))


def phi(model: LevyModel, q: float) -> float:
    """Largest real root of psi(s) = q on (domain_floor, inf).

    For q < 0 the root may not exist (Assumption on Phi(r)); that raises
    PhiUndefined.  A root with psi'(Phi) ~ 0 raises TangentRoot.
    """
    rs = all_roots(model, q)
    real = [x for x in rs.real_roots if x > model.domain_floor]
    if not real:
        raise PhiUndefined(f"psi(s)={q} has no real root above {model.domain_floor}")
    val = max(real)
    if abs(psi_complex(model, val).real - q) > 1e-10 * (1.0 + abs(q)):
        raise NumericsError(f"Phi({q}) residual too large")
    if abs(psi_prime_complex(model, val).real) < TANGENT_TOL:
        raise TangentRoot(
            f"psi'(Phi({q})) ~ 0 at Phi={val}; tangency is rejected"
        )
    return val


def log_moment(model: LevyModel) -> float:
    """Psi(1) = log E[S_1] of the actual (not dual) process."""
    if model.side is Side.SN:
        return psi(model, 1.0)
    return psi(model, -1.0)


def tilt_exponent_for_call(model: LevyModel) -> LevyModel:
    """Model of the put problem obtained from the call by exponential tilting.

    For an SN call the put is driven by a spectrally positive process whose
    dual SN exponent is psi(1+z) - psi(1); for an SP call it is spectrally
    negative with exponent psi(z-1) - psi(-1) in terms of the stored dual.
    The side flag flips so the put solvers apply directly.
    """
    if model.side is Side.SN:
        new_jumps = tuple(
            ExpJump(j.alpha * j.beta / (j.beta + 1.0), j.beta + 1.0) for j in model.jumps
        )
        return LevyModel(Side.SP, model.c + model.eta**2, model.eta, new_jumps)
    if any(j.beta <= 1.0 for j in model.jumps):
        raise DomainError(
            "tilting an SP model needs min beta > 1 so that Psi(1) is finite"
        )
    new_jumps = tuple(
        ExpJump(j.alpha * j.beta / (j.beta - 1.0), j.beta - 1.0) for j in model.jumps
    )
    return LevyModel(Side.SN, model.c - model.eta**2, model.eta, new_jumps)
