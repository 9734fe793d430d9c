"""Scale functions W, W-bar, Z and the composite script-Z as exponential sums.

Everything here is closed form: W^(q) is a simple-root partial-fraction sum
sum_i e^{zeta_i x} / psi'(zeta_i), and all integrals of such sums are done
term by term with a guarded limit branch when an exponent difference falls
below 1e-12.  Quadrature appears only in the test suite as an oracle.
"""
from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .errors import NumericsError, OverflowRisk, PreconditionError
from .model import LevyModel, all_roots, psi, psi_complex, psi_prime_complex

_MERGE_TOL = 1e-12
_IMAG_REL_TOL = 1e-9
_EXP_OVERFLOW = 700.0


def _int_power_exp(p: int, mu: complex) -> list[tuple[complex, complex, int]]:
    """Terms of x -> int_0^x y^p e^{mu y} dy."""
    if abs(mu) < _MERGE_TOL:
        return [(1.0 / (p + 1), 0.0j, p + 1)]
    fact = math.factorial(p)
    out = []
    for k in range(p + 1):
        out.append((((-1) ** (p - k)) * fact / math.factorial(k) / mu ** (p - k + 1), mu, k))
    out.append((((-1) ** (p + 1)) * fact / mu ** (p + 1), 0.0j, 0))
    return out


class ExpSumFunction:
    """f(x) = sum_i a_i x^{p_i} e^{zeta_i x} on x >= 0, and 0 on x < 0.

    Immutable.  Plain scale functions carry powers p_i = 0; powers appear
    only through integration against coincident exponents.
    """

    __slots__ = ("coefs", "zetas", "powers")

    def __init__(self, terms):
        merged: dict[tuple[complex, int], complex] = {}
        keys: list[complex] = []
        for c, z, p in terms:
            z = complex(z)
            for known in keys:
                if abs(z - known) < _MERGE_TOL * (1.0 + abs(known)):
                    z = known
                    break
            else:
                keys.append(z)
            merged[(z, int(p))] = merged.get((z, int(p)), 0.0j) + complex(c)
        items = sorted(merged.items(), key=lambda kv: (kv[0][0].real, kv[0][0].imag, kv[0][1]))
        self.coefs = np.array([c for _, c in items], dtype=complex)
        self.zetas = np.array([z for (z, _), _ in items], dtype=complex)
        self.powers = np.array([p for (_, p), _ in items], dtype=int)

    @property
    def terms(self) -> list[tuple[complex, complex, int]]:
        return list(zip(self.coefs, self.zetas, self.powers))

    @classmethod
    def constant(cls, value: complex) -> "ExpSumFunction":
        return cls([(value, 0.0j, 0)])

    def __call__(self, x: float) -> float:
        if x < 0.0:
            return 0.0
        val = self.eval_complex(x)
        if abs(val.imag) > _IMAG_REL_TOL * (1.0 + abs(val.real)):
            raise NumericsError(
                f"imaginary parts failed to cancel: {val} at x={x}"
            )
        return val.real

    def eval_complex(self, x: float) -> complex:
        if len(self.coefs) == 0:
            return 0.0j
        growth = self.zetas.real * x
        if growth.size and growth.max() > _EXP_OVERFLOW:
            raise OverflowRisk(f"exponent {growth.max():.1f} at x={x} would overflow")
        return complex(np.sum(self.coefs * x**self.powers * np.exp(self.zetas * x)))

    def values(self, xs: np.ndarray) -> np.ndarray:
        return np.array([self(float(x)) for x in np.asarray(xs, dtype=float)])

    def __add__(self, other: "ExpSumFunction") -> "ExpSumFunction":
        return ExpSumFunction(self.terms + other.terms)

    def __mul__(self, scalar: complex) -> "ExpSumFunction":
        return ExpSumFunction([(c * scalar, z, p) for c, z, p in self.terms])

    __rmul__ = __mul__

    def __neg__(self) -> "ExpSumFunction":
        return self * (-1.0)

    def exp_shift(self, theta: complex) -> "ExpSumFunction":
        """x -> e^{theta x} f(x)."""
        return ExpSumFunction([(c, z + theta, p) for c, z, p in self.terms])

    def integral(self) -> "ExpSumFunction":
        """x -> int_0^x f(z) dz, again an exponential sum."""
        out = []
        for c, z, p in self.terms:
            out.extend((c * ci, zi, pi) for ci, zi, pi in _int_power_exp(p, z))
        return ExpSumFunction(out)

    def product(self, other: "ExpSumFunction") -> "ExpSumFunction":
        """Pointwise product (exponents add, powers add)."""
        out = []
        for c1, z1, p1 in self.terms:
            for c2, z2, p2 in other.terms:
                out.append((c1 * c2, z1 + z2, p1 + p2))
        return ExpSumFunction(out)

    def reflected(self, x0: float) -> "ExpSumFunction":
        """y -> f(x0 - y); valid for 0 <= y <= x0."""
        out = []
        for c, z, p in self.terms:
            base = c * np.exp(z * x0)
            for k in range(p + 1):
                out.append((base * math.comb(p, k) * ((-1.0) ** k) * x0 ** (p - k), -z, k))
        return ExpSumFunction(out)

    def convolve(self, other: "ExpSumFunction") -> "ExpSumFunction":
        """x -> int_0^x f(x-y) g(y) dy."""
        out = []
        for c1, z1, p1 in self.terms:
            for c2, z2, p2 in other.terms:
                for k in range(p1 + 1):
                    coef = c1 * c2 * math.comb(p1, k) * ((-1.0) ** k)
                    for ci, zi, pi in _int_power_exp(k + p2, z2 - z1):
                        out.append((coef * ci, z1 + zi, p1 - k + pi))
        return ExpSumFunction(out)


@lru_cache(maxsize=256)
def w_expsum(model: LevyModel, q: float) -> ExpSumFunction:
    """W^(q) as sum_i e^{zeta_i x} / psi'(zeta_i) over the simple roots."""
    rs = all_roots(model, q)
    return ExpSumFunction(
        [(1.0 / psi_prime_complex(model, z), z, 0) for z in rs.roots]
    )


@lru_cache(maxsize=512)
def w_bar_expsum(model: LevyModel, q: float, theta: float) -> ExpSumFunction:
    """x -> int_0^x e^{-theta z} W^(q)(z) dz."""
    return w_expsum(model, q).exp_shift(-theta).integral()


@lru_cache(maxsize=512)
def z_expsum(model: LevyModel, q: float, theta: float) -> ExpSumFunction:
    """Z^(q)(x; theta) for x >= 0 as an exponential sum."""
    head = ExpSumFunction.constant(1.0).exp_shift(theta)
    tail = w_bar_expsum(model, q, theta).exp_shift(theta)
    return head + (q - psi(model, theta)) * tail


def w(model: LevyModel, q: float, x: float) -> float:
    """Scale function W^(q)(x); zero on the negative half-line."""
    if x < 0.0:
        return 0.0
    return w_expsum(model, q)(x)


def w_bar(model: LevyModel, q: float, x: float, theta: float) -> float:
    """Exponentially weighted running integral int_0^x e^{-theta z} W^(q)(z) dz."""
    if x <= 0.0:
        return 0.0
    return w_bar_expsum(model, q, theta)(x)


def z(model: LevyModel, q: float, x: float, theta: float) -> float:
    """Second scale function Z^(q)(x; theta) = e^{theta x}(1 + (q - psi(theta)) Wbar)."""
    psi(model, theta)  # domain check
    if x <= 0.0:
        return math.exp(theta * x)
    return z_expsum(model, q, theta)(x)


@lru_cache(maxsize=256)
def _script_z_upper(
    model: LevyModel, q: float, lam: float, a: float, theta: float
) -> ExpSumFunction:
    """script-Z_a(x; theta) on x >= a via the lower-sum representation:

    Z^(q)(x;theta) + lam * sum_i a_i e^{zeta_i x} int_0^a e^{-zeta_i y} Z^(q+lam)(y;theta) dy
    """
    zql = z_expsum(model, q + lam, theta)
    rs = all_roots(model, q)
    extra = []
    for root in rs.roots:
        coef = 1.0 / psi_prime_complex(model, root)
        const = zql.exp_shift(-root).integral().eval_complex(a)
        extra.append((lam * coef * const, root, 0))
    return z_expsum(model, q, theta) + ExpSumFunction(extra)


def script_z(model: LevyModel, q: float, lam: float, a: float, x: float, theta: float) -> float:
    """Composite script-Z_a^{(q,lam)}(x; theta) of the interval-entry identities.

    Equals Z^(q+lam)(x; theta) for x <= a; the two defining representations
    agree, which the test suite checks on random tuples.
    """
    if lam <= 0.0:
        raise PreconditionError("script_z needs lam > 0")
    if a < 0.0:
        raise PreconditionError("script_z is implemented for a >= 0")
    if x <= a:
        return z(model, q + lam, x, theta)
    psi(model, theta)  # domain check
    return _script_z_upper(model, q, lam, a, theta)(x)
