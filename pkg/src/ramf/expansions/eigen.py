"""Laplace eigenforms f = f^0 + f^h + f^a and the real-analytic Eisenstein series."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
from mpmath import mpc, mpf

from ..errors import DomainError
from ..numerics import (DEFAULT_CONTEXT, PrecisionContext, divisor_sigma,
                        generalized_binomial, i_power, riemann_zeta_int, to_complex)
from .bigraded import BigradedExpansion, Weights


@dataclass
class EigenExpansion:
    """Eigenform of Delta_{r,s} with eigenvalue k0 (1 - r - s - k0).

    ``hol[(j, m)]`` is the coefficient of y^j q^m (k0 <= j <= -s),
    ``antihol[(j, m)]`` that of y^j qbar^m (k0 <= j <= -r); the constant term
    is ``const_a y^k0 + const_b y^(1-r-s-k0)``.
    """

    weights: Weights
    k0: int
    hol: dict = field(default_factory=dict)
    antihol: dict = field(default_factory=dict)
    const_a: mpc = mpc(0)
    const_b: mpc = mpc(0)
    precision_bits: int = DEFAULT_CONTEXT.precision_bits
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if not isinstance(self.weights, Weights):
            self.weights = Weights(*self.weights)
        r, s = self.weights.r, self.weights.s
        if not self.k0 < 1 - r - s - self.k0:
            raise DomainError("k0 must satisfy k0 < 1 - r - s - k0")
        with mpmath.workprec(self.precision_bits):
            self.const_a = to_complex(self.const_a)
            self.const_b = to_complex(self.const_b)
            self.hol = _clean(self.hol)
            self.antihol = _clean(self.antihol)
        for (j, m) in self.hol:
            if not (self.k0 <= j <= -s) or m == 0:
                raise DomainError(f"holomorphic index {(j, m)} outside k0 <= j <= -s, m != 0")
        for (j, m) in self.antihol:
            if not (self.k0 <= j <= -r) or m == 0:
                raise DomainError(f"antiholomorphic index {(j, m)} outside k0 <= j <= -r, m != 0")

    @property
    def eigenvalue(self) -> int:
        r, s = self.weights.r, self.weights.s
        return self.k0 * (1 - r - s - self.k0)

    @property
    def N(self) -> int:
        return max([0] + [-m for _, m in self.hol])

    @property
    def N_prime(self) -> int:
        return max([0] + [-m for _, m in self.antihol])

    def merged(self) -> dict:
        """c_m^{(j)} = a_m^{(j)} + b_m^{(j)}."""
        out = dict(self.hol)
        with mpmath.workprec(self.precision_bits):
            for key, c in self.antihol.items():
                out[key] = out.get(key, 0) + c
        return out

    def to_bigraded(self) -> BigradedExpansion:
        r, s = self.weights.r, self.weights.s
        terms = {}
        for (j, m), c in self.hol.items():
            terms[(j, m, 0)] = c
        with mpmath.workprec(self.precision_bits):
            for (j, m), c in self.antihol.items():
                terms[(j, 0, m)] = terms.get((j, 0, m), 0) + c
            terms[(self.k0, 0, 0)] = self.const_a
            b_exp = 1 - r - s - self.k0
            terms[(b_exp, 0, 0)] = terms.get((b_exp, 0, 0), 0) + self.const_b
        return BigradedExpansion(self.weights, terms, precision_bits=self.precision_bits)

    def parts(self):
        """(decaying, principal) pieces as bigraded expansions, constant term excluded."""
        dec, princ = {}, {}
        for (j, m), c in self.hol.items():
            (dec if m > 0 else princ)[(j, m, 0)] = c
        for (j, m), c in self.antihol.items():
            (dec if m > 0 else princ)[(j, 0, m)] = c
        mk = lambda t: BigradedExpansion(self.weights, t, precision_bits=self.precision_bits)
        return mk(dec), mk(princ)

    def scale(self, c):
        with mpmath.workprec(self.precision_bits):
            return self._scaled(to_complex(c))

    def _scaled(self, c):
        return EigenExpansion(self.weights, self.k0,
                              {k: c * v for k, v in self.hol.items()},
                              {k: c * v for k, v in self.antihol.items()},
                              c * self.const_a, c * self.const_b, self.precision_bits,
                              dict(self.meta))

    def __add__(self, other):
        if (other.weights, other.k0) != (self.weights, self.k0):
            raise DomainError("eigen expansions must share weights and k0 to be added")
        bits = max(self.precision_bits, other.precision_bits)
        with mpmath.workprec(bits):
            hol = dict(self.hol)
            for k, v in other.hol.items():
                hol[k] = hol.get(k, 0) + v
            anti = dict(self.antihol)
            for k, v in other.antihol.items():
                anti[k] = anti.get(k, 0) + v
            return EigenExpansion(self.weights, self.k0, hol, anti,
                                  self.const_a + other.const_a, self.const_b + other.const_b,
                                  bits)


def _clean(table):
    out = {}
    for (j, m), c in table.items():
        c = to_complex(c)
        if c != 0:
            out[(int(j), int(m))] = c
    return out


def zero_eigen_expansion(r, s, k0, precision_bits=None):
    return EigenExpansion(Weights(r, s), k0,
                          precision_bits=precision_bits or DEFAULT_CONTEXT.precision_bits)


def alpha_pm(r: int, s: int, j: int, sign: int) -> int:
    """Coefficient alpha_j^{+} (sign=+1) or alpha_j^{-} (sign=-1) of the Eisenstein series.

    Vanishes whenever a factorial argument or a binomial lower index is negative.
    """
    if (r - s) % 2:
        raise DomainError("alpha_pm needs r = s (mod 2)")
    if sign not in (1, -1):
        raise DomainError("sign must be +1 or -1")
    h = abs(r - s) // 2
    d = (r - s) // 2
    if j + h < 0:
        return 0
    lower = j + sign * d
    if lower < 0:
        return 0
    upper = -1 - s if sign == 1 else -(r - s) - 1 - s
    return ((-1) ** j * math.factorial(j + h)
            * generalized_binomial(max(r, s), j + h)
            * generalized_binomial(upper, lower))


def eisenstein_constant_term(r: int, s: int, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """(a, b) with E^0 = a y^{-r-s} + b y, normalised to match the Fourier coefficients."""
    with mpmath.workprec(ctx.precision_bits):
        b = (riemann_zeta_int(r + s + 2, ctx) / riemann_zeta_int(r + s + 1, ctx)
             * Fraction(math.factorial(max(r, s)), math.factorial(r)))
        b = mpf(b) if not isinstance(b, Fraction) else mpf(b.numerator) / b.denominator
        ratio = Fraction(math.factorial(r + s), math.factorial(r) * math.factorial(min(r, s)))
        a = (i_power(s - r) * mpf(2) ** (-r - s) * mpmath.pi
             * mpf(ratio.numerator) / ratio.denominator)
        return mpc(a), mpc(b)


def eisenstein_expansion(r: int, s: int, m_max: int,
                         ctx: PrecisionContext = DEFAULT_CONTEXT) -> EigenExpansion:
    """Truncated real-analytic Eisenstein series E_{r,s} (Fourier terms 1 <= m <= m_max)."""
    if r < 1 or s < 1:
        raise DomainError("outside absolute-convergence range: need r, s >= 1")
    if (r - s) % 2:
        raise DomainError("Eisenstein series needs r = s (mod 2)")
    if m_max < 0:
        raise DomainError("m_max must be nonnegative")
    w = r + s
    hol, anti = {}, {}
    with mpmath.workprec(ctx.precision_bits + 16):
        denom = mpmath.gamma(1 + r) * riemann_zeta_int(w + 1, ctx.with_bits(ctx.precision_bits + 16))
        sig = {m: divisor_sigma(w + 1, m) for m in range(1, m_max + 1)}
        for j in range(-w, -s + 1):
            al = alpha_pm(r, s, -j - w // 2, 1)
            if al:
                pref = (2 * mpmath.pi) ** (w + j) * mpf(2) ** j * mpmath.pi * al / denom
                for m in range(1, m_max + 1):
                    hol[(j, m)] = pref * sig[m] * mpf(m) ** (j - 1)
        for j in range(-w, -r + 1):
            al = alpha_pm(r, s, -j - w // 2, -1)
            if al:
                pref = (2 * mpmath.pi) ** (w + j) * mpf(2) ** j * mpmath.pi * al / denom
                for m in range(1, m_max + 1):
                    anti[(j, m)] = pref * sig[m] * mpf(m) ** (j - 1)
    with mpmath.workprec(ctx.precision_bits):
        hol = {k: +v for k, v in hol.items()}
        anti = {k: +v for k, v in anti.items()}
    a, b = eisenstein_constant_term(r, s, ctx)
    return EigenExpansion(Weights(r, s), -w, hol, anti, a, b, ctx.precision_bits,
                          meta={"kind": "eisenstein", "r": r, "s": s, "m_max": m_max})


def eigenvalue_bookkeeping(k: int, r: int, s: int):
    """Exact (lambda_k, 1/4 - mu_k^2, lambda_k + h(1-h)) with h = (r+s)/2.

    lambda_k = (k-1)(r+s-k) is the Laplace eigenvalue of the k-th component of
    a length-one modular iterated integral and mu_k = -k + (r+s+1)/2; the last
    two entries agree exactly when the transfer to Omega_{r-s} is consistent.
    """
    lam = (k - 1) * (r + s - k)
    mu = Fraction(-k) + Fraction(r + s + 1, 2)
    h = Fraction(r + s, 2)
    return Fraction(lam), Fraction(1, 4) - mu * mu, lam + h * (1 - h)
