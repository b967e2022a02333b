"""Arbitrary-precision arithmetic and special functions.

Everything numeric in ramf runs on :mod:`mpmath`.  Complex values are plain
``mpmath.mpc`` objects; every public routine evaluates inside
``mpmath.workprec(ctx.precision_bits)`` so callers never touch the global
mpmath precision themselves.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction

import mpmath
from mpmath import mp, mpc, mpf

from .errors import DomainError, NumericFailure

INF = "inf"
"""Upper-endpoint marker for improper integrals in :func:`integrate_vertical_line`."""

_MAX_SERIES_TERMS = 200_000
_MAX_CF_TERMS = 200_000


@dataclass(frozen=True)
class PrecisionContext:
    """Working precision and every convergence knob used by the numerics.

    Unset tolerances are derived from ``precision_bits``.
    """

    precision_bits: int = 256
    series_tol: float | None = None
    quad_tol: float | None = None
    q_truncation: int = 64
    y_cutoff: float | None = None
    max_subdivisions: int = 64

    def __post_init__(self):
        if int(self.precision_bits) != self.precision_bits or self.precision_bits < 64:
            raise DomainError("precision_bits must be an integer >= 64")
        if self.q_truncation < 1:
            raise DomainError("q_truncation must be positive")
        bits = self.precision_bits
        if self.series_tol is None:
            object.__setattr__(self, "series_tol", mpf(2) ** (-bits + 16))
        if self.quad_tol is None:
            object.__setattr__(self, "quad_tol", mpf(2) ** (-(3 * bits) // 4))
        for name in ("series_tol", "quad_tol"):
            val = getattr(self, name)
            if not 0 < val < 1:
                raise DomainError(f"{name} must lie in (0, 1)")
        if self.y_cutoff is None:
            # e^{-2 pi y} < series_tol, plus slack for polynomial factors t^w
            y = (bits * math.log(2) + 48) / (2 * math.pi)
            object.__setattr__(self, "y_cutoff", mpf(math.ceil(y)))
        elif self.y_cutoff <= 1:
            raise DomainError("y_cutoff must exceed 1")

    def with_bits(self, bits: int) -> "PrecisionContext":
        """Same knobs at a different precision; derived tolerances are recomputed."""
        return PrecisionContext(precision_bits=bits, q_truncation=self.q_truncation,
                                max_subdivisions=self.max_subdivisions)

    def replace(self, **changes) -> "PrecisionContext":
        return replace(self, **changes)


DEFAULT_CONTEXT = PrecisionContext()


def to_complex(x) -> mpc:
    """Coerce ints, Fractions, floats, strings and mpmath numbers to ``mpc``."""
    if isinstance(x, Fraction):
        return mpc(mpf(x.numerator) / x.denominator)
    if isinstance(x, tuple) and len(x) == 2:
        return mpc(x[0], x[1])
    return mpc(x)


def check_finite(x, what="value"):
    if not mpmath.isfinite(x):
        raise NumericFailure(f"non-finite {what}: {x}")
    return x


def is_integer(x) -> bool:
    """True when ``x`` is an exact (complex) integer."""
    if isinstance(x, (int, Fraction)):
        return int(x) == x
    x = mpc(x)
    return x.imag == 0 and x.real == int(x.real)


def i_power(n: int) -> mpc:
    """i**n as an exact fourth root of unity."""
    return (mpc(1), mpc(0, 1), mpc(-1), mpc(0, -1))[n % 4]


# ---------------------------------------------------------------------------
# exact integer helpers


def divisor_sigma(k: int, m: int) -> int:
    """Sum of the k-th powers of the positive divisors of m."""
    if m <= 0:
        raise DomainError("divisor_sigma needs m >= 1")
    if k < 1:
        raise DomainError("divisor_sigma needs k >= 1")
    total = 0
    d = 1
    while d * d <= m:
        if m % d == 0:
            e = m // d
            total += d ** k
            if e != d:
                total += e ** k
        d += 1
    return total


def generalized_binomial(a: int, b: int) -> int:
    """Falling-factorial binomial a(a-1)...(a-b+1)/b! for any integer a."""
    if b < 0:
        raise DomainError("generalized_binomial needs b >= 0")
    num = 1
    for i in range(b):
        num *= a - i
    return num // math.factorial(b)


# ---------------------------------------------------------------------------
# zeta


def riemann_zeta_int(n: int, ctx: PrecisionContext = DEFAULT_CONTEXT) -> mpf:
    """zeta(n) for an integer n >= 2."""
    if int(n) != n or n < 2:
        raise DomainError("riemann_zeta_int needs an integer n >= 2")
    with mpmath.workprec(ctx.precision_bits):
        return +mpmath.zeta(int(n))


# ---------------------------------------------------------------------------
# incomplete gamma


def upper_incomplete_gamma(r, z, ctx: PrecisionContext = DEFAULT_CONTEXT) -> mpc:
    """Gamma(r, z) on the principal branch, continued to every complex r.

    The branch cut of ``Log z`` lies on the negative real axis, which itself
    gets ``Arg z = pi``.  Nonpositive integer ``r`` goes through the downward
    recurrence from Gamma(0, z); other ``r`` use either the Legendre
    continued fraction (``Re z > 0`` and ``|z| > max(1, |r|, bits/10)``) or
    Gamma(r) - gamma(r, z) with the Kummer series and adaptive guard bits.
    """
    bits = ctx.precision_bits
    with mpmath.workprec(bits + 32):
        z = mpc(z)
        r = mpc(r)
        if z == 0:
            raise DomainError("incomplete Gamma undefined at z=0")
        if is_integer(r):
            n = int(r.real)
            if n >= 1:
                val = _gamma_posint(n, z)
            else:
                val = _gamma_nonpos_int(n, z, bits)
        elif _prefer_cf(r, z, bits):
            val = _gamma_cf(r, z, bits)
        else:
            val = _gamma_series(r, z, bits)
    with mpmath.workprec(bits):
        return check_finite(+val, "incomplete Gamma")


def _prefer_cf(a, z, bits):
    # the continued fraction needs about bits^2 / |z| terms, the series about |z| + bits
    return z.real > 0 and abs(z) > max(1, abs(a), bits / 10)


def _mag(x):
    # cheap L1 magnitude; within a factor sqrt(2) of abs()
    return abs(x.real) + abs(x.imag)


def _gamma_posint(n, z):
    # (n-1)! e^{-z} sum_{j<n} z^j/j!
    term = mpc(1)
    acc = mpc(1)
    for j in range(1, n):
        term = term * z / j
        acc += term
    return mpmath.factorial(n - 1) * mpmath.exp(-z) * acc


def _gamma0(z, bits):
    """E_1(z) = Gamma(0, z)."""
    if _prefer_cf(mpc(0), z, bits):
        return _gamma_cf(mpc(0), z, bits)
    guard = 32 + int(abs(z) * 1.45)
    with mpmath.workprec(bits + guard):
        z = mpc(z)
        tol = mpf(2) ** (-(bits + guard))
        zabs = abs(z)
        term = mpc(1)
        acc = mpc(0)
        for n in range(1, _MAX_SERIES_TERMS):
            term = term * (-z) / n
            inc = term / n
            acc += inc
            if _mag(inc) <= tol * _mag(acc) and n > zabs:
                break
        else:
            raise NumericFailure("E1 series did not converge", z=z, terms=n)
        return -mpmath.euler - mpmath.log(z) - acc


def _gamma_nonpos_int(n, z, bits):
    # downward recurrence Gamma(r, z) = (Gamma(r+1, z) - z^r e^{-z}) / r
    extra = 8 + int(abs(n) * 1.5)
    with mpmath.workprec(bits + extra + 32):
        z = mpc(z)
        g = _gamma0(z, bits + extra)
        ez = mpmath.exp(-z)
        for r in range(-1, n - 1, -1):
            g = (g - z ** r * ez) / r
        return g


def _gamma_cf(a, z, bits):
    """Legendre continued fraction (modified Lentz) for Re z > 0."""
    with mpmath.workprec(bits + 32):
        a = mpc(a)
        z = mpc(z)
        eps = mpf(2) ** (-(bits + 24))
        tiny = mpf(2) ** (-(bits * 4))
        b = z + 1 - a
        c = 1 / tiny
        d = 1 / b
        h = d
        for i in range(1, _MAX_CF_TERMS):
            an = -i * (i - a)
            b += 2
            d = an * d + b
            if d == 0:
                d = tiny
            c = b + an / c
            if c == 0:
                c = tiny
            d = 1 / d
            delta = d * c
            h *= delta
            if _mag(delta - 1) < eps:
                break
        else:
            raise NumericFailure("incomplete Gamma continued fraction did not converge",
                                 a=a, z=z, terms=i)
        return mpmath.exp(a * mpmath.log(z) - z) * h


def _gamma_series(a, z, bits):
    """Gamma(a) - gamma(a, z) with guard bits re-chosen until cancellation is covered."""
    guard = 32 + int(abs(z) * 1.45) + int(abs(a.imag) * 2.3)
    if abs(a) < 1:
        # Gamma(a) and gamma(a, z) both grow like 1/a near a = 0
        guard += int(-mpmath.log(abs(a), 2))
    for _ in range(6):
        with mpmath.workprec(bits + guard):
            a_ = mpc(a)
            z_ = mpc(z)
            tol = mpf(2) ** (-(bits + guard))
            term = 1 / a_
            acc = term
            peak = _mag(term)
            zabs = abs(z_)
            for n in range(1, _MAX_SERIES_TERMS):
                term = term * z_ / (a_ + n)
                acc += term
                at = _mag(term)
                if at > peak:
                    peak = at
                if at <= tol * _mag(acc) and n > zabs:
                    break
            else:
                raise NumericFailure("incomplete Gamma series did not converge",
                                     a=a, z=z, terms=n)
            pref = mpmath.exp(a_ * mpmath.log(z_) - z_)
            lower = pref * acc
            full = mpmath.gamma(a_)
            val = full - lower
            scale = max(abs(full), abs(pref) * peak, abs(lower))
            if val == 0:
                loss = guard + bits
            else:
                loss = int(mpmath.log(scale / abs(val), 2)) + 1
            if loss < guard - 24:
                return val
            guard = loss + 48
    raise NumericFailure("incomplete Gamma lost all precision to cancellation", a=a, z=z)


# ---------------------------------------------------------------------------
# quadrature


def integrate_vertical_line(integrand, t_lo, t_hi, ctx: PrecisionContext = DEFAULT_CONTEXT,
                            tail: str = "exponential"):
    """Integrate ``integrand(t)`` over (t_lo, t_hi); returns ``(value, error_bound)``.

    ``t_hi`` may be :data:`INF`.  With ``tail="exponential"`` the range is cut
    at ``ctx.y_cutoff`` and an exponential tail estimate is added to the
    error; ``tail="algebraic"`` hands the infinite range to mpmath's
    variable-transformed rule instead.  Finite pieces are bisected until each
    meets its share of ``ctx.quad_tol``.
    """
    bits = ctx.precision_bits
    with mpmath.workprec(bits + 16):
        lo = mpf(t_lo)
        tail_err = mpf(0)
        if t_hi == INF:
            if tail == "algebraic":
                val, err = mpmath.quad(integrand, [lo, lo + 1, lo + 4, mpmath.inf], error=True)
                err = abs(err)
                if err > ctx.quad_tol:
                    raise NumericFailure("quadrature tolerance not met on infinite range",
                                         achieved=err)
                with mpmath.workprec(bits):
                    return +mpc(val), +err
            if tail != "exponential":
                raise DomainError(f"unknown tail model {tail!r}")
            hi = max(mpf(ctx.y_cutoff), lo + 2)
            tail_err = _exponential_tail(integrand, hi)
            # slower decay than e^{-2 pi t}: push the cutoff out until the tail fits
            for _ in range(8):
                if tail_err <= ctx.quad_tol / 4:
                    break
                hi = 2 * hi
                tail_err = _exponential_tail(integrand, hi)
        else:
            hi = mpf(t_hi)
        if hi == lo:
            return mpc(0), mpf(0)
        sign = 1
        if hi < lo:
            lo, hi, sign = hi, lo, -1
        points = _initial_breaks(lo, hi)
        total = mpc(0)
        err_total = mpf(0)
        pending = list(zip(points[:-1], points[1:]))
        budget = ctx.max_subdivisions
        width = hi - lo
        while pending:
            a, b = pending.pop()
            val, err = mpmath.quad(integrand, [a, b], error=True)
            share = ctx.quad_tol * (b - a) / width / 2
            if abs(err) > share and budget > 0:
                budget -= 1
                m = (a + b) / 2
                pending.append((a, m))
                pending.append((m, b))
                continue
            total += val
            err_total += abs(err)
        err_total += tail_err
        if err_total > ctx.quad_tol:
            raise NumericFailure("quadrature tolerance not met within subdivision cap",
                                 achieved=err_total)
    with mpmath.workprec(bits):
        return sign * (+mpc(total)), +err_total


def _initial_breaks(lo, hi):
    pts = [lo]
    step = mpf(1)
    x = lo
    while x + step < hi:
        x = x + step
        pts.append(x)
        step *= 2
    pts.append(hi)
    return pts


def _exponential_tail(f, c):
    f1 = abs(f(c))
    f0 = abs(f(c - 1))
    if f1 == 0:
        return mpf(0)
    if f0 == 0 or f1 >= f0:
        raise NumericFailure("integrand does not decay at the cutoff", at=c)
    rate = mpmath.log(f0 / f1)
    return f1 / rate
