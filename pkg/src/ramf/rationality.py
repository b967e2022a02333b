"""Critical L-values, rational certificates and Hecke eigenclasses modulo D^(k-1) M!_(2-k)."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
from mpmath import mpf

from .errors import (DegenerateNormalization, DomainError, NotEigenclassError,
                     TruncationError)
from .expansions.qexp import QExpansion, d_power, hecke_tp, weakly_holo_basis
from .lfunctions import l_star_weakly
from .linalg import solve
from .numerics import DEFAULT_CONTEXT, PrecisionContext, to_complex

SUPPORTED_WEIGHTS = (12, 16, 18, 20, 22, 26)
"""Weights whose cusp space is one-dimensional, so that K_f = Q."""


@dataclass(frozen=True)
class RationalCertificate:
    numerator: int
    denominator: int
    achieved_error: mpf
    height_bound: int

    @property
    def value(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    def verify(self, x, tol) -> bool:
        """Re-substitute: |x - p/q| <= tol."""
        with mpmath.workprec(max(mpmath.mp.prec, 64 + self.denominator.bit_length())):
            return abs(to_complex(x) - mpf(self.numerator) / self.denominator) <= tol


def _to_fraction(x: mpf) -> Fraction:
    # man_exp drops the sign, so read the raw tuple
    sign, man, exp, _ = mpmath.mpf(x)._mpf_
    if not man:
        return Fraction(0)
    return (-1) ** sign * Fraction(int(man)) * Fraction(2) ** int(exp)


def rationality_certificate(x, height_bound: int = 10 ** 6, tol=None,
                            ctx: PrecisionContext = DEFAULT_CONTEXT):
    """First continued-fraction convergent p/q of Re x with q <= height_bound
    and |x - p/q| <= tol, or None when no convergent qualifies.

    ``tol`` defaults to 2^(-precision_bits/2).
    """
    bits = ctx.precision_bits
    with mpmath.workprec(bits):
        x = to_complex(x)
        tol = mpf(2) ** (-(bits // 2)) if tol is None else mpf(tol)
        if abs(x.imag) > tol:
            raise DomainError(f"imaginary part {mpmath.nstr(x.imag, 5)} exceeds tolerance")
        exact = _to_fraction(x.real)
    h0, h1 = 0, 1
    k0, k1 = 1, 0
    rest = exact
    while True:
        a = rest.numerator // rest.denominator
        h0, h1 = h1, a * h1 + h0
        k0, k1 = k1, a * k1 + k0
        if k1 > height_bound:
            return None
        with mpmath.workprec(bits):
            err = abs(x - mpf(h1) / k1)
        if err <= tol:
            return RationalCertificate(h1, k1, err, height_bound)
        frac = rest - a
        if frac == 0:
            return None
        rest = 1 / frac


def critical_lvalues(f: QExpansion, ctx: PrecisionContext = DEFAULT_CONTEXT) -> dict:
    """{j: L*_f(j)} for j = 1, ..., k-1."""
    k = f.weight
    if k < 4 or k % 2:
        raise DomainError("critical values need an even weight k >= 4")
    return {j: l_star_weakly(f, j, ctx) for j in range(1, k)}


@dataclass
class ManinReport:
    k: int
    critical_values: dict
    omega_plus: object
    omega_minus: object
    ratios: dict
    excluded: tuple
    excluded_attempts: dict = field(default_factory=dict)
    refusals: dict = field(default_factory=dict)
    hecke_eigenvalue: Fraction | None = None

    @property
    def all_certified(self) -> bool:
        return all(v is not None for v in self.ratios.values())

    def failed(self):
        return sorted(j for j, v in self.ratios.items() if v is None)


def manin_check(f: QExpansion, ctx: PrecisionContext = DEFAULT_CONTEXT,
                height_bound: int = 10 ** 6, tol=None, hecke_prime: int = 2) -> ManinReport:
    """Certify L*_f(j) / omega^{+-} rational for 2 <= j <= k-2.

    omega^+ is the first non-negligible L*_f(j) with j odd, j >= 3, and omega^-
    the first with j even, j >= 2.  Ratios at j = 1 and k-1 are attempted and
    recorded in ``excluded_attempts`` but never counted as certified.
    """
    k = f.weight
    if k not in SUPPORTED_WEIGHTS:
        raise DomainError(f"weight {k} unsupported: need a one-dimensional cusp space "
                          f"{SUPPORTED_WEIGHTS}")
    bits = ctx.precision_bits
    tol = mpf(2) ** (-(bits // 2)) if tol is None else tol
    vals = critical_lvalues(f, ctx)
    with mpmath.workprec(bits):
        scale = max(abs(v.value) for v in vals.values())
        negligible = scale * tol if scale else mpf(0)

        def first(start):
            for j in range(start, k - 1, 2):
                if abs(vals[j].value) > negligible:
                    return j
            return None

        j_plus, j_minus = first(3), first(2)
        if not scale or j_plus is None or j_minus is None:
            raise DegenerateNormalization("all critical values of one parity are negligible")
    eigenvalue = None
    if f.pole_order > 0 or f.coeffs.get(0, 0) != 0:
        eigenvalue, _ = hecke_eigenclass_check(f, hecke_prime, ctx)
    omega = {1: vals[j_plus].value, 0: vals[j_minus].value}
    ratios, refusals, attempts = {}, {}, {}
    with mpmath.workprec(bits):
        for j in range(1, k):
            x = vals[j].value / omega[j % 2]
            try:
                cert = rationality_certificate(x, height_bound, tol, ctx)
                reason = None if cert else "no convergent within height bound meets tolerance"
            except DomainError as exc:
                cert, reason = None, str(exc)
            if j in (1, k - 1):
                attempts[j] = cert
                if reason:
                    refusals[j] = reason
            else:
                ratios[j] = cert
                if reason:
                    refusals[j] = reason
    return ManinReport(k, vals, omega[1], omega[0], ratios, (1, k - 1), attempts, refusals,
                       eigenvalue)


def hecke_eigenclass_check(f: QExpansion, p: int, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """Solve T_p f - lambda f = D^(k-1) g exactly over Q.

    g ranges over the span of weakly_holo_basis(2 - k, p N) with N the pole
    order of f.  Every coefficient from q^(-pN) up to the validity of T_p f
    enters the system, so a solution is automatically checked on all of them.
    Returns (lambda, g).
    """
    k = f.weight
    if not f.is_exact():
        raise DomainError("eigenclass check needs exact rational coefficients")
    tf = hecke_tp(f, p)
    pole = p * f.pole_order
    basis = weakly_holo_basis(2 - k, pole, ctx)
    images = [(n, d_power(b, k - 1)) for n, b in sorted(basis.items())]
    top = min([tf.prec, f.prec] + [img.prec for _, img in images])
    rows_idx = range(-pole, top)
    if len(rows_idx) < 1 + len(images) + 4:
        raise TruncationError("not enough coefficients to pin down the eigenclass")
    cols = [f] + [img for _, img in images]
    matrix = [[c.coeffs.get(m, Fraction(0)) for c in cols] for m in rows_idx]
    rhs = [tf.coeffs.get(m, Fraction(0)) for m in rows_idx]
    x, free = solve(matrix, rhs)
    if x is None:
        raise NotEigenclassError(f"T_{p} f is not a multiple of f modulo D^{k - 1} M!_{2 - k}")
    if free:
        raise TruncationError("eigenclass system is underdetermined at this truncation")
    lam = x[0]
    g = QExpansion(2 - k, {}, min((b.prec for b in basis.values()), default=ctx.q_truncation))
    for (n, b), c in zip(sorted(basis.items()), x[1:]):
        if c:
            g = g + b.scale(c)
    return lam, g
