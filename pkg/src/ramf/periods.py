"""Period polynomials, slash actions and the cocycle value at S.

Polynomials in zeta carry an explicit degree bound D and are acted on by

    (P || g)(zeta) = P(g zeta) (c zeta + d)^D,

a right action: P || g || h = P || (g h).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

import mpmath
from mpmath import mpc, mpf

from .errors import DependencyError, DomainError, InconsistencyError
from .expansions.eigen import EigenExpansion
from .expansions.qexp import QExpansion
from .lfunctions import _g, l_star_weakly
from .numerics import (DEFAULT_CONTEXT, INF, PrecisionContext, generalized_binomial,
                       i_power, integrate_vertical_line, to_complex)


@dataclass(frozen=True)
class GroupElement:
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.a * self.d - self.b * self.c != 1:
            raise DomainError("group elements need determinant 1")

    def __matmul__(self, other: "GroupElement") -> "GroupElement":
        return GroupElement(self.a * other.a + self.b * other.c,
                            self.a * other.b + self.b * other.d,
                            self.c * other.a + self.d * other.c,
                            self.c * other.b + self.d * other.d)

    def __neg__(self):
        return GroupElement(-self.a, -self.b, -self.c, -self.d)

    def inverse(self) -> "GroupElement":
        return GroupElement(self.d, -self.b, -self.c, self.a)


IDENTITY = GroupElement(1, 0, 0, 1)
S = GroupElement(0, -1, 1, 0)
T = GroupElement(1, 1, 0, 1)
U = T @ S


@dataclass(frozen=True)
class GaussianRational:
    """re + i im with rational parts."""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __add__(self, other):
        return GaussianRational(self.re + other.re, self.im + other.im)

    def __mul__(self, other):
        if isinstance(other, GaussianRational):
            return GaussianRational(self.re * other.re - self.im * other.im,
                                    self.re * other.im + self.im * other.re)
        return GaussianRational(self.re * other, self.im * other)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        if isinstance(other, complex):
            return self.re == other.real and self.im == other.imag
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def to_mpc(self) -> mpc:
        return mpc(mpf(self.re.numerator) / self.re.denominator,
                   mpf(self.im.numerator) / self.im.denominator)

    @classmethod
    def i_power(cls, n: int) -> "GaussianRational":
        return (cls(Fraction(1)), cls(Fraction(0), Fraction(1)),
                cls(Fraction(-1)), cls(Fraction(0), Fraction(-1)))[n % 4]


@dataclass
class PeriodPolynomial:
    """sum_l coeffs[l] zeta^l with an explicit degree bound.

    ``truncated_slots`` lists indices whose coefficient was not computed
    (stored as zero but never to be compared).
    """

    degree_bound: int
    coeffs: list
    weights_meta: tuple = ()
    truncated_slots: tuple = ()
    meta: dict = field(default_factory=dict)
    precision_bits: int = DEFAULT_CONTEXT.precision_bits

    def __post_init__(self):
        if self.degree_bound < 0:
            raise DomainError("degree bound must be nonnegative")
        self.coeffs = list(self.coeffs)
        if len(self.coeffs) != self.degree_bound + 1:
            raise DomainError("need exactly degree_bound + 1 coefficients")

    @classmethod
    def zero(cls, degree_bound: int, **kw) -> "PeriodPolynomial":
        return cls(degree_bound, [0] * (degree_bound + 1), **kw)

    def _like(self, coeffs):
        return PeriodPolynomial(self.degree_bound, coeffs, self.weights_meta,
                                self.truncated_slots, dict(self.meta), self.precision_bits)

    def __add__(self, other):
        self._check(other)
        with mpmath.workprec(max(self.precision_bits, other.precision_bits)):
            return self._like([a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other):
        self._check(other)
        with mpmath.workprec(max(self.precision_bits, other.precision_bits)):
            return self._like([a - b for a, b in zip(self.coeffs, other.coeffs)])

    def scale(self, c):
        with mpmath.workprec(self.precision_bits):
            return self._like([c * a for a in self.coeffs])

    def _check(self, other):
        if other.degree_bound != self.degree_bound:
            raise DomainError("period polynomials with different degree bounds")

    def __call__(self, zeta):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * zeta + c
        return acc

    def compared_slots(self):
        return [l for l in range(self.degree_bound + 1) if l not in self.truncated_slots]

    def max_abs(self, slots=None):
        idx = range(self.degree_bound + 1) if slots is None else slots
        with mpmath.workprec(self.precision_bits):
            return max((abs(to_complex(self.coeffs[l])) for l in idx), default=mpf(0))


def _poly_mul(p, q):
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] += a * b
    return out


def _poly_pow(p, e):
    out = [1]
    for _ in range(e):
        out = _poly_mul(out, p)
    return out


def slash_action(P: PeriodPolynomial, g: GroupElement, weight_exponent: int = None) -> PeriodPolynomial:
    """P(g zeta) (c zeta + d)^D, expanded exactly."""
    D = P.degree_bound
    if weight_exponent is None:
        weight_exponent = -D
    if weight_exponent != -D:
        raise DomainError(f"weight exponent {weight_exponent} does not match degree bound {D}")
    num = [g.b, g.a]
    den = [g.d, g.c]
    out = [0] * (D + 1)
    with mpmath.workprec(P.precision_bits):
        for i, c in enumerate(P.coeffs):
            if c == 0:
                continue
            term = _poly_mul(_poly_pow(num, i), _poly_pow(den, D - i))
            for l, v in enumerate(term):
                if v:
                    out[l] += c * v
    return P._like(out)


def slash_combination(P: PeriodPolynomial, combo) -> PeriodPolynomial:
    """P || (sum n_g g) for a list of (n_g, g) pairs."""
    total = PeriodPolynomial.zero(P.degree_bound, weights_meta=P.weights_meta,
                                  truncated_slots=P.truncated_slots,
                                  precision_bits=P.precision_bits)
    for n, g in combo:
        total = total + slash_action(P, g).scale(n)
    return total


# ---------------------------------------------------------------------------
# L-values to period coefficients


def _check_hypotheses(r, s, k, experimental):
    if (r - s) % 2:
        raise DomainError("r and s must have the same parity")
    if not experimental and (r - s) % 4:
        raise DomainError("needs r = s (mod 4); pass experimental=True to evaluate anyway")
    if not 0 <= k <= min(r, s):
        raise DomainError(f"component index k={k} outside 0 <= k <= min(r, s)")


def alpha_n_coeff(r: int, s: int, k: int, l: int, n: int, literal: bool = False,
                  experimental: bool = False) -> GaussianRational:
    """alpha_n = i^(-l-2n) ((r-k) C(s-k+1, l-n) C(r-k-1, n) - (s-k) C(s-k-1, l-n) C(r-k+1, n)).

    With ``literal=True`` the first product uses C(r-k+1, n) instead; that
    variant does not reproduce the kernel coefficients and is kept only for
    comparison.
    """
    _check_hypotheses(r, s, k, experimental)
    if not 1 <= l <= r + s - 2 * k - 1:
        raise DomainError(f"l={l} outside 1 <= l <= r+s-2k-1")
    if not 0 <= n <= l:
        raise DomainError(f"n={n} outside 0 <= n <= l")
    first = generalized_binomial(r - k + 1 if literal else r - k - 1, n)
    val = ((r - k) * generalized_binomial(s - k + 1, l - n) * first
           - (s - k) * generalized_binomial(s - k - 1, l - n) * generalized_binomial(r - k + 1, n))
    return GaussianRational.i_power(-l - 2 * n) * Fraction(val)


def period_coefficient(r, s, k, l, literal=False, experimental=False) -> GaussianRational:
    """a_{k,l} = i sum_{n<=l} alpha_n, the factor in front of L*_{F_k}(k+l)."""
    total = GaussianRational()
    for n in range(l + 1):
        total = total + alpha_n_coeff(r, s, k, l, n, literal, experimental)
    return GaussianRational.i_power(1) * total


def truncated_period_polynomial(lvalues: dict, r: int, s: int, components=None,
                                literal: bool = False, experimental: bool = False,
                                ctx: PrecisionContext = DEFAULT_CONTEXT) -> PeriodPolynomial:
    """P'(zeta) = sum_k sum_l a_{k,l} L*_{F_k}(k+l) zeta^l.

    ``lvalues`` maps (k, l) to an LValue or a number; ``components`` lists
    the k present (default: those appearing in ``lvalues``).
    """
    if components is None:
        components = sorted({k for k, _ in lvalues})
    for k in components:
        _check_hypotheses(r, s, k, experimental)
    missing = [(k, l) for k in components for l in range(1, r + s - 2 * k)
               if (k, l) not in lvalues]
    if missing:
        raise DependencyError(f"missing L-values for (k, l) in {missing}", missing=missing)
    D = r + s
    with mpmath.workprec(ctx.precision_bits):
        coeffs = [mpc(0)] * (D + 1)
        for k in components:
            for l in range(1, r + s - 2 * k):
                v = lvalues[(k, l)]
                v = getattr(v, "value", v)
                a = period_coefficient(r, s, k, l, literal, experimental).to_mpc()
                coeffs[l] += a * to_complex(v)
    slots = sorted({0} | {r + s - 2 * k for k in components})
    return PeriodPolynomial(D, coeffs, ("rsk", r, s, tuple(components)), tuple(slots),
                            meta={"literal": literal, "experimental": experimental},
                            precision_bits=ctx.precision_bits)


# ---------------------------------------------------------------------------
# Maass-Selberg integrand


@dataclass
class MaassSelbergIntegrand:
    """eta = A(z) dz + B(z) dzbar for one component index k and fixed zeta."""

    k: int
    weights: tuple
    zeta: mpc
    A: object
    B: object
    precision_bits: int = 53

    def pullback_imaginary_axis(self, t):
        """eta along z = it, as a multiple of dt."""
        with mpmath.workprec(self.precision_bits):
            z = mpc(0, t)
            return mpc(0, 1) * (self.A(z) - self.B(z))


def maass_selberg_integrand(f, k: int, weights, zeta) -> MaassSelbergIntegrand:
    """A = y^(k-1) d_r f (zeta - zbar)^(s-k) (zeta - z)^(r-k),
    B = (s-k) y^(k-1) f (zeta - zbar)^(s-k-1) (zeta - z)^(r-k+1).

    ``f`` needs ``evaluate(z)`` and ``dz(z)`` (a BigradedExpansion does), or
    may be None for the zero form.
    """
    if hasattr(weights, "r"):
        r, s = weights.r, weights.s
    else:
        r, s = weights
    if not 0 <= k <= min(r, s):
        raise DomainError(f"component index k={k} outside 0 <= k <= min(r, s)")
    bits = getattr(f, "precision_bits", None) or mpmath.mp.prec
    with mpmath.workprec(bits):
        zeta = to_complex(zeta)

    def A(z):
        if f is None:
            return mpc(0)
        with mpmath.workprec(bits):
            z = mpc(z)
            y = z.imag
            raised = 2j * y * f.dz(z) + r * f.evaluate(z)
            return (y ** (k - 1) * raised * (zeta - mpmath.conj(z)) ** (s - k)
                    * (zeta - z) ** (r - k))

    def B(z):
        if f is None or s == k:
            return mpc(0)
        with mpmath.workprec(bits):
            z = mpc(z)
            y = z.imag
            return ((s - k) * y ** (k - 1) * f.evaluate(z)
                    * (zeta - mpmath.conj(z)) ** (s - k - 1) * (zeta - z) ** (r - k + 1))

    return MaassSelbergIntegrand(k, (r, s), zeta, A, B, bits)


# ---------------------------------------------------------------------------
# sigma_k(S) by quadrature


def _kernel(r, s, k, t, zeta):
    """R(t, zeta) minus its constant and leading zeta-coefficients."""
    it = mpc(0, t)
    total = mpc(0)
    for coeff, e1, e2 in ((r - k, s - k + 1, r - k - 1), (-(s - k), s - k - 1, r - k + 1)):
        if coeff == 0:
            continue
        full = ((1 - it * zeta) ** e1 * (1 + it * zeta) ** e2
                - (zeta + it) ** e1 * (zeta - it) ** e2)
        const = 1 - it ** e1 * (-it) ** e2
        lead = (-it) ** e1 * it ** e2 - 1
        total += coeff * (full - const - lead * zeta ** (e1 + e2))
    return total


class _DecayingPart:
    """t -> F~(it) from the m > 0 Fourier rows, memoised across quadratures."""

    def __init__(self, f: EigenExpansion):
        rows = {}
        for (j, m), c in list(f.hol.items()) + list(f.antihol.items()):
            if m > 0:
                rows.setdefault(j, {})
                rows[j][m] = rows[j].get(m, 0) + c
        self.rows = {j: [row.get(m, mpc(0)) for m in range(max(row) + 1)]
                     for j, row in rows.items()}
        self.cache = {}

    def __call__(self, t):
        hit = self.cache.get(t)
        if hit is not None:
            return hit
        q = mpmath.exp(-2 * mpmath.pi * t)
        total = mpc(0)
        for j, coeffs in self.rows.items():
            acc = mpc(0)
            for c in reversed(coeffs):
                acc = acc * q + c
            total += t ** j * acc
        self.cache[t] = total
        return total


def _principal_contribution(f: EigenExpansion, r, s, k, zeta):
    """i int_1^{-oo} t^(k-1) F(it) (R - R0) dt for the m < 0 rows, read through
    the incomplete-Gamma continuation term by term in t."""
    rows = [(j, m, c) for (j, m), c in list(f.hol.items()) + list(f.antihol.items()) if m < 0]
    if not rows:
        return mpc(0)
    # R - R0 is a polynomial in t; expand it by sampling at deg+1 points
    deg = 2 * (r + s - 2 * k)
    nodes = [mpf(n + 1) for n in range(deg + 1)]
    vals = [_kernel(r, s, k, x, zeta) for x in nodes]
    tcoeffs = _interpolate(nodes, vals)
    ctx = PrecisionContext(mpmath.mp.prec)
    total = mpc(0)
    for j, m, c in rows:
        for p, a in enumerate(tcoeffs):
            if a != 0:
                total += c * a * _g(k + j + p, m, ctx)
    return mpc(0, 1) * total


def _interpolate(xs, ys):
    """Monomial coefficients of the interpolating polynomial (exact for polynomial data)."""
    n = len(xs)
    A = mpmath.matrix([[x ** p for p in range(n)] for x in xs])
    sol = mpmath.lu_solve(A, mpmath.matrix(ys))
    return [sol[i] for i in range(n)]


def _default_grid(count):
    return [mpc(mpf("0.7") * mpmath.expjpi(mpf(2 * j) / count + mpf(1) / (3 * count)))
            for j in range(count)]


def sigma_S_quadrature(components, zeta_grid=None, ctx: PrecisionContext = DEFAULT_CONTEXT,
                       experimental: bool = False, check_residual: bool = True):
    """sigma(S) minus its constant and leading terms, from vertical-line quadrature.

    ``components`` is a list of (k, EigenExpansion) pairs (an EigenExpansion
    alone means k = 0).  At each grid point the three integrals

        i int_1^oo   t^(k-1) (F~(it) + a t^(k-r-s)) (R - R0) dt
        i int_1^-oo  t^(k-1) F°(it) (R - R0) dt
        i int_1^0    b (R - R0) dt

    are summed; the values are then fitted by a polynomial of degree r+s
    in the least-squares sense.  Returns (PeriodPolynomial, fit_residual).
    """
    if isinstance(components, EigenExpansion):
        components = [(0, components)]
    components = list(components)
    if not components:
        raise DomainError("no components given")
    r, s = components[0][1].weights.r, components[0][1].weights.s
    for k, f in components:
        if (f.weights.r, f.weights.s) != (r, s):
            raise DomainError("all components must share weights")
        _check_hypotheses(r, s, k, experimental)
        if f.k0 != k - r - s:
            raise DomainError(f"component k={k} needs k0 = k - r - s, got {f.k0}")
    D = r + s
    if zeta_grid is None:
        zeta_grid = _default_grid(D + 3)
    if len(zeta_grid) < D + 3:
        raise DomainError(f"need at least {D + 3} grid points, got {len(zeta_grid)}")
    bits = ctx.precision_bits
    with mpmath.workprec(bits + 16):
        grid = [to_complex(z) for z in zeta_grid]
        values = []
        err_total = mpf(0)
        evaluators = [(k, f, _DecayingPart(f)) for k, f in components]
        for zeta in grid:
            val = mpc(0)
            for k, f, dec in evaluators:
                if dec.rows:
                    v, e = integrate_vertical_line(
                        lambda t: t ** (k - 1) * dec(t) * _kernel(r, s, k, t, zeta), 1, INF, ctx)
                    val += mpc(0, 1) * v
                    err_total += e
                if f.const_a != 0:
                    v, e = integrate_vertical_line(
                        lambda t: t ** (2 * k - r - s - 1) * _kernel(r, s, k, t, zeta), 1, INF,
                        ctx, tail="algebraic")
                    val += mpc(0, 1) * f.const_a * v
                    err_total += e
                if f.const_b != 0:
                    v, e = integrate_vertical_line(lambda t: _kernel(r, s, k, t, zeta), 1, 0, ctx)
                    val += mpc(0, 1) * f.const_b * v
                    err_total += e
                val += _principal_contribution(f, r, s, k, zeta)
            values.append(val)
        A = mpmath.matrix([[z ** p for p in range(D + 1)] for z in grid])
        sol, _ = mpmath.qr_solve(A, mpmath.matrix(values))
        coeffs = [sol[i] for i in range(D + 1)]
        resid = max(abs(sum(coeffs[p] * z ** p for p in range(D + 1)) - v)
                    for z, v in zip(grid, values))
    with mpmath.workprec(bits):
        coeffs = [+c for c in coeffs]
        resid = +resid
    slots = sorted({0} | {r + s - 2 * k for k, _ in components})
    poly = PeriodPolynomial(D, coeffs, ("rsk", r, s, tuple(k for k, _ in components)),
                            tuple(slots), meta={"quad_error": err_total, "fit_residual": resid},
                            precision_bits=bits)
    if check_residual and resid > 10 * ctx.quad_tol + 10 * err_total:
        raise InconsistencyError(f"polynomial fit residual {mpmath.nstr(resid, 5)} too large")
    return poly, resid


# ---------------------------------------------------------------------------
# Eichler cocycle of a weakly holomorphic form


def eichler_period_polynomial(f: QExpansion, ctx: PrecisionContext = DEFAULT_CONTEXT) -> PeriodPolynomial:
    """sigma'_f(S) = V || (S - 1), V(z) = int_{i oo}^i f~(w)(z-w)^(k-2) dw + int_{-i oo}^i f°(w)(z-w)^(k-2) dw.

    Each monomial integral int w^q e^{2 pi i m w} dw along the imaginary axis
    equals -i^(q+1) G(q+1, m), for m > 0 and (by continuation) m < 0.
    """
    k = f.weight
    if k % 2 or k < 4:
        raise DomainError("eichler_period_polynomial needs even weight k >= 4")
    if f.coeffs.get(0, 0) != 0:
        raise DomainError("eichler_period_polynomial needs a vanishing constant term")
    D = k - 2
    bits = ctx.precision_bits
    wctx = ctx.with_bits(bits + 20)
    with mpmath.workprec(bits + 20):
        moments = [mpc(0)] * (D + 1)  # sum_m a(m) int w^q e^{2 pi i m w} dw
        for m, c in f.coeffs.items():
            c = to_complex(c)
            for q in range(D + 1):
                moments[q] += c * (-i_power(q + 1)) * _g(q + 1, m, wctx)
        coeffs = [mpc(0)] * (D + 1)
        for q in range(D + 1):
            # (z - w)^D = sum_q C(D, q) z^(D-q) (-w)^q
            coeffs[D - q] += comb(D, q) * (-1) ** q * moments[q]
    with mpmath.workprec(bits):
        V = PeriodPolynomial(D, [+c for c in coeffs], ("k", k), precision_bits=bits)
        out = slash_action(V, S) - V
    return out


def eichler_value_at_T(f: QExpansion, ctx: PrecisionContext = DEFAULT_CONTEXT) -> PeriodPolynomial:
    """sigma'_f(T): zero, since the Eichler integral from i oo is 1-periodic."""
    k = f.weight
    if k % 2 or k < 4:
        raise DomainError("eichler_value_at_T needs even weight k >= 4")
    return PeriodPolynomial.zero(k - 2, weights_meta=("k", k), precision_bits=ctx.precision_bits)


def psi0(degree_bound: int) -> PeriodPolynomial:
    """1 || (S - 1), the coboundary generator at S."""
    one = PeriodPolynomial(degree_bound, [1] + [0] * degree_bound)
    return slash_action(one, S) - one


def cocycle_relation_residuals(P_S: PeriodPolynomial, weight_exponent: int = None):
    """Max coefficient of P_S || (1 + S) and of P_S || (1 + U + U^2)."""
    D = P_S.degree_bound
    if weight_exponent is not None and weight_exponent != -D:
        raise DomainError(f"weight exponent {weight_exponent} does not match degree bound {D}")
    res_s = slash_combination(P_S, [(1, IDENTITY), (1, S)])
    res_u = slash_combination(P_S, [(1, IDENTITY), (1, U), (1, U @ U)])
    return res_s.max_abs(), res_u.max_abs()


def frobenius_split(P: PeriodPolynomial):
    """(even, odd) coefficient parts; even + odd = P."""
    even = [c if l % 2 == 0 else 0 for l, c in enumerate(P.coeffs)]
    odd = [c if l % 2 else 0 for l, c in enumerate(P.coeffs)]
    return P._like(even), P._like(odd)
