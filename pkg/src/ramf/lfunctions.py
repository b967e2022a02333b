"""Regularised L-functions L*_f(w) of real-analytic and weakly holomorphic forms.

Every route reduces to the same building block

    G(a, x) = Gamma(a, x) / x^a,     x = 2 pi m,

taken on the principal branch when m < 0, so that the series form, the
weakly holomorphic specialisation and the general bigraded form share one
evaluator.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from functools import lru_cache

import mpmath
from mpmath import mpc, mpf

from .errors import ConditioningError, DomainError, PoleError
from .expansions.bigraded import BigradedExpansion, Weights
from .expansions.eigen import EigenExpansion, alpha_pm
from .expansions.qexp import QExpansion
from .numerics import (DEFAULT_CONTEXT, INF, PrecisionContext, i_power,
                       integrate_vertical_line, riemann_zeta_int, to_complex,
                       upper_incomplete_gamma)


@dataclass
class LSeriesData:
    """Input of the series form: merged rows c_m^{(j)} and the constant term (a, b)."""

    weights: Weights
    k0: int
    merged: dict = field(default_factory=dict)
    const_a: mpc = mpc(0)
    const_b: mpc = mpc(0)
    precision_bits: int = DEFAULT_CONTEXT.precision_bits

    def __post_init__(self):
        if not isinstance(self.weights, Weights):
            self.weights = Weights(*self.weights)
        if any(m == 0 for _, m in self.merged):
            raise DomainError("merged coefficients must not contain m = 0")
        with mpmath.workprec(self.precision_bits):
            self.merged = {k: to_complex(v) for k, v in self.merged.items() if v != 0}
            self.const_a = to_complex(self.const_a)
            self.const_b = to_complex(self.const_b)

    @classmethod
    def from_eigen(cls, f: EigenExpansion) -> "LSeriesData":
        return cls(f.weights, f.k0, f.merged(), f.const_a, f.const_b, f.precision_bits)

    @classmethod
    def from_qexp(cls, f: QExpansion, precision_bits=None) -> "LSeriesData":
        k = f.weight
        merged = {(0, m): c for m, c in f.coeffs.items() if m != 0}
        return cls(Weights(k, 0), 1 - k, merged, 0, f.coeffs.get(0, 0),
                   precision_bits or DEFAULT_CONTEXT.precision_bits)


@dataclass
class LValue:
    w: mpc
    value: mpc | None
    error_bound: mpf
    pole_flag: bool = False
    experimental: bool = False

    def __repr__(self):
        if self.pole_flag:
            return f"LValue(w={mpmath.nstr(self.w, 8)}, pole)"
        return (f"LValue(w={mpmath.nstr(self.w, 8)}, value={mpmath.nstr(self.value, 20)}, "
                f"err={mpmath.nstr(self.error_bound, 3)})")


def _as_series(f, ctx) -> LSeriesData:
    if isinstance(f, LSeriesData):
        return f
    if isinstance(f, EigenExpansion):
        return LSeriesData.from_eigen(f)
    if isinstance(f, QExpansion):
        return LSeriesData.from_qexp(f, ctx.precision_bits)
    raise DomainError(f"cannot form an L-series from {type(f).__name__}")


@lru_cache(maxsize=8192)
def _g_cached(a: mpc, m: int, bits: int) -> mpc:
    with mpmath.workprec(bits):
        x = 2 * mpmath.pi * m
        gam = upper_incomplete_gamma(a, x, PrecisionContext(bits))
        if m > 0:
            return gam * mpmath.exp(-a * mpmath.log(x))
        return gam * mpmath.exp(-a * (mpmath.log(-x) + mpc(0, 1) * mpmath.pi))


def _g(a, m, ctx):
    """Gamma(a, 2 pi m) / (2 pi m)^a with the principal branch for m < 0."""
    return _g_cached(mpc(a), int(m), ctx.precision_bits)


def _g_row(a, m, count, ctx):
    """[G(a, m), G(a+1, m), ..., G(a+count-1, m)] via G(a+1) = (a G(a) + e^{-x}) / x."""
    out = [_g(a, m, ctx)]
    if count > 1:
        x = 2 * mpmath.pi * m
        ex = mpmath.exp(-x)
        for i in range(count - 1):
            out.append(((a + i) * out[-1] + ex) / x)
    return out


def pole_set(k0: int, r: int, s: int):
    """The four excluded points -k0, -k0+1, k0+r+s-1, k0+r+s."""
    return (-k0, -k0 + 1, k0 + r + s - 1, k0 + r + s)


def constant_term_poles(k0: int, r: int, s: int, a, b, w, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """P(w) for the constant term a y^k0 + b y^(1-r-s-k0).

    A term whose coefficient vanishes contributes nothing, so only the poles
    carried by a nonzero a or b raise.
    """
    with mpmath.workprec(ctx.precision_bits):
        w = to_complex(w)
        a, b = to_complex(a), to_complex(b)
        eps = i_power(r - s)
        terms = (
            ("i^(r-s) a/(w-k0-r-s)", eps * a, k0 + r + s),
            ("i^(r-s) b/(w+k0-1)", eps * b, 1 - k0),
            ("-a/(w+k0)", -a, -k0),
            ("-b/(w-k0-r-s+1)", -b, k0 + r + s - 1),
        )
        total = mpc(0)
        for name, coeff, pole in terms:
            if coeff == 0:
                continue
            if w == pole:
                raise PoleError(f"w = {pole} is a pole of the term {name}",
                                pole=pole, term=name, residue=coeff)
            total += coeff / (w - pole)
        return total


def _rows(data: LSeriesData):
    by_j = {}
    for (j, m), c in data.merged.items():
        by_j.setdefault(j, []).append((m, c))
    return by_j


def _series(data: LSeriesData, w, ctx, complete: bool):
    """The two incomplete-Gamma sums of the series form, with a tail bound."""
    r, s = data.weights.r, data.weights.s
    eps = i_power(r - s)
    by_m = {}
    for (j, m), c in data.merged.items():
        by_m.setdefault(m, {})[j] = c
    total = mpc(0)
    mag = mpf(0)
    row_last = {}
    for m in sorted(by_m):
        row = by_m[m]
        lo, hi = min(row), max(row)
        g1 = _g_row(w + lo, m, hi - lo + 1, ctx)
        g2 = _g_row(r + s + lo - w, m, hi - lo + 1, ctx)
        for j, c in row.items():
            t1 = c * g1[j - lo]
            t2 = eps * c * g2[j - lo]
            total += t1 + t2
            size = abs(t1) + abs(t2)
            mag += size
            if m > 0:
                row_last.setdefault(j, []).append(size)
    tail = mpf(0)
    if not complete:
        # extrapolate each row by its largest recent term, allowing a factor 4 for
        # divisor-sum fluctuation, and sum geometrically at ratio 1.1 e^{-2 pi}
        decay = mpmath.exp(-2 * mpmath.pi)
        for sizes in row_last.values():
            tail += 4 * max(sizes[-3:]) * decay / (1 - 1.1 * decay)
    return total, mag, tail


def l_star(f, w, ctx: PrecisionContext = DEFAULT_CONTEXT, complete=None) -> LValue:
    """L*_f(w) from the series form: two incomplete-Gamma sums plus P(w).

    ``f`` is an EigenExpansion, a QExpansion (read as a weight (k, 0)
    eigenform with k0 = 1 - k) or an LSeriesData.  ``complete`` says whether
    the stored coefficients are the whole expansion; by default q-expansions
    are taken as complete through their truncation and eigen expansions as
    truncated, so a tail estimate is attached.
    """
    data = _as_series(f, ctx)
    if complete is None:
        complete = isinstance(f, QExpansion)
    r, s = data.weights.r, data.weights.s
    with mpmath.workprec(ctx.precision_bits + 20):
        w = to_complex(w)
        try:
            p = constant_term_poles(data.k0, r, s, data.const_a, data.const_b, w,
                                    ctx.with_bits(ctx.precision_bits + 20))
        except PoleError:
            return LValue(w, None, mpf(0), pole_flag=True)
        total, mag, tail = _series(data, w, ctx.with_bits(ctx.precision_bits + 20), complete)
        value = total + p
        rounding = (mag + abs(p)) * mpf(2) ** (-ctx.precision_bits + 8)
    with mpmath.workprec(ctx.precision_bits):
        return LValue(w, +value, +(tail + rounding))


def l_star_weakly(f: QExpansion, w, ctx: PrecisionContext = DEFAULT_CONTEXT) -> LValue:
    """L*_f(w) for f in M!_k:

        sum a(m) G(w, m) + i^k sum a(m) G(k - w, m) - b (1/w + i^k/(k - w)),

    with b = a(0) and the sums over m != 0.
    """
    k = f.weight
    bits = ctx.precision_bits
    wctx = ctx.with_bits(bits + 20)
    with mpmath.workprec(bits + 20):
        w = to_complex(w)
        b = to_complex(f.coeffs.get(0, 0))
        eps = i_power(k)
        if b != 0 and (w == 0 or w == k):
            return LValue(w, None, mpf(0), pole_flag=True)
        total = mpc(0)
        mag = mpf(0)
        for m, c in sorted(f.coeffs.items()):
            if m == 0:
                continue
            c = to_complex(c)
            t = c * (_g(w, m, wctx) + eps * _g(k - w, m, wctx))
            total += t
            mag += abs(t)
        if b != 0:
            total -= b * (1 / w + eps / (k - w))
        # first omitted coefficient, bounded crudely by the largest stored one
        top = f.prec
        big = max((abs(to_complex(c)) for c in f.coeffs.values()), default=mpf(0))
        x = 2 * mpmath.pi * top
        tail = (2 * big * mpmath.exp(-x) * (abs(mpmath.power(x, abs(w.real) + k)) + 1)
                / (1 - mpmath.exp(-2 * mpmath.pi)))
        rounding = mag * mpf(2) ** (-bits + 8)
    with mpmath.workprec(bits):
        return LValue(w, +total, +(tail + rounding))


def l_star_bigraded(f: BigradedExpansion, w, ctx: PrecisionContext = DEFAULT_CONTEXT) -> LValue:
    """L*_f(w) straight from the bigraded expansion.

    A term a y^j q^m qbar^n with N = m + n != 0 contributes
    a (G(w + j, N) + i^(r-s) G(r + s - w + j, N)); a term with N = 0 contributes
    -a (1/(w + j) + i^(r-s)/(r + s - w + j)).  Tables with terms mixing q and
    qbar (m, n both nonzero) are evaluated the same way but flagged
    experimental.
    """
    r, s = f.weights.r, f.weights.s
    bits = ctx.precision_bits
    wctx = ctx.with_bits(bits + 20)
    mixed = any(m != 0 and n != 0 for _, m, n in f.terms)
    if mixed:
        warnings.warn("bigraded L-function of a table mixing q and qbar is experimental",
                      stacklevel=2)
    with mpmath.workprec(bits + 20):
        w = to_complex(w)
        eps = i_power(r - s)
        total = mpc(0)
        mag = mpf(0)
        for (j, m, n), c in f.terms.items():
            N = m + n
            if N == 0:
                if w + j == 0 or r + s - w + j == 0:
                    return LValue(w, None, mpf(0), pole_flag=True, experimental=mixed)
                t = -c * (1 / (w + j) + eps / (r + s - w + j))
            else:
                t = c * (_g(w + j, N, wctx) + eps * _g(r + s - w + j, N, wctx))
            total += t
            mag += abs(t)
        rounding = mag * mpf(2) ** (-bits + 8)
    with mpmath.workprec(bits):
        return LValue(w, +total, +rounding, experimental=mixed)


def l_star_eisenstein_closed(r: int, s: int, w, ctx: PrecisionContext = DEFAULT_CONTEXT) -> LValue:
    """L* of the double Eisenstein series E_{r,s} in closed form:

        zeta(w+1) zeta(w-r-s) (2 pi)^(r+s-w) pi / (Gamma(r+1) zeta(r+s+1))
          * sum_j 2^j Gamma(j + w) (alpha^+ row + alpha^- row).
    """
    if r < 1 or s < 1 or (r - s) % 2:
        raise DomainError("closed form needs r, s >= 1 of equal parity")
    bits = ctx.precision_bits
    with mpmath.workprec(bits + 20):
        w = to_complex(w)
        if w == 0 or w == r + s + 1:
            return LValue(w, None, mpf(0), pole_flag=True)
        half = (r + s) // 2
        rows = 0
        for sign, top in ((1, -s), (-1, -r)):
            for j in range(-r - s, top + 1):
                al = alpha_pm(r, s, -j - half, sign)
                if not al:
                    continue
                jw = j + w
                if jw.imag == 0 and jw.real <= 0 and jw.real == int(jw.real):
                    return LValue(w, None, mpf(0), pole_flag=True)
                rows += mpf(2) ** j * mpmath.gamma(jw) * al
        pref = (mpmath.zeta(w + 1) * mpmath.zeta(w - r - s) * (2 * mpmath.pi) ** (r + s - w)
                * mpmath.pi / (mpmath.factorial(r) * riemann_zeta_int(r + s + 1, ctx.with_bits(bits + 20))))
        value = pref * rows
        err = abs(value) * mpf(2) ** (-bits + 8)
    with mpmath.workprec(bits):
        return LValue(w, +value, +err)


def _evaluate(f, w, ctx):
    if isinstance(f, QExpansion):
        return l_star_weakly(f, w, ctx)
    if isinstance(f, BigradedExpansion):
        return l_star_bigraded(f, w, ctx)
    if isinstance(f, tuple) and len(f) == 3 and f[0] == "eisenstein-closed":
        return l_star_eisenstein_closed(f[1], f[2], w, ctx)
    return l_star(f, w, ctx)


def _weights_of(f):
    if isinstance(f, QExpansion):
        return f.weight, 0
    if isinstance(f, tuple):
        return f[1], f[2]
    return f.weights.r, f.weights.s


def functional_equation_residual(f, w, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """(|L*(w) - i^(r-s) L*(r+s-w)|, combined error bound).

    ``f`` may also be ``("eisenstein-closed", r, s)`` for the closed form.
    """
    r, s = _weights_of(f)
    with mpmath.workprec(ctx.precision_bits):
        w = to_complex(w)
        w2 = (r + s) - w
        if isinstance(f, (EigenExpansion, LSeriesData)):
            data = _as_series(f, ctx)
            guard = 10 * ctx.series_tol
            for pole in pole_set(data.k0, r, s):
                for x in (w, w2):
                    if 0 < abs(x - pole) < guard:
                        raise ConditioningError(f"w is within {mpmath.nstr(guard, 3)} of the pole {pole}",
                                                pole=pole)
    lhs = _evaluate(f, w, ctx)
    rhs = _evaluate(f, w2, ctx)
    if lhs.pole_flag or rhs.pole_flag:
        raise PoleError("functional equation evaluated at a pole", pole=w)
    with mpmath.workprec(ctx.precision_bits):
        res = abs(lhs.value - i_power(r - s) * rhs.value)
        return +res, lhs.error_bound + rhs.error_bound


class _CuspEvaluator:
    """t -> f(it) for a cusp form, memoised so repeated quadratures reuse nodes."""

    def __init__(self, f: QExpansion, bits: int):
        with mpmath.workprec(bits):
            self.items = sorted((m, to_complex(c)) for m, c in f.coeffs.items())
        self.top = max((m for m, _ in self.items), default=0)
        self.coeffs = [mpc(0)] * (self.top + 1)
        for m, c in self.items:
            self.coeffs[m] = c
        self.bits = bits
        self.cache = {}

    def __call__(self, t):
        key = t
        hit = self.cache.get(key)
        if hit is not None:
            return hit
        q = mpmath.exp(-2 * mpmath.pi * t)
        acc = mpc(0)
        for c in reversed(self.coeffs):
            acc = acc * q + c
        self.cache[key] = acc
        return acc


def l_star_quadrature_oracle(f: QExpansion, w, ctx: PrecisionContext = DEFAULT_CONTEXT,
                             evaluator=None) -> LValue:
    """int_1^oo f(it) (t^(w-1) + i^k t^(k-w-1)) dt by direct quadrature.

    Only for cusp forms; a principal part or constant term must go through
    :func:`l_star_weakly`.  Pass the same ``evaluator`` across calls to reuse
    f(it) at shared nodes.
    """
    if any(m <= 0 for m in f.coeffs):
        raise DomainError("quadrature oracle needs a cusp form; use l_star_weakly instead")
    k = f.weight
    bits = ctx.precision_bits
    qctx = ctx.with_bits(bits + 16)
    ev = evaluator or _CuspEvaluator(f, bits + 16)
    with mpmath.workprec(bits + 16):
        w = to_complex(w)
        eps = i_power(k)
        if not f.coeffs:
            return LValue(w, mpc(0), mpf(0))

        def integrand(t):
            return ev(t) * (mpmath.power(t, w - 1) + eps * mpmath.power(t, k - w - 1))

        value, err = integrate_vertical_line(integrand, 1, INF, qctx)
        # truncation of the q-expansion itself
        big = max(abs(c) for c in ev.coeffs)
        m = f.prec
        err += big * mpmath.exp(-2 * mpmath.pi * m) * m ** (k / 2 + 1)
    with mpmath.workprec(bits):
        return LValue(w, +value, +err)
