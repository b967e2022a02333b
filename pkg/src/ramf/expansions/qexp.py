"""Exact one-variable q-expansions of weakly holomorphic modular forms of level 1."""

from __future__ import annotations

import math
from fractions import Fraction

import mpmath

from ..errors import DomainError, TruncationError
from ..linalg import rref
from ..numerics import DEFAULT_CONTEXT, PrecisionContext, divisor_sigma, to_complex


class QExpansion:
    """sum_{m >= -N} c_m q^m, known for m < prec (``prec`` is the valid-through bound + 1).

    Coefficients are stored densely from ``-pole_order`` to ``prec - 1``.
    """

    __slots__ = ("weight", "coeffs", "prec")

    def __init__(self, weight: int, coeffs: dict, prec: int):
        self.weight = int(weight)
        self.prec = int(prec)
        clean = {}
        for m, c in coeffs.items():
            m = int(m)
            if m >= self.prec:
                continue
            if isinstance(c, int):
                c = Fraction(c)
            if c != 0:
                clean[m] = c
        self.coeffs = clean

    @property
    def pole_order(self) -> int:
        return max([0] + [-m for m in self.coeffs if m < 0])

    @property
    def order(self):
        """Index of the first nonzero coefficient (None for zero)."""
        return min(self.coeffs, default=None)

    def __getitem__(self, m: int):
        if m >= self.prec:
            raise TruncationError(f"coefficient q^{m} is beyond the truncation q^{self.prec}")
        return self.coeffs.get(m, Fraction(0))

    def __repr__(self):
        shown = ", ".join(f"{m}: {self.coeffs[m]}" for m in sorted(self.coeffs)[:6])
        return f"QExpansion(weight={self.weight}, prec={self.prec}, {{{shown}...}})"

    def __eq__(self, other):
        if not isinstance(other, QExpansion):
            return NotImplemented
        return (self.weight == other.weight and self.prec == other.prec
                and self.coeffs == other.coeffs)

    def agrees_with(self, other) -> bool:
        """Equality over the common valid range."""
        top = min(self.prec, other.prec)
        keys = {m for m in (*self.coeffs, *other.coeffs) if m < top}
        return all(self.coeffs.get(m, 0) == other.coeffs.get(m, 0) for m in keys)

    def is_exact(self) -> bool:
        return all(isinstance(c, Fraction) for c in self.coeffs.values())

    def truncate(self, prec: int) -> "QExpansion":
        return QExpansion(self.weight, self.coeffs, min(prec, self.prec))

    def __add__(self, other):
        if other.weight != self.weight:
            raise DomainError("cannot add q-expansions of different weights")
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            out[m] = out.get(m, 0) + c
        return QExpansion(self.weight, out, min(self.prec, other.prec))

    def __neg__(self):
        return QExpansion(self.weight, {m: -c for m, c in self.coeffs.items()}, self.prec)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return QExpansion(self.weight, {m: c * v for m, v in self.coeffs.items()}, self.prec)

    def __mul__(self, other):
        if isinstance(other, QExpansion):
            return q_mul(self, other)
        return self.scale(other)

    __rmul__ = scale

    def shift(self, e: int, weight=None) -> "QExpansion":
        """q^e * f."""
        return QExpansion(self.weight if weight is None else weight,
                          {m + e: c for m, c in self.coeffs.items()}, self.prec + e)

    def inverse(self) -> "QExpansion":
        """1/f, with the same relative precision as f."""
        v = self.order
        if v is None:
            raise ZeroDivisionError("inverse of the zero q-expansion")
        length = self.prec - v
        lead = self.coeffs[v]
        a = [self.coeffs.get(v + i, 0) for i in range(length)]
        b = [0] * length
        b[0] = 1 / lead if isinstance(lead, Fraction) else Fraction(1) / lead
        for n in range(1, length):
            acc = sum(a[i] * b[n - i] for i in range(1, n + 1) if a[i])
            b[n] = -acc / lead
        return QExpansion(-self.weight, {n - v: b[n] for n in range(length)}, length - v)

    def __truediv__(self, other):
        if isinstance(other, QExpansion):
            return q_mul(self, other.inverse())
        return self.scale(Fraction(1) / other if isinstance(other, int) else 1 / other)

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        out = _one(self.prec - min(0, self.order or 0))
        base = self
        while e:
            if e & 1:
                out = q_mul(out, base)
            e >>= 1
            if e:
                base = q_mul(base, base)
        return out

    def evaluate(self, z, ctx: PrecisionContext = DEFAULT_CONTEXT):
        """Truncated sum at z in the upper half-plane."""
        with mpmath.workprec(ctx.precision_bits):
            q = mpmath.expjpi(2 * mpmath.mpc(z))
            return sum((to_complex(c) * q ** m for m, c in self.coeffs.items()), mpmath.mpc(0))


def _one(prec: int) -> QExpansion:
    return QExpansion(0, {0: Fraction(1)}, prec)


def q_mul(f: QExpansion, g: QExpansion) -> QExpansion:
    """Cauchy product; valid through min(f.prec + ord g, g.prec + ord f)."""
    vf = f.order if f.order is not None else 0
    vg = g.order if g.order is not None else 0
    prec = min(f.prec + vg, g.prec + vf)
    out = {}
    gi = sorted(g.coeffs.items())
    for m, a in f.coeffs.items():
        for n, b in gi:
            k = m + n
            if k >= prec:
                break
            out[k] = out.get(k, 0) + a * b
    return QExpansion(f.weight + g.weight, out, prec)


def _eisenstein_q(weight: int, factor: int, prec: int) -> QExpansion:
    coeffs = {0: Fraction(1)}
    for n in range(1, prec):
        coeffs[n] = Fraction(factor * divisor_sigma(weight - 1, n))
    return QExpansion(weight, coeffs, prec)


def q_generator(name: str, ctx: PrecisionContext = DEFAULT_CONTEXT) -> QExpansion:
    """E4, E6, Delta or Jinv, exact through q^(q_truncation - 1)."""
    prec = ctx.q_truncation
    if name == "E4":
        return _eisenstein_q(4, 240, prec)
    if name == "E6":
        return _eisenstein_q(6, -504, prec)
    if name == "Delta":
        e4 = _eisenstein_q(4, 240, prec)
        e6 = _eisenstein_q(6, -504, prec)
        return (q_mul(q_mul(e4, e4), e4) - q_mul(e6, e6)).scale(Fraction(1, 1728))
    if name == "Jinv":
        # inverting Delta (order 1) costs two terms of validity
        wide = ctx.replace(q_truncation=prec + 2)
        e4 = q_generator("E4", wide)
        d = q_generator("Delta", wide)
        return q_mul(q_mul(q_mul(e4, e4), e4), d.inverse()).truncate(prec)
    raise DomainError(f"unknown generator {name!r}; expected E4, E6, Delta or Jinv")


def d_power(g: QExpansion, e: int) -> QExpansion:
    """D^e with D = q d/dq; weight 2 - k goes to k when e = k - 1."""
    if e < 0:
        raise DomainError("d_power needs a nonnegative exponent")
    return QExpansion(g.weight + 2 * e, {m: c * m ** e for m, c in g.coeffs.items()}, g.prec)


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % d for d in range(2, math.isqrt(p) + 1))


def hecke_tp(f: QExpansion, p: int, out_prec=None) -> QExpansion:
    """T_p in weight f.weight: a(pm) + p^(k-1) a(m/p).

    The result is valid through floor((f.prec - 1) / p); asking for more raises.
    """
    if not _is_prime(p):
        raise DomainError(f"hecke_tp needs a prime, got {p}")
    valid = (f.prec - 1) // p + 1
    if out_prec is None:
        out_prec = valid
    elif out_prec > valid:
        raise TruncationError(
            f"T_{p} through q^{out_prec - 1} needs f through q^{p * (out_prec - 1)}, "
            f"have q^{f.prec - 1}")
    k = f.weight
    pk = Fraction(p) ** (k - 1)
    lo = -p * f.pole_order
    out = {}
    for m in range(lo, out_prec):
        c = f.coeffs.get(p * m, 0)
        if m % p == 0:
            c = c + pk * f.coeffs.get(m // p, 0)
        if c != 0:
            out[m] = c
    return QExpansion(k, out, out_prec)


def dim_modular_forms(k: int) -> int:
    """dim M_k for SL_2(Z)."""
    if k < 0 or k % 2:
        return 0
    if k == 2:
        return 0
    return k // 12 if k % 12 == 2 else k // 12 + 1


def weakly_holo_basis(k: int, max_pole: int, ctx: PrecisionContext = DEFAULT_CONTEXT) -> dict:
    """Reduced basis {n: f_{k,n}} of the forms in M!_k with pole order <= max_pole.

    f_{k,n} = q^(-n) + O(q^(l+1)) with l = dim M_k - 1 (only n >= -l occur).
    Pole orders with no form are simply missing from the mapping.
    """
    if k % 2:
        raise DomainError("weakly_holo_basis needs an even weight")
    if max_pole < 0:
        raise DomainError("max_pole must be nonnegative")
    t = -(-(abs(k) + 10) // 12) if k < 0 else 0
    k_hol = k + 12 * t
    top = max_pole + t
    ell = dim_modular_forms(k) - 1
    prec = ctx.q_truncation
    # every generator is a Laurent series of order >= -(max_pole + t) - t
    work = ctx.replace(q_truncation=prec + 2 * t + top + 2)
    e4, e6 = q_generator("E4", work), q_generator("E6", work)
    delta = q_generator("Delta", work)
    jinv = q_generator("Jinv", work)
    one = _one(work.q_truncation)
    gens = []
    for a in range(k_hol // 4 + 1):
        rem = k_hol - 4 * a
        if rem % 6:
            continue
        base = q_mul(e4 ** a, e6 ** (rem // 6))
        jp = one
        for _ in range(top + 1):
            gens.append(q_mul(base, jp))
            jp = q_mul(jp, jinv)
    if t:
        dinv = delta.inverse() ** t
        gens = [q_mul(g, dinv) for g in gens]
    gens = [QExpansion(k, g.coeffs, g.prec) for g in gens]
    if not gens:
        return {}
    out_prec = min(prec, min(g.prec for g in gens))
    lo = -max_pole - 12 * t - 1
    lo = min(lo, min(g.order for g in gens if g.order is not None))
    cols = list(range(lo, out_prec))
    rows = [[g.coeffs.get(m, Fraction(0)) for m in cols] for g in gens]
    red, pivots = rref(rows)
    basis = {}
    for row, pc in zip(red, pivots):
        n = -cols[pc]
        if n > max_pole:
            continue
        basis[n] = QExpansion(k, {m: c for m, c in zip(cols, row)}, out_prec)
    if ell >= 0:
        assert all(n >= -ell for n in basis)
    return dict(sorted(basis.items(), key=lambda kv: -kv[0]))
