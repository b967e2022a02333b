"""Finite bigraded expansions sum_j y^j sum_{m,n} a_{m,n}^{(j)} q^m qbar^n.

The Maass operators act on a single monomial y^j q^m qbar^n by

    d_r     : (j + r) y^j       - 4 pi m y^{j+1}
    dbar_s  : (j + s) y^j       - 4 pi n y^{j+1}

(with d/dz q = 2 pi i q, d/dz y = 1/(2i)), so every operator below is a
term-by-term rewrite of the coefficient table.
"""

from __future__ import annotations

from dataclasses import dataclass

import mpmath
from mpmath import mpc, mpf

from ..errors import DomainError
from ..numerics import DEFAULT_CONTEXT, PrecisionContext, to_complex


@dataclass(frozen=True)
class Weights:
    r: int
    s: int

    def __post_init__(self):
        if (self.r - self.s) % 2:
            raise DomainError(f"weights ({self.r}, {self.s}) must have the same parity")

    def shift(self, dr: int, ds: int) -> "Weights":
        return Weights(self.r + dr, self.s + ds)


class BigradedExpansion:
    """Coefficient table ``{(j, m, n): a}`` with bounds |j| <= M, m, n >= -N."""

    def __init__(self, weights, terms=None, M=None, N=None, precision_bits=None):
        if not isinstance(weights, Weights):
            weights = Weights(*weights)
        self.weights = weights
        self.precision_bits = precision_bits or DEFAULT_CONTEXT.precision_bits
        clean = {}
        with mpmath.workprec(self.precision_bits):
            for (j, m, n), c in (terms or {}).items():
                c = to_complex(c)
                if c != 0:
                    clean[(int(j), int(m), int(n))] = c
        self.terms = clean
        need_M = max((abs(j) for j, _, _ in clean), default=0)
        need_N = max((max(-m, -n) for _, m, n in clean), default=0)
        need_N = max(need_N, 0)
        self.M = need_M if M is None else M
        self.N = need_N if N is None else N
        if self.M < need_M or self.N < need_N:
            raise DomainError("a stored term violates the declared bounds M, N")

    def __repr__(self):
        return (f"BigradedExpansion(weights=({self.weights.r}, {self.weights.s}), "
                f"{len(self.terms)} terms, M={self.M}, N={self.N})")

    def _new(self, terms, weights=None):
        return BigradedExpansion(weights or self.weights, terms,
                                 precision_bits=self.precision_bits)

    def __add__(self, other):
        if other.weights != self.weights:
            raise DomainError("cannot add expansions of different weights")
        out = dict(self.terms)
        with mpmath.workprec(self.precision_bits):
            for key, c in other.terms.items():
                out[key] = out.get(key, 0) + c
        return self._new(out)

    def __neg__(self):
        with mpmath.workprec(self.precision_bits):
            return self._new({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        with mpmath.workprec(self.precision_bits):
            c = to_complex(c)
            return self._new({k: c * v for k, v in self.terms.items()})

    def multiply_y_power(self, e: int, weights=None):
        """y^e * f as a table (weights left to the caller)."""
        return self._new({(j + e, m, n): c for (j, m, n), c in self.terms.items()},
                         weights or self.weights)

    def is_zero(self):
        return not self.terms

    def max_abs(self):
        with mpmath.workprec(self.precision_bits):
            return max((abs(c) for c in self.terms.values()), default=mpf(0))

    def max_difference(self, other):
        keys = set(self.terms) | set(other.terms)
        with mpmath.workprec(max(self.precision_bits, other.precision_bits)):
            return max((abs(self.terms.get(k, 0) - other.terms.get(k, 0)) for k in keys),
                       default=mpf(0))

    def evaluate(self, z):
        """f(z) for z off the real axis (y < 0 is allowed for principal parts)."""
        with mpmath.workprec(self.precision_bits):
            z = mpc(z)
            y = z.imag
            if y == 0:
                raise DomainError("bigraded expansions are not evaluated on the real axis")
            q = mpmath.expjpi(2 * z)
            qb = mpmath.conj(q)
            total = mpc(0)
            for (j, m, n), c in self.terms.items():
                total += c * y ** j * q ** m * qb ** n
            return total

    def dz(self, z):
        """(d/dz f)(z), the holomorphic Wirtinger derivative."""
        with mpmath.workprec(self.precision_bits):
            z = mpc(z)
            y = z.imag
            q = mpmath.expjpi(2 * z)
            qb = mpmath.conj(q)
            total = mpc(0)
            two_pi_i = 2j * mpmath.pi
            for (j, m, n), c in self.terms.items():
                base = c * q ** m * qb ** n
                total += base * (two_pi_i * m * y ** j + (j / mpc(0, 2)) * y ** (j - 1))
            return total


def split_parts(f: BigradedExpansion):
    """(decaying, constant, principal) by the sign of m + n."""
    tilde, const, princ = {}, {}, {}
    for key, c in f.terms.items():
        _, m, n = key
        (tilde if m + n > 0 else const if m + n == 0 else princ)[key] = c
    mk = lambda t: BigradedExpansion(f.weights, t, precision_bits=f.precision_bits)
    return mk(tilde), mk(const), mk(princ)


def _accumulate(out, key, c):
    if c != 0:
        out[key] = out.get(key, 0) + c


def maass_raise(f: BigradedExpansion) -> BigradedExpansion:
    """d_r = 2iy d/dz + r : weights (r, s) -> (r+1, s-1)."""
    r = f.weights.r
    out = {}
    with mpmath.workprec(f.precision_bits):
        four_pi = 4 * mpmath.pi
        for (j, m, n), c in f.terms.items():
            _accumulate(out, (j, m, n), (j + r) * c)
            _accumulate(out, (j + 1, m, n), -four_pi * m * c)
    return BigradedExpansion(f.weights.shift(1, -1), out, precision_bits=f.precision_bits)


def maass_lower(f: BigradedExpansion) -> BigradedExpansion:
    """dbar_s = -2iy d/dzbar + s : weights (r, s) -> (r-1, s+1)."""
    s = f.weights.s
    out = {}
    with mpmath.workprec(f.precision_bits):
        four_pi = 4 * mpmath.pi
        for (j, m, n), c in f.terms.items():
            _accumulate(out, (j, m, n), (j + s) * c)
            _accumulate(out, (j + 1, m, n), -four_pi * n * c)
    return BigradedExpansion(f.weights.shift(-1, 1), out, precision_bits=f.precision_bits)


def laplacian(f: BigradedExpansion) -> BigradedExpansion:
    """Delta_{r,s} = -dbar_{s-1} d_r + r(s-1), in closed form per monomial."""
    r, s = f.weights.r, f.weights.s
    out = {}
    with mpmath.workprec(f.precision_bits):
        pi = mpmath.pi
        for (j, m, n), c in f.terms.items():
            _accumulate(out, (j, m, n), j * (1 - r - s - j) * c)
            _accumulate(out, (j + 1, m, n), 4 * pi * (n * (j + r) + m * (j + s)) * c)
            _accumulate(out, (j + 2, m, n), -16 * pi ** 2 * m * n * c)
    return BigradedExpansion(f.weights, out, precision_bits=f.precision_bits)


def omega(f: BigradedExpansion, k: int) -> BigradedExpansion:
    """Omega_k = -y^2 (d_x^2 + d_y^2) + i k y d_x applied to the table of f.

    Weights are carried through unchanged; Omega_k does not care about them.
    """
    out = {}
    with mpmath.workprec(f.precision_bits):
        pi = mpmath.pi
        for (j, m, n), c in f.terms.items():
            _accumulate(out, (j, m, n), -j * (j - 1) * c)
            _accumulate(out, (j + 1, m, n), (4 * pi * j * (m + n) - 2 * pi * k * (m - n)) * c)
            _accumulate(out, (j + 2, m, n), -16 * pi ** 2 * m * n * c)
    return BigradedExpansion(f.weights, out, precision_bits=f.precision_bits)


def y_dy(f: BigradedExpansion) -> BigradedExpansion:
    """y d/dy on the table of f."""
    out = {}
    with mpmath.workprec(f.precision_bits):
        pi = mpmath.pi
        for (j, m, n), c in f.terms.items():
            _accumulate(out, (j, m, n), j * c)
            _accumulate(out, (j + 1, m, n), -2 * pi * (m + n) * c)
    return BigradedExpansion(f.weights, out, precision_bits=f.precision_bits)
