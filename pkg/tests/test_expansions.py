import math
import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from ramf.errors import DomainError
from ramf.expansions import (BigradedExpansion, EigenExpansion, Weights, alpha_pm,
                             eigenvalue_bookkeeping, eisenstein_expansion, laplacian,
                             maass_lower, maass_raise, omega, split_parts, y_dy)
from ramf.numerics import divisor_sigma, riemann_zeta_int

TINY = mpmath.mpf(2) ** -200


def test_weights_parity():
    with pytest.raises(DomainError):
        Weights(2, 1)


def test_bounds_enforced():
    with pytest.raises(DomainError):
        BigradedExpansion((0, 0), {(3, 0, 0): 1}, M=2)
    with pytest.raises(DomainError):
        BigradedExpansion((0, 0), {(0, -2, 0): 1}, N=1)


def test_split_parts_examples():
    f = BigradedExpansion((0, 0), {(0, 1, 0): 1})
    t, c, p = split_parts(f)
    assert t.terms == f.terms and not c.terms and not p.terms
    f = BigradedExpansion((0, 0), {(2, -1, 1): 3})
    t, c, p = split_parts(f)
    assert c.terms == f.terms and not t.terms and not p.terms
    f = BigradedExpansion((0, 0), {(0, -1, 0): 1, (0, 1, 0): 5, (1, -2, 1): 2})
    t, c, p = split_parts(f)
    assert set(p.terms) == {(0, -1, 0), (1, -2, 1)} and set(t.terms) == {(0, 1, 0)}
    assert not c.terms


terms_strategy = st.dictionaries(
    st.tuples(st.integers(-4, 4), st.integers(-3, 3), st.integers(-3, 3)),
    st.tuples(st.integers(-50, 50), st.integers(-50, 50)).filter(lambda c: c != (0, 0)),
    max_size=12)


def _random_expansion(terms, r=2, s=0):
    return BigradedExpansion((r, s), {k: mpmath.mpc(*v) for k, v in terms.items()})


@given(terms_strategy)
def test_split_parts_reassembles(terms):
    f = _random_expansion(terms)
    t, c, p = split_parts(f)
    assert (t + c + p).max_difference(f) == 0


@given(terms_strategy, st.sampled_from([(0, 0), (1, 1), (2, 0), (3, 1), (-2, 4)]))
def test_laplacian_factorisation(terms, rs):
    r, s = rs
    f = _random_expansion(terms, r, s)
    via_ops = (-maass_lower(maass_raise(f))) + f.scale(r * (s - 1))
    lap = laplacian(f)
    assert via_ops.weights == lap.weights
    scale = max(f.max_abs(), 1) * 10 ** 4
    assert lap.max_difference(via_ops) <= TINY * scale


def test_raise_of_power_of_y():
    f = BigradedExpansion((3, 1), {(2, 0, 0): 1})
    g = maass_raise(f)
    assert g.weights == Weights(4, 0)
    assert g.terms == {(2, 0, 0): 5}


def test_laplacian_of_constant_term_power():
    r, s = 2, 2
    for k0 in (-4, -3, 0, 1):
        f = BigradedExpansion((r, s), {(k0, 0, 0): 1})
        assert laplacian(f).terms == ({(k0, 0, 0): k0 * (1 - r - s - k0)} if k0 * (1 - r - s - k0) else {})


def test_operators_match_numerical_derivatives():
    # d/dz from finite differences at a sample point
    f = BigradedExpansion((2, 0), {(1, 1, 0): mpmath.mpc(1, 2), (-1, 0, 2): 3, (0, -1, 1): 1},
                          precision_bits=128)
    with mpmath.workprec(128):
        z = mpmath.mpc("0.1", "0.9")
        h = mpmath.mpf(10) ** -12
        dz = (f.evaluate(z + h) - f.evaluate(z - h)) / (4 * h) - 1j * (
            f.evaluate(z + 1j * h) - f.evaluate(z - 1j * h)) / (4 * h)
        raised = maass_raise(f).evaluate(z)
        assert abs(raised - (2j * z.imag * dz + 2 * f.evaluate(z))) < mpmath.mpf(10) ** -20
        ydy = y_dy(f).evaluate(z)
        dy = (f.evaluate(z + 1j * h) - f.evaluate(z - 1j * h)) / (2 * h)
        assert abs(ydy - z.imag * dy) < mpmath.mpf(10) ** -20


def test_alpha_pm_examples():
    assert alpha_pm(1, 1, 0, 1) == 1
    assert alpha_pm(1, 1, 1, 1) == 2
    assert alpha_pm(1, 1, -1, 1) == 0
    assert alpha_pm(3, 1, -3, -1) == 0
    with pytest.raises(DomainError):
        alpha_pm(2, 1, 0, 1)


def _alpha_direct(r, s, j, sign):
    # (-1)^j (j + h)! C(s + d + h, j + h) C((sign-1) d - 1 - s, j + sign d), falling factorials
    d, h = (r - s) // 2, abs(r - s) // 2

    def binom(a, b):
        if b < 0:
            return 0
        return math.prod(a - i for i in range(b)) // math.factorial(b)
    if j + h < 0:
        return 0
    return (-1) ** j * math.factorial(j + h) * binom(s + d + h, j + h) * binom((sign - 1) * d - 1 - s, j + sign * d)


def test_alpha_pm_against_direct_formula():
    for r in range(1, 7):
        for s in range(1, 7):
            if (r - s) % 2:
                continue
            for j in range(-6, 7):
                for sign in (1, -1):
                    assert alpha_pm(r, s, j, sign) == _alpha_direct(r, s, j, sign)


def test_eisenstein_basic_invariants(ctx):
    for r, s in ((1, 1), (2, 2), (1, 3), (3, 1)):
        e = eisenstein_expansion(r, s, 5, ctx)
        assert e.k0 == -r - s
        assert e.eigenvalue == -(r + s)
    with pytest.raises(DomainError, match="absolute-convergence"):
        eisenstein_expansion(0, 2, 5, ctx)
    with pytest.raises(DomainError):
        eisenstein_expansion(2, 1, 5, ctx)


def test_eisenstein_coefficient_two_paths():
    # a_1^{(-2)} for (2,2): displayed formula evaluated directly at 512 bits
    e = eisenstein_expansion(2, 2, 3)
    with mpmath.workprec(512):
        r = s = 2
        j = -2
        al = alpha_pm(r, s, -j - 2, 1)
        ref = ((2 * mpmath.pi) ** (r + s + j) * mpmath.mpf(2) ** j * mpmath.pi * al
               * divisor_sigma(r + s + 1, 1) / (mpmath.factorial(r) * mpmath.zeta(r + s + 1)))
        assert abs(e.hol[(-2, 1)] - ref) <= mpmath.mpf(2) ** -250 * abs(ref)
        m = 3
        ref3 = ((2 * mpmath.pi) ** (r + s + j) * mpmath.mpf(2) ** j * mpmath.pi * al
                * divisor_sigma(5, m) * mpmath.mpf(m) ** (j - 1)
                / (mpmath.gamma(1 + r) * riemann_zeta_int(5)))
        assert abs(e.hol[(-2, 3)] - ref3) <= mpmath.mpf(2) ** -250 * abs(ref3)


@pytest.mark.parametrize("rs", [(1, 1), (2, 2), (1, 3), (3, 3)])
def test_eisenstein_laplace_eigenfunction(ctx, rs):
    r, s = rs
    f = eisenstein_expansion(r, s, 30, ctx).to_bigraded()
    diff = laplacian(f).max_difference(f.scale(-(r + s)))
    assert diff < mpmath.mpf(2) ** -200 * f.max_abs()


@pytest.mark.parametrize("rs", [(1, 1), (2, 2), (1, 3), (3, 3)])
def test_eisenstein_is_modular(ctx, rs):
    # f(-1/z) = z^r zbar^s f(z) well inside the region where 30 terms suffice
    r, s = rs
    f = eisenstein_expansion(r, s, 30, ctx).to_bigraded()
    with mpmath.workprec(256):
        z = mpmath.mpc("0.13", "1.07")
        lhs = f.evaluate(-1 / z)
        rhs = z ** r * mpmath.conj(z) ** s * f.evaluate(z)
        assert abs(lhs - rhs) < mpmath.mpf(10) ** -60


@pytest.mark.parametrize("rs", [(1, 1), (2, 2), (1, 3), (3, 3), (4, 2)])
def test_omega_transfer(ctx, rs):
    r, s = rs
    e = eisenstein_expansion(r, s, 12, ctx)
    h = (r + s) // 2
    f1 = e.to_bigraded().multiply_y_power(h)
    target = e.eigenvalue + Fraction(h * (1 - h))
    out = omega(f1, r - s)
    diff = out.max_difference(f1.scale(int(target)))
    assert diff < mpmath.mpf(2) ** -200 * f1.max_abs()


def test_eigenvalue_bookkeeping():
    for r in range(0, 13):
        for s in range(0, 13):
            if (r - s) % 2:
                continue
            for k in range(0, min(r, s) + 1):
                lam, a, b = eigenvalue_bookkeeping(k, r, s)
                assert lam == (k - 1) * (r + s - k)
                assert a == b


def test_eigen_expansion_index_checks():
    with pytest.raises(DomainError):
        EigenExpansion(Weights(2, 2), -1)  # k0 < 1 - r - s - k0 fails
    with pytest.raises(DomainError):
        EigenExpansion(Weights(2, 2), -4, hol={(0, 1): 1})  # j above -s


def test_eigen_parts_and_merge(ctx):
    e = eisenstein_expansion(1, 3, 4, ctx)
    merged = e.merged()
    for key in set(e.hol) | set(e.antihol):
        with mpmath.workprec(256):
            assert merged[key] == e.hol.get(key, 0) + e.antihol.get(key, 0)
    dec, princ = e.parts()
    assert not princ.terms and len(dec.terms) == len(e.hol) + len(e.antihol)
    b = e.to_bigraded()
    assert b.terms[(e.k0, 0, 0)] == e.const_a and b.terms[(1, 0, 0)] == e.const_b


def test_eigen_linear_ops(ctx):
    e = eisenstein_expansion(2, 2, 3, ctx)
    two = e + e
    with mpmath.workprec(256):
        assert all(two.hol[k] == 2 * e.hol[k] for k in e.hol)
        assert e.scale(2).const_b == 2 * e.const_b
