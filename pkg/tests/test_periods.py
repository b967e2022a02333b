from fractions import Fraction
from math import comb

import mpmath
import pytest
from hypothesis import given, strategies as st

from ramf.errors import DependencyError, DomainError
from ramf.expansions import EigenExpansion, Weights, eisenstein_expansion, q_generator
from ramf.expansions.bigraded import BigradedExpansion
from ramf.expansions.eigen import zero_eigen_expansion
from ramf.expansions.qexp import QExpansion
from ramf.lfunctions import l_star, l_star_weakly
from ramf.numerics import i_power
from ramf.periods import (IDENTITY, GaussianRational, GroupElement, PeriodPolynomial, S, T, U,
                          alpha_n_coeff, cocycle_relation_residuals, eichler_period_polynomial,
                          eichler_value_at_T, frobenius_split, maass_selberg_integrand,
                          period_coefficient, psi0, sigma_S_quadrature, slash_action,
                          truncated_period_polynomial)

EPS = mpmath.mpf(2) ** -200
I = GaussianRational(Fraction(0), Fraction(1))

group_elements = st.tuples(st.integers(-5, 5), st.integers(-5, 5), st.integers(-5, 5)).filter(
    lambda t: t[0] != 0).map(lambda t: _complete(*t)).filter(lambda g: g is not None)


def _complete(a, b, c):
    # find d with ad - bc = 1 when a divides 1 + bc
    if (1 + b * c) % a:
        return None
    return GroupElement(a, b, c, (1 + b * c) // a)


def _exact(coeffs, D=None):
    coeffs = [Fraction(c) for c in coeffs]
    return PeriodPolynomial(len(coeffs) - 1 if D is None else D, coeffs)


def test_group_element_determinant():
    with pytest.raises(DomainError):
        GroupElement(1, 1, 1, 1)
    assert U == GroupElement(1, -1, 1, 0)
    assert S @ S == -IDENTITY
    assert U @ U @ U == -IDENTITY


def test_slash_examples():
    P = _exact([1, 2, 3, 4])
    assert slash_action(P, IDENTITY).coeffs == P.coeffs
    for d in range(5):
        mono = _exact([1 if l == d else 0 for l in range(5)])
        out = slash_action(mono, S).coeffs
        assert out == [(-1) ** d if l == 4 - d else 0 for l in range(5)]
    assert slash_action(_exact([1]), T).coeffs == [1]
    with pytest.raises(DomainError):
        slash_action(P, S, weight_exponent=2)


@given(st.lists(st.integers(-9, 9), min_size=1, max_size=7), group_elements, group_elements)
def test_slash_is_right_action(coeffs, g1, g2):
    P = _exact(coeffs)
    assert slash_action(slash_action(P, g1), g2).coeffs == slash_action(P, g1 @ g2).coeffs


@given(st.lists(st.integers(-9, 9), min_size=1, max_size=9))
def test_slash_S_twice_is_sign(coeffs):
    P = _exact(coeffs)
    sign = (-1) ** P.degree_bound
    assert slash_action(slash_action(P, S), S).coeffs == [sign * c for c in P.coeffs]


def test_alpha_n_literal_examples():
    assert alpha_n_coeff(1, 1, 0, 1, 0, literal=True) == GaussianRational(0, -2)
    assert alpha_n_coeff(1, 1, 0, 1, 1, literal=True) == 0


def test_alpha_n_against_direct_formula():
    # independent evaluation with math.comb (all arguments nonnegative here)
    def binom(a, b):
        return comb(a, b) if 0 <= b <= a else 0
    for r, s in ((1, 1), (2, 2), (3, 3), (1, 5), (4, 4), (2, 6)):
        for k in range(min(r, s) + 1):
            for l in range(1, r + s - 2 * k):
                for n in range(l + 1):
                    val = ((r - k) * binom(s - k + 1, l - n) * binom(r - k - 1, n)
                           - (s - k) * binom(s - k - 1, l - n) * binom(r - k + 1, n))
                    ip = GaussianRational.i_power(-l - 2 * n)
                    assert alpha_n_coeff(r, s, k, l, n) == ip * Fraction(val)


def _kernel_coefficients(r, s, k, l):
    """t-coefficients of the zeta^l coefficient of R(t, zeta), by sampling."""
    def kernel(t, zeta):
        it = mpmath.mpc(0, t)
        out = mpmath.mpc(0)
        for cf, e1, e2 in ((r - k, s - k + 1, r - k - 1), (-(s - k), s - k - 1, r - k + 1)):
            if cf:
                out += cf * ((1 - it * zeta) ** e1 * (1 + it * zeta) ** e2
                             - (zeta + it) ** e1 * (zeta - it) ** e2)
        return out

    D = r + s - 2 * k
    n = D + 3
    roots = [mpmath.expjpi(mpmath.mpf(2 * m) / n) for m in range(n)]
    ts = [mpmath.mpf(j + 1) / 3 for j in range(2 * D + 1)]
    vals = [sum(kernel(t, z) * z ** -l for z in roots) / n for t in ts]
    A = mpmath.matrix([[t ** p for p in range(2 * D + 1)] for t in ts])
    sol = mpmath.lu_solve(A, mpmath.matrix(vals))
    return [sol[p] for p in range(2 * D + 1)]


def test_period_coefficient_reproduces_kernel():
    # the zeta^l coefficient of R is c (t^l + t^(D-l)), and i c is the factor of L*(k+l)
    with mpmath.workprec(200):
        for r, s in ((1, 1), (2, 2), (3, 3), (1, 5), (4, 4), (2, 6), (5, 1)):
            for k in range(min(r, s) + 1):
                D = r + s - 2 * k
                for l in range(1, D):
                    c = _kernel_coefficients(r, s, k, l)
                    mult = 2 if 2 * l == D else 1
                    a = period_coefficient(r, s, k, l).to_mpc()
                    assert abs(mpmath.mpc(0, 1) * c[l] - mult * a) < mpmath.mpf(2) ** -150
                    assert all(abs(c[p]) < mpmath.mpf(2) ** -150
                               for p in range(len(c)) if p not in (l, D - l))


def test_alpha_n_errors():
    with pytest.raises(DomainError, match="mod 4"):
        alpha_n_coeff(1, 3, 0, 1, 0)
    assert alpha_n_coeff(1, 3, 0, 1, 0, experimental=True) is not None
    with pytest.raises(DomainError, match="parity"):
        alpha_n_coeff(1, 2, 0, 1, 0)
    with pytest.raises(DomainError, match="l="):
        alpha_n_coeff(1, 1, 0, 2, 0)
    with pytest.raises(DomainError, match="n="):
        alpha_n_coeff(1, 1, 0, 1, 2)
    with pytest.raises(DomainError, match="k="):
        alpha_n_coeff(1, 1, 2, 1, 0)


def test_empty_l_range(ctx):
    P = truncated_period_polynomial({}, 2, 2, components=[2], ctx=ctx)
    assert all(c == 0 for c in P.coeffs) and P.degree_bound == 4


def test_truncated_period_zero_and_missing(ctx):
    lv = {(0, l): 0 for l in range(1, 4)}
    P = truncated_period_polynomial(lv, 2, 2, ctx=ctx)
    assert all(c == 0 for c in P.coeffs) and len(P.coeffs) == 5
    with pytest.raises(DependencyError) as info:
        truncated_period_polynomial({(0, 1): 1}, 2, 2, ctx=ctx)
    assert list(info.value.missing) == [(0, 2), (0, 3)]


def test_e11_zeta1_coefficient(ctx):
    e = eisenstein_expansion(1, 1, 20, ctx)
    L1 = l_star(e, 1, ctx).value
    P = truncated_period_polynomial({(0, 1): L1}, 1, 1, ctx=ctx)
    with mpmath.workprec(256):
        assert abs(P.coeffs[1] - 4 * L1) < EPS * abs(L1)
    Pl = truncated_period_polynomial({(0, 1): L1}, 1, 1, literal=True, ctx=ctx)
    with mpmath.workprec(256):
        assert abs(Pl.coeffs[1] - 2 * L1) < EPS * abs(L1)
    assert P.truncated_slots == (0, 2)


def test_maass_selberg_zero_cases(ctx):
    for r, s, k in ((2, 2, 1), (1, 3, 0), (3, 3, 1), (4, 2, 2)):
        f = BigradedExpansion(Weights(r, s), {(k - r - s, 0, 0): 1}, precision_bits=256)
        eta = maass_selberg_integrand(f, k, (r, s), 0)
        for t in (mpmath.mpf("0.3"), mpmath.mpf(2), mpmath.mpf(-1.5)):
            assert abs(eta.pullback_imaginary_axis(t)) < EPS
    eta0 = maass_selberg_integrand(None, 1, (2, 2), 0.5)
    assert eta0.A(1j) == 0 and eta0.B(1j) == 0


def test_maass_selberg_explicit_form(ctx):
    f = eisenstein_expansion(2, 2, 10, ctx).to_bigraded()
    eta = maass_selberg_integrand(f, 1, (2, 2), mpmath.mpc(0.2, 0.3))
    with mpmath.workprec(256):
        z = mpmath.mpc("0.1", "1.3")
        y, zeta = z.imag, mpmath.mpc(0.2, 0.3)
        h = mpmath.mpf(10) ** -30
        dx = (f.evaluate(z + h) - f.evaluate(z - h)) / (2 * h)
        dy = (f.evaluate(z + 1j * h) - f.evaluate(z - 1j * h)) / (2 * h)
        dz = (dx - 1j * dy) / 2
        A = (2j * y * dz + 2 * f.evaluate(z)) * (zeta - mpmath.conj(z)) * (zeta - z)
        B = f.evaluate(z) * (zeta - z) ** 2
        assert abs(eta.A(z) - A) < mpmath.mpf(10) ** -40
        assert abs(eta.B(z) - B) < EPS
    with pytest.raises(DomainError):
        maass_selberg_integrand(f, 3, (2, 2), 0)


def test_sigma_quadrature_zero_form(ctx128):
    P, resid = sigma_S_quadrature([(0, zero_eigen_expansion(1, 1, -2))], ctx=ctx128)
    assert all(c == 0 for c in P.coeffs) and resid == 0


def test_sigma_quadrature_errors(ctx128):
    e = eisenstein_expansion(1, 3, 5, ctx128)
    with pytest.raises(DomainError, match="mod 4"):
        sigma_S_quadrature([(0, e)], ctx=ctx128)
    e = eisenstein_expansion(1, 1, 5, ctx128)
    with pytest.raises(DomainError, match="grid"):
        sigma_S_quadrature([(0, e)], zeta_grid=[0.1, 0.2], ctx=ctx128)
    with pytest.raises(DomainError, match="k0"):
        sigma_S_quadrature([(1, e)], ctx=ctx128)


def test_sigma_quadrature_matches_lvalues(ctx128):
    ctx = ctx128
    for rs in ((1, 1), (2, 2)):
        e = eisenstein_expansion(*rs, 40, ctx)
        lv = {(0, l): l_star(e, l, ctx) for l in range(1, sum(rs))}
        P = truncated_period_polynomial(lv, *rs, ctx=ctx)
        Q, resid = sigma_S_quadrature([(0, e)], ctx=ctx)
        assert resid < 10 * ctx.quad_tol
        with mpmath.workprec(128):
            for l in P.compared_slots():
                assert abs(P.coeffs[l] - Q.coeffs[l]) < mpmath.mpf(2) ** -100 * P.max_abs()


def test_eichler_delta_cocycle(ctx):
    P = eichler_period_polynomial(q_generator("Delta", ctx), ctx)
    res_s, res_u = cocycle_relation_residuals(P)
    assert res_s < EPS and res_u < EPS


def test_eichler_coefficients_are_lvalue_multiples(ctx):
    # two routes: Eichler moments versus l_star_weakly; ratio i^(j-2) C(k-2, j-1)
    for name in ("Delta",):
        f = q_generator(name, ctx)
        P = eichler_period_polynomial(f, ctx)
        with mpmath.workprec(256):
            for j in range(1, 12):
                expect = i_power(j - 2) * comb(10, j - 1) * l_star_weakly(f, j, ctx).value
                assert abs(P.coeffs[j - 1] - expect) < EPS * abs(expect)


def test_eichler_weakly_holomorphic(ctx):
    from ramf.expansions import weakly_holo_basis
    f = weakly_holo_basis(12, 1, ctx)[1]
    P = eichler_period_polynomial(f, ctx)
    res_s, res_u = cocycle_relation_residuals(P)
    assert res_s < EPS and res_u < EPS
    with mpmath.workprec(256):
        for j in (2, 5, 9):
            expect = i_power(j - 2) * comb(10, j - 1) * l_star_weakly(f, j, ctx).value
            assert abs(P.coeffs[j - 1] - expect) < EPS * max(1, abs(expect))


def test_eichler_trivial_cases(ctx):
    P = eichler_period_polynomial(QExpansion(12, {}, 10), ctx)
    assert all(c == 0 for c in P.coeffs)
    assert all(c == 0 for c in eichler_value_at_T(q_generator("Delta", ctx), ctx).coeffs)
    with pytest.raises(DomainError):
        eichler_period_polynomial(QExpansion(11, {1: 1}, 10), ctx)
    with pytest.raises(DomainError):
        eichler_period_polynomial(QExpansion(2, {1: 1}, 10), ctx)
    with pytest.raises(DomainError):
        eichler_period_polynomial(q_generator("E4", ctx), ctx)


def test_cocycle_residuals_trivial():
    assert cocycle_relation_residuals(PeriodPolynomial.zero(10)) == (0, 0)
    assert cocycle_relation_residuals(psi0(10)) == (0, 0)
    with pytest.raises(DomainError):
        cocycle_relation_residuals(psi0(10), weight_exponent=4)


@given(st.integers(1, 5).map(lambda n: 2 * n), st.fractions(max_denominator=50))
def test_psi0_multiples_are_cocycles(D, c):
    assert cocycle_relation_residuals(psi0(D).scale(c)) == (0, 0)


def test_coboundary_shift_keeps_cocycle(ctx):
    P = eichler_period_polynomial(q_generator("Delta", ctx), ctx)
    shifted = P + psi0(10).scale(mpmath.mpf(3) / 7)
    res_s, res_u = cocycle_relation_residuals(shifted)
    assert res_s < EPS and res_u < EPS


def test_frobenius_examples():
    even, odd = frobenius_split(_exact([0, 0, 1, 1]))
    assert even.coeffs == [0, 0, 1, 0] and odd.coeffs == [0, 0, 0, 1]
    even, odd = frobenius_split(PeriodPolynomial.zero(3))
    assert even.coeffs == odd.coeffs == [0] * 4


@given(st.lists(st.integers(-9, 9), min_size=1, max_size=9))
def test_frobenius_reassembles(coeffs):
    P = _exact(coeffs)
    even, odd = frobenius_split(P)
    assert (even + odd).coeffs == P.coeffs


def test_frobenius_delta_parity(ctx):
    P = eichler_period_polynomial(q_generator("Delta", ctx), ctx)
    even, odd = frobenius_split(P)
    for j in (3, 5, 7, 9):
        assert abs(even.coeffs[j - 1]) > 1e-10
    for j in (2, 4, 6, 8, 10):
        assert abs(odd.coeffs[j - 1]) > 1e-10
    # the odd critical values sit in the imaginary part, the even ones in the real part
    with mpmath.workprec(256):
        assert max(abs(even.coeffs[l].real) for l in range(0, 11, 2)) < EPS
        assert max(abs(odd.coeffs[l].imag) for l in range(1, 11, 2)) < EPS
