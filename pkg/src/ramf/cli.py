"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage or domain error,
3 certification failure.
"""

from __future__ import annotations

import csv
import io
import random
import sys

import click
import mpmath

from .errors import RamfError
from .expansions.bigraded import BigradedExpansion, laplacian
from .expansions.eigen import EigenExpansion, eisenstein_expansion
from .expansions.qexp import (QExpansion, dim_modular_forms, hecke_tp, q_generator,
                              weakly_holo_basis)
from .lfunctions import functional_equation_residual, l_star, l_star_bigraded, l_star_weakly
from .numerics import PrecisionContext, upper_incomplete_gamma
from .periods import (cocycle_relation_residuals, eichler_period_polynomial, sigma_S_quadrature,
                      truncated_period_polynomial)
from .rationality import SUPPORTED_WEIGHTS, manin_check
from . import serialize

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_CERT = 0, 1, 2, 3


def _fail(msg, code=EXIT_USAGE):
    click.echo(f"error: {msg}", err=True)
    sys.exit(code)


def _emit(ctx_obj, doc, out):
    text = serialize.dump(doc, out)
    if out is None:
        click.echo(text)


@click.group()
@click.option("--precision-bits", type=click.IntRange(min=64), envvar="RAMF_PRECISION_BITS",
              default=256, show_default=True, help="Working precision in bits.")
@click.option("--q-truncation", type=click.IntRange(min=1), default=64, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True, help="Seed for random test points.")
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json",
              show_default=True)
@click.pass_context
def main(ctx, precision_bits, q_truncation, seed, fmt):
    """Regularised L-functions and periods of real-analytic modular forms."""
    ctx.obj = {
        "pctx": PrecisionContext(precision_bits=precision_bits, q_truncation=q_truncation),
        "seed": seed,
        "format": fmt,
    }


@main.command()
@click.argument("r", type=int)
@click.argument("s", type=int)
@click.option("--m-max", type=click.IntRange(min=0), default=30, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.pass_obj
def eisenstein(obj, r, s, m_max, out):
    """Write the truncated Eisenstein series E_{R,S}."""
    try:
        f = eisenstein_expansion(r, s, m_max, obj["pctx"])
    except RamfError as exc:
        _fail(str(exc))
    _emit(obj, serialize.expansion_to_dict(f), out)


@main.command()
@click.argument("name")
@click.option("--weight", type=int, default=None, help="Weight, for NAME=basis.")
@click.option("--pole-order", type=click.IntRange(min=-20), default=0, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.pass_obj
def qexp(obj, name, weight, pole_order, out):
    """Write a q-expansion: E4, E6, Delta, Jinv, or 'basis' (needs --weight)."""
    pctx = obj["pctx"]
    try:
        if name == "basis":
            if weight is None:
                _fail("basis needs --weight")
            basis = weakly_holo_basis(weight, max(pole_order, 0), pctx)
            if pole_order not in basis:
                _fail(f"no form q^{-pole_order} + ... in weight {weight}")
            f = basis[pole_order]
        else:
            f = q_generator(name, pctx)
    except RamfError as exc:
        _fail(str(exc))
    _emit(obj, serialize.expansion_to_dict(f), out)


def _parse_w(text):
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError:
        raise click.BadParameter(f"cannot read {text!r} as a complex number")


def _load_expansion(path):
    try:
        return serialize.expansion_from_dict(serialize.load(path))
    except (OSError, RamfError) as exc:
        _fail(str(exc))


@main.command()
@click.argument("input_file", type=click.Path(exists=True, dir_okay=False))
@click.argument("w_list", nargs=-1)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.pass_obj
def lvalue(obj, input_file, w_list, out):
    """Evaluate L*_f at each W for the expansion in INPUT_FILE."""
    pctx = obj["pctx"]
    f = _load_expansion(input_file)
    ws = [_parse_w(w) for w in w_list]
    if isinstance(f, QExpansion):
        fn = l_star_weakly
    elif isinstance(f, BigradedExpansion):
        fn = l_star_bigraded
    else:
        fn = l_star
    try:
        rows = [serialize.lvalue_to_dict(fn(f, w, pctx), pctx.precision_bits) for w in ws]
    except RamfError as exc:
        _fail(str(exc))
    if obj["format"] == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["w_re", "w_im", "re", "im", "error_bound", "pole_flag"])
        for row in rows:
            writer.writerow([*row["w"], row["re"], row["im"], row["error_bound"], row["pole_flag"]])
        if out:
            with open(out, "w") as fh:
                fh.write(buf.getvalue())
        else:
            click.echo(buf.getvalue(), nl=False)
        return
    _emit(obj, {"kind": "lvalues", "values": rows}, out)


@main.command()
@click.option("--input", "input_file", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--eisenstein", "rs", type=(int, int), default=None, metavar="R S")
@click.option("--m-max", type=click.IntRange(min=0), default=30, show_default=True)
@click.option("--experimental-parity", is_flag=True,
              help="Allow r = s + 2 (mod 4) and report instead of asserting.")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.pass_obj
def period(obj, input_file, rs, m_max, experimental_parity, out):
    """Period polynomial from L-values, cross-checked by quadrature."""
    pctx = obj["pctx"]
    bits = pctx.precision_bits
    if (input_file is None) == (rs is None):
        _fail("give exactly one of --input or --eisenstein")
    try:
        if rs is not None:
            r, s = rs
            if (r - s) % 4 and not experimental_parity:
                _fail("needs r = s (mod 4); pass --experimental-parity to run anyway")
            f = eisenstein_expansion(r, s, m_max, pctx)
        else:
            f = _load_expansion(input_file)
        if isinstance(f, QExpansion):
            P = eichler_period_polynomial(f, pctx)
            res_s, res_u = cocycle_relation_residuals(P)
            doc = serialize.period_to_dict(P)
            doc["check"] = {"residual_1_plus_S": serialize.real_to_str(res_s, bits),
                            "residual_1_plus_U_plus_U2": serialize.real_to_str(res_u, bits)}
        elif isinstance(f, EigenExpansion):
            r, s = f.weights.r, f.weights.s
            if (r - s) % 4 and not experimental_parity:
                _fail("needs r = s (mod 4); pass --experimental-parity to run anyway")
            k = f.k0 + r + s
            lv = {(k, l): l_star(f, k + l, pctx) for l in range(1, r + s - 2 * k)}
            P = truncated_period_polynomial(lv, r, s, experimental=experimental_parity, ctx=pctx)
            Q, resid = sigma_S_quadrature([(k, f)], None, pctx,
                                          experimental=experimental_parity,
                                          check_residual=not experimental_parity)
            with mpmath.workprec(bits):
                diff = max((abs(P.coeffs[l] - Q.coeffs[l]) for l in P.compared_slots()),
                           default=mpmath.mpf(0))
            doc = serialize.period_to_dict(P)
            doc["check"] = {"quadrature_coeffs": serialize.period_to_dict(Q)["coeffs"],
                            "max_discrepancy": serialize.real_to_str(diff, bits),
                            "fit_residual": serialize.real_to_str(resid, bits)}
        else:
            _fail("period needs an eigen or q-expansion input")
    except RamfError as exc:
        _fail(str(exc))
    _emit(obj, doc, out)


def _manin_form(weight, pole_order, pctx):
    if weight not in SUPPORTED_WEIGHTS:
        _fail(f"weight {weight} unsupported (need one of {SUPPORTED_WEIGHTS})")
    cusp_index = -(dim_modular_forms(weight) - 1)
    index = pole_order if pole_order > 0 else cusp_index
    basis = weakly_holo_basis(weight, max(pole_order, 0), pctx)
    if index not in basis:
        _fail(f"no basis form with pole order {pole_order} in weight {weight}")
    return basis[index]


@main.command()
@click.option("--weight", type=int, required=True)
@click.option("--pole-order", type=click.IntRange(min=0), default=0, show_default=True)
@click.option("--height-bound", type=click.IntRange(min=1), default=10 ** 6, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.pass_obj
def manin(obj, weight, pole_order, height_bound, out):
    """Certify Manin-type rationality of critical L-value ratios."""
    pctx = obj["pctx"]
    try:
        f = _manin_form(weight, pole_order, pctx)
        rep = manin_check(f, pctx, height_bound=height_bound)
    except RamfError as exc:
        _fail(str(exc))
    _emit(obj, serialize.manin_to_dict(rep, pctx.precision_bits), out)
    if not rep.all_certified:
        _fail(f"ratios not certified for j in {rep.failed()}", EXIT_CERT)


# ---------------------------------------------------------------------------
# verification suites


def _suite_gamma(pctx, rng):
    worst = mpmath.mpf(0)
    with mpmath.workprec(pctx.precision_bits):
        for _ in range(50):
            r = mpmath.mpc(rng.uniform(-10, 10), rng.uniform(-5, 5))
            z = mpmath.mpc(rng.uniform(-8, 12), rng.uniform(-6, 6))
            lhs = upper_incomplete_gamma(r + 1, z, pctx)
            rhs = r * upper_incomplete_gamma(r, z, pctx) + z ** r * mpmath.exp(-z)
            worst = max(worst, abs(lhs - rhs) / max(abs(lhs), abs(rhs)))
        bound = mpmath.mpf(2) ** (-pctx.precision_bits + 32)
    return [("gamma recurrence", worst, bound)]


def _suite_laplacian(pctx, rng):
    out = []
    for r, s in ((1, 1), (2, 2), (1, 3), (3, 3)):
        f = eisenstein_expansion(r, s, 30, pctx).to_bigraded()
        d = laplacian(f).max_difference(f.scale(-(r + s)))
        with mpmath.workprec(pctx.precision_bits):
            out.append((f"Laplacian of E_{{{r},{s}}}", d / f.max_abs(),
                        mpmath.mpf(2) ** (-pctx.precision_bits + 56)))
    return out


def _suite_functional_equation(pctx, rng):
    forms = [("Delta", q_generator("Delta", pctx)),
             ("E_{2,2}", eisenstein_expansion(2, 2, 20, pctx))]
    out = []
    for name, f in forms:
        worst_ratio = mpmath.mpf(0)
        for _ in range(5):
            w = complex(rng.uniform(-10, 10), rng.uniform(-4, 4))
            res, bound = functional_equation_residual(f, w, pctx)
            worst_ratio = max(worst_ratio, res / bound)
        out.append((f"functional equation, {name}", worst_ratio, 1))
    return out


def _suite_hecke(pctx, rng):
    delta = q_generator("Delta", pctx)
    t2 = hecke_tp(delta, 2)
    ok = t2.agrees_with(delta.scale(-24).truncate(t2.prec))
    return [("T_2 Delta = -24 Delta", 0 if ok else 1, 0)]


def _suite_cocycle(pctx, rng):
    P = eichler_period_polynomial(q_generator("Delta", pctx), pctx)
    res_s, res_u = cocycle_relation_residuals(P)
    bound = mpmath.mpf(2) ** (-pctx.precision_bits + 56)
    return [("sigma(S)||(1+S)", res_s, bound), ("sigma(S)||(1+U+U^2)", res_u, bound)]


SUITES = {
    "gamma": _suite_gamma,
    "laplacian-eisenstein": _suite_laplacian,
    "functional-equation": _suite_functional_equation,
    "hecke": _suite_hecke,
    "cocycle": _suite_cocycle,
}


@main.command()
@click.argument("suite_name")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.pass_obj
def verify(obj, suite_name, out):
    """Run a verification suite: gamma, laplacian-eisenstein, functional-equation, hecke, cocycle."""
    if suite_name not in SUITES:
        _fail(f"unknown suite {suite_name!r}; choose from {sorted(SUITES)}")
    pctx = obj["pctx"]
    rng = random.Random(obj["seed"])
    results = SUITES[suite_name](pctx, rng)
    rows = []
    failed = False
    for name, measured, bound in results:
        ok = measured <= bound
        failed |= not ok
        rows.append({"check": name, "passed": bool(ok),
                     "measured": mpmath.nstr(measured, 6), "bound": mpmath.nstr(bound, 6)})
    _emit(obj, {"kind": "verify", "suite": suite_name, "results": rows}, out)
    if failed:
        sys.exit(EXIT_VERIFY)


if __name__ == "__main__":
    main()
