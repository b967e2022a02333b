"""JSON documents for expansions, L-values, period polynomials and Manin reports.

Floating values are written as decimal strings carrying
ceil(bits log10 2) + 2 significant digits, which reads back to the identical
binary value at the stored precision; rationals are integer pairs.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction

import mpmath
from mpmath import mpc, mpf
from mpmath.libmp import to_str

from .errors import DomainError
from .expansions.bigraded import BigradedExpansion, Weights
from .expansions.eigen import EigenExpansion
from .expansions.qexp import QExpansion
from .lfunctions import LValue
from .periods import PeriodPolynomial
from .rationality import ManinReport

FORMAT_VERSION = 1


def digits_for(bits: int) -> int:
    return math.ceil(bits * math.log10(2)) + 2


def real_to_str(x, bits: int) -> str:
    with mpmath.workprec(bits):
        x = mpf(x)
        if x == 0:
            return "0"
        return to_str(x._mpf_, digits_for(bits))


def real_from_str(text: str, bits: int) -> mpf:
    with mpmath.workprec(bits):
        return mpf(text)


def complex_to_pair(z, bits: int):
    with mpmath.workprec(bits):
        z = mpc(z)
    return [real_to_str(z.real, bits), real_to_str(z.imag, bits)]


def complex_from_pair(pair, bits: int) -> mpc:
    with mpmath.workprec(bits):
        return mpc(real_from_str(pair[0], bits), real_from_str(pair[1], bits))


# ---------------------------------------------------------------------------
# expansions


def expansion_to_dict(f) -> dict:
    if isinstance(f, QExpansion):
        return {
            "version": FORMAT_VERSION,
            "kind": "qexp",
            "weights": [f.weight],
            "prec": f.prec,
            "terms": [[m, Fraction(c).numerator, Fraction(c).denominator]
                      for m, c in sorted(f.coeffs.items())],
        }
    if isinstance(f, EigenExpansion):
        bits = f.precision_bits
        terms = [[j, m, 0, *complex_to_pair(c, bits)] for (j, m), c in sorted(f.hol.items())]
        terms += [[j, 0, m, *complex_to_pair(c, bits)] for (j, m), c in sorted(f.antihol.items())]
        return {
            "version": FORMAT_VERSION,
            "kind": "eigen",
            "weights": [f.weights.r, f.weights.s],
            "k0": f.k0,
            "precision_bits": bits,
            "const_a": complex_to_pair(f.const_a, bits),
            "const_b": complex_to_pair(f.const_b, bits),
            "terms": terms,
            "meta": {k: v for k, v in f.meta.items() if isinstance(v, (int, str, float))},
        }
    if isinstance(f, BigradedExpansion):
        bits = f.precision_bits
        return {
            "version": FORMAT_VERSION,
            "kind": "bigraded",
            "weights": [f.weights.r, f.weights.s],
            "precision_bits": bits,
            "M": f.M,
            "N": f.N,
            "terms": [[j, m, n, *complex_to_pair(c, bits)]
                      for (j, m, n), c in sorted(f.terms.items())],
        }
    raise DomainError(f"cannot serialise {type(f).__name__}")


def expansion_from_dict(doc: dict):
    try:
        kind = doc["kind"]
        if kind == "qexp":
            (k,) = doc["weights"]
            coeffs = {int(m): Fraction(int(p), int(q)) for m, p, q in doc["terms"]}
            return QExpansion(int(k), coeffs, int(doc["prec"]))
        bits = int(doc["precision_bits"])
        r, s = doc["weights"]
        if kind == "eigen":
            hol, anti = {}, {}
            for j, m, n, re, im in doc["terms"]:
                c = complex_from_pair((re, im), bits)
                if n == 0:
                    hol[(int(j), int(m))] = c
                elif m == 0:
                    anti[(int(j), int(n))] = c
                else:
                    raise DomainError("eigen terms must be pure q or pure qbar")
            return EigenExpansion(Weights(int(r), int(s)), int(doc["k0"]), hol, anti,
                                  complex_from_pair(doc["const_a"], bits),
                                  complex_from_pair(doc["const_b"], bits), bits,
                                  dict(doc.get("meta", {})))
        if kind == "bigraded":
            terms = {(int(j), int(m), int(n)): complex_from_pair((re, im), bits)
                     for j, m, n, re, im in doc["terms"]}
            return BigradedExpansion(Weights(int(r), int(s)), terms, doc.get("M"), doc.get("N"),
                                     precision_bits=bits)
    except (KeyError, TypeError, ValueError) as exc:
        raise DomainError(f"malformed expansion document: {exc}") from exc
    raise DomainError(f"unknown expansion kind {kind!r}")


# ---------------------------------------------------------------------------
# results


def lvalue_to_dict(v: LValue, bits: int) -> dict:
    out = {"w": complex_to_pair(v.w, bits), "pole_flag": v.pole_flag}
    if v.pole_flag:
        out.update(re=None, im=None, error_bound=None)
    else:
        re, im = complex_to_pair(v.value, bits)
        out.update(re=re, im=im, error_bound=real_to_str(v.error_bound, bits))
    return out


def lvalue_from_dict(doc: dict, bits: int) -> LValue:
    w = complex_from_pair(doc["w"], bits)
    if doc["pole_flag"]:
        return LValue(w, None, mpf(0), pole_flag=True)
    return LValue(w, complex_from_pair((doc["re"], doc["im"]), bits),
                  real_from_str(doc["error_bound"], bits))


def period_to_dict(P: PeriodPolynomial) -> dict:
    bits = P.precision_bits
    return {
        "version": FORMAT_VERSION,
        "kind": "period",
        "degree_bound": P.degree_bound,
        "weights_meta": list(P.weights_meta),
        "truncated_slots": list(P.truncated_slots),
        "precision_bits": bits,
        "coeffs": [complex_to_pair(c, bits) for c in P.coeffs],
    }


def period_from_dict(doc: dict) -> PeriodPolynomial:
    bits = int(doc["precision_bits"])
    meta = tuple(tuple(x) if isinstance(x, list) else x for x in doc["weights_meta"])
    return PeriodPolynomial(int(doc["degree_bound"]),
                            [complex_from_pair(c, bits) for c in doc["coeffs"]],
                            meta, tuple(doc["truncated_slots"]), precision_bits=bits)


def manin_to_dict(rep: ManinReport, bits: int) -> dict:
    values = {}
    for j, v in rep.critical_values.items():
        cert = rep.ratios.get(j, rep.excluded_attempts.get(j))
        entry = lvalue_to_dict(v, bits)
        entry["parity"] = "odd" if j % 2 else "even"
        entry["excluded"] = j in rep.excluded
        entry["certificate"] = [cert.numerator, cert.denominator] if cert else None
        entry["refusal"] = rep.refusals.get(j)
        values[str(j)] = entry
    lam = rep.hecke_eigenvalue
    return {
        "version": FORMAT_VERSION,
        "kind": "manin",
        "k": rep.k,
        "omega_plus": complex_to_pair(rep.omega_plus, bits),
        "omega_minus": complex_to_pair(rep.omega_minus, bits),
        "hecke_eigenvalue": None if lam is None else [lam.numerator, lam.denominator],
        "all_certified": rep.all_certified,
        "values": values,
    }


def dump(doc: dict, path=None) -> str:
    text = json.dumps(doc, indent=1)
    if path is not None:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    return text


def load(path) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise DomainError(f"{path}: not a JSON document ({exc})") from exc
