"""Reference tables, transcribed as plain expressions.

Expressions use ``t1, t3, ...`` for times, ``T3, T5, ...`` for moment
variables and ``N`` for the parameter; even powers of ``N`` are rewritten in
``nu = N**2`` on parsing.
"""

from __future__ import annotations

import re
from typing import Dict

import sympy

from .cutjoin import b_polynomial
from .exactalg import DomainError, TimesPolynomial, mpq

_NAME = re.compile(r"\b([tT])(\d+)\b")


def parse_times(expr: str) -> TimesPolynomial:
    """Parse a polynomial in t_k (or T_k) and N into a TimesPolynomial."""
    names = sorted({(m.group(1), int(m.group(2))) for m in _NAME.finditer(expr)}, key=lambda x: x[1])
    if len({n[0] for n in names}) > 1:
        raise DomainError("mix of t and T variables")
    syms = {f"{a}{k}": sympy.Symbol(f"{a}{k}") for a, k in names}
    n_sym, nu_sym = sympy.Symbol("N"), sympy.Symbol("nu")
    e = sympy.expand(sympy.sympify(expr, locals={**syms, "N": n_sym}))
    e = sympy.expand(e.subs(n_sym, sympy.sqrt(nu_sym)))
    if e.has(sympy.sqrt(nu_sym)) or e.has(n_sym):
        raise DomainError("odd power of N in a reference expression")
    gens = [syms[f"{a}{k}"] for a, k in names] + [nu_sym]
    out = {}
    for monom, c in sympy.Poly(e, *gens).terms():
        powers = {}
        for (a, k), p in zip(names, monom[:-1]):
            if k % 2 == 0:
                raise DomainError("even time in a reference expression")
            powers[k] = p
        key = TimesPolynomial.monomial(powers, monom[-1])._terms
        (mono, d), = key
        out[(mono, d)] = mpq(int(c.p), int(c.q))
    return TimesPolynomial(out)


# Moment form at S = 0, genus g >= 2.
MOMENT_TABLE = {
    2: "9/128*T3",
    3: "567/1024*T3**2 + 225/1024*T5",
    4: "64989/4096*T3**3 + 388125/32768*T5*T3 + 55125/32768*T7",
    5: "70864875/65536*T5*T3**2 + 14123025/65536*T7*T3 + 6251175/262144*T9"
       " + 130301217/131072*T3**4 + 28252125/262144*T5**2",
}

# tau^(k) as (B index, prefactor, polynomial in t and N).
TAU_TABLE = {
    1: (1, "1/(2**4*1)", "t1"),
    2: (2, "1/(2**7*2)", "t1**2"),
    3: (2, "1/(2**11*6)", "24*t3 - 4*t1**3*N**2 + 17*t1**3"),
    4: (3, "1/(2**16*24)", "(96*t3 - 4*t1**3*N**2 + 17*t1**3)*t1"),
    5: (3, "1/(2**20*120)",
        "16*t1**5*N**4 - 200*t1**5*N**2 - 960*t1**2*t3*N**2 + 3840*t5 + 7920*t1**2*t3 + 561*t1**5"),
    6: (3, "1/(2**24*720)",
        "7680*t1**3*t3*N**4 - 64*N**6*t1**6 + 1456*t1**6*N**4 - 142080*t1**3*t3*N**2 + 23001*t1**6"
        " - 92160*t1*t5*N**2 - 10444*t1**6*N**2 - 23040*t3**2*N**2 + 649440*t1**3*t3"
        " + 944640*t1*t5 + 466560*t3**2"),
    7: (4, "1/(2**28*5040)",
        "1612800*t7 - 10444*t1**7*N**2 - 64*N**6*t1**7 + 23001*t1**7 + 1456*t1**7*N**4"
        " + 13440*t1**4*t3*N**4 - 248640*t1**4*t3*N**2 + 1136520*t1**4*t3 - 322560*t1**2*t5*N**2"
        " + 3306240*t1**2*t5 + 3265920*t1*t3**2 - 161280*t1*t3**2*N**2"),
}

# Ft_g^(d) moment pieces, keyed by (g, d).
PIECE_TABLE = {
    (0, 1): "0",
    (0, 2): "T3/2**3",
    (0, 3): "(12*T3**2 + 4*T5)/2**6",
    (1, 1): "5/16*T3",
    (1, 2): "93/64*T3**2 + 35/64*T5",
    (1, 3): "75/8*T3**3 + 825/128*T5*T3 + 105/128*T7",
    (2, 1): "259/256*T5 + 657/256*T3**2",
}

# Fixed-N free energy as sum_k B_k * F_{g,k}(T).
B_TABLE = {
    2: {2: "1/2**7*T3"},
    3: {3: "1/2**10*(T5 + 3*T3**2)", 2: "-3/2**8*T3**2"},
    4: {
        4: "1/2**15*(5*T7 + 45*T3*T5 + 72*T3**3)",
        3: "-3/2**10*(5*T3*T5 + 13*T3**3)",
        2: "3/2**7*T3**3",
    },
    5: {
        5: "1/2**18*(7*T9 + 45*T5**2 + 540*T3**2*T5 + 84*T7*T3 + 594*T3**4)",
        4: "-3/2**14*(25*T5**2 + 35*T7*T3 + 405*T3**2*T5 + 567*T3**4)",
        3: "9/2**11*(5*T5**2 + 117*T3**4 + 60*T3**2*T5)",
        2: "-27/2**9*T3**4",
    },
}

# Polynomial tau-functions at N = 3/2 and N = 5/2, in the plain times.
HALF_INTEGER_TAU = {
    1: "1 - t1/2",
    2: "1 - 3/2*t1 + 3/4*t1**2 + 3/8*t3 - 1/8*t1**3",
}


def moment_table(g: int) -> TimesPolynomial:
    return parse_times(MOMENT_TABLE[g])


def tau_table(k: int) -> TimesPolynomial:
    """tau^(k) with the B factor expanded, as tabulated."""
    b_index, pref, body = TAU_TABLE[k]
    scalar = sympy.Rational(sympy.sympify(pref))
    poly = parse_times(body).scale(mpq(int(scalar.p), int(scalar.q)))
    return poly * b_polynomial(b_index)


def piece_table(g: int, d: int) -> TimesPolynomial:
    return parse_times(PIECE_TABLE[(g, d)])


def b_table(g: int) -> Dict[int, TimesPolynomial]:
    return {k: parse_times(v) for k, v in B_TABLE[g].items()}


def half_integer_tau(l: int) -> TimesPolynomial:
    return parse_times(HALF_INTEGER_TAU[l])
