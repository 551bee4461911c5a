import sympy
from hypothesis import strategies as st

from gbgw.exactalg import TimesPolynomial, mpq

NU = sympy.Symbol("nu")
T = {k: sympy.Symbol(f"t{k}") for k in range(1, 30, 2)}


def to_sympy(p: TimesPolynomial):
    out = sympy.Integer(0)
    for (exps, d), c in p.items():
        term = sympy.Rational(int(c.numerator), int(c.denominator)) * NU ** d
        for i, e in enumerate(exps):
            term *= T[2 * i + 1] ** e
        out += term
    return sympy.expand(out)


def sympy_cut_and_join(expr, max_index=21):
    """Direct application of the cut-and-join operator with sympy derivatives."""
    odd = list(range(1, max_index + 1, 2))
    out = sympy.Integer(0)
    for a in odd:
        for b in odd:
            c = a + b - 1
            if c in T:
                out += sympy.Rational(1, 2) * a * b * T[a] * T[b] * sympy.diff(expr, T[c])
            s = a + b + 1
            if s in T:
                out += sympy.Rational(1, 4) * s * T[s] * sympy.diff(expr, T[a], T[b])
    out += (sympy.Rational(1, 16) - NU / 4) * T[1] * expr
    return sympy.expand(out)


coefficients = st.fractions(min_value=-20, max_value=20, max_denominator=12).map(
    lambda f: mpq(f.numerator, f.denominator)
)


@st.composite
def times_polynomials(draw, max_terms=5, max_index=7, max_power=3, max_nu=2):
    n = draw(st.integers(0, max_terms))
    p = TimesPolynomial.zero()
    for _ in range(n):
        powers = {k: draw(st.integers(0, max_power)) for k in range(1, max_index + 1, 2)}
        p = p + TimesPolynomial.monomial(powers, draw(st.integers(0, max_nu)), draw(coefficients))
    return p


@st.composite
def homogeneous_polynomials(draw, degree_range=(0, 6)):
    from gbgw.schurkdv import partitions_of

    k = draw(st.integers(*degree_range))
    odd_parts = [p for p in partitions_of(k) if all(x % 2 for x in p)]
    p = TimesPolynomial.zero()
    for parts in draw(st.lists(st.sampled_from(odd_parts), max_size=4)):
        powers = {}
        for x in parts:
            powers[x] = powers.get(x, 0) + 1
        p = p + TimesPolynomial.monomial(powers, draw(st.integers(0, 2)), draw(coefficients))
    return k, p


ACCEPTANCE_LINES = []


def record_criterion(number, ok, detail=""):
    line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}".rstrip()
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
