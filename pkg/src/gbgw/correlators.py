"""Correlation functions W_{g,n} from the loop equations, and their z-differentials.

Each point x_i is traded for u_i = sqrt(1 + S^2/(4 x_i)), which is a rational
coordinate on the curve: x_i = S^2/(4(u_i^2 - 1)).  So every W_{g,n} is an
element of the rational function field Q(S, u_0, ..., u_7), and division by
u or by (x - x_i) is plain field division.

By default the recursion runs at S = 1.  All loop equations are homogeneous
under x -> S^2 x, so W_{g,n}(x, S) = S^(2(1-g-n)) R(u) with R the S = 1
result; the ``with_s`` table keeps S explicit and is used to test this.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from typing import Dict, List, Optional, Sequence, Tuple

import flint
import sympy

from .cutjoin import tau_expansion
from .exactalg import DomainError, format_rational, mpq
from .freenergy import GenusTable, genus_split, log_expansion
from .ratfunc import RationalFunction, to_mpq

MAX_POINTS = 8
NVARS = MAX_POINTS + 1  # slot 0 is S, slot i + 1 is u_i

CTX = flint.fmpq_mpoly_ctx.get(("S",) + tuple(f"u{i}" for i in range(MAX_POINTS)), "lex")
ZCTX = flint.fmpq_mpoly_ctx.get(tuple(f"z{i}" for i in range(MAX_POINTS)), "lex")
_GENS = CTX.gens()
_ZGENS = ZCTX.gens()
S = RationalFunction(_GENS[0])
U = [RationalFunction(g) for g in _GENS[1:]]
Z = [RationalFunction(g) for g in _ZGENS]
ONE = RationalFunction.const(CTX, 1)
ZERO_F = RationalFunction.const(CTX, 0)


class MissingPrerequisiteError(LookupError):
    """A correlator was requested before the entries it depends on."""


class ConjectureViolation(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# field helpers


def x_of(i: int, with_s: bool = True) -> RationalFunction:
    """x_i as an element of the field (S = 1 when ``with_s`` is false)."""
    s2 = S ** 2 if with_s else ONE
    return s2 / (4 * (U[i] ** 2 - 1))


def rename(f: RationalFunction, index_map: Dict[int, int], signs: Dict[int, int] = None) -> RationalFunction:
    """Substitute u_k -> sign_k * u_{index_map[k]} (targets may coincide)."""
    images = [_GENS[0]]
    for k in range(MAX_POINTS):
        img = _GENS[index_map.get(k, k) + 1]
        if signs and signs.get(k, 1) < 0:
            img = -img
        images.append(img)
    return f.compose(images)


def x_derivative(f: RationalFunction, i: int) -> RationalFunction:
    """x_i d/dx_i = -(u_i^2 - 1)/(2 u_i) d/du_i."""
    u = U[i]
    return -(u ** 2 - 1) / (2 * u) * f.diff(f"u{i}")


def s_degree(f: RationalFunction) -> Optional[int]:
    """k if f is S^k times an S-free element, else None."""
    out = 0
    for p, sign in ((f.num, 1), (f.den, -1)):
        ds = {e[0] for e in p.monoms()}
        if len(ds) != 1:
            return None
        out += sign * ds.pop()
    return out


def strip_s(f: RationalFunction) -> RationalFunction:
    """Set S = 1."""
    return f.compose([CTX.from_dict({(0,) * NVARS: 1})] + list(_GENS[1:]))


def _poly_to_sympy(p, names: Sequence[sympy.Symbol]) -> sympy.Expr:
    out = sympy.Integer(0)
    for exps, c in p.to_dict().items():
        term = sympy.Rational(int(c.p), int(c.q))
        for sym, e in zip(names, exps):
            if e:
                term *= sym ** e
        out += term
    return out


# ---------------------------------------------------------------------------
# the recursion


@dataclass
class AlgebraicCorrelator:
    """W_{g,n} as an element of Q(S, u_0, ..., u_{n-1})."""

    g: int
    n: int
    value: object
    with_s: bool = False

    @property
    def s_weight(self) -> int:
        return 2 * (1 - self.g - self.n)

    def full(self):
        """The element of Q(S, u) with S restored."""
        if self.with_s:
            return self.value
        return self.value * S ** self.s_weight

    def multilinear(self) -> Dict[Tuple[int, ...], sympy.Expr]:
        """Expansion sum_A R_A(x, S) prod_{i in A} u_i with u_i^2 = 1 + S^2/(4 x_i)."""
        return multilinear_form(self.full(), self.n)

    def to_json_obj(self) -> dict:
        out = {}
        for subset, expr in sorted(self.multilinear().items()):
            num, den = sympy.fraction(sympy.cancel(expr))
            out[",".join(str(i + 1) for i in subset) or "-"] = {
                "numerator": str(sympy.expand(num)),
                "denominator": str(sympy.factor(den)),
            }
        return {"g": self.g, "n": self.n, "u_relation": "u_i^2 = 1 + S^2/(4*x_i)", "terms": out}


def w01(with_s: bool = False) -> AlgebraicCorrelator:
    return AlgebraicCorrelator(0, 1, 2 * (1 - U[0]), with_s)


class CorrelatorTable:
    """W_{g,n} computed by the loop-equation recursion, ordered by 2g + n."""

    def __init__(self, with_s: bool = False):
        self.with_s = with_s
        self.entries: Dict[Tuple[int, int], object] = {(0, 1): w01(with_s).value}

    def __contains__(self, key) -> bool:
        return key in self.entries

    def get(self, g: int, n: int) -> AlgebraicCorrelator:
        if (g, n) not in self.entries:
            raise MissingPrerequisiteError(f"W_{{{g},{n}}} has not been computed")
        return AlgebraicCorrelator(g, n, self.entries[(g, n)], self.with_s)

    def _x(self, i: int):
        return x_of(i, self.with_s)

    def _require(self, g: int, n: int):
        if (g, n) not in self.entries:
            raise MissingPrerequisiteError(f"W_{{{g},{n}}} is needed first")
        return self.entries[(g, n)]

    def _products(self, g: int, m: int, primed: bool):
        """sum over q + p = g and I u J = {1..m} of W_{q,|I|+1}(x, x_I) W_{p,|J|+1}(x, x_J)."""
        terms = [ZERO_F]
        points = list(range(1, m + 1))
        for q in range(g + 1):
            p = g - q
            for r in range(m + 1):
                for I in itertools.combinations(points, r):
                    J = [i for i in points if i not in I]
                    if primed and ((q == g and len(J) == 0) or (p == g and len(I) == 0)):
                        continue
                    a = self._require(q, len(I) + 1)
                    b = self._require(p, len(J) + 1)
                    a = rename(a, {k + 1: i for k, i in enumerate(I)})
                    b = rename(b, {k + 1: j for k, j in enumerate(J)})
                    terms.append(a * b)
        return RationalFunction.sum(terms)

    def _differences(self, g: int, m: int):
        if m == 0:
            return ZERO_F
        w = self._require(g, m)
        terms = [ZERO_F]
        x0 = self._x(0)
        base = rename(w, {k: k + 1 for k in range(m)})
        for i in range(1, m + 1):
            moved = rename(w, {k: (0 if k + 1 == i else k + 1) for k in range(m)})
            quotient = (moved - base) / (x0 - self._x(i))
            terms.append(x_derivative(quotient, i))
            terms.append(quotient / 2)
        return RationalFunction.sum(terms)

    def _coincident(self, g: int, m: int):
        if g < 1:
            return ZERO_F
        w = self._require(g - 1, m + 2)
        return rename(w, {0: 0, 1: 0, **{k: k - 1 for k in range(2, m + 2)}})

    def _delta(self, g: int, m: int, include_genus0: bool):
        if m:
            return ZERO_F
        x0 = self._x(0)
        s2 = S ** 2 if self.with_s else ONE
        if g == 1:
            return 1 / (16 * x0)
        if g == 0 and include_genus0:
            return -s2 / (4 * x0)
        return ZERO_F

    def loop_step(self, g: int, n: int):
        """Compute W_{g,n} from lower entries and store it."""
        if n < 1 or g < 0 or (g, n) == (0, 1):
            raise DomainError("loop_step needs n >= 1 and (g, n) != (0, 1)")
        if n + 2 > MAX_POINTS + 1 and g >= 1:
            raise DomainError("too many points for the configured field")
        m = n - 1
        acc = self._products(g, m, primed=True) / 4
        acc += self._differences(g, m)
        acc += self._coincident(g, m) / 4
        acc += self._delta(g, m, include_genus0=False)
        value = acc / U[0]
        self.entries[(g, n)] = value
        return AlgebraicCorrelator(g, n, value, self.with_s)

    def loop_residual(self, g: int, n: int):
        """W_{g,m+1} minus the right-hand side of the unsolved loop equation."""
        m = n - 1
        rhs = self._coincident(g, m) / 4 + self._delta(g, m, include_genus0=True)
        rhs += self._products(g, m, primed=False) / 4
        rhs += self._differences(g, m)
        return self._require(g, n) - rhs

    def ensure(self, g: int, n: int) -> AlgebraicCorrelator:
        """Compute W_{g,n} and everything it depends on."""
        for level in range(1, 2 * g + n + 1):
            for gg in range(0, level // 2 + 1):
                nn = level - 2 * gg
                if nn < 1 or (gg, nn) in self.entries:
                    continue
                if 2 * gg + nn > 2 * g + n:
                    continue
                self.loop_step(gg, nn)
        return self.get(g, n)

    def fill(self, level: int) -> None:
        """Compute every W_{g,n} with 2g + n <= level."""
        for lev in range(1, level + 1):
            for gg in range(0, lev // 2 + 1):
                nn = lev - 2 * gg
                if nn >= 1 and (gg, nn) not in self.entries:
                    self.loop_step(gg, nn)

    def keys(self) -> List[Tuple[int, int]]:
        return sorted(self.entries, key=lambda k: (2 * k[0] + k[1], k))


_DEFAULT = CorrelatorTable()


def default_table() -> CorrelatorTable:
    return _DEFAULT


def correlator(g: int, n: int) -> AlgebraicCorrelator:
    return _DEFAULT.ensure(g, n)


def w02() -> AlgebraicCorrelator:
    return correlator(0, 2)


def loop_step(g: int, targets: Sequence[int] = None) -> AlgebraicCorrelator:
    """W_{g, len(targets)+1} from the shared table (prerequisites must exist)."""
    n = 1 + len(targets or ())
    return _DEFAULT.loop_step(g, n)


def is_symmetric(f, n: int) -> bool:
    for perm in itertools.permutations(range(n)):
        if rename(f, dict(enumerate(perm))) != f:
            return False
    return True


# ---------------------------------------------------------------------------
# closed forms for comparison


def reference_forms() -> Dict[Tuple[int, int], object]:
    """Closed forms in their tabulated form, as elements of Q(S, u)."""
    x = [x_of(i) for i in range(3)]
    u = U
    s2 = S ** 2
    return {
        (0, 1): 2 * (1 - u[0]),
        (0, 2): ((s2 + 2 * (x[0] + x[1])) / (u[0] * u[1]) - 2 * (x[0] + x[1])) / (2 * (x[0] - x[1]) ** 2),
        (1, 1): 1 / (16 * x[0] * u[0] ** 5),
        (0, 3): -s2 / (8 * x[0] * x[1] * x[2] * u[0] * u[1] * u[2]),
        (1, 2): (
            S ** 8
            - 6 * (x[0] + x[1]) * S ** 6
            - 136 * S ** 4 * x[0] * x[1]
            - 128 * x[0] * x[1] * (x[0] + x[1]) * s2
            + 128 * x[0] ** 2 * x[1] ** 2
        )
        / (2 ** 12 * x[0] ** 3 * x[1] ** 3 * u[0] ** 7 * u[1] ** 7),
        (2, 1): (S ** 4 - 20 * s2 * x[0] + 9 * x[0] ** 2) / (2 ** 10 * x[0] ** 4 * u[0] ** 11),
    }


def corrected_w03():
    """W_{0,3} with the power of u that the free energy requires."""
    x = [x_of(i) for i in range(3)]
    return -S ** 2 / (8 * x[0] * x[1] * x[2] * U[0] ** 3 * U[1] ** 3 * U[2] ** 3)


def quadratic_residual():
    w = w01(with_s=True).value
    return w ** 2 - 4 * w - S ** 2 / x_of(0)


def opposite_sheet_limit():
    """(x_1 - x_2)^2 W_{0,2} at x_2 = x_1 on the opposite sheet (u_2 = -u_1)."""
    w = correlator(0, 2).full()
    f = (x_of(0) - x_of(1)) ** 2 * w
    return rename(f, {1: 0}, {1: -1})


def coincident_value():
    """W_{0,2} at x_2 = x_1 on the same sheet (raises if there is a pole)."""
    return rename(correlator(0, 2).full(), {1: 0})


# ---------------------------------------------------------------------------
# multilinear x-form


def multilinear_form(f: RationalFunction, n: int) -> Dict[Tuple[int, ...], sympy.Expr]:
    """Rewrite f(S, u) as sum_A R_A(x, S) prod_{i in A} u_i.

    The denominator is made even in every u_i by multiplying with its
    conjugates; then u_i^2 -> 1 + S^2/(4 x_i).
    """
    num, den = f.num, f.den
    for i in range(n):
        conj = _flip(den, i)
        num, den = num * conj, den * conj
    xs = sympy.symbols(f"x1:{n + 1}")
    s = sympy.Symbol("S")

    def grouped(p) -> Dict[Tuple[int, ...], sympy.Expr]:
        groups: Dict[Tuple[int, ...], sympy.Expr] = {}
        for exps, c in p.to_dict().items():
            subset = tuple(i for i in range(n) if exps[i + 1] % 2)
            term = sympy.Rational(int(c.p), int(c.q)) * s ** exps[0]
            for i in range(n):
                term *= (1 + s ** 2 / (4 * xs[i])) ** (exps[i + 1] // 2)
            groups[subset] = groups.get(subset, 0) + term
        return groups

    den_groups = grouped(den)
    if set(den_groups) - {()}:
        raise ConjectureViolation("denominator is not even after conjugation")
    denom = den_groups.get((), sympy.Integer(1))
    return {k: sympy.cancel(v / denom) for k, v in grouped(num).items()}


def _flip(p, i: int):
    """p with u_i -> -u_i."""
    images = list(_GENS)
    images[i + 1] = -images[i + 1]
    return p.compose(*images)


def s_zero_limit(c: AlgebraicCorrelator) -> sympy.Expr:
    """W_{g,n} at S = 0 (all u_i = 1), as a rational function of the x_i."""
    s = sympy.Symbol("S")
    total = sympy.cancel(sum(c.multilinear().values()))
    return sympy.cancel(total.subs(s, 0))


def is_polynomial_in_inverse_x(expr: sympy.Expr, n: int) -> bool:
    xs = sympy.symbols(f"x1:{n + 1}")
    ys = sympy.symbols(f"y1:{n + 1}")
    e = sympy.cancel(expr.subs({x: 1 / y for x, y in zip(xs, ys)}))
    _, den = sympy.fraction(e)
    return sympy.Poly(den, *ys).is_ground


# ---------------------------------------------------------------------------
# z-differentials


@dataclass
class ZDifferential:
    """Coefficient of dz_1 ... dz_n, a rational function of z_0..z_{n-1}."""

    g: int
    n: int
    coefficient: RationalFunction
    branch_sign: int

    def cleared(self) -> RationalFunction:
        """prod z_i^2 times the coefficient."""
        out = self.coefficient
        for i in range(self.n):
            out = out * Z[i] ** 2
        return out

    def is_polynomial_in_inverse_z(self) -> bool:
        """Denominator a monomial and numerator degree in each z_i bounded by it."""
        f = self.cleared()
        dmon = f.den.monoms()
        if len(dmon) != 1:
            return False
        top = dmon[0]
        return all(e <= top[i] for m in f.num.monoms() for i, e in enumerate(m))

    def is_symmetric(self) -> bool:
        for perm in itertools.permutations(range(self.n)):
            images = list(_ZGENS)
            for k, j in enumerate(perm):
                images[k] = _ZGENS[j]
            if self.coefficient.compose(images) != self.coefficient:
                return False
        return True

    def to_json_obj(self) -> dict:
        f = self.cleared()
        names = sympy.symbols(f"z1:{MAX_POINTS + 1}")
        return {
            "g": self.g,
            "n": self.n,
            "branch_sign": self.branch_sign,
            "form": "z_1^2...z_n^2 * omega/(dz_1...dz_n) = numerator/denominator",
            "numerator": str(sympy.factor(_poly_to_sympy(f.num, names))),
            "denominator": str(_poly_to_sympy(f.den, names)),
            "polynomial_in_inverse_z": self.is_polynomial_in_inverse_z(),
            "coefficients": self.inverse_z_coefficients(),
        }

    def inverse_z_coefficients(self) -> List[dict]:
        """The cleared coefficient as a list of terms c * prod z_i^(-p_i); empty if not polynomial."""
        if not self.is_polynomial_in_inverse_z():
            return []
        f = self.cleared()
        (top, lead), = f.den.to_dict().items()
        out = []
        for exps, c in sorted(f.num.to_dict().items()):
            powers = [int(top[i]) - int(exps[i]) for i in range(self.n)]
            out.append({"coeff": format_rational(to_mpq(c) / to_mpq(lead)), "inverse_z": powers})
        return out


def _even_to_z(p, n: int):
    """p(u) with even u-powers at S = 1: substitute u_i^2 = z_i^2/(4(z_i - 1)).

    Returns (polynomial in z, powers A_i of 4(z_i - 1) that were cleared).
    """
    items = p.to_dict()
    A = [0] * n
    for exps in items:
        for i in range(n):
            A[i] = max(A[i], exps[i + 1] // 2)
    powers = []
    for i in range(n):
        pw = [ZCTX.from_dict({(0,) * MAX_POINTS: 1})]
        for _ in range(A[i]):
            pw.append(pw[-1] * (4 * (_ZGENS[i] - 1)))
        powers.append(pw)
    out = ZCTX.from_dict({})
    for exps, c in items.items():
        mono = [0] * MAX_POINTS
        for i in range(n):
            mono[i] = exps[i + 1]
        term = ZCTX.from_dict({tuple(mono): c})
        for i in range(n):
            term = term * powers[i][A[i] - exps[i + 1] // 2]
        out += term
    return out, A


def to_z_differential(g: int, n: int, branch_sign: int = -1, table: CorrelatorTable = None) -> ZDifferential:
    """omega_{g,n} = S^(2g-2+n) W_{g,n} d sqrt(x_1) ... d sqrt(x_n) in the z coordinate.

    x = S^2 (z-1)/(z-2)^2 and sqrt(x) = branch_sign * S r/(z-2) with r^2 = z - 1,
    u = z/(2r).  Then d sqrt(x) = -branch_sign * S u dz/(z-2)^2, so the
    coefficient is (-branch_sign)^n prod u_i W / prod (z_i-2)^2.  Every S
    must cancel, and r disappears iff W is odd in every u_i.
    """
    if 2 * g + n - 2 <= 0:
        raise DomainError("only stable (g, n) have differentials")
    if branch_sign not in (1, -1):
        raise DomainError("branch_sign must be +1 or -1")
    table = table or _DEFAULT
    w = table.ensure(g, n).full()
    e = w * S ** (2 * g - 2 + n)
    for i in range(n):
        e = e * S * U[i]
    if s_degree(e) != 0 or any(m[0] for m in e.num.monoms()) or any(m[0] for m in e.den.monoms()):
        raise ConjectureViolation(f"S survives in omega_{g},{n}")
    num, den = e.num, e.den
    for i in range(n):
        if rename(e, {}, {i: -1}) != e:
            raise ConjectureViolation(f"r_{i + 1} survives in omega_{g},{n}")
        if any(m[i + 1] % 2 for m in num.monoms()):
            num, den = num * _GENS[i + 1], den * _GENS[i + 1]
    pn, an = _even_to_z(num, n)
    pd, ad = _even_to_z(den, n)
    numer = pn * (-branch_sign) ** n
    denom = pd
    for i in range(n):
        zi = _ZGENS[i]
        shift = ad[i] - an[i]
        if shift >= 0:
            numer = numer * (4 * (zi - 1)) ** shift
        else:
            denom = denom * (4 * (zi - 1)) ** (-shift)
        denom = denom * (zi - 2) ** 2
    return ZDifferential(g, n, RationalFunction(numer, denom), branch_sign)


def reference_differentials() -> Dict[Tuple[int, int], RationalFunction]:
    z0, z1, z2 = Z[0], Z[1], Z[2]
    w12 = (
        54 * z1 ** 2 * z0 ** 4 + 24 * z1 ** 3 * z0 ** 3 - 14 * z1 ** 3 * z0 ** 4 + 54 * z1 ** 4 * z0 ** 2
        - 14 * z1 ** 4 * z0 ** 3 + z1 ** 4 * z0 ** 4 + 24 * z0 ** 2 * z1 ** 2 - 80 * z0 ** 4 * z1
        - 24 * z0 ** 3 * z1 ** 2 - 24 * z0 ** 2 * z1 ** 3 - 80 * z0 * z1 ** 4 + 40 * z1 ** 4 + 40 * z0 ** 4
    ) / (z0 ** 6 * z1 ** 6)
    return {
        (1, 1): (z0 - 1) / z0 ** 4,
        (0, 3): 8 / (z0 ** 2 * z1 ** 2 * z2 ** 2),
        (2, 1): (105 - 210 * z0 + 133 * z0 ** 2 - 28 * z0 ** 3 + z0 ** 4) * (z0 - 2) ** 2 * (z0 - 1) / z0 ** 10,
        (1, 2): w12,
    }


# ---------------------------------------------------------------------------
# series in 1/x and the comparison with the free energy


Series = Dict[Tuple[int, ...], mpq]


def _u_series(order: int) -> List[mpq]:
    """u = sqrt(1 + y/4) in powers of y = 1/x (S = 1)."""
    out = []
    for j in range(order + 1):
        # binom(1/2, j) / 4^j
        c = mpq(1)
        for i in range(j):
            c *= (mpq(1, 2) - i) / (i + 1)
        out.append(c / mpq(4) ** j)
    return out


def _uni_mul(a: List[mpq], b: List[mpq], order: int) -> List[mpq]:
    out = [mpq(0)] * (order + 1)
    for i, x in enumerate(a):
        if x:
            for j in range(min(len(b), order + 1 - i)):
                out[i + j] += x * b[j]
    return out


def poly_series(p, n: int, box: Sequence[int]) -> Series:
    """Evaluate a polynomial in S, u_0..u_{n-1} at S = 1, u_i = u(y_i), truncated to ``box``."""
    order = max(box) if box else 0
    base = _u_series(order)
    pw_cache: Dict[int, List[mpq]] = {0: [mpq(1)] + [mpq(0)] * order}

    def pw(e):
        if e not in pw_cache:
            pw_cache[e] = _uni_mul(pw(e - 1), base, order)
        return pw_cache[e]

    out: Series = {}
    for exps, c in p.to_dict().items():
        c = to_mpq(c)
        factors = [pw(exps[i + 1])[: box[i] + 1] for i in range(n)]
        for idx in itertools.product(*[range(len(f)) for f in factors]):
            v = mpq(c)
            for i, k in enumerate(idx):
                v *= factors[i][k]
                if not v:
                    break
            if v:
                out[idx] = out.get(idx, mpq(0)) + v
    return {k: v for k, v in out.items() if v}


def _series_mul(a: Series, b: Series, box: Sequence[int]) -> Series:
    out: Series = {}
    for ka, va in a.items():
        for kb, vb in b.items():
            k = tuple(x + y for x, y in zip(ka, kb))
            if all(x <= m for x, m in zip(k, box)):
                out[k] = out.get(k, mpq(0)) + va * vb
    return {k: v for k, v in out.items() if v}


def expected_series(genus: GenusTable, g: int, n: int, depth: int) -> Series:
    """Coefficients of prod y_i^(k_i+1) predicted by derivatives of F_g at t = 0, S = 1."""
    Fg = genus[g]
    out: Series = {}
    for ks in itertools.product(range(depth), repeat=n):
        exps = [0] * (max(ks) + 1)
        for k in ks:
            exps[k] += 1
        while exps and exps[-1] == 0:
            exps.pop()
        d = sum(ks) + 1 - g
        if d < 0:
            continue
        c = Fg._terms.get((tuple(exps), d))
        if c:
            mult = 1
            for e in exps:
                for f in range(2, e + 1):
                    mult *= f
            out[tuple(k + 1 for k in ks)] = c * mult
    return out


@dataclass
class NablaReport:
    g: int
    n: int
    depth: int
    compared: int
    mismatches: List[Tuple[int, ...]] = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def to_json_obj(self) -> dict:
        return {"g": self.g, "n": self.n, "depth": self.depth, "compared": self.compared,
                "mismatches": [list(m) for m in self.mismatches], "ok": self.ok}


def correlator_series(c: AlgebraicCorrelator, depth: int) -> Series:
    """Series of W_{g,n} (S = 1) in y_i = 1/x_i through y_i^depth."""
    value = strip_s(c.full())
    box0 = [depth] * c.n
    q = poly_series(value.den, c.n, [depth + 8] * c.n)
    low = [min(k[i] for k in q) for i in range(c.n)]
    lead = tuple(low)
    if lead not in q:
        raise DomainError("denominator series does not start with a single monomial")
    # divide: W = P / Q with Q = y^low * unit
    unit = {tuple(k[i] - low[i] for i in range(c.n)): v for k, v in q.items()}
    box = [depth + low[i] for i in range(c.n)]
    p = poly_series(value.num, c.n, box)
    shifted = {}
    for k, v in p.items():
        kk = tuple(k[i] - low[i] for i in range(c.n))
        if any(x < 0 for x in kk):
            if v:
                raise DomainError("numerator vanishes to lower order than expected")
            continue
        shifted[kk] = v
    return _series_divide(shifted, unit, box0)


def _series_divide(a: Series, unit: Series, box: Sequence[int]) -> Series:
    c0 = unit[tuple(0 for _ in box)]
    out: Series = {}
    for idx in sorted(itertools.product(*[range(b + 1) for b in box]), key=sum):
        v = a.get(idx, mpq(0))
        for k, w in unit.items():
            if not any(k):
                continue
            prev = tuple(i - j for i, j in zip(idx, k))
            if all(x >= 0 for x in prev) and prev in out:
                v -= w * out[prev]
        if v:
            out[idx] = v / c0
    return out


def nabla_crosscheck(g: int, n: int, depth: int = 6, genus: GenusTable = None) -> NablaReport:
    """Compare W_{g,n} with derivatives of F_g: x^-(k+1) pairs with d/dt_{2k+1}, k >= 0.

    P(u(y)) = E(y) Q(u(y)) is checked on the box where both sides are fixed by
    the data (W = P/Q, E the predicted series through y_i^depth).
    """
    c = correlator(g, n)
    if genus is None:
        genus = genus_table_for(n, depth)
    expected = expected_series(genus, g, n, depth)
    value = strip_s(c.full())
    q = poly_series(value.den, n, [depth + 8] * n)
    low = [min(k[i] for k in q) for i in range(n)]
    box = [depth + low[i] for i in range(n)]
    q = {k: v for k, v in q.items() if all(k[i] <= box[i] for i in range(n))}
    lhs = poly_series(value.num, n, box)
    rhs = _series_mul(expected, q, box)
    mismatches = []
    compared = 0
    for idx in itertools.product(*[range(b + 1) for b in box]):
        compared += 1
        if lhs.get(idx, mpq(0)) != rhs.get(idx, mpq(0)):
            mismatches.append(idx)
    return NablaReport(g, n, depth, compared, mismatches)


_GENUS_CACHE: Dict[Tuple[int, int], GenusTable] = {}


def genus_table_for(n: int, depth: int) -> GenusTable:
    key = (n, depth)
    if key not in _GENUS_CACHE:
        K = n * (2 * depth - 1)
        F = log_expansion(tau_expansion(K), max_factors=n)
        _GENUS_CACHE[key] = genus_split(F)
    return _GENUS_CACHE[key]
