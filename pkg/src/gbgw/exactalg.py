"""Exact rational arithmetic and the sparse ring Q[nu][t_1, t_3, t_5, ...].

Every quantity in the package lives here: ``mpq`` scalars, dense univariate
polynomials (:class:`UPoly`, used for polynomials in ``nu = N**2`` or in
``N``), and :class:`TimesPolynomial`, a sparse polynomial in the odd times
whose monomials also carry a power of ``nu``.

Monomials are keyed by ``(exps, d)`` where ``exps[i]`` is the power of
``t_{2i+1}`` (trailing zeros stripped) and ``d`` is the power of ``nu``.
Even times have no slot, so they cannot be represented.
"""

from __future__ import annotations

import json
from fractions import Fraction
from math import comb
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Tuple, Union

import gmpy2
from gmpy2 import mpq

Monomial = Tuple[int, ...]
Key = Tuple[Monomial, int]
RationalLike = Union[int, str, Fraction, "mpq"]

ZERO = mpq(0)
ONE = mpq(1)


class DomainError(ValueError):
    """Raised when an operation is called outside its mathematical domain."""


def rational(value: RationalLike) -> mpq:
    """Coerce ints, ``Fraction``s and ``"p/q"`` strings to an exact ``mpq``."""
    if isinstance(value, str):
        text = value.strip()
        try:
            return mpq(text)
        except (ValueError, ZeroDivisionError):
            raise DomainError(f"malformed rational {value!r}") from None
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    if isinstance(value, float):
        raise DomainError("floating point values are not accepted")
    return mpq(value)


def format_rational(value: RationalLike) -> str:
    q = rational(value)
    return f"{q.numerator}/{q.denominator}"


def _strip(exps: Iterable[int]) -> Monomial:
    out = list(exps)
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return a
    out = list(a)
    for i, e in enumerate(b):
        out[i] += e
    return tuple(out)


def _check_index(index: int) -> int:
    if not isinstance(index, int) or index <= 0 or index % 2 == 0:
        raise DomainError(f"time index must be odd and positive, got {index!r}")
    return (index - 1) // 2


def mono_weight(exps: Monomial) -> int:
    return sum((2 * i + 1) * e for i, e in enumerate(exps))


def mono_factors(exps: Monomial) -> int:
    return sum(exps)


# ---------------------------------------------------------------------------
# dense univariate polynomials


class UPoly:
    """Dense univariate polynomial with ``mpq`` coefficients, lowest degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[RationalLike] = ()):
        cs = [rational(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: Tuple[mpq, ...] = tuple(cs)

    @classmethod
    def constant(cls, c: RationalLike) -> "UPoly":
        return cls([c])

    @classmethod
    def x(cls) -> "UPoly":
        return cls([0, 1])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_even(self) -> bool:
        return all(c == 0 for c in self.coeffs[1::2])

    def lead(self) -> mpq:
        return self.coeffs[-1] if self.coeffs else ZERO

    def __getitem__(self, i: int) -> mpq:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else ZERO

    def _coerce(self, other) -> "UPoly":
        return other if isinstance(other, UPoly) else UPoly([other])

    def __add__(self, other) -> "UPoly":
        other = self._coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return UPoly(self[i] + other[i] for i in range(n))

    __radd__ = __add__

    def __neg__(self) -> "UPoly":
        return UPoly(-c for c in self.coeffs)

    def __sub__(self, other) -> "UPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "UPoly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "UPoly":
        if not isinstance(other, UPoly):
            c = rational(other)
            return UPoly(c * a for a in self.coeffs)
        if not self.coeffs or not other.coeffs:
            return UPoly()
        out = [ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return UPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "UPoly":
        out = UPoly([1])
        for _ in range(n):
            out = out * self
        return out

    def __call__(self, value):
        acc = ZERO if not isinstance(value, UPoly) else UPoly()
        for c in reversed(self.coeffs):
            acc = acc * value + c
        return acc

    def divmod(self, other: "UPoly") -> Tuple["UPoly", "UPoly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        q = [ZERO] * max(len(rem) - other.degree, 1)
        lead = other.lead()
        for shift in range(len(rem) - len(other.coeffs), -1, -1):
            c = rem[shift + other.degree] / lead
            if c:
                q[shift] = c
                for i, b in enumerate(other.coeffs):
                    rem[shift + i] -= c * b
        return UPoly(q), UPoly(rem)

    def even_part_in_square(self) -> "UPoly":
        """For an even polynomial p(x) return q with p(x) = q(x**2)."""
        if not self.is_even():
            raise DomainError("polynomial is not even")
        return UPoly(self.coeffs[::2])

    def __eq__(self, other) -> bool:
        if not isinstance(other, UPoly):
            try:
                other = UPoly([other])
            except (TypeError, ValueError, DomainError):
                return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"UPoly({[format_rational(c) for c in self.coeffs]})"

    def pretty(self, var: str = "nu") -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
            coef = str(c)
            if mono and c == 1:
                coef = ""
            elif mono and c == -1:
                coef = "-"
            parts.append(f"{coef}{'*' if coef not in ('', '-') and mono else ''}{mono}")
        return " + ".join(parts).replace("+ -", "- ")


# ---------------------------------------------------------------------------
# the times ring


class TimesPolynomial:
    """Sparse polynomial in odd times with coefficients in Q[nu].

    Instances are immutable; ``terms`` maps ``(exps, nu_power)`` to a nonzero
    ``mpq``.  Equality is structural because the representation is canonical.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Optional[Mapping[Key, RationalLike]] = None, *, _trusted: bool = False):
        if _trusted:
            self._terms: Dict[Key, mpq] = terms  # type: ignore[assignment]
        else:
            clean: Dict[Key, mpq] = {}
            for (exps, d), c in (terms or {}).items():
                if d < 0:
                    raise DomainError("negative power of nu")
                if any(e < 0 for e in exps):
                    raise DomainError("negative time exponent")
                key = (_strip(exps), int(d))
                c = clean.get(key, ZERO) + rational(c)
                if c:
                    clean[key] = c
                else:
                    clean.pop(key, None)
            self._terms = clean
        self._hash: Optional[int] = None

    # construction -------------------------------------------------------

    @classmethod
    def zero(cls) -> "TimesPolynomial":
        return cls({}, _trusted=True)

    @classmethod
    def constant(cls, c: RationalLike = 1) -> "TimesPolynomial":
        c = rational(c)
        return cls({((), 0): c} if c else {}, _trusted=True)

    @classmethod
    def one(cls) -> "TimesPolynomial":
        return cls.constant(1)

    @classmethod
    def t(cls, index: int, power: int = 1, coeff: RationalLike = 1) -> "TimesPolynomial":
        pos = _check_index(index)
        exps = [0] * (pos + 1)
        exps[pos] = power
        return cls({(tuple(exps), 0): coeff})

    @classmethod
    def nu(cls, power: int = 1, coeff: RationalLike = 1) -> "TimesPolynomial":
        return cls({((), power): coeff})

    @classmethod
    def monomial(cls, powers: Mapping[int, int], nu_power: int = 0, coeff: RationalLike = 1) -> "TimesPolynomial":
        """Build ``coeff * nu**nu_power * prod t_i**powers[i]`` (keys are time indices)."""
        width = max((_check_index(i) for i in powers), default=-1) + 1
        exps = [0] * width
        for i, e in powers.items():
            exps[_check_index(i)] += e
        return cls({(tuple(exps), nu_power): coeff})

    @classmethod
    def from_nu_poly(cls, poly: UPoly, exps: Monomial = ()) -> "TimesPolynomial":
        return cls({(exps, d): c for d, c in enumerate(poly.coeffs) if c})

    @classmethod
    def from_grouped(cls, grouped: Mapping[Monomial, UPoly]) -> "TimesPolynomial":
        terms = {}
        for exps, poly in grouped.items():
            for d, c in enumerate(poly.coeffs):
                if c:
                    terms[(exps, d)] = c
        return cls(terms)

    # inspection ---------------------------------------------------------

    @property
    def terms(self) -> Dict[Key, mpq]:
        return dict(self._terms)

    def items(self) -> Iterator[Tuple[Key, mpq]]:
        return iter(self._terms.items())

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def coefficient(self, powers: Mapping[int, int] = None, nu_power: int = 0) -> mpq:
        exps = TimesPolynomial.monomial(powers or {}, nu_power)._single_key()
        return self._terms.get(exps, ZERO)

    def _single_key(self) -> Key:
        (key,) = self._terms
        return key

    def nu_degree(self) -> int:
        return max((d for _, d in self._terms), default=0)

    def has_nu(self) -> bool:
        return any(d for _, d in self._terms)

    def weighted_degree(self) -> Union[int, str, None]:
        """Common weighted degree of all monomials, ``"inhomogeneous"`` otherwise.

        The zero polynomial has no degree and returns ``None``.
        """
        degrees = {mono_weight(exps) for exps, _ in self._terms}
        if not degrees:
            return None
        if len(degrees) > 1:
            return "inhomogeneous"
        return degrees.pop()

    def max_weight(self) -> int:
        return max((mono_weight(exps) for exps, _ in self._terms), default=0)

    def grouped(self) -> Dict[Monomial, UPoly]:
        """Group by time monomial; values are polynomials in nu."""
        buckets: Dict[Monomial, Dict[int, mpq]] = {}
        for (exps, d), c in self._terms.items():
            buckets.setdefault(exps, {})[d] = c
        out = {}
        for exps, by_d in buckets.items():
            cs = [ZERO] * (max(by_d) + 1)
            for d, c in by_d.items():
                cs[d] = c
            out[exps] = UPoly(cs)
        return out

    def nu_slice(self, d: int) -> "TimesPolynomial":
        """The coefficient of ``nu**d`` as a nu-free polynomial."""
        return TimesPolynomial({(exps, 0): c for (exps, dd), c in self._terms.items() if dd == d}, _trusted=True)

    def nu_parts(self) -> Dict[int, "TimesPolynomial"]:
        out: Dict[int, Dict[Key, mpq]] = {}
        for (exps, d), c in self._terms.items():
            out.setdefault(d, {})[(exps, 0)] = c
        return {d: TimesPolynomial(v, _trusted=True) for d, v in sorted(out.items())}

    def filter(self, predicate) -> "TimesPolynomial":
        return TimesPolynomial({k: c for k, c in self._terms.items() if predicate(k)}, _trusted=True)

    def truncate(self, max_weight: Optional[int] = None, max_factors: Optional[int] = None) -> "TimesPolynomial":
        def keep(key: Key) -> bool:
            exps = key[0]
            if max_weight is not None and mono_weight(exps) > max_weight:
                return False
            if max_factors is not None and mono_factors(exps) > max_factors:
                return False
            return True

        return self.filter(keep)

    # arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> "TimesPolynomial":
        if isinstance(other, TimesPolynomial):
            return other
        if isinstance(other, UPoly):
            return TimesPolynomial.from_nu_poly(other)
        return TimesPolynomial.constant(other)

    def __add__(self, other) -> "TimesPolynomial":
        other = self._coerce(other)
        if len(self._terms) < len(other._terms):
            big, small = other._terms, self._terms
        else:
            big, small = self._terms, other._terms
        out = dict(big)
        for k, c in small.items():
            s = out.get(k, ZERO) + c
            if s:
                out[k] = s
            else:
                del out[k]
        return TimesPolynomial(out, _trusted=True)

    __radd__ = __add__

    def __neg__(self) -> "TimesPolynomial":
        return TimesPolynomial({k: -c for k, c in self._terms.items()}, _trusted=True)

    def __sub__(self, other) -> "TimesPolynomial":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "TimesPolynomial":
        return self._coerce(other) - self

    def scale(self, c: RationalLike) -> "TimesPolynomial":
        c = rational(c)
        if not c:
            return TimesPolynomial.zero()
        return TimesPolynomial({k: c * v for k, v in self._terms.items()}, _trusted=True)

    def mul(self, other, max_weight: Optional[int] = None, max_factors: Optional[int] = None) -> "TimesPolynomial":
        """Product, optionally truncated by weighted degree and/or factor count.

        Both truncations are by ideals, so they are compatible with later
        products and with formal exp/log.
        """
        other = self._coerce(other)
        out: Dict[Key, mpq] = {}
        rhs = [(exps, d, c, mono_weight(exps), mono_factors(exps)) for (exps, d), c in other._terms.items()]
        for (ea, da), ca in self._terms.items():
            wa, fa = mono_weight(ea), mono_factors(ea)
            for eb, db, cb, wb, fb in rhs:
                if max_weight is not None and wa + wb > max_weight:
                    continue
                if max_factors is not None and fa + fb > max_factors:
                    continue
                key = (_mono_mul(ea, eb), da + db)
                out[key] = out.get(key, ZERO) + ca * cb
        return TimesPolynomial({k: c for k, c in out.items() if c}, _trusted=True)

    def __mul__(self, other) -> "TimesPolynomial":
        if isinstance(other, (TimesPolynomial, UPoly)):
            return self.mul(other)
        return self.scale(other)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "TimesPolynomial":
        return self.scale(1 / rational(other))

    def __pow__(self, n: int) -> "TimesPolynomial":
        out = TimesPolynomial.one()
        for _ in range(n):
            out = out * self
        return out

    def diff(self, index: int) -> "TimesPolynomial":
        """Partial derivative with respect to ``t_index`` (odd, positive)."""
        pos = _check_index(index)
        out: Dict[Key, mpq] = {}
        for (exps, d), c in self._terms.items():
            if pos < len(exps) and exps[pos]:
                e = list(exps)
                e[pos] -= 1
                out[(_strip(e), d)] = c * exps[pos]
        return TimesPolynomial(out, _trusted=True)

    def times_t(self, index: int, coeff: RationalLike = 1) -> "TimesPolynomial":
        pos = _check_index(index)
        c0 = rational(coeff)
        out = {}
        for (exps, d), c in self._terms.items():
            e = list(exps) + [0] * (pos + 1 - len(exps))
            e[pos] += 1
            out[(tuple(e), d)] = c * c0
        return TimesPolynomial(out, _trusted=True)

    def times_nu(self, power: int = 1) -> "TimesPolynomial":
        return TimesPolynomial({(exps, d + power): c for (exps, d), c in self._terms.items()}, _trusted=True)

    def euler(self) -> "TimesPolynomial":
        """Weighted Euler operator sum (2k+1) t_{2k+1} d/dt_{2k+1}."""
        return TimesPolynomial({k: c * mono_weight(k[0]) for k, c in self._terms.items() if k[0]}, _trusted=True)

    # substitutions ------------------------------------------------------

    def substitute_nu(self, value: RationalLike) -> "TimesPolynomial":
        v = rational(value)
        out: Dict[Key, mpq] = {}
        for (exps, d), c in self._terms.items():
            key = (exps, 0)
            out[key] = out.get(key, ZERO) + c * v ** d
        return TimesPolynomial(out)

    def shift_t1(self, shift: RationalLike) -> "TimesPolynomial":
        """Substitute ``t_1 -> t_1 + shift``."""
        a = rational(shift)
        out: Dict[Key, mpq] = {}
        for (exps, d), c in self._terms.items():
            e1 = exps[0] if exps else 0
            for j in range(e1 + 1):
                e = list(exps) if exps else [0]
                e[0] = j
                key = (_strip(e), d)
                out[key] = out.get(key, ZERO) + c * comb(e1, j) * a ** (e1 - j)
        return TimesPolynomial(out)

    def specialize_principal(self, order: int) -> List[UPoly]:
        """Substitute ``t_k = 1/(k*lambda**k)``; entry ``k`` is the coefficient of ``lambda**-k``.

        Coefficients are returned as polynomials in nu (constants when the
        input has no nu dependence).  Terms beyond ``lambda**-order`` are dropped.
        """
        if order < 0:
            raise DomainError("order must be non-negative")
        acc: List[Dict[int, mpq]] = [dict() for _ in range(order + 1)]
        for (exps, d), c in self._terms.items():
            w = mono_weight(exps)
            if w > order:
                continue
            val = c
            for i, e in enumerate(exps):
                if e:
                    val /= mpq(2 * i + 1) ** e
            acc[w][d] = acc[w].get(d, ZERO) + val
        out = []
        for by_d in acc:
            cs = [ZERO] * (max(by_d, default=-1) + 1)
            for d, c in by_d.items():
                cs[d] = c
            out.append(UPoly(cs))
        return out

    def exact_divide_nu(self, divisor: UPoly) -> Optional["TimesPolynomial"]:
        """Divide every nu-coefficient by ``divisor``; ``None`` if not exact."""
        out = {}
        for exps, poly in self.grouped().items():
            q, r = poly.divmod(divisor)
            if not r.is_zero():
                return None
            out[exps] = q
        return TimesPolynomial.from_grouped(out)

    # comparison / output ------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, TimesPolynomial):
            try:
                other = self._coerce(other)
            except (TypeError, ValueError, DomainError):
                return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def sorted_items(self) -> List[Tuple[Key, mpq]]:
        return sorted(self._terms.items(), key=lambda kv: _sort_key(kv[0]))

    def to_json_obj(self) -> list:
        out = []
        for (exps, d), c in self.sorted_items():
            t = {str(2 * i + 1): e for i, e in enumerate(exps) if e}
            out.append({"coeff": format_rational(c), "nu": d, "t": t})
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), separators=(",", ":"))

    @classmethod
    def from_json_obj(cls, obj: list) -> "TimesPolynomial":
        terms: Dict[Key, mpq] = {}
        for entry in obj:
            powers = {int(k): int(v) for k, v in entry.get("t", {}).items()}
            mono = cls.monomial(powers, int(entry.get("nu", 0)))._single_key()
            terms[mono] = terms.get(mono, ZERO) + rational(entry["coeff"])
        return cls(terms)

    @classmethod
    def from_json(cls, text: str) -> "TimesPolynomial":
        return cls.from_json_obj(json.loads(text))

    def pretty(self, time_name: str = "t", nu_name: str = "nu") -> str:
        if not self._terms:
            return "0"
        chunks = []
        for (exps, d), c in self.sorted_items():
            factors = []
            if d:
                factors.append(nu_name if d == 1 else f"{nu_name}^{d}")
            for i, e in enumerate(exps):
                if e:
                    name = f"{time_name}{2 * i + 1}"
                    factors.append(name if e == 1 else f"{name}^{e}")
            body = "*".join(factors)
            if not body:
                chunks.append(str(c))
            elif c == 1:
                chunks.append(body)
            elif c == -1:
                chunks.append("-" + body)
            else:
                chunks.append(f"{c}*{body}")
        return " + ".join(chunks).replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"TimesPolynomial({self.pretty()})"


def _sort_key(key: Key):
    exps, d = key
    return (mono_weight(exps), d, exps)


def t(index: int, power: int = 1) -> TimesPolynomial:
    return TimesPolynomial.t(index, power)


NU = TimesPolynomial.nu()


def add(p: TimesPolynomial, q: TimesPolynomial) -> TimesPolynomial:
    return p + q


def mul(p: TimesPolynomial, q: TimesPolynomial) -> TimesPolynomial:
    return p * q


def diff(p: TimesPolynomial, index: int) -> TimesPolynomial:
    return p.diff(index)


def weighted_degree(p: TimesPolynomial):
    return p.weighted_degree()


def specialize_principal(p: TimesPolynomial, order: int) -> List[UPoly]:
    return p.specialize_principal(order)


__all__ = [
    "mpq",
    "gmpy2",
    "DomainError",
    "UPoly",
    "TimesPolynomial",
    "rational",
    "format_rational",
    "mono_weight",
    "mono_factors",
    "t",
    "NU",
    "add",
    "mul",
    "diff",
    "weighted_degree",
    "specialize_principal",
]
