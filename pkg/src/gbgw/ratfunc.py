"""Reduced rational functions over Q on top of FLINT multivariate polynomials."""

from __future__ import annotations

from typing import Dict, Sequence, Tuple

import flint
from gmpy2 import mpq


def to_mpq(c) -> mpq:
    return mpq(int(c.p), int(c.q))


class RationalFunction:
    """num/den with gcd(num, den) = 1 and den having leading coefficient 1."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, reduce: bool = True):
        ctx = num.context()
        if den is None:
            den = ctx.from_dict({(0,) * ctx.nvars(): 1})
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if reduce:
            if num.is_zero():
                den = ctx.from_dict({(0,) * ctx.nvars(): 1})
            elif not den.is_constant():
                g = num.gcd(den)
                if not g.is_one():
                    num, den = num / g, den / g
            lc = den.leading_coefficient()
            if lc != 1:
                num, den = num / lc, den / lc
        self.num = num
        self.den = den

    @classmethod
    def const(cls, ctx, c) -> "RationalFunction":
        return cls(ctx.from_dict({(0,) * ctx.nvars(): c}))

    def context(self):
        return self.num.context()

    def _coerce(self, other) -> "RationalFunction":
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, mpq):
            other = flint.fmpq(int(other.numerator), int(other.denominator))
        return RationalFunction.const(self.context(), other)

    def __add__(self, other) -> "RationalFunction":
        other = self._coerce(other)
        if self.den == other.den:
            return RationalFunction(self.num + other.num, self.den)
        if self.num.is_zero():
            return other
        if other.num.is_zero():
            return self
        g = self.den.gcd(other.den)
        a, b = other.den / g, self.den / g
        return RationalFunction(self.num * a + other.num * b, self.den * a)

    __radd__ = __add__

    def __neg__(self) -> "RationalFunction":
        return RationalFunction(-self.num, self.den, reduce=False)

    def __sub__(self, other) -> "RationalFunction":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "RationalFunction":
        return self._coerce(other) - self

    def __mul__(self, other) -> "RationalFunction":
        other = self._coerce(other)
        # cross-cancel first to keep the gcds small
        g1 = self.num.gcd(other.den) if not other.den.is_constant() else None
        g2 = other.num.gcd(self.den) if not self.den.is_constant() else None
        a, d2 = (self.num / g1, other.den / g1) if g1 is not None and not g1.is_zero() else (self.num, other.den)
        b, d1 = (other.num / g2, self.den / g2) if g2 is not None and not g2.is_zero() else (other.num, self.den)
        return RationalFunction(a * b, d1 * d2)

    __rmul__ = __mul__

    def inverse(self) -> "RationalFunction":
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return RationalFunction(self.den, self.num)

    def __truediv__(self, other) -> "RationalFunction":
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other) -> "RationalFunction":
        return self._coerce(other) * self.inverse()

    def __pow__(self, n: int) -> "RationalFunction":
        if n < 0:
            return self.inverse() ** (-n)
        return RationalFunction(self.num ** n, self.den ** n, reduce=False)

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        return self.num == other.num and self.den == other.den

    def __ne__(self, other) -> bool:
        return not self == other

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def diff(self, var: str) -> "RationalFunction":
        dn = self.num.derivative(var)
        if self.den.is_constant():
            return RationalFunction(dn, self.den)
        dd = self.den.derivative(var)
        return RationalFunction(dn * self.den - self.num * dd, self.den * self.den)

    def compose(self, images: Sequence) -> "RationalFunction":
        """Substitute generator i by ``images[i]`` (polynomials in the same context)."""
        den = self.den.compose(*images)
        if den.is_zero():
            raise ZeroDivisionError("substitution hits a pole")
        return RationalFunction(self.num.compose(*images), den)

    def num_dict(self) -> Dict[Tuple[int, ...], mpq]:
        return {k: to_mpq(v) for k, v in self.num.to_dict().items()}

    def den_dict(self) -> Dict[Tuple[int, ...], mpq]:
        return {k: to_mpq(v) for k, v in self.den.to_dict().items()}

    @staticmethod
    def sum(terms) -> "RationalFunction":
        """Sum over a common denominator (the lcm), reducing once at the end."""
        terms = list(terms)
        den = terms[0].den
        for t in terms[1:]:
            if t.den != den:
                den = den * (t.den / den.gcd(t.den))
        num = terms[0].num * (den / terms[0].den)
        for t in terms[1:]:
            num = num + t.num * (den / t.den)
        return RationalFunction(num, den)

    def __repr__(self) -> str:
        if self.den.is_one():
            return f"({self.num})"
        return f"({self.num})/({self.den})"
