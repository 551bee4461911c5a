"""Triangular Schur functions as an independent oracle for tau at half-integer N.

Schur functions need the even times, so this module carries its own small
polynomial type over all times; even times are set to zero only after the
Jacobi-Trudi determinant has been expanded.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import factorial
from typing import Dict, Iterable, Tuple

from .exactalg import ZERO, DomainError, TimesPolynomial, _mono_mul, _strip, mpq

FullMonomial = Tuple[int, ...]  # position i holds the power of t_{i+1}


@dataclass(frozen=True)
class Partition:
    parts: Tuple[int, ...]

    def __post_init__(self):
        parts = tuple(int(p) for p in self.parts)
        if any(p <= 0 for p in parts):
            raise DomainError("partition parts must be positive")
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise DomainError("partition parts must be weakly decreasing")
        object.__setattr__(self, "parts", parts)

    @classmethod
    def triangular(cls, l: int) -> "Partition":
        if l < 0:
            raise DomainError("l must be non-negative")
        return cls(tuple(range(l, 0, -1)))

    @property
    def size(self) -> int:
        return sum(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def conjugate(self) -> "Partition":
        if not self.parts:
            return self
        return Partition(tuple(sum(1 for p in self.parts if p > i) for i in range(self.parts[0])))


class FullTimesPolynomial:
    """Sparse polynomial in t_1, t_2, t_3, ... (even times allowed)."""

    __slots__ = ("terms",)

    def __init__(self, terms: Dict[FullMonomial, mpq] = None):
        self.terms = {k: v for k, v in (terms or {}).items() if v}

    @classmethod
    def one(cls) -> "FullTimesPolynomial":
        return cls({(): mpq(1)})

    def __add__(self, other: "FullTimesPolynomial") -> "FullTimesPolynomial":
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, ZERO) + v
        return FullTimesPolynomial(out)

    def __neg__(self) -> "FullTimesPolynomial":
        return FullTimesPolynomial({k: -v for k, v in self.terms.items()})

    def __sub__(self, other: "FullTimesPolynomial") -> "FullTimesPolynomial":
        return self + (-other)

    def __mul__(self, other) -> "FullTimesPolynomial":
        if not isinstance(other, FullTimesPolynomial):
            c = mpq(other)
            return FullTimesPolynomial({k: v * c for k, v in self.terms.items()})
        out: Dict[FullMonomial, mpq] = {}
        for ka, va in self.terms.items():
            for kb, vb in other.terms.items():
                k = _mono_mul(ka, kb)
                out[k] = out.get(k, ZERO) + va * vb
        return FullTimesPolynomial(out)

    def times_t(self, index: int, coeff) -> "FullTimesPolynomial":
        pos = index - 1
        out = {}
        for k, v in self.terms.items():
            e = list(k) + [0] * max(0, pos + 1 - len(k))
            e[pos] += 1
            out[tuple(e)] = v * coeff
        return FullTimesPolynomial(out)

    def restrict_odd(self) -> TimesPolynomial:
        """Set every even time to zero and return the odd-times polynomial."""
        out = {}
        for k, v in self.terms.items():
            if any(e for e in k[1::2]):
                continue
            out[(_strip(k[0::2]), 0)] = v
        return TimesPolynomial(out)


@lru_cache(maxsize=None)
def _h_full(n: int) -> FullTimesPolynomial:
    if n < 0:
        return FullTimesPolynomial()
    if n == 0:
        return FullTimesPolynomial.one()
    acc = FullTimesPolynomial()
    for k in range(1, n + 1):
        acc = acc + _h_full(n - k).times_t(k, mpq(k, n))
    return acc


def complete_homogeneous(n: int, degree_cap: int = None) -> TimesPolynomial:
    """h_n with even times set to zero (0 for n < 0, and 0 above ``degree_cap``)."""
    if degree_cap is not None and n > degree_cap:
        return TimesPolynomial.zero()
    return _h_full(n).restrict_odd()


def _jacobi_trudi(parts: Tuple[int, ...]) -> FullTimesPolynomial:
    size = len(parts)
    if size == 0:
        return FullTimesPolynomial.one()

    # expand along rows; memoize on the set of columns still available
    @lru_cache(maxsize=None)
    def minor(row: int, cols: Tuple[int, ...]) -> FullTimesPolynomial:
        if row == size:
            return FullTimesPolynomial.one()
        acc = FullTimesPolynomial()
        for pos, j in enumerate(cols):
            entry = _h_full(parts[row] - row + j)
            if not entry.terms:
                continue
            rest = minor(row + 1, cols[:pos] + cols[pos + 1:])
            term = entry * rest
            acc = acc + (term if pos % 2 == 0 else -term)
        return acc

    return minor(0, tuple(range(size)))


def schur_full(lam: Partition) -> FullTimesPolynomial:
    return _jacobi_trudi(lam.parts)


def schur_in_times(lam: Partition) -> TimesPolynomial:
    """s_lambda(t) by Jacobi-Trudi, with even times set to zero at the end."""
    return schur_full(lam).restrict_odd()


def hook_product(lam: Partition) -> mpq:
    """s_lambda at t_k = delta_{k,1}, i.e. the product of inverse hook lengths."""
    conj = lam.conjugate().parts
    out = mpq(1)
    for i, row in enumerate(lam.parts):
        for j in range(row):
            out /= (row - j - 1) + (conj[j] - i - 1) + 1
    return out


def c_constant(l: int) -> mpq:
    if l < 0:
        raise DomainError("l must be non-negative")
    out = mpq((-1) ** (l * (l + 1) // 2), 2 ** (l * l))
    for k in range(1, l + 1):
        out *= mpq(factorial(2 * l - 2 * k + 1), factorial(l - k))
    return out


def c_from_hooks(l: int) -> mpq:
    size = l * (l + 1) // 2
    return 1 / (mpq(-2) ** size * hook_product(Partition.triangular(l)))


def triangular_tau(l: int) -> TimesPolynomial:
    """C_l s_{lambda(l)}(t~) with the dilaton shift t~_1 = t_1 - 2."""
    s = schur_in_times(Partition.triangular(l))
    return s.shift_t1(-2).scale(c_constant(l))


def schur_virasoro(m: int, l: int, p: TimesPolynomial, shifted: bool = True) -> TimesPolynomial:
    """Virasoro operator of the triangular Schur lemma applied to ``p``.

    ``shifted=True`` uses t~_1 = t_1 - 2 in the first sum; ``shifted=False``
    uses the plain times.  The constant is -l(l+1)/4 at m = 0.
    """
    out = TimesPolynomial.zero()
    for pos in range(m, max((len(e) for e, _ in p.terms), default=0)):
        k = pos - m
        dp = p.diff(2 * pos + 1)
        if dp.is_zero():
            continue
        part = dp.times_t(2 * k + 1, mpq(2 * k + 1, 2))
        if shifted and k == 0:
            part = part - dp
        out = out + part
    for a in range(m):
        out = out + p.diff(2 * a + 1).diff(2 * (m - 1 - a) + 1).scale(mpq(1, 4))
    if m == 0:
        out = out - p.scale(mpq(l * (l + 1), 4))
    return out


def schur_virasoro_residuals(l: int, m_max: int) -> Dict[str, Dict[int, TimesPolynomial]]:
    """Residuals of the Schur Virasoro constraints in the two consistent pairings.

    ``shifted``: shifted operator on s_lambda(t~); ``plain``: plain operator on s_lambda(t).
    The literal pairing (shifted operator on s_lambda(t)) is reported as ``literal``.
    """
    s = schur_in_times(Partition.triangular(l))
    s_shift = s.shift_t1(-2)
    out: Dict[str, Dict[int, TimesPolynomial]] = {"shifted": {}, "plain": {}, "literal": {}}
    for m in range(m_max + 1):
        out["shifted"][m] = schur_virasoro(m, l, s_shift, shifted=True)
        out["plain"][m] = schur_virasoro(m, l, s, shifted=False)
        out["literal"][m] = schur_virasoro(m, l, s, shifted=True)
    return out


def half_integer_nu(l: int) -> mpq:
    return (mpq(l) + mpq(1, 2)) ** 2


def triangular_size(l: int) -> int:
    return l * (l + 1) // 2


def partitions_of(n: int, max_part: int = None) -> Iterable[Tuple[int, ...]]:
    if max_part is None:
        max_part = n
    if n == 0:
        yield ()
        return
    for first in range(min(n, max_part), 0, -1):
        for rest in partitions_of(n - first, first):
            yield (first,) + rest
