"""The cut-and-join operator W_N and the order-by-order tau-function."""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional, Tuple, Union

from .exactalg import (
    DomainError,
    Key,
    Monomial,
    TimesPolynomial,
    UPoly,
    ZERO,
    _strip,
    format_rational,
    mpq,
    rational,
)

MU0_CONST = mpq(1, 16)
MU0_NU = mpq(-1, 4)

NuSpec = Union[str, None, int, mpq]


@lru_cache(maxsize=None)
def _transitions(exps: Monomial) -> Tuple[Tuple[Monomial, mpq], ...]:
    """Nu-free part of W_N acting on one monomial, excluding the t_1 multiplication."""
    out: Dict[Monomial, mpq] = {}
    n = len(exps)
    # cut: 1/2 sum (2k+1)(2m+1) t_{2k+1} t_{2m+1} d_{2k+2m+1}
    for p, e in enumerate(exps):
        if not e:
            continue
        # index of the differentiated time is 2p+1 = (2a+1)+(2b+1)-1, so a+b = p
        for a in range(p + 1):
            b = p - a
            base = list(exps) + [0] * max(0, max(a, b) + 1 - n)
            base[p] -= 1
            base[a] += 1
            base[b] += 1
            key = _strip(base)
            out[key] = out.get(key, ZERO) + mpq((2 * a + 1) * (2 * b + 1) * e, 2)
    # join: 1/4 sum (2k+2m+3) t_{2k+2m+3} d_{2k+1} d_{2m+1}
    for a, ea in enumerate(exps):
        if not ea:
            continue
        for b in range(n):
            eb = exps[b]
            if a == b:
                factor = ea * (ea - 1)
            else:
                factor = ea * eb
            if not factor:
                continue
            c = a + b + 1
            base = list(exps) + [0] * max(0, c + 1 - n)
            base[a] -= 1
            base[b] -= 1
            base[c] += 1
            key = _strip(base)
            out[key] = out.get(key, ZERO) + mpq((2 * c + 1) * factor, 4)
    return tuple((k, v) for k, v in out.items() if v)


def _times_t1(exps: Monomial) -> Monomial:
    if not exps:
        return (1,)
    return (exps[0] + 1,) + exps[1:]


def _apply_terms(terms: Dict[Key, mpq]) -> Dict[Key, mpq]:
    out: Dict[Key, mpq] = {}
    get = out.get
    for (exps, d), c in terms.items():
        for mono, a in _transitions(exps):
            key = (mono, d)
            out[key] = get(key, ZERO) + c * a
        m1 = _times_t1(exps)
        key = (m1, d)
        out[key] = get(key, ZERO) + c * MU0_CONST
        key = (m1, d + 1)
        out[key] = get(key, ZERO) + c * MU0_NU
    return {k: v for k, v in out.items() if v}


def apply_cut_and_join(p: TimesPolynomial) -> TimesPolynomial:
    """Apply W_N at symbolic nu; the output weighted degree is one more than the input's."""
    return TimesPolynomial(_apply_terms(p.terms), _trusted=True)


def b_polynomial(k: int) -> UPoly:
    """B_k(nu) = prod_{i=1..k} ((2i-1)^2 - 4 nu)."""
    if k < 0:
        raise DomainError("b_polynomial needs k >= 0")
    out = UPoly([1])
    for i in range(1, k + 1):
        out = out * UPoly([(2 * i - 1) ** 2, -4])
    return out


def parse_nu(nu: NuSpec) -> Optional[mpq]:
    """``None``/``"symbolic"`` mean symbolic; anything else is an exact rational."""
    if nu is None or (isinstance(nu, str) and nu.strip().lower() == "symbolic"):
        return None
    return rational(nu)


@dataclass(frozen=True)
class TauSeries:
    orders: Tuple[TimesPolynomial, ...]
    nu: Optional[mpq] = None

    @property
    def K(self) -> int:
        return len(self.orders) - 1

    def __getitem__(self, k: int) -> TimesPolynomial:
        return self.orders[k]

    def total(self) -> TimesPolynomial:
        out = TimesPolynomial.zero()
        for p in self.orders:
            out = out + p
        return out

    def substitute(self, nu: NuSpec) -> "TauSeries":
        value = parse_nu(nu)
        if value is None:
            return self
        if self.nu is not None:
            raise DomainError("series already has a numeric nu")
        return TauSeries(tuple(p.substitute_nu(value) for p in self.orders), value)

    def truncated(self, K: int) -> "TauSeries":
        return TauSeries(self.orders[: K + 1], self.nu)

    def header(self) -> dict:
        return {"nu": "symbolic" if self.nu is None else format_rational(self.nu), "orders": self.K}

    def to_json_obj(self) -> dict:
        return {**self.header(), "series": [p.to_json_obj() for p in self.orders]}

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), separators=(",", ":"))

    @classmethod
    def from_json_obj(cls, obj: dict) -> "TauSeries":
        nu = parse_nu(obj["nu"])
        return cls(tuple(TimesPolynomial.from_json_obj(o) for o in obj["series"]), nu)


_SYMBOLIC: List[TimesPolynomial] = [TimesPolynomial.one()]


def _symbolic_orders(K: int) -> Tuple[TimesPolynomial, ...]:
    while len(_SYMBOLIC) <= K:
        k = len(_SYMBOLIC) - 1
        nxt = _apply_terms(_SYMBOLIC[k]._terms)
        inv = mpq(1, k + 1)
        _SYMBOLIC.append(TimesPolynomial({key: c * inv for key, c in nxt.items()}, _trusted=True))
    return tuple(_SYMBOLIC[: K + 1])


def tau_expansion(K: int, nu: NuSpec = None) -> TauSeries:
    """tau^(k) = W_N tau^(k-1) / k for k = 1..K.

    The recursion always runs at symbolic nu (and is cached); a numeric nu is
    substituted afterwards.
    """
    if K < 0:
        raise DomainError("K must be non-negative")
    return TauSeries(_symbolic_orders(K)).substitute(nu)


def clear_cache() -> None:
    del _SYMBOLIC[1:]
    _transitions.cache_clear()


def divisible_by_b(p: TimesPolynomial, m: int) -> bool:
    """Whether B_m(nu) divides every nu-coefficient of ``p``."""
    return p.exact_divide_nu(b_polynomial(m)) is not None


def max_b_divisor(p: TimesPolynomial) -> int:
    """Largest m with B_m | p (``p`` nonzero)."""
    if p.is_zero():
        raise DomainError("zero is divisible by everything")
    m = 0
    while divisible_by_b(p, m + 1):
        m += 1
    return m
