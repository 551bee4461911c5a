"""Basis vectors Phi_j of the point of the Sato Grassmannian, as formal series in 1/lambda.

Coefficients are polynomials in ``N`` (not ``nu``): the series depend on
``j - N`` and carry both parities of N.  Everything is at hbar = 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import factorial
from typing import Callable, Dict, List

from .cutjoin import parse_nu, tau_expansion
from .exactalg import DomainError, UPoly, format_rational, mpq, rational

N_VAR = UPoly.x()


@dataclass(frozen=True)
class LaurentSeries:
    """Truncated series sum_p coeffs[p] lambda^p, exact for all powers >= ``low``."""

    coeffs: Dict[int, UPoly]
    low: int

    def __post_init__(self):
        clean = {p: c for p, c in self.coeffs.items() if p >= self.low and not c.is_zero()}
        object.__setattr__(self, "coeffs", clean)

    def __getitem__(self, p: int) -> UPoly:
        if p < self.low:
            raise DomainError(f"power {p} lies below the truncation {self.low}")
        return self.coeffs.get(p, UPoly())

    @property
    def top(self) -> int:
        return max(self.coeffs, default=self.low)

    def __add__(self, other: "LaurentSeries") -> "LaurentSeries":
        low = max(self.low, other.low)
        out = dict(self.coeffs)
        for p, c in other.coeffs.items():
            out[p] = out.get(p, UPoly()) + c
        return LaurentSeries(out, low)

    def __neg__(self) -> "LaurentSeries":
        return LaurentSeries({p: -c for p, c in self.coeffs.items()}, self.low)

    def __sub__(self, other: "LaurentSeries") -> "LaurentSeries":
        return self + (-other)

    def scale(self, c) -> "LaurentSeries":
        return LaurentSeries({p: v * c for p, v in self.coeffs.items()}, self.low)

    def shift(self, s: int) -> "LaurentSeries":
        """Multiply by lambda^s."""
        return LaurentSeries({p + s: v for p, v in self.coeffs.items()}, self.low + s)

    def lambda_d(self) -> "LaurentSeries":
        """lambda d/dlambda."""
        return LaurentSeries({p: v * p for p, v in self.coeffs.items()}, self.low)

    def evaluate_n(self, n_value) -> "LaurentSeries":
        v = rational(n_value)
        return LaurentSeries({p: UPoly([c(v)]) for p, c in self.coeffs.items()}, self.low)

    def is_zero(self) -> bool:
        return not self.coeffs

    def to_json_obj(self) -> dict:
        return {
            "low": self.low,
            "coeffs": {str(p): [format_rational(c) for c in v.coeffs] for p, v in sorted(self.coeffs.items(), reverse=True)},
        }


def op_a(s: LaurentSeries) -> LaurentSeries:
    """a = (lambda/2) d/dlambda + lambda - 1/4."""
    return s.lambda_d().scale(mpq(1, 2)) + s.shift(1) - s.scale(mpq(1, 4))


def op_b(s: LaurentSeries) -> LaurentSeries:
    return s.shift(2)


def a_coefficient(k: int, j) -> UPoly:
    """a_k(j) = prod_{i=1..k} (4(j-1)^2 - (2i-1)^2); ``j`` may be a number or a UPoly."""
    if k < 1:
        raise DomainError("a_coefficient needs k >= 1")
    jm1 = (j if isinstance(j, UPoly) else UPoly([rational(j)])) - 1
    sq = jm1 * jm1 * 4
    out = UPoly([1])
    for i in range(1, k + 1):
        out = out * (sq - (2 * i - 1) ** 2)
    return out


def phi_coefficient(j: int, k: int) -> UPoly:
    """Coefficient of lambda^{j-1-k} in Phi_j, as a polynomial in N."""
    if k == 0:
        return UPoly([1])
    return a_coefficient(k, N_VAR * -1 + j) * mpq((-1) ** k, 16 ** k * factorial(k))


@dataclass(frozen=True)
class AsymptoticSeries:
    leading_power: int
    coefficients: tuple  # UPoly in N for lambda^{leading}, lambda^{leading-1}, ...
    order: int

    def as_laurent(self) -> LaurentSeries:
        return LaurentSeries({self.leading_power - k: c for k, c in enumerate(self.coefficients)}, self.leading_power - self.order)


def phi_series(j: int, order: int) -> AsymptoticSeries:
    if order < 0:
        raise DomainError("order must be non-negative")
    return AsymptoticSeries(j - 1, tuple(phi_coefficient(j, k) for k in range(order + 1)), order)


PhiFactory = Callable[[int, int], AsymptoticSeries]


@dataclass
class ResidualReport:
    name: str
    window_low: int
    residuals: Dict[int, UPoly] = field(default_factory=dict)
    extra: Dict[str, object] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(r.is_zero() for r in self.residuals.values()) and all(
            v is True for v in self.extra.values() if isinstance(v, bool)
        )

    def nonzero(self) -> List[int]:
        return sorted(p for p, r in self.residuals.items() if not r.is_zero())

    def to_json_obj(self) -> dict:
        return {
            "check": self.name,
            "window_low": self.window_low,
            "nonzero_powers": self.nonzero(),
            "ok": self.ok,
            **{k: v for k, v in self.extra.items()},
        }


def _report(name: str, s: LaurentSeries, top: int, extra=None) -> ResidualReport:
    res = {p: s[p] for p in range(s.low, top + 1)}
    return ResidualReport(name, s.low, res, dict(extra or {}))


def ks_check(j: int, order: int, phi: PhiFactory = phi_series) -> Dict[str, ResidualReport]:
    """a Phi_j = (j-1-N/2) Phi_j + Phi_{j+1} and b Phi_j = (j-N) Phi_{j+1} + Phi_{j+2}."""
    if order < 2:
        raise DomainError("ks_check needs order >= 2")
    p0 = phi(j, order).as_laurent()
    p1 = phi(j + 1, order).as_laurent()
    p2 = phi(j + 2, order).as_laurent()
    ra = op_a(p0) - p0.scale(N_VAR * mpq(-1, 2) + (j - 1)) - p1
    rb = op_b(p0) - p1.scale(N_VAR * -1 + j) - p2
    return {"a": _report(f"ks_a_j{j}", ra, j + 1), "b": _report(f"ks_b_j{j}", rb, j + 2)}


def qsc_operator(s: LaurentSeries) -> LaurentSeries:
    """lambda^2 (c_N - 1) = a^2 - N^2/4 - lambda^2."""
    return op_a(op_a(s)) - s.scale(N_VAR * N_VAR * mpq(1, 4)) - s.shift(2)


def qsc_solve(order: int) -> List[UPoly]:
    """Solve (c_N - 1) Phi = 0 for Phi = 1 + sum c_k lambda^-k, without using a_k.

    The lambda^{1-k} coefficient of the equation is -k c_k plus terms in c_{<k};
    the c_{k+1} contributions from a^2 and lambda^2 cancel, so padding the
    trial series with zeros below lambda^-k is harmless.
    """
    coeffs = [UPoly([1])]
    for k in range(1, order + 1):
        trial = LaurentSeries({-i: c for i, c in enumerate(coeffs)}, -k - 2)
        known = qsc_operator(trial)[1 - k]
        coeffs.append(known * mpq(1, k))
    return coeffs


def mu0_from_qsc() -> UPoly:
    """The lambda^-1 coefficient of Phi_1 forced by the curve, rewritten in nu = N^2."""
    return qsc_solve(1)[1].even_part_in_square()


def qsc_check(order: int, phi: PhiFactory = phi_series) -> ResidualReport:
    if order < 2:
        raise DomainError("qsc_check needs order >= 2")
    s = phi(1, order).as_laurent()
    r = qsc_operator(s)
    solved = qsc_solve(order)
    extra = {
        "solution_matches_phi": list(solved) == list(phi(1, order).coefficients),
        "mu0": [format_rational(c) for c in mu0_from_qsc().coeffs],
        "mu0_matches": mu0_from_qsc() == UPoly([mpq(1, 16), mpq(-1, 4)]),
    }
    return _report("qsc", r, 2, extra)


def principal_check(order: int, nu=None) -> ResidualReport:
    """Principal specialization of tau against Phi_1, at symbolic or numeric nu."""
    value = parse_nu(nu)
    tau = tau_expansion(order, value).total()
    spec = tau.specialize_principal(order)
    phi = phi_series(1, order).coefficients
    res: Dict[int, UPoly] = {}
    for k in range(order + 1):
        target = phi[k].even_part_in_square()
        if value is not None:
            target = UPoly([target(value)])
        res[-k] = spec[k] - target
    return ResidualReport("principal", -order, res, {"nu": "symbolic" if value is None else format_rational(value)})


def truncation_check(l: int, order: int) -> bool:
    """Phi_{l+2} at N = l + 1/2 is exactly lambda^{l+1}."""
    value = mpq(l) + mpq(1, 2)
    s = phi_series(l + 2, order).as_laurent().evaluate_n(value)
    return set(s.coeffs) == {l + 1} and s.coeffs[l + 1] == 1
