"""Free energy: formal logarithm, genus grading, moment variables and B_k decomposition.

Genus bookkeeping for a monomial of weighted degree ``k`` with ``n`` time
factors and ``nu**d``: the S-genus is ``g = (k - n - 2d + 2)/2`` and ``nu**d``
becomes ``S**(2d)``.  Moment variables are ``T_k = t_k/(2 - t_1)**k``; a
polynomial in them is stored as a :class:`TimesPolynomial` whose slot for
``t_{2m+1}`` holds the power of ``T_{2m+1}``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb, factorial
from typing import Dict, List, Optional, Sequence, Tuple

from .cutjoin import TauSeries, b_polynomial, tau_expansion
from .exactalg import (
    ZERO,
    DomainError,
    Key,
    Monomial,
    TimesPolynomial,
    _strip,
    format_rational,
    mono_factors,
    mono_weight,
    mpq,
)


class InternalConsistencyError(RuntimeError):
    """A computed quantity violates a structural identity; indicates a bug upstream."""


# ---------------------------------------------------------------------------
# log / exp


@dataclass(frozen=True)
class FreeEnergySeries:
    orders: Tuple[TimesPolynomial, ...]
    nu: Optional[mpq] = None
    max_factors: Optional[int] = None

    @property
    def K(self) -> int:
        return len(self.orders) - 1

    def __getitem__(self, k: int) -> TimesPolynomial:
        return self.orders[k]


def _mul(p: TimesPolynomial, q: TimesPolynomial, max_factors: Optional[int]) -> TimesPolynomial:
    return p.mul(q, max_factors=max_factors)


def log_expansion(tau: TauSeries, max_factors: Optional[int] = None) -> FreeEnergySeries:
    """F = log tau order by order: k F^(k) = k tau^(k) - sum_j j F^(j) tau^(k-j).

    With ``max_factors`` every monomial with more time factors is dropped;
    that truncation is a ring homomorphism, so the kept part is exact.
    """
    if tau.orders[0] != TimesPolynomial.one():
        raise DomainError("tau^(0) must be 1")
    taus = [p.truncate(max_factors=max_factors) for p in tau.orders]
    F: List[TimesPolynomial] = [TimesPolynomial.zero()]
    for k in range(1, len(taus)):
        acc = taus[k].scale(k)
        for j in range(1, k):
            if F[j] and taus[k - j]:
                acc = acc - _mul(F[j], taus[k - j], max_factors).scale(j)
        F.append(acc.scale(mpq(1, k)))
    return FreeEnergySeries(tuple(F), tau.nu, max_factors)


def exp_expansion(F: FreeEnergySeries) -> Tuple[TimesPolynomial, ...]:
    """Inverse of :func:`log_expansion`: k tau^(k) = sum_j j F^(j) tau^(k-j)."""
    taus = [TimesPolynomial.one()]
    for k in range(1, len(F.orders)):
        acc = TimesPolynomial.zero()
        for j in range(1, k + 1):
            if F[j] and taus[k - j]:
                acc = acc + _mul(F[j], taus[k - j], F.max_factors).scale(j)
        taus.append(acc.scale(mpq(1, k)))
    return tuple(taus)


def free_energy(K: int, max_factors: Optional[int] = None) -> FreeEnergySeries:
    return log_expansion(tau_expansion(K), max_factors)


# ---------------------------------------------------------------------------
# genus grading


def monomial_genus(key: Key) -> int:
    exps, d = key
    twice = mono_weight(exps) - mono_factors(exps) - 2 * d + 2
    if twice % 2 or twice < 0:
        raise InternalConsistencyError(f"monomial {key} has genus {twice}/2")
    return twice // 2


@dataclass
class GenusTable:
    """Per-genus free energies; the nu slot of each key now counts powers of S^2."""

    genera: Dict[int, TimesPolynomial]
    order: int
    max_factors: Optional[int] = None

    def __getitem__(self, g: int) -> TimesPolynomial:
        return self.genera.get(g, TimesPolynomial.zero())

    def at_s_zero(self, g: int) -> TimesPolynomial:
        return self[g].nu_slice(0)

    def s_piece(self, g: int, d: int) -> TimesPolynomial:
        """Coefficient of S^(2d) in F_g."""
        return self[g].nu_slice(d)


def genus_split(F: FreeEnergySeries) -> GenusTable:
    if F.nu is not None:
        raise DomainError("genus splitting needs symbolic nu")
    buckets: Dict[int, Dict[Key, mpq]] = {}
    for p in F.orders:
        for key, c in p.items():
            buckets.setdefault(monomial_genus(key), {})[key] = c
    return GenusTable({g: TimesPolynomial(v) for g, v in sorted(buckets.items())}, F.K, F.max_factors)


def genus_table(K: int, max_factors: Optional[int] = None) -> GenusTable:
    return genus_split(free_energy(K, max_factors))


# ---------------------------------------------------------------------------
# moment variables


def t_weight_of_moment(exps: Monomial) -> int:
    """sum m * j_m for a T-monomial (slot m holds the power of T_{2m+1})."""
    return sum(m * e for m, e in enumerate(exps))


def moment_monomials(w: int) -> List[Monomial]:
    """All T-monomials in T_3, T_5, ... with sum m * j_m = w."""
    out: List[Monomial] = []

    def rec(remaining: int, max_m: int, acc: List[int]):
        if remaining == 0:
            out.append(_strip(acc))
            return
        for m in range(min(remaining, max_m), 0, -1):
            nxt = list(acc) + [0] * max(0, m + 1 - len(acc))
            nxt[m] += 1
            rec(remaining - m, m, nxt)

    rec(w, w, [0])
    return out


def moment_to_t(exps: Monomial, order: int) -> TimesPolynomial:
    """Expand T^exps = prod t^exps * 2^-K (1 - t_1/2)^-K through weighted degree ``order``."""
    if exps and exps[0]:
        raise DomainError("T_1 is not a moment variable")
    K = mono_weight(exps)
    if K == 0:
        return TimesPolynomial.one()
    out: Dict[Key, mpq] = {}
    base = mpq(1, 2 ** K)
    for r in range(order - K + 1):
        e = list(exps) if exps else [0]
        e[0] = r
        out[(_strip(e), 0)] = base * comb(K + r - 1, r) / mpq(2) ** r
    return TimesPolynomial(out)


def moments_to_t(poly: TimesPolynomial, order: int) -> TimesPolynomial:
    acc = TimesPolynomial.zero()
    for (exps, d), c in poly.items():
        acc = acc + moment_to_t(exps, order).scale(c).times_nu(d)
    return acc


def log_series(order: int) -> TimesPolynomial:
    """log(1 - t_1/2) through t_1**order."""
    return TimesPolynomial({((r,), 0): -1 / (mpq(2) ** r * r) for r in range(1, order + 1)})


@dataclass
class MomentForm:
    """F_g as sum_d S^(2d) [(-1)^d Ft_g^(d)(T) + log_coeff[d] log(1 - t_1/2)]."""

    g: int
    order: int
    pieces: Dict[int, TimesPolynomial]  # d -> Ft_g^(d) (sign convention included)
    log_coeff: Dict[int, mpq]
    residuals: Dict[int, TimesPolynomial] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(r.is_zero() for r in self.residuals.values())

    def ft(self, d: int) -> TimesPolynomial:
        return self.pieces.get(d, TimesPolynomial.zero())

    def at_s_zero(self) -> TimesPolynomial:
        return self.ft(0)

    def s_polynomial(self) -> TimesPolynomial:
        """sum_d (-1)^d S^(2d) Ft^(d)(T), with the nu slot holding the S^2 power."""
        acc = TimesPolynomial.zero()
        for d, p in self.pieces.items():
            acc = acc + p.times_nu(d).scale((-1) ** d)
        return acc

    def to_json_obj(self) -> dict:
        return {
            "genus": self.g,
            "order": self.order,
            "log": [{"log_coeff": format_rational(c), "S_power": 2 * d} for d, c in sorted(self.log_coeff.items()) if c],
            "pieces": {str(d): p.to_json_obj() for d, p in sorted(self.pieces.items())},
            "residual_zero": self.ok,
        }


def to_moments(g: int, table: GenusTable, order: Optional[int] = None) -> MomentForm:
    """Rewrite F_g in moment variables through weighted degree ``order``.

    For each S-power the candidate basis is every T-monomial of T-weight
    g + d - 1.  The linear system is triangular in the t_1 = 0 coefficients,
    which fixes the solution; the full t-expansion is then compared against
    the data and any mismatch is kept as a residual.
    """
    if order is None:
        order = table.order
    if order > table.order:
        raise DomainError("table is not computed to that order")
    Fg = table[g].truncate(max_weight=order)
    pieces: Dict[int, TimesPolynomial] = {}
    logs: Dict[int, mpq] = {}
    residuals: Dict[int, TimesPolynomial] = {}
    d_max = max(0, (order - 2 * g + 2) // 2 + 1)
    for d in range(d_max + 1):
        piece = Fg.nu_slice(d)
        w = g + d - 1
        if w < 0:
            residuals[d] = piece
            continue
        recon = TimesPolynomial.zero()
        if w == 0:
            c = -2 * piece.coefficient({1: 1}) if order >= 1 else ZERO
            if c:
                logs[d] = c
                recon = recon + log_series(order).scale(c)
            const = piece.coefficient({})
            if const:
                pieces[d] = TimesPolynomial.constant(const * (-1) ** d)
                recon = recon + TimesPolynomial.constant(const)
        else:
            coeffs = {}
            for mono in moment_monomials(w):
                K = mono_weight(mono)
                if K > order:
                    continue
                c = piece._terms.get((mono, 0), ZERO) * 2 ** K
                if c:
                    coeffs[(mono, 0)] = c
            ft = TimesPolynomial(coeffs)
            if ft:
                pieces[d] = ft.scale((-1) ** d)
            recon = moments_to_t(ft, order)
        if table.max_factors is not None:
            recon = recon.truncate(max_factors=table.max_factors)
        residuals[d] = piece - recon
    return MomentForm(g, order, pieces, logs, residuals)


def euler_t_weight(p: TimesPolynomial) -> TimesPolynomial:
    """sum_m m T_{2m+1} d/dT_{2m+1}, acting on a moment polynomial."""
    return TimesPolynomial({k: c * t_weight_of_moment(k[0]) for k, c in p.items() if t_weight_of_moment(k[0])})


# ---------------------------------------------------------------------------
# fixed-N view and B_k decomposition


def fixed_n_form(g: int, moments: Dict[int, MomentForm]) -> TimesPolynomial:
    """F_g at fixed N: sum_d (-1)^d nu^d Ft_{g-d}^(d)(T), with nu in the nu slot.

    ``moments`` maps genus to its :class:`MomentForm`; entries for 0..g are needed.
    """
    acc = TimesPolynomial.zero()
    for d in range(g + 1):
        mf = moments[g - d]
        acc = acc + mf.ft(d).times_nu(d).scale((-1) ** d)
    return acc


@dataclass
class BDecomposition:
    g: int
    parts: Dict[int, TimesPolynomial]  # k -> F_{g,k}(T)
    residual: TimesPolynomial

    @property
    def ok(self) -> bool:
        return self.residual.is_zero()


def b_decompose(g: int, fg: TimesPolynomial) -> BDecomposition:
    """Write fg(T, nu) = sum_{k=2..g} B_k(nu) F_{g,k}(T); B_k has leading term (-4 nu)^k."""
    if g < 2:
        raise DomainError("b_decompose needs g >= 2")
    remainder = fg
    parts: Dict[int, TimesPolynomial] = {}
    for k in range(g, 1, -1):
        top = remainder.nu_slice(k).scale(mpq(1) / mpq(-4) ** k)
        parts[k] = top
        if top:
            remainder = remainder - top * b_polynomial(k)
    return BDecomposition(g, dict(sorted(parts.items())), remainder)


# ---------------------------------------------------------------------------
# genus zero


def double_factorial(n: int) -> int:
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


def genus0_coefficient(j: Sequence[int]) -> Tuple[mpq, int]:
    """Closed-form coefficient of prod T_{2i+1}^{j_i} in F_0, and its S power.

    ``j[0]`` is the power of T_3, ``j[1]`` of T_5, and so on.
    """
    j = list(j)
    if not any(j) or any(x < 0 for x in j):
        raise DomainError("multi-index must be non-negative and nonzero")
    m = sum((i + 1) * x for i, x in enumerate(j))
    top = sum((2 * i + 3) * x for i, x in enumerate(j)) - 1
    c = mpq((-1) ** (m + 1) * factorial(top), 2 ** m * factorial(2 * m + 2))
    for i, x in enumerate(j):
        i1 = i + 1
        c *= mpq(double_factorial(2 * i1 + 1) ** x, factorial(i1) ** x * factorial(x))
    return c, 2 * m + 2


def multi_index_to_monomial(j: Sequence[int]) -> Monomial:
    return _strip([0] + list(j))


def multi_indices(m_max: int) -> List[Tuple[int, ...]]:
    out = []
    for m in range(1, m_max + 1):
        for mono in moment_monomials(m):
            out.append(tuple(mono[1:]))
    return out
